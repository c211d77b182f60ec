# Series solutions of two equations in the class sum a_n t**(n alpha).
import numpy as np

from iteratedab import (
    ONE,
    FracPowerSeries,
    IteratedOrder,
    QuadraticODEParams,
    RelaxationODEParams,
    solve_quadratic,
    solve_relaxation,
)
from iteratedab.errors import DiscriminantError

# Relaxation with memory: D f = -C f + q.  With C = 1 and q = 1 the
# leading coefficient is q_0 / (C + (B / (1 - alpha))**beta) = 1/3.
order = IteratedOrder(0.5, 1.0)
sol = solve_relaxation(order, ONE, RelaxationODEParams(1.0, FracPowerSeries(0.5, [1.0]), M=30))
print("first coefficients:", np.round(sol.coeffs[:5], 6))
print("residual:", sol.residual_max, " decay ratio:", sol.diagnostics["decay_ratio"])
t = np.linspace(0, 1, 6)
print("f(t) =", np.round(sol.solution(t), 6))

# Heavier memory (larger beta) slows the approach.
for beta in (0.5, 1.0, 2.0):
    s = solve_relaxation(IteratedOrder(0.5, beta), ONE, RelaxationODEParams(1.0, FracPowerSeries(0.5, [1.0]), M=30))
    print(f"beta={beta}: f(0.5) = {s.solution(0.5):.6f}")

# Quadratic equation I f = P + Q f + R f**2.  Two leading coefficients are
# possible; the default picks the one nearer to zero.
params = QuadraticODEParams(P=0.1, Q=-0.2, R=0.3, M=20)
q = solve_quadratic(IteratedOrder(0.3, 0.5), ONE, params)
print("branch", q.branch_used, "a_0 =", q.coeffs[0], "residual", q.residual_max)
alt = solve_quadratic(IteratedOrder(0.3, 0.5), ONE, QuadraticODEParams(0.1, -0.2, 0.3, "+", 20))
print("other branch a_0 =", alt.coeffs[0])

# Some right-hand sides have no real series solution at all.
try:
    solve_quadratic(order, ONE, QuadraticODEParams(1.0, 0.0, 1.0))
except DiscriminantError as exc:
    print("no solution:", exc)

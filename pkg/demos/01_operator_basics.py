# The iterated AB operator on both function representations.
import numpy as np

from iteratedab import (
    ONE,
    FracPowerSeries,
    IteratedOrder,
    SampledSignal,
    ab_integral,
    eval_fps,
    iab_apply_fps,
    iab_apply_sampled,
    sample_fps,
)

# A power series in t**alpha.  Here f(t) = 1 + t**0.5 - 0.5 t.
alpha = 0.5
f = FracPowerSeries(alpha, [1.0, 1.0, -0.5])
print("f(0.25) =", f(0.25))

# beta = 1 is the ordinary AB integral, beta = 2 applies it twice,
# negative beta differentiates.
for beta in (1.0, 2.0, 0.5, -1.0):
    g = iab_apply_fps(IteratedOrder(alpha, beta), ONE, f)
    print(f"beta={beta:+.1f}: {len(g):2d} coefficients, value at t=1: {eval_fps(g, 1.0):.10f}")

# beta = 1 agrees with the AB integral itself
print(np.allclose(iab_apply_fps(IteratedOrder(alpha, 1.0), ONE, f).coeffs, ab_integral(alpha, ONE, f).coeffs))

# The same operator on grid samples uses product-trapezoid quadrature.
sig = sample_fps(f, 1.0, 2001)
for beta in (1.0, -1.0):
    order = IteratedOrder(alpha, beta)
    exact = eval_fps(iab_apply_fps(order, ONE, f), sig.grid)
    approx = iab_apply_sampled(order, ONE, sig).values
    print(f"beta={beta:+.1f}: max |sampled - series| = {np.max(np.abs(approx - exact)):.2e}")

# Anything sampled works, not only power series.
wave = SampledSignal.from_function(lambda t: np.sin(6 * t), 0.0, 1.0, 1001)
smooth = iab_apply_sampled(IteratedOrder(0.3, 1.5), ONE, wave)
print("integrated wave at t = 0, 0.5, 1:", smooth.values[[0, 500, 1000]])

# Two structural facts checked numerically: the composition law in beta and
# the Laplace-domain symbol ((1 - alpha) + alpha s**-alpha)**beta / B**beta.
import numpy as np

from iteratedab import ONE, FracPowerSeries, IteratedOrder, laplace_check, semigroup_residual

rng = np.random.default_rng(0)

# Composing orders beta and gamma equals applying beta + gamma directly.
print("alpha   beta  gamma   residual")
for _ in range(5):
    alpha = rng.uniform(0.1, 0.9)
    beta, gamma = rng.uniform(-2, 2, 2)
    f = FracPowerSeries(alpha, rng.uniform(-1, 1, 6))
    r = semigroup_residual(alpha, beta, gamma, ONE, f, relative=True)
    print(f"{alpha:.3f} {beta:+.3f} {gamma:+.3f}   {r:.1e}")

# beta and -beta undo each other
f = FracPowerSeries(0.6, [1.0, -2.0, 0.5])
print("inverse pair residual:", semigroup_residual(0.6, 1.7, -1.7, ONE, f))

# Laplace transform of the sampled result against the closed form.
report = laplace_check(IteratedOrder(0.5, -1.0), ONE, 0.5, [1.0, 2.0, 4.0, 8.0])
print(report.label, "horizon", report.T_horizon)
for e in report.entries():
    print(f"  s={e['input']:.0f}  closed={e['expected']:.8f}  numeric={e['got']:.8f}  rel={e['rel_err']:.1e}")

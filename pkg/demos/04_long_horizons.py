# Why long intervals need care: the binomial series behind the sampled
# operator alternates, and its terms grow with the interval length.
import warnings

import numpy as np

from iteratedab import ONE, IteratedOrder, SampledSignal, iab_apply_sampled, mittag_leffler
from iteratedab.iterated_ab import kernel_weights, series_coefficients

order = IteratedOrder(0.7, -1.0)
for L in (1.0, 5.0, 20.0):
    sc = series_coefficients(order, ONE, L)
    print(f"L={L:5.1f}: {sc.truncation_k:3d} terms, largest term {sc.peak:.1e}")

# On [0, 20] the largest term is ~1e27, so double precision weights are
# noise.  The default switches to extended precision automatically.
sig = SampledSignal(0.0, 20.0, np.ones(2001))
w = kernel_weights(order, ONE, sig.n_points, sig.h)
print("extended precision used:", w.extended_precision)
out = iab_apply_sampled(order, ONE, sig)

# For f = 1 the exact result is E_alpha(-alpha/(1-alpha) t**alpha) / (1 - alpha).
idx = np.arange(100, 2001, 400)
exact = np.array([mittag_leffler(0.7, -0.7 / 0.3 * x ** 0.7) for x in sig.grid[idx]]) / 0.3
print("t:       ", sig.grid[idx])
print("computed:", np.round(out.values[idx], 6))
print("exact:   ", np.round(exact, 6))

# Forcing double precision shows the problem (and warns about it).
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    bad = iab_apply_sampled(order, ONE, sig, precision="double")
print("double precision max error:", np.max(np.abs(bad.values[idx] - exact)), "| warning:", caught[0].category.__name__)

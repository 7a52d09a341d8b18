"""Recover a sum of two resonance peaks from noisy samples.

The target is itself rational: two single-pole peaks whose sum has
numerator degree 3 and denominator degree 4.  add() produces the exact
coefficients; a grid search over (n, m) then has to rediscover that
structure from 5% multiplicative noise.
"""

import numpy as np

from padefit import (
    Dataset,
    FitConfig,
    NoiseSpec,
    RationalModel,
    SearchSpace,
    add,
    fit_linearized,
    grid_search,
    resonance,
    sample_noisy,
    uniform_grid,
)

left = RationalModel(numer=(2.0,), denom=(2.0, 2.0))
right = RationalModel(numer=(1.0 / 0.34, 0.2 / 0.34), denom=(-1.0 / 0.34, 1.0 / 0.34))
combined = add(left, right)

print(f"combined structure: degrees ({combined.degree_numer}, {combined.degree_denom})")
print("numer:", "  ".join(f"{c:+.4f}" for c in combined.numer))
print("denom:", "  ".join(f"{c:+.4f}" for c in combined.denom))

# noiseless fit at the true structure recovers the coefficients to
# machine precision
xs = uniform_grid(-1.0, 1.0, 20)
clean = Dataset(xs, resonance(xs))
exact = fit_linearized(clean, FitConfig(n=3, m=4))
worst = max(
    abs(a - b) / max(abs(b), 1.0)
    for a, b in zip(exact.model.numer + exact.model.denom, combined.numer + combined.denom)
)
print(f"noiseless recovery: worst relative coefficient error {worst:.2e}, s0 = {exact.s0:.2e}")

# now with noise; search every (n, m) cell up to degree 4
space = SearchSpace(n_range=(0, 4), m_range=(0, 4))
print("\nseed  selected  D1/D0")
picks = []
for seed in range(5):
    data = sample_noisy(resonance, xs, NoiseSpec(sigma=0.05, seed=seed))
    best, rows = grid_search(data, space)
    order = (best.model.degree_numer, best.model.degree_denom)
    picks.append(order)
    print(f"{seed:4d}  {str(order):8s}  {best.d1 / best.d0:.3f}")

hits = sum(1 for p in picks if p == (3, 4))
print(f"\ntrue structure (3, 4) selected in {hits}/{len(picks)} runs;")
print("neighbouring picks share the denominator degree, which carries the peaks.")
print("D1/D0 < 1 means the fitted curve sits closer to the truth than the data does.")

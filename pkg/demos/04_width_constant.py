"""Empirical width-inequality constant for two rank-2 actions.

For a free group acting without a fixed ideal boundary point, the
W-infinity width of the homotopy between two bouquet maps is controlled
by a multiple of the sum of their lengths.  ``estimate_width_constant``
samples random basepoint pairs and reports the largest observed ratio
W_inf / (L(u) + L(v)); the estimate is deterministic under the seed.

Run: python3 demos/04_width_constant.py
"""

from geowidth import (
    HyperbolicIsometry,
    HyperbolicPlane,
    Representation,
    estimate_width_constant,
)

reps = {
    "free rank 2 on its Cayley tree": Representation.free_on_cayley_tree(2),
    "two hyperbolic matrices on H^2": Representation(
        HyperbolicPlane(),
        [
            HyperbolicIsometry([[2.0, 1.0], [1.0, 1.0]]),
            HyperbolicIsometry([[5.0, 2.0], [2.0, 1.0]]),
        ],
    ),
}

for name, rho in reps.items():
    est = estimate_width_constant(rho, trials=1000, seed=2026)
    print(f"{name}:")
    print(f"  C_hat = {est.c_hat!r}  ({len(est.samples)} trials, seed 2026)")
    top = max(est.samples, key=lambda s: s["ratio"])
    print(f"  extremal trial: W_inf = {top['w_inf']:.4f}, L(u)+L(v) = {top['length_sum']:.4f}")

"""Wigner functions of two-qubit cat states.

Builds the even and odd parity-adapted coherent states at z = 1 for N = 2,
evaluates their Wigner functions on the plane of the stereographic
coordinate and prints where they go negative.
"""

import numpy as np

from quditphase import CatSpec, ModelParams, cat_state, density_matrix, quasi_distribution

p = ModelParams(2, 2)
x = np.linspace(-3, 3, 41)
X, Y = np.meshgrid(x, x, indexing="ij")
points = (X + 1j * Y)[..., None]

for label, parity in (("even", 0), ("odd", 1)):
    rho = density_matrix(cat_state(CatSpec(p, [1.0], [parity])))
    W = quasi_distribution(rho, 0).evaluate(points)
    i, j = np.unravel_index(np.argmin(W), W.shape)
    print(f"{label:>4} cat: W(0) = {W[20, 20]: .6f}, min {W.min(): .6f} at z = {x[i]:+.2f}{x[j]:+.2f}i, max {W.max(): .6f}")
    print(f"      fraction of the grid with W < 0: {np.mean(W < 0):.3f}")

# the Husimi function of the same state is a probability density: never negative
Q = quasi_distribution(density_matrix(cat_state(CatSpec(p, [1.0], [1]))), -1).evaluate(points)
print(f"odd cat Husimi range: [{Q.min():.4f}, {Q.max():.4f}]")

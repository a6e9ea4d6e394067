"""The negative dip of spin coherent-state Wigner functions gets shallower with N."""

import numpy as np

from quditphase import ModelParams, coherent_state, density_matrix, quasi_distribution

x = np.linspace(-3, 3, 61)
X, Y = np.meshgrid(x, x, indexing="ij")
points = (X + 1j * Y)[..., None]

print(" N   min W      negative area fraction")
for N in (1, 2, 3, 5, 8):
    W = quasi_distribution(density_matrix(coherent_state(ModelParams(2, N), [1.0])), 0).evaluate(points)
    print(f"{N:2d}  {W.min(): .5f}   {np.mean(W < 0):.3f}")

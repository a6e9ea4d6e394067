"""Position and momentum sections of qutrit multimode cats.

Uses the same grid machinery as ``quditphase dist``: a position section
holds every y_i at zero, a momentum section every x_i.
"""

import numpy as np

from quditphase import ModelParams, density_matrix, multimode_cat, quasi_distribution
from quditphase.io import parse_grid

p = ModelParams(3, 2)
z = [2 ** -0.5, 2 ** -0.5]
for sign in "+-":
    F = quasi_distribution(density_matrix(multimode_cat(p, z, sign)), 0)
    for section in ("position", "momentum"):
        grid = parse_grid(None, p.nvars, section)
        W = F.evaluate(grid.points())
        print(f"cat {sign} {section:>8}: min {W.min(): .4f}  max {W.max(): .4f}  points {W.size}")

"""From P to Wigner to Husimi by heat-kernel smoothing, and the 1/N bracket limit."""

import numpy as np
from gmpy2 import mpq

from quditphase import (
    ModelParams,
    density_matrix,
    fock_state,
    moyal_bracket,
    poisson_bracket,
    quasi_distribution,
    smooth,
    spin_operators,
    symbol,
)

p = ModelParams(2, 3)
rho = density_matrix(fock_state(p, (2, 1)))
P = quasi_distribution(rho, 1)
z = [mpq(1, 2)]
for target, name in ((0, "Wigner"), (-1, "Husimi")):
    direct = quasi_distribution(rho, target)([0.5])
    print(f"{name:>7}: smoothed P = {smooth(P, target, z):.12f}, direct = {direct:.12f}")

pts = np.array([[0.3 + 0.1j], [-0.7 + 0.4j]])
print("\n N   max |N*Moyal - Poisson| / |Poisson|")
for N in (4, 8, 16, 32):
    jx, jy, _ = spin_operators(ModelParams(2, N))
    fx, fy = symbol(jx, 0), symbol(jy, 0)
    pb = poisson_bracket(fx.symbolic(), fy.symbolic()).evaluate(pts)
    mb = N * moyal_bracket(fx, fy).evaluate(pts)
    print(f"{N:2d}  {np.max(np.abs(pb - mb) / np.abs(pb)):.4f}")

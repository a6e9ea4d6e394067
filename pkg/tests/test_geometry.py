import math

import numpy as np
import pytest
from gmpy2 import mpq
from scipy import integrate

from quditphase import (
    ModelParams,
    NonConvergentIntegral,
    RationalPolyFunction,
    coherent_state,
    fock_amplitude,
    fock_basis,
    fock_position,
    haar_integrate,
    monomial_integral,
    overlap_q,
)
from quditphase.geometry import integrate_product, integrate_times_monomial, overlap_function


def quad_d2(k, l, m):
    """Polar quadrature of z^k zbar^l / (1+r^2)^m against dmu_0 for D = 2."""
    def f(phi, r, part):
        v = r ** (k + l) * np.exp(1j * (k - l) * phi) / (1 + r * r) ** (m + 2) * r / np.pi
        return v.real if part == 0 else v.imag
    re = integrate.dblquad(f, 0, np.inf, 0, 2 * np.pi, args=(0,))[0]
    im = integrate.dblquad(f, 0, np.inf, 0, 2 * np.pi, args=(1,))[0]
    return complex(re, im)


def quad_d3(k, m):
    """Radial quadrature (t_i = |z_i|^2) of a diagonal D = 3 monomial."""
    f = lambda t2, t1: 2 * t1 ** k[0] * t2 ** k[1] / (1 + t1 + t2) ** (m + 3)
    return integrate.dblquad(f, 0, np.inf, 0, np.inf, epsabs=1e-13, epsrel=1e-12)[0]


@pytest.mark.parametrize("k,l,m", [(0, 0, 0), (1, 1, 1), (2, 2, 3), (1, 0, 2), (3, 3, 4), (2, 1, 3)])
def test_monomial_integral_d2_quadrature(k, l, m):
    assert complex(monomial_integral(2, (k,), (l,), m)) == pytest.approx(quad_d2(k, l, m), abs=1e-9)


@pytest.mark.parametrize("k,m", [((0, 0), 0), ((1, 0), 1), ((1, 1), 2), ((2, 1), 4), ((0, 3), 3)])
def test_monomial_integral_d3_quadrature(k, m):
    assert float(monomial_integral(3, k, k, m)) == pytest.approx(quad_d3(k, m), rel=1e-9)


def test_divergent_integrals_raise():
    with pytest.raises(NonConvergentIntegral):
        monomial_integral(2, (2,), (2,), 1)
    with pytest.raises(NonConvergentIntegral):
        haar_integrate(RationalPolyFunction.monomial(1, (1,), (1,), 0))


def test_fock_basis_order_and_positions():
    p = ModelParams(3, 2)
    basis = fock_basis(p)
    assert basis[0] == (2, 0, 0) and basis[-1] == (0, 0, 2)
    assert list(basis) == sorted(basis, reverse=True)
    assert all(fock_position(p, b) == i for i, b in enumerate(basis))
    with pytest.raises(ValueError):
        fock_position(p, (1, 1, 1))


def test_overlap_q_matches_coherent_states():
    rng = np.random.default_rng(0)
    for D, N in [(2, 3), (3, 2)]:
        p = ModelParams(D, N)
        z, w = (rng.normal(size=(2, D - 1)) + 1j * rng.normal(size=(2, D - 1)))
        ov = coherent_state(p, w).inner(coherent_state(p, z))
        assert abs(ov) ** 2 == pytest.approx(overlap_q(z, w) ** N, rel=1e-12)
        assert overlap_q(z, z) == pytest.approx(1)


def test_coherent_state_resolution_of_identity():
    """int |N,z><N,z| dmu_N = I, with dmu_N = d_N dmu_0, done exactly per entry."""
    for D, N in [(2, 3), (3, 2)]:
        p = ModelParams(D, N)
        basis = fock_basis(p)
        d = len(basis)
        for a, ia in enumerate(basis):
            for b, ib in enumerate(basis):
                v = monomial_integral(D, ia[1:], ib[1:], N) if sum(ia[1:]) + sum(ib[1:]) <= 2 * N else 0
                mult = math.factorial(N) ** 2 / math.prod(math.factorial(x) for x in ia + ib)
                assert d * float(v) * math.sqrt(mult) == pytest.approx(1.0 if a == b else 0.0, abs=1e-14)


def test_overlap_function_exact():
    w = [mpq(1, 2), mpq(-1, 3)]
    q = overlap_function(w, 2)
    z = [0.3 + 0.2j, -0.1j]
    assert q(z).real == pytest.approx(overlap_q(z, [0.5, -1 / 3]) ** 2, rel=1e-13)
    assert haar_integrate(overlap_function([mpq(1, 3)], 1)) == mpq(1, 2)


def test_integrate_product_and_times_monomial_agree():
    f = overlap_function([mpq(1, 2)], 2)
    g = RationalPolyFunction.monomial(1, (1,), (0,), 1)
    assert integrate_product(f, g) == integrate_times_monomial(f, (1,), (0,), 1)
    assert integrate_product(f, g) == haar_integrate(f * g)

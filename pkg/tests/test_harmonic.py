import math
from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from scipy.special import eval_jacobi, eval_legendre, hyp2f1

from quditphase import (
    ModelParams,
    RationalPolyFunction,
    build_harmonic_basis,
    dim_harmonic,
    inversion_coefficients,
    kernel_value,
    lambda_kernel,
    overlap_q,
    project_level,
)
from quditphase.geometry import haar_integrate, integrate_product, overlap_function
from quditphase.harmonic import (
    derivative_generators,
    eigen_residual,
    kernel_function,
    laplacian_apply,
    multi_indices,
    reproducing_check,
    reproducing_residual_exact,
)


def _poch(a, k):
    return math.prod(a + i for i in range(k))


@pytest.mark.parametrize("n", range(6))
def test_d2_kernel_is_legendre(n):
    q = np.linspace(0, 1, 11)
    expected = (2 * n + 1) * eval_legendre(n, 2 * q - 1)
    np.testing.assert_allclose(kernel_value(ModelParams(2, n), q), expected, atol=1e-11)


@pytest.mark.parametrize("D,n", [(3, 1), (3, 3), (4, 2), (5, 3)])
def test_kernel_is_jacobi_hypergeometric(D, n):
    q = np.linspace(0, 1, 9)
    K = lambda_kernel(ModelParams(D, n))
    shape = hyp2f1(-n, D + n - 1, 1, q)
    np.testing.assert_allclose(eval_jacobi(n, 0, D - 2, 1 - 2 * q), shape, atol=1e-11)
    np.testing.assert_allclose(K(q), dim_harmonic(ModelParams(D, n), n) * shape / hyp2f1(-n, D + n - 1, 1, 1), atol=1e-10)
    assert K(mpq(1)) == dim_harmonic(ModelParams(D, n), n)


def test_pochhammer_form_of_inversion_coefficients():
    """The Jacobi-at-minus-one form equals the factorial form once divided by tilde_d_n."""
    for D in (2, 3, 4):
        for N in range(1, 6):
            c = inversion_coefficients(ModelParams(D, N)).values
            for n in range(N + 1):
                jac = (-1) ** n * math.comb(n + D - 2, n)
                num = (-1) ** n * math.factorial(N) * (D + 2 * n - 1) * _poch(n + 1, D - 2) * jac
                den = math.factorial(N - n) * _poch(N + 1, D + n - 1) * dim_harmonic(ModelParams(D, n), n)
                assert Fraction(num, den) == Fraction(int(c[n].numerator), int(c[n].denominator))


@pytest.mark.parametrize("D,N", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_q_power_expansion_exact(D, N):
    """Q^N(z, w) = sum_n c_n K_n(z, w) as exact functions of z."""
    w = [mpq(1, 2), mpq(-2, 3), mpq(1, 5)][: D - 1]
    c = inversion_coefficients(ModelParams(D, N)).values
    lhs = overlap_function(w, N)
    rhs = RationalPolyFunction(D - 1)
    for n in range(N + 1):
        rhs = rhs + kernel_function(D, n, w).scale(c[n])
    assert lhs == rhs


@pytest.mark.parametrize("D,n", [(2, 1), (2, 4), (3, 1), (3, 2), (3, 3)])
def test_kernel_functions_are_eigenfunctions(D, n):
    w = [mpq(1, 3), mpq(1, 2)][: D - 1]
    assert eigen_residual(kernel_function(D, n, w), n).is_zero()


def test_laplacian_of_q_power():
    """The Laplacian commutes with the level projection (level 1 has eigenvalue -D)."""
    D, N = 3, 2
    w = [mpq(1, 2), mpq(1, 3)]
    f = overlap_function(w, N)
    lhs = project_level(laplacian_apply(f), 1)
    rhs = project_level(f, 1).scale(-D)
    assert lhs == rhs


def test_laplacian_known_values():
    # |z|^2/(1+|z|^2) - 1/2 is the D=2 level-1 zonal function cos(theta) up to sign
    f = RationalPolyFunction.monomial(1, (1,), (1,), 1) - RationalPolyFunction.constant(1, mpq(1, 2))
    assert laplacian_apply(f) == f.scale(-2)
    assert laplacian_apply(RationalPolyFunction.constant(2, 5)).is_zero()


@pytest.mark.parametrize("D,n", [(2, 2), (3, 2)])
def test_projection_is_idempotent_and_orthogonal(D, n):
    w = [mpq(1, 2), mpq(-1, 3)][: D - 1]
    f = overlap_function(w, 3)
    Pn = project_level(f, n)
    assert project_level(Pn, n) == Pn
    for m in range(4):
        if m != n:
            assert project_level(Pn, m).is_zero()
            assert integrate_product(Pn.conj(), project_level(f, m)) == 0
    total = sum((project_level(f, m) for m in range(4)), RationalPolyFunction(D - 1))
    assert total == f


def test_projection_shortcut_agrees_with_integral():
    f = overlap_function([mpq(1, 2), mpq(1, 4)], 2)
    for n in range(4):
        assert project_level(f, n) == project_level(f, n, shortcut=False)


def test_multi_indices_order():
    assert multi_indices(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert multi_indices(2, 2, True) == ((2, 0), (1, 1), (0, 2))


@pytest.mark.parametrize("D,n", [(D, n) for D in (2, 3) for n in range(5)])
def test_harmonic_basis(D, n):
    """Counts, exact eigenfunction residuals and exact reproducing identity."""
    b = build_harmonic_basis(ModelParams(D, n), n)
    assert len(b) == dim_harmonic(ModelParams(D, n), n) == len(derivative_generators(D, n))
    assert all(eigen_residual(f, n).is_zero() for f in b.psi)
    z = [complex(1 / 3, -2 / 7), complex(0.5, 0.25)][: D - 1]
    w = [complex(-0.75, 0.5), complex(2, -1)][: D - 1]
    assert reproducing_residual_exact(b, z, w) == 0
    assert reproducing_check(b, z, w) < 1e-15


@pytest.mark.parametrize("D,n", [(2, 3), (3, 2)])
def test_basis_orthonormal(D, n):
    b = build_harmonic_basis(ModelParams(D, n), n)
    G = np.array([[complex(integrate_product(f.conj(), g)) for g in b.psi] for f in b.psi])
    np.testing.assert_allclose(G, np.eye(len(b)), atol=1e-15)
    assert all(abs(complex(haar_integrate(f))) < 1e-15 for f in b.psi) or n == 0


def test_rescaled_functions_normalised_for_dmu_n():
    p = ModelParams(3, 2)
    b = build_harmonic_basis(p, 1)
    for f in b.functions:
        assert 6 * float(complex(integrate_product(f.conj(), f)).real) == pytest.approx(1, abs=1e-15)

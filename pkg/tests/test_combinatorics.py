import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from sympy.physics.quantum.cg import CG
from sympy import Rational, nsimplify

from quditphase import (
    ModelParams,
    YoungShape,
    cg_decomposition,
    dim_harmonic,
    dim_sym,
    inversion_coefficients,
    lambda_series,
    log_tau,
    tau_of_lambda_expansion,
    young_dim,
)


def hook_content_dim(rows, D):
    """Hook-content formula: prod over boxes of (D + content) / hook."""
    rows = [r for r in rows if r > 0]
    cols = [sum(1 for r in rows if r > j) for j in range(rows[0])] if rows else []
    num = den = 1
    for i, r in enumerate(rows):
        for j in range(r):
            num *= D + j - i
            den *= (r - j - 1) + (cols[j] - i - 1) + 1
    return num // den


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(1, 2)
    with pytest.raises(ValueError):
        ModelParams(2, -1)
    with pytest.raises(TypeError):
        ModelParams(2.0, 1)


@pytest.mark.parametrize("D,N,expected", [(2, 1, 2), (2, 5, 6), (3, 1, 3), (3, 2, 6), (4, 3, 20)])
def test_dim_sym(D, N, expected):
    assert dim_sym(ModelParams(D, N)) == expected


@given(st.integers(2, 6), st.integers(0, 12))
def test_dim_sym_counts_occupations(D, N):
    count = sum(1 for _ in _occupations(D, N))
    assert dim_sym(ModelParams(D, N)) == count


def _occupations(D, N):
    if D == 1:
        yield (N,)
        return
    for k in range(N + 1):
        for rest in _occupations(D - 1, N - k):
            yield (k,) + rest


def test_dim_harmonic_small_values():
    # D=2 levels are spherical harmonics of degree n
    assert [dim_harmonic(ModelParams(2, 0), n) for n in range(5)] == [1, 3, 5, 7, 9]
    assert [dim_harmonic(ModelParams(3, 0), n) for n in range(4)] == [1, 8, 27, 64]


@given(st.integers(2, 6), st.integers(0, 10))
def test_dim_harmonic_telescopes(D, N):
    p = ModelParams(D, N)
    assert sum(dim_harmonic(p, n) for n in range(N + 1)) == dim_sym(p) ** 2


@given(st.integers(2, 6), st.integers(0, 8))
def test_young_dim_matches_hook_content(D, N):
    for shape, dim in cg_decomposition(ModelParams(D, N)):
        assert dim == hook_content_dim(shape.rows, D)


@pytest.mark.parametrize("rows,expected", [((1, 0), 2), ((2, 1, 0), 8), ((4, 2, 0), 27), ((3, 3, 3), 1), ((2, 0, 0), 6)])
def test_young_dim_known(rows, expected):
    assert young_dim(YoungShape(rows)) == expected


def test_inversion_closed_forms():
    for N in range(1, 9):
        tau = inversion_coefficients(ModelParams(2, N)).tau
        assert tau[0] == 1
        assert Fraction(int(tau[1].numerator), int(tau[1].denominator)) == Fraction(N, N + 2)
    assert inversion_coefficients(ModelParams(3, 1)).tau[1] == Fraction(1, 4)


@pytest.mark.parametrize("N", range(1, 7))
def test_tau_is_su2_clebsch_gordan_square(N):
    """Oracle: |<j j; n 0 | j j>|^2 from sympy for j = N/2."""
    j = Rational(N, 2)
    tau = inversion_coefficients(ModelParams(2, N)).tau
    for n in range(N + 1):
        cg = CG(j, j, n, 0, j, j).doit()
        assert nsimplify(cg**2) == Rational(int(tau[n].numerator), int(tau[n].denominator))


@given(st.integers(2, 5), st.integers(0, 8))
def test_inversion_coefficients_expand_q_power(D, N):
    """sum_n c_n K_n(1) = 1 since K_n(1) = tilde_d_n and Q^N(z,z) = 1."""
    from quditphase.harmonic import _kernel_coeffs

    c = inversion_coefficients(ModelParams(D, N)).values
    assert sum(c[n] * sum(_kernel_coeffs(D, n)) for n in range(N + 1)) == 1


def test_log_tau_matches_float():
    p = ModelParams(3, 5)
    tau = inversion_coefficients(p).tau
    for n in range(6):
        assert float(log_tau(p, n)) == pytest.approx(math.log(float(tau[n])), rel=1e-14, abs=1e-15)


def test_lambda_series_orders():
    p = ModelParams(2, 1000)
    exact = float(log_tau(p, 2))
    errs = [abs(exact - lambda_series(p, 2, k)) for k in (1, 2, 3)]
    assert errs[0] > errs[1] > errs[2]
    assert tau_of_lambda_expansion(p, 2, 3) == pytest.approx(math.exp(exact), rel=1e-9)
    with pytest.raises(ValueError):
        lambda_series(p, 2, 4)
    with pytest.raises(ValueError):
        lambda_series(ModelParams(2, 1), 2, 1)


def test_lambda_series_against_mpmath_taylor():
    """Independent oracle: expand the exact log-gamma form in h = 1/N with mpmath."""
    D, n = 3, 2
    lam = n * (n + D - 1)
    with mpmath.workdps(40):
        def f(h):
            N = 1 / h
            return (
                mpmath.loggamma(D) + mpmath.log(mpmath.binomial(N + D - 1, N))
                + 2 * mpmath.loggamma(N + 1) - mpmath.loggamma(N - n + 1) - mpmath.loggamma(N + n + D)
            )
        coeffs = mpmath.taylor(f, mpmath.mpf("1e-30"), 3)
    ours = [-lam, D * lam / 2, -lam * (D * (2 * D - 1) + lam) / 6]
    for a, b in zip(coeffs[1:], ours):
        assert float(a) == pytest.approx(b, rel=1e-8)


@given(st.integers(2, 5), st.integers(0, 12))
def test_single_tau_matches_table(D, N):
    from quditphase.combinatorics import _single_tau

    tau = inversion_coefficients(ModelParams(D, N)).tau
    assert all(_single_tau(D, N, n) == tau[n] for n in range(N + 1))

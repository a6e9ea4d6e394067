"""Acceptance criteria 1-11, one test each."""

import itertools
import math

import numpy as np
import pytest
from gmpy2 import mpq

from quditphase import (
    CatSpec,
    ModelParams,
    OperatorMatrix,
    RationalPolyFunction,
    build_harmonic_basis,
    build_sw_kernel,
    cat_state,
    cg_decomposition,
    coherent_state,
    density_matrix,
    dim_harmonic,
    dim_sym,
    fock_basis,
    fock_state,
    husimi,
    inversion_coefficients,
    moyal_bracket,
    overlap_q,
    poisson_bracket,
    quasi_distribution,
    reconstruct_density,
    smooth,
    spin_operators,
    standardization_matrix,
    symbol,
    tracing_residual,
    young_dim,
)
from quditphase.harmonic import _kernel_coeffs, eigen_residual, kernel_function, reproducing_residual_exact
from quditphase.geometry import overlap_function
from quditphase.rationals import gauss
from quditphase.verify import asymptotic_slopes

S_VALUES = (-1.0, 0.0, 1.0)


def _mono(nv, k, l, denom, coeff=1):
    return RationalPolyFunction.monomial(nv, k, l, denom, mpq(coeff))


def _rational_points(rng, count, nv):
    """Gaussian rationals ``a/c + i b/d`` with small integers."""
    out = []
    for _ in range(count):
        a, b = rng.integers(-6, 7, size=(2, nv))
        c, d = rng.integers(1, 8, size=(2, nv))
        out.append([gauss(mpq(int(x), int(y)), mpq(int(u), int(v))) for x, y, u, v in zip(a, c, b, d)])
    return out


# --- reference closed forms ---------------------------------------------------

def _paper_blocks_d2():
    """Level pieces of the N=1 qubit kernel; level 1 is weighted by 3^((s+1)/2)."""
    r2 = _mono(1, (1,), (1,), 1)
    one = _mono(1, (0,), (0,), 1)
    lvl0 = [[RationalPolyFunction.constant(1, mpq(1, 2)), RationalPolyFunction(1)],
            [RationalPolyFunction(1), RationalPolyFunction.constant(1, mpq(1, 2))]]
    lvl1 = [[(r2 - one).scale(mpq(-1, 2)), _mono(1, (0,), (1,), 1)],
            [_mono(1, (1,), (0,), 1), (r2 - one).scale(mpq(1, 2))]]
    return lvl0, lvl1


def _paper_matrix_d2(s, z):
    z = complex(z[0])
    r2 = abs(z) ** 2
    c = 3 ** ((s + 1) / 2)
    return np.array([[(r2 + 1 - c * (r2 - 1)) / 2, c * z.conjugate()],
                     [c * z, (r2 + 1 + c * (r2 - 1)) / 2]]) / (1 + r2)


def _paper_blocks_d3():
    """Level pieces of the N=1 qutrit kernel; level 1 is weighted by 2^(s+1)."""
    m = lambda k, l, c=1: _mono(2, k, l, 1, c)
    third = RationalPolyFunction.constant(2, mpq(1, 3))
    zero = RationalPolyFunction(2)
    lvl0 = [[third if a == b else zero for b in range(3)] for a in range(3)]
    a1, a2 = m((1, 0), (1, 0)), m((0, 1), (0, 1))
    one = m((0, 0), (0, 0))
    t = mpq(1, 3)
    lvl1 = [
        [(one.scale(2) - a1 - a2).scale(t), m((0, 0), (1, 0)), m((0, 0), (0, 1))],
        [m((1, 0), (0, 0)), (a1.scale(2) - one - a2).scale(t), m((1, 0), (0, 1))],
        [m((0, 1), (0, 0)), m((0, 1), (1, 0)), (a2.scale(2) - one - a1).scale(t)],
    ]
    return lvl0, lvl1


def _paper_matrix_d3(s, z):
    z1, z2 = (complex(v) for v in z)
    a, b = abs(z1) ** 2, abs(z2) ** 2
    u = 2.0 ** -s
    M = np.array([
        [(u + 4 + (u - 2) * (a + b)) / 6, z1.conjugate(), z2.conjugate()],
        [z1, ((u + 4) * a + (u - 2) * (1 + b)) / 6, z1 * z2.conjugate()],
        [z2, z2 * z1.conjugate(), ((u + 4) * b + (u - 2) * (1 + a)) / 6],
    ])
    return 2.0 ** (1 + s) / (1 + a + b) * M


def _cat_plus(x, y):
    r = x * x + y * y + 1
    return (math.sqrt(10) + 2) / 6 - 2 * math.sqrt(10) * y * y / r**2


def _cat_minus(x, y):
    r = x * x + y * y + 1
    return 2 * math.sqrt(10) / r - 2 * math.sqrt(10) / r**2 - math.sqrt(10) / 3 + 1 / 3


def _grid41():
    x = np.linspace(-3, 3, 41)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return X, Y


def _n2_cats():
    p = ModelParams(2, 2)
    return {sign: density_matrix(cat_state(CatSpec(p, [1.0], [c]))) for sign, c in (("+", 0), ("-", 1))}


# --- criteria -----------------------------------------------------------------

def test_criterion_01_sw_kernel_exactness():
    rng = np.random.default_rng(1)
    for D, blocks, matrix, base in ((2, _paper_blocks_d2(), _paper_matrix_d2, mpq(1, 3)),
                                    (3, _paper_blocks_d3(), _paper_matrix_d3, mpq(1, 4))):
        p = ModelParams(D, 1)
        K = build_sw_kernel(p)
        tau = inversion_coefficients(p).tau
        assert tau[0] == 1 and tau[1] == base
        assert np.all(K.sqrt_mult == 1)
        for n in (0, 1):
            for a, b in itertools.product(range(D), repeat=2):
                assert K.exact_block(n, a, b) == blocks[n][a][b], (D, n, a, b)
        worst = 0.0
        for ez in _rational_points(rng, 20, D - 1):
            z = [complex(v) for v in ez]
            for n in (0, 1):
                for a, b in itertools.product(range(D), repeat=2):
                    assert K.exact_block(n, a, b).evaluate_exact(ez) == blocks[n][a][b].evaluate_exact(ez)
            for s in S_VALUES:
                worst = max(worst, float(np.max(np.abs(K.evaluate(s, np.array(z)) - matrix(s, z)))))
        assert worst <= 1e-12, worst


def test_criterion_02_tracing_standardization_sweep():
    worst = 0.0
    for D, N, s in itertools.product((2, 3), range(4), S_VALUES):
        p = ModelParams(D, N)
        I = standardization_matrix(p, s)
        worst = max(worst, float(np.max(np.abs(I - np.eye(dim_sym(p))))), tracing_residual(p, s))
    assert worst <= 1e-9, worst


def test_criterion_03_cat_wigner_closed_forms():
    cats = _n2_cats()
    X, Y = _grid41()
    pts = (X + 1j * Y)[..., None]
    Wp = quasi_distribution(cats["+"], 0).evaluate(pts)
    Wm = quasi_distribution(cats["-"], 0).evaluate(pts)
    dev = max(np.max(np.abs(Wp - np.vectorize(_cat_plus)(X, Y))), np.max(np.abs(Wm - np.vectorize(_cat_minus)(X, Y))))
    assert dev <= 1e-10, dev
    assert quasi_distribution(cats["+"], 0)([0]) == pytest.approx((math.sqrt(10) + 2) / 6, abs=1e-12)
    assert quasi_distribution(cats["-"], 0)([0]) == pytest.approx((1 - math.sqrt(10)) / 3, abs=1e-12)


def test_criterion_04_husimi_consistency():
    rng = np.random.default_rng(4)
    worst = direct = 0.0
    for D, N in itertools.product((2, 3), range(5)):
        p = ModelParams(D, N)
        for _ in range(50):
            w, z = rng.normal(size=(2, D - 1)) + 1j * rng.normal(size=(2, D - 1))
            psi = coherent_state(p, w)
            F = quasi_distribution(density_matrix(psi), -1)
            worst = max(worst, abs(F(z) - overlap_q(z, w) ** N))
            direct = max(direct, abs(F(z) - husimi(psi, z)))
    assert worst <= 1e-9 and direct <= 1e-9, (worst, direct)


def test_criterion_05_heat_kernel():
    for D, N in itertools.product((2, 3), range(5)):
        # K_{-1,1} = (1/d_N) sum_n tau_n K_n(q): exact coefficients in q
        tau = inversion_coefficients(ModelParams(D, N)).tau
        poly = [mpq(0)] * (N + 1)
        for n in range(N + 1):
            for m, c in enumerate(_kernel_coeffs(D, n)):
                poly[m] += tau[n] * c / dim_sym(ModelParams(D, N))
        assert poly == [mpq(0)] * N + [mpq(1)]
        w = [mpq(1, 2), mpq(-1, 3)][: D - 1]
        acc = RationalPolyFunction(D - 1)
        for n in range(N + 1):
            acc = acc + kernel_function(D, n, w).scale(tau[n] / dim_sym(ModelParams(D, N)))
        assert acc == overlap_function(w, N)
    worst = 0.0
    for rho in _n2_cats().values():
        W = quasi_distribution(rho, 0)
        Q = quasi_distribution(rho, -1)
        for x, y in ((0, 0), (1, 2), (-3, 4), (5, 2)):
            for zz in (gauss(mpq(x, y or 1)), gauss(mpq(-1, 3), mpq(x, y or 1))):
                pt = [complex(zz)]
                val = smooth(W, -1, [zz])
                worst = max(worst, abs(val - Q(pt)), abs(val - husimi_value(rho, pt)))
    assert worst <= 1e-9, worst


def husimi_value(rho, z):
    cs = coherent_state(rho.params, z).amplitudes
    return float(np.real(cs.conj() @ rho.matrix @ cs))


def test_criterion_06_round_trip():
    rng = np.random.default_rng(6)
    worst = 0.0
    for D, N in itertools.product((2, 3), range(4)):
        p = ModelParams(D, N)
        d = dim_sym(p)
        rhos = [density_matrix(fock_state(p, idx)) for idx in fock_basis(p)]
        for _ in range(10):
            X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            R = X @ X.conj().T
            rhos.append(OperatorMatrix(p, R / np.trace(R)))
        for rho, s in itertools.product(rhos, S_VALUES):
            worst = max(worst, reconstruct_density(quasi_distribution(rho, s)).max_abs_diff(rho))
    assert worst <= 1e-9, worst


def test_criterion_07_harmonic_machinery():
    z = [complex(2 / 5, -1 / 3), complex(-1 / 2, 3 / 4)]
    w = [complex(1, 1 / 2), complex(1 / 3, 0)]
    for D, n in itertools.product((2, 3), range(5)):
        b = build_harmonic_basis(ModelParams(D, n), n)
        assert len(b) == dim_harmonic(ModelParams(D, n), n)
        assert all(eigen_residual(f, n).is_zero() for f in b.psi)
        assert reproducing_residual_exact(b, z[: D - 1], w[: D - 1]) == 0
        for N in range(n, 5):
            c = inversion_coefficients(ModelParams(D, N)).values
            poly = [mpq(0)] * (N + 1)
            for k in range(N + 1):
                for m, a in enumerate(_kernel_coeffs(D, k)):
                    poly[m] += c[k] * a
            assert poly == [mpq(0)] * N + [mpq(1)]


def test_criterion_08_representation_bookkeeping():
    dims = [young_dim(shape) for shape, _ in cg_decomposition(ModelParams(3, 2))]
    assert dims == [1, 8, 27] and sum(dims) == 6**2
    for D, N in itertools.product(range(2, 6), range(9)):
        p = ModelParams(D, N)
        assert dim_sym(p) ** 2 == sum(dim_harmonic(p, n) for n in range(N + 1))
        for shape, dim in cg_decomposition(p):
            n = shape.rows[0] - N
            assert young_dim(shape) == dim == dim_harmonic(p, n)


def test_criterion_09_asymptotics():
    bad = []
    for D, n in itertools.product((2, 3), (1, 2, 3)):
        for k, slope in asymptotic_slopes(D, n, (100, 1000, 10000)).items():
            if abs(slope + (k + 1)) > 0.2:
                bad.append((D, n, k, slope))
    assert not bad, bad


def _spin_sphere(N):
    p = ModelParams(2, N)
    return p, spin_operators(p)


def test_criterion_10_semiclassical_limits():
    # (a) N * Moyal bracket -> Poisson bracket at rate 1/N
    pts = np.array([[0.3 + 0.1j], [-0.7 + 0.4j], [1.2 - 0.5j], [0.05 - 0.9j]])
    Ns = (4, 8, 16, 32)
    devs = []
    for N in Ns:
        _, (jx, jy, jz) = _spin_sphere(N)
        worst = 0.0
        for A, B in ((jx, jy), (jy, jz), (jz, jx)):
            fa, fb = symbol(A, 0), symbol(B, 0)
            pb = poisson_bracket(fa.symbolic(), fb.symbolic()).evaluate(pts)
            mb = N * moyal_bracket(fa, fb).evaluate(pts)
            worst = max(worst, float(np.max(np.abs(pb - mb) / np.abs(pb))))
        devs.append(worst)
    slope = np.polyfit(np.log(Ns), np.log(devs), 1)[0]
    assert abs(slope + 1) <= 0.2, (slope, devs)

    # (b) D=2 bracket against (1/sin t)(f_t g_p - g_t f_p) at 20 (theta, phi)
    _, (jx, jy, jz) = _spin_sphere(4)
    f, g = symbol(jx, 0).symbolic(), symbol(jz, 0).symbolic()
    pb = poisson_bracket(f, g)
    rng = np.random.default_rng(10)
    at = lambda h, t, p: h([math.tan(t / 2) * np.exp(1j * p)]).real
    eps = 1e-5
    worst = 0.0
    ratios = []
    for t, ph in zip(rng.uniform(0.3, 2.8, 20), rng.uniform(0, 2 * np.pi, 20)):
        d = lambda h, dt, dp: (at(h, t + dt, ph + dp) - at(h, t - dt, ph - dp)) / (2 * eps)
        sphere = (d(f, eps, 0) * d(g, 0, eps) - d(g, eps, 0) * d(f, 0, eps)) / math.sin(t)
        ours = pb([math.tan(t / 2) * np.exp(1j * ph)]).real
        worst = max(worst, abs(ours - sphere) / max(abs(sphere), 1e-12))
        ratios.append(ours / sphere)
    assert worst <= 1e-6, f"relative deviation {worst:.3g}; bracket ratios span {min(ratios):.9f}..{max(ratios):.9f}"


def test_criterion_11_negativity():
    X, Y = _grid41()
    pts = (X + 1j * Y)[..., None]
    mins = []
    for N in (1, 3, 5):
        p = ModelParams(2, N)
        mins.append(float(quasi_distribution(density_matrix(coherent_state(p, [1.0])), 0).evaluate(pts).min()))
    assert mins[0] < 0
    assert mins[0] <= mins[1] <= mins[2], mins

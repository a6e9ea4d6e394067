"""Stratonovich-Weyl calculus on the symmetric N-quDit space.

Entry ``(a, b)`` of the level-``n`` part of the kernel is the level-``n``
projection of the coherent-state matrix element ``<a|z><z|b>``:

    Delta^(s)_ab(z) = sum_n tau_n^(-(s+1)/2) P_n[<a|.><.|b>](z),

which is what ``sum_j Y_j(zbar) D_{n,j}`` collapses to once the
reproducing property of ``K_n`` is used.  ``<a|z><z|b> = sqrt(m_a m_b)
z^a' zbar^b' / (1+|z|^2)^N`` with multinomials ``m``, so blocks are stored as
exact rational functions ``R^(n)_ab`` times the scalars ``sqrt(m_a m_b)``.

Symbols follow the same route: ``F^(s)_A = sum_n tau_n^(-(s+1)/2)
P_n[Q_A]`` with ``Q_A(z) = <z|A|z>``, which stays cheap at large ``N`` for
operators with few nonzero entries.  The Fano operators are built from the
explicit harmonic basis and serve as the independent cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from gmpy2 import mpq

from .combinatorics import ModelParams, casimir_eigenvalue, dim_harmonic, dim_sym, inversion_coefficients
from .geometry import as_point, fock_basis, haar_integrate, integrate_product, integrate_times_monomial, multinomial, overlap_q
from .harmonic import _kernel_coeffs, _monomial_projection, build_harmonic_basis, kernel_function, laplacian_apply, project_level
from .rationals import exact, gauss
from .rpf import RationalPolyFunction

__all__ = [
    "OperatorMatrix",
    "SWKernelSymbolic",
    "QuasiDistribution",
    "NonHermitianWarning",
    "build_sw_kernel",
    "sw_kernel",
    "husimi_symbol",
    "symbol",
    "quasi_distribution",
    "reconstruct_density",
    "fano_operator",
    "fano_operators",
    "standardization_matrix",
    "tracing_residual",
    "heat_kernel",
    "heat_kernel_trace",
    "smooth",
    "sw_heat_equation_check",
    "heat_limit_residual",
    "star_product",
    "trikernel",
    "trikernel_star",
    "trikernel_marginal",
    "moyal_bracket",
    "poisson_bracket",
]


class NonHermitianWarning(UserWarning):
    """A quasi-distribution was requested for a non-Hermitian operator."""


@dataclass(frozen=True)
class OperatorMatrix:
    """A ``d_N x d_N`` operator in the Fock basis order of :func:`fock_basis`."""

    params: ModelParams
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        d = dim_sym(self.params)
        if m.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.params, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) <= tol)

    def is_density(self, tol: float = 1e-10) -> bool:
        if not self.is_hermitian(tol):
            return False
        evals = np.linalg.eigvalsh(self.matrix)
        return abs(np.sum(evals) - 1) <= tol and evals.min() >= -tol

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same(self.params, other.params)
        return OperatorMatrix(self.params, self.matrix @ other.matrix)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same(self.params, other.params)
        return OperatorMatrix(self.params, self.matrix + other.matrix)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same(self.params, other.params)
        return OperatorMatrix(self.params, self.matrix - other.matrix)

    def __mul__(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.params, self.matrix * complex(c))

    __rmul__ = __mul__

    def max_abs_diff(self, other) -> float:
        other = other.matrix if isinstance(other, OperatorMatrix) else np.asarray(other)
        return float(np.max(np.abs(self.matrix - other)))


def _check_same(a: ModelParams, b: ModelParams):
    if a != b:
        raise ValueError(f"incompatible parameters {a} and {b}")


def _as_operator(op, params: ModelParams | None = None) -> OperatorMatrix:
    if isinstance(op, OperatorMatrix):
        if params is not None:
            _check_same(op.params, params)
        return op
    if params is None:
        raise ValueError("params are required for a bare matrix")
    return OperatorMatrix(params, op)


def _snap_rational(x: float):
    q = Fraction(x).limit_denominator(1 << 20)
    if abs(float(q) - x) <= 32 * math.ulp(x):
        return q
    return None


def _scaled_part(x: float, mm: int):
    """Exact ``x * sqrt(mm)`` when ``x^2 * mm`` is a rational square."""
    if x == 0:
        return mpq(0)
    r = _snap_rational(x * x)
    if r is not None:
        t = r * mm
        pn, pd = math.isqrt(t.numerator), math.isqrt(t.denominator)
        if pn * pn == t.numerator and pd * pd == t.denominator:
            return mpq(pn, pd) if x > 0 else -mpq(pn, pd)
    return exact(x * math.sqrt(mm))


def _snap(c: complex, mm: int):
    """Exact ``c * sqrt(mm)``, recognising entries that are square roots of rationals.

    Operator entries such as ``sqrt(k)`` usually make the product rational;
    recovering it keeps the ``(1+|z|^2)`` factors of symbols cancellable.
    Anything else stays at its exact binary value.
    """
    return gauss(_scaled_part(c.real, mm), _scaled_part(c.imag, mm))


def _tau_weight(tau, exponent: float) -> float:
    return float(tau) ** exponent


def _exact_weight(tau, exponent: float):
    """``tau^exponent`` exactly when the exponent is an integer."""
    if float(exponent).is_integer():
        return mpq(tau) ** int(exponent)
    return exact(_tau_weight(tau, exponent))


@dataclass(frozen=True)
class SWKernelSymbolic:
    """Graded SW kernel: ``block_n = tau_n^(-1/2) sqrt(m_a m_b) R^(n)_ab``.

    ``rational[n][a][b]`` holds the exact functions ``R^(n)_ab``; the
    kernel is ``Delta^(s) = sum_n tau_n^(-s/2) block_n``.
    """

    params: ModelParams
    rational: tuple
    tau: tuple
    sqrt_mult: np.ndarray

    @property
    def levels(self) -> int:
        return len(self.rational)

    def weight(self, n: int, s: float) -> float:
        """Scalar multiplying ``R^(n)`` in ``Delta^(s)``."""
        return _tau_weight(self.tau[n], -(s + 1) / 2)

    def _scales(self):
        return np.outer(self.sqrt_mult, self.sqrt_mult)

    def rational_values(self, n: int, points) -> np.ndarray:
        """``R^(n)`` at points of shape ``(..., D-1)``; shape ``(..., d, d)``."""
        pts = np.asarray(points, dtype=np.complex128)
        rows = [[f.evaluate(pts) for f in row] for row in self.rational[n]]
        return np.moveaxis(np.array(rows), (0, 1), (-2, -1))

    def block(self, n: int, z) -> np.ndarray:
        z = as_point(z, self.params.nvars)
        return _tau_weight(self.tau[n], -0.5) * self._scales() * self.rational_values(n, z)

    def evaluate(self, s: float, points) -> np.ndarray:
        """``Delta^(s)`` at one point (shape ``(d, d)``) or many (``(..., d, d)``)."""
        pts = np.asarray(points, dtype=np.complex128)
        if self.params.nvars == 1 and pts.shape[-1:] != (1,):
            pts = pts[..., None]
        if pts.ndim == 1 and pts.shape[0] != self.params.nvars:
            raise ValueError(f"expected {self.params.nvars} coordinates")
        scales = self._scales()
        out = sum(self.weight(n, s) * scales * self.rational_values(n, pts) for n in range(self.levels))
        return out

    def exact_block(self, n: int, a: int, b: int) -> RationalPolyFunction:
        return self.rational[n][a][b]


@lru_cache(maxsize=None)
def _sw_kernel(D: int, N: int) -> SWKernelSymbolic:
    params = ModelParams(D, N)
    nv = D - 1
    basis = fock_basis(params)
    excit = [idx[1:] for idx in basis]
    inv = inversion_coefficients(params)
    rational = []
    for n in range(N + 1):
        rows = []
        for a in excit:
            rows.append(tuple(_monomial_projection(nv, n, a, b, N) for b in excit))
        rational.append(tuple(rows))
    sqrt_mult = np.sqrt(np.array([float(multinomial(idx)) for idx in basis]))
    sqrt_mult.setflags(write=False)
    return SWKernelSymbolic(params, tuple(rational), tuple(inv.tau[n] for n in range(N + 1)), sqrt_mult)


def build_sw_kernel(params: ModelParams) -> SWKernelSymbolic:
    """Exact graded SW kernel for ``params`` (cached per ``(D, N)``)."""
    return _sw_kernel(params.D, params.N)


def sw_kernel(params: ModelParams, s: float, z) -> OperatorMatrix:
    """``Delta^(s)(z)`` as a Hermitian unit-trace matrix."""
    K = build_sw_kernel(params)
    return OperatorMatrix(params, K.evaluate(float(s), as_point(z, params.nvars)))


def husimi_symbol(op, params: ModelParams | None = None) -> RationalPolyFunction:
    """``Q_A(z) = <N,z|A|N,z>`` as an exact function (matrix entries taken exactly)."""
    A = _as_operator(op, params)
    p = A.params
    nv = p.nvars
    basis = fock_basis(p)
    terms = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = A.matrix[i, j]
            if c == 0:
                continue
            coeff = _snap(complex(c), multinomial(a) * multinomial(b))
            e = tuple(b[1:]) + tuple(a[1:])
            terms[e] = terms.get(e, 0) + coeff
    return RationalPolyFunction(nv, terms, p.N)


@dataclass(frozen=True)
class QuasiDistribution:
    """``F^(s)_A = sum_n weights[n] * levels[n]`` with exact level functions."""

    params: ModelParams
    s: float
    source: OperatorMatrix
    levels: tuple
    weights: tuple

    @property
    def hermitian(self) -> bool:
        return self.source.is_hermitian(1e-12)

    def evaluate(self, points) -> np.ndarray:
        """Values at points of shape ``(..., D-1)`` (a scalar for D=2 may drop the axis)."""
        pts = np.asarray(points, dtype=np.complex128)
        if self.params.nvars == 1 and pts.shape[-1:] != (1,):
            pts = pts[..., None]
        out = 0
        for w, f in zip(self.weights, self.levels):
            if not f.is_zero():
                out = out + w * f.evaluate(pts)
        out = np.broadcast_to(np.asarray(out, dtype=np.complex128), pts.shape[:-1])
        return out.real.copy() if self.hermitian else out.copy()

    def __call__(self, z):
        z = as_point(z, self.params.nvars)
        v = self.evaluate(z[None, :])[0]
        return float(v) if self.hermitian else complex(v)

    def exact_weights(self) -> tuple:
        return tuple(_exact_weight(t, -(self.s + 1) / 2) for t in inversion_coefficients(self.params).tau.values())

    def symbolic(self) -> RationalPolyFunction:
        """One rational function; exact when ``(s+1)/2`` is an integer."""
        acc = RationalPolyFunction(self.params.nvars)
        for w, f in zip(self.exact_weights(), self.levels):
            acc = acc + f.scale(w)
        return acc


@lru_cache(maxsize=4096)
def _levels_cached(params: ModelParams, key: bytes, shape) -> tuple:
    A = np.frombuffer(key, dtype=np.complex128).reshape(shape)
    q = husimi_symbol(OperatorMatrix(params, A))
    return tuple(project_level(q, n) for n in range(params.N + 1))


def symbol(op, s: float, params: ModelParams | None = None) -> QuasiDistribution:
    """``F^(s)_A(z) = tr(A Delta^(s)(z))`` for any operator ``A``."""
    A = _as_operator(op, params)
    p = A.params
    s = float(s)
    tau = inversion_coefficients(p).tau
    levels = _levels_cached(p, np.ascontiguousarray(A.matrix).tobytes(), A.matrix.shape)
    weights = tuple(_tau_weight(tau[n], -(s + 1) / 2) for n in range(p.N + 1))
    return QuasiDistribution(p, s, A, levels, weights)


def quasi_distribution(rho, s: float, params: ModelParams | None = None) -> QuasiDistribution:
    """The s-ordered quasi-distribution of a density matrix."""
    R = _as_operator(rho, params)
    if not R.is_hermitian(1e-10):
        warnings.warn("density matrix is not Hermitian; the distribution may be complex", NonHermitianWarning, stacklevel=2)
    return symbol(R, s)


def reconstruct_density(f: QuasiDistribution) -> OperatorMatrix:
    """``rho = int F^(s)(z) Delta^(-s)(z) dmu_N`` by exact level-pair integrals."""
    if f.levels is None:
        raise ValueError("the distribution carries no symbolic form")
    p = f.params
    K = build_sw_kernel(p)
    d = dim_sym(p)
    out = np.zeros((d, d), dtype=np.complex128)
    scales = K._scales()
    for n, (w, fn) in enumerate(zip(f.weights, f.levels)):
        if fn.is_zero():
            continue
        for m in range(K.levels):
            wm = K.weight(m, -f.s)
            for a in range(d):
                for b in range(d):
                    v = integrate_product(fn, K.rational[m][a][b])
                    if v:
                        out[a, b] += w * wm * scales[a, b] * complex(v)
    return OperatorMatrix(p, d * out)


def fano_operator(params: ModelParams, n: int, j: int, precision_bits: int | None = None) -> OperatorMatrix:
    """``D_{n,j} = tau_n^(-1/2) int Y^(n)_j(z) |N,z><N,z| dmu_N``, with ``1 <= j``."""
    if not 0 <= n <= params.N:
        raise ValueError(f"level {n} outside 0..{params.N}")
    count = dim_harmonic(params, n)
    if not 1 <= j <= count:
        raise ValueError(f"index j={j} outside 1..{count}")
    return _fano_level(params, n, precision_bits)[j - 1]


@lru_cache(maxsize=None)
def _fano_level(params: ModelParams, n: int, precision_bits: int | None) -> tuple:
    basis = build_harmonic_basis(params, n, precision_bits)
    fock = fock_basis(params)
    d = len(fock)
    tau = inversion_coefficients(params).tau[n]
    scale = d / math.sqrt(float(tau))
    mult = [multinomial(x) for x in fock]
    out = []
    for Y in basis.functions:
        M = np.zeros((d, d), dtype=np.complex128)
        for a, ia in enumerate(fock):
            for b, ib in enumerate(fock):
                v = integrate_times_monomial(Y, ia[1:], ib[1:], params.N)
                if v:
                    M[a, b] = complex(v) * math.sqrt(mult[a] * mult[b]) * scale
        out.append(OperatorMatrix(params, M))
    return tuple(out)


def fano_operators(params: ModelParams, precision_bits: int | None = None) -> list[tuple[int, int, OperatorMatrix]]:
    """All ``d_N^2`` Fano operators as ``(n, j, D_{n,j})`` with 1-based ``j``."""
    return [
        (n, j + 1, op)
        for n in range(params.N + 1)
        for j, op in enumerate(_fano_level(params, n, precision_bits))
    ]


def standardization_matrix(params: ModelParams, s: float) -> np.ndarray:
    """``int Delta^(s) dmu_N`` by exact integration of every block."""
    K = build_sw_kernel(params)
    d = dim_sym(params)
    out = np.zeros((d, d), dtype=np.complex128)
    scales = K._scales()
    for n in range(K.levels):
        w = K.weight(n, s)
        for a in range(d):
            for b in range(d):
                v = haar_integrate(K.rational[n][a][b])
                if v:
                    out[a, b] += w * scales[a, b] * complex(v)
    return d * out


def tracing_residual(params: ModelParams, s: float) -> float:
    """Max deviation of ``int Delta^(s)_ab Delta^(-s)_ce dmu_N`` from ``delta_ae delta_bc``.

    Every level pair is integrated exactly.  Index pairs whose charges do
    not cancel vanish by phase symmetry and are skipped.
    """
    K = build_sw_kernel(params)
    fock = fock_basis(params)
    d = len(fock)
    exc = [np.array(x[1:]) for x in fock]
    scales = K._scales()
    charge = {}
    for a in range(d):
        for b in range(d):
            charge.setdefault(tuple(exc[a] - exc[b]), []).append((a, b))
    worst = 0.0
    for ch, pairs in charge.items():
        partners = charge.get(tuple(-x for x in ch), [])
        for a, b in pairs:
            for c, e in partners:
                total = 0.0
                for n in range(K.levels):
                    for m in range(K.levels):
                        v = integrate_product(K.rational[n][a][b], K.rational[m][c][e])
                        if v:
                            total += K.weight(n, s) * K.weight(m, -s) * complex(v)
                total *= d * scales[a, b] * scales[c, e]
                target = 1.0 if (a == e and b == c) else 0.0
                worst = max(worst, abs(total - target))
    return worst


def heat_kernel(params: ModelParams, s: float, s_prime: float, z, z_prime) -> float:
    """``K_{s,s'}(z,z') = (1/d_N) sum_n tau_n^((s'-s)/2) K_n(Q(z,z'))``."""
    q = overlap_q(as_point(z, params.nvars), as_point(z_prime, params.nvars))
    tau = inversion_coefficients(params).tau
    total = 0.0
    for n in range(params.N + 1):
        coeffs = _kernel_coeffs(params.D, n)
        kn = sum(float(c) * q**m for m, c in enumerate(coeffs))
        total += _tau_weight(tau[n], (s_prime - s) / 2) * kn
    return total / dim_sym(params)


def heat_kernel_trace(params: ModelParams, s: float, s_prime: float, z, z_prime) -> float:
    """``tr[Delta^(s)(z) Delta^(-s')(z')]``, the operator form of the heat kernel."""
    K = build_sw_kernel(params)
    A = K.evaluate(s, as_point(z, params.nvars))
    B = K.evaluate(-s_prime, as_point(z_prime, params.nvars))
    return float(np.real(np.trace(A @ B)))


def smooth(f: QuasiDistribution, s_target: float, z) -> float:
    """``int K_{s_target, f.s}(z, z') F(z') dmu_N(z')`` for an exact point ``z``.

    Every integral is exact; the ``tau`` powers are applied afterwards.
    """
    p = f.params
    zs = [exact(v) for v in np.atleast_1d(np.asarray(z)).tolist()]
    tau = inversion_coefficients(p).tau
    total = 0.0
    for n in range(p.N + 1):
        kn = kernel_function(p.D, n, zs)
        wk = _tau_weight(tau[n], (f.s - s_target) / 2)
        for w, fn in zip(f.weights, f.levels):
            if fn.is_zero():
                continue
            v = integrate_product(kn, fn)
            if v:
                total += wk * w * complex(v).real
    # (1/d_N) kernel prefactor cancels the d_N of dmu_N
    return total


def sw_heat_equation_check(params: ModelParams, s: float, points=None, h: float = 1e-6) -> dict:
    """Residuals of ``d/ds Delta^(s) = -1/2 sum_n ln(tau_n) tau_n^(-s/2) block_n``.

    ``derivative`` compares a central difference in ``s`` (step ``h``,
    evaluated at 40 digits so the step is not swamped by rounding) with the
    analytic right-hand side. ``eigen`` is the exact check that each block
    is a level-``n`` Laplacian eigenfunction, which is why the derivative
    acts diagonally. ``per_block`` lists the block-wise derivative residuals.
    """
    K = build_sw_kernel(params)
    if points is None:
        rng = np.random.default_rng(7)
        points = rng.normal(size=(5, params.nvars)) + 1j * rng.normal(size=(5, params.nvars))
    per_block = []
    worst = 0.0
    with mpmath.workdps(40):
        for n in range(K.levels):
            t = mpmath.mpf(int(K.tau[n].numerator)) / int(K.tau[n].denominator)
            fd = (t ** (-(mpmath.mpf(s) + h) / 2) - t ** (-(mpmath.mpf(s) - h) / 2)) / (2 * h)
            analytic = -mpmath.log(t) / 2 * t ** (-mpmath.mpf(s) / 2)
            if n == 0:
                per_block.append(0.0 if fd == 0 and analytic == 0 else float(abs(fd - analytic)))
                continue
            blk = max(float(np.max(np.abs(K.block(n, z)))) for z in points)
            r = float(abs(fd - analytic)) * blk
            per_block.append(r)
            worst = max(worst, r)
    eigen = 0
    for n in range(K.levels):
        lam = casimir_eigenvalue(ModelParams(params.D, n))
        for row in K.rational[n]:
            for f in row:
                if not (laplacian_apply(f) + f.scale(lam)).is_zero():
                    eigen += 1
    return {"derivative": worst, "per_block": per_block, "eigen_failures": eigen}


def heat_limit_residual(op, s: float = 0.0, params: ModelParams | None = None, points=None, sign: float = -1.0) -> float:
    """Relative gap between ``d/ds F^(s)_A`` and ``sign/(2N) Laplacian F^(s)_A``.

    The Laplacian acts on the exact level functions; the ``s``-derivative
    uses ``ln tau_n``.  Since ``ln tau_n = -lambda_n/N + O(N^-2)`` and the
    Laplacian has eigenvalue ``-lambda_n``, the gap is ``O(1/N)`` for a fixed
    low-level observable when ``sign = -1``; ``sign = +1`` tends to 2.
    """
    F = symbol(op, s, params)
    p = F.params
    tau = inversion_coefficients(p).tau
    if points is None:
        rng = np.random.default_rng(11)
        points = rng.normal(size=(16, p.nvars)) + 1j * rng.normal(size=(16, p.nvars))
    pts = np.asarray(points, dtype=np.complex128)
    lhs = 0
    rhs = 0
    for n, (w, fn) in enumerate(zip(F.weights, F.levels)):
        if fn.is_zero():
            continue
        vals = fn.evaluate(pts)
        lhs = lhs - 0.5 * math.log(float(tau[n])) * w * vals
        rhs = rhs + sign * w * laplacian_apply(fn).evaluate(pts) / (2 * p.N)
    scale = np.max(np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def star_product(fa: QuasiDistribution, fb: QuasiDistribution, s: float) -> QuasiDistribution:
    """The symbol of ``A B`` at ordering ``s`` (operator-trace path)."""
    _check_same(fa.params, fb.params)
    return symbol(fa.source @ fb.source, s)


def trikernel(params: ModelParams, s, s1, s2, z, z1, z2) -> complex:
    """``L^s_{s1,s2}(z,z1,z2) = tr[Delta^(s)(z) Delta^(-s1)(z1) Delta^(-s2)(z2)]``."""
    K = build_sw_kernel(params)
    ev = lambda t, x: K.evaluate(t, as_point(x, params.nvars))
    return complex(np.trace(ev(s, z) @ ev(-s1, z1) @ ev(-s2, z2)))


def trikernel_star(fa: QuasiDistribution, fb: QuasiDistribution, s: float, z) -> complex:
    """``int int L F_A F_B dmu_N dmu_N`` at ``z`` by exact integration.

    The trikernel is a trace of three kernels, so the double integral
    separates into the two single integrals ``int F Delta^(-s') dmu_N``.
    """
    _check_same(fa.params, fb.params)
    A = reconstruct_density(fa).matrix
    B = reconstruct_density(fb).matrix
    D0 = sw_kernel(fa.params, s, z).matrix
    return complex(np.trace(D0 @ A @ B))


def trikernel_marginal(params: ModelParams, s, s1, s2, z1, z2) -> float:
    """``int L^s_{s1,s2}(z, z1, z2) dmu_N(z)``, with the ``z`` integral exact."""
    K = build_sw_kernel(params)
    I = standardization_matrix(params, s)
    B1 = K.evaluate(-s1, as_point(z1, params.nvars))
    B2 = K.evaluate(-s2, as_point(z2, params.nvars))
    return float(np.real(np.trace(I @ B1 @ B2)))


def moyal_bracket(fa: QuasiDistribution, fb: QuasiDistribution) -> QuasiDistribution:
    """``-i (F_A * F_B - F_B * F_A)`` at ``s = 0``: the symbol of ``-i[A, B]``."""
    if fa.s != 0 or fb.s != 0:
        raise ValueError("the Moyal bracket is defined for Wigner functions (s = 0)")
    _check_same(fa.params, fb.params)
    A, B = fa.source.matrix, fb.source.matrix
    return symbol(OperatorMatrix(fa.params, -1j * (A @ B - B @ A)), 0.0)


def poisson_bracket(f: RationalPolyFunction, g: RationalPolyFunction) -> RationalPolyFunction:
    """``i(1+|z|^2) sum_ij (delta_ij + zbar_i z_j)(f_{zbar_i} g_{z_j} - g_{zbar_i} f_{z_j})``."""
    if f.nvars != g.nvars:
        raise ValueError("functions live on different phase spaces")
    nv = f.nvars
    fz = [f.diff(j) for j in range(nv)]
    gz = [g.diff(j) for j in range(nv)]
    fzb = [f.diff(i, anti=True) for i in range(nv)]
    gzb = [g.diff(i, anti=True) for i in range(nv)]
    acc = RationalPolyFunction(nv)
    for i in range(nv):
        for j in range(nv):
            term = fzb[i] * gz[j] - gzb[i] * fz[j]
            if term.is_zero():
                continue
            weight = {}
            e = [0] * (2 * nv)
            e[j] += 1
            e[nv + i] += 1
            weight[tuple(e)] = mpq(1)
            if i == j:
                weight[(0,) * (2 * nv)] = mpq(1)
            acc = acc + term.poly_mul(weight)
    return acc.times_one_plus_s(1).scale(gauss(0, 1))

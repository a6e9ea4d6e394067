"""Laplacian eigenspaces on CP^(D-1) and their reproducing kernels.

The level-``n`` kernel is a polynomial in the overlap ``q = Q(z, w)``,

    K_n(q) = dim_harmonic(n) * 2F1(-n, D+n-1; 1; q) / 2F1(-n, D+n-1; 1; 1),

and integrating against it projects onto the eigenspace with eigenvalue
``-n(n+D-1)``.  That projection has a closed form on monomials, which is
what the SW kernel is built from.  The orthonormal basis built here (from
``w``-derivatives of the kernel at ``w = 0`` and Gram whitening) is the
second, independent route to the same objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from gmpy2 import mpq

from .combinatorics import ModelParams, casimir_eigenvalue, dim_harmonic, dim_sym
from .geometry import NonConvergentIntegral, _monomial_integral, integrate_product, overlap_function
from .rationals import conj, exact
from .rpf import RationalPolyFunction, _add_into, _poly_mul, one_plus_s_power

__all__ = [
    "LambdaKernel",
    "lambda_kernel",
    "kernel_value",
    "kernel_function",
    "laplacian_apply",
    "project_level",
    "multi_indices",
    "derivative_generators",
    "gram_matrix",
    "HarmonicBasis",
    "build_harmonic_basis",
    "reproducing_check",
    "SingularGramError",
    "ORDERING_VERSION",
]

ORDERING_VERSION = 1


class SingularGramError(RuntimeError):
    """The derivative family failed to span the eigenspace."""


def _poch(a, k):
    out = 1
    for i in range(k):
        out *= a + i
    return out


@dataclass(frozen=True)
class LambdaKernel:
    """``K_N`` as exact coefficients of a degree-``N`` polynomial in ``q``."""

    params: ModelParams
    coeffs: tuple

    @property
    def level(self) -> int:
        return self.params.N

    def __call__(self, q):
        """Horner evaluation; exact for exact ``q``, float otherwise."""
        if isinstance(q, (int, type(mpq(0)))):
            acc = mpq(0)
            for c in reversed(self.coeffs):
                acc = acc * q + c
            return acc
        q = np.asarray(q, dtype=float)
        acc = np.zeros_like(q)
        for c in reversed(self.coeffs):
            acc = acc * q + float(c)
        return acc if acc.ndim else float(acc)


@lru_cache(maxsize=None)
def _kernel_coeffs(D: int, n: int) -> tuple:
    raw = [mpq(_poch(-n, m) * _poch(D + n - 1, m), math.factorial(m) ** 2) for m in range(n + 1)]
    at_one = sum(raw)
    td = dim_harmonic(ModelParams(D, n), n)
    return tuple(td * c / at_one for c in raw)


def lambda_kernel(params: ModelParams) -> LambdaKernel:
    """Normalised kernel of the level ``params.N`` eigenspace."""
    return LambdaKernel(params, _kernel_coeffs(params.D, params.N))


def kernel_value(params: ModelParams, q):
    return lambda_kernel(params)(q)


def kernel_function(D: int, n: int, w) -> RationalPolyFunction:
    """``z -> K_n(z, w)`` exactly, for a point ``w`` with exact coordinates."""
    coeffs = _kernel_coeffs(D, n)
    q = overlap_function(w, 1)
    acc = RationalPolyFunction.constant(D - 1, coeffs[0])
    power = RationalPolyFunction.constant(D - 1, 1)
    for c in coeffs[1:]:
        power = power * q
        acc = acc + power.scale(c)
    return acc


def laplacian_apply(f: RationalPolyFunction) -> RationalPolyFunction:
    """``(1+|z|^2) sum_ij (delta_ij + zbar_i z_j) d^2 f / dzbar_i dz_j``."""
    nv = f.nvars
    if f.is_zero():
        return f
    acc = RationalPolyFunction(nv)
    for j in range(nv):
        g = f.diff(j)
        if g.is_zero():
            continue
        for i in range(nv):
            h = g.diff(i, anti=True)
            if h.is_zero():
                continue
            weight = {}
            e = [0] * (2 * nv)
            e[j] += 1
            e[nv + i] += 1
            weight[tuple(e)] = mpq(1)
            if i == j:
                weight[(0,) * (2 * nv)] = mpq(1)
            acc = acc + h.poly_mul(weight)
    return acc.times_one_plus_s(1)


@lru_cache(maxsize=None)
def multi_indices(nvars: int, total: int, exact_total: bool = False) -> tuple:
    """Multi-indices of length ``nvars`` with sum ``<= total`` (or ``== total``).

    Graded order: by total degree, then descending lexicographic.
    """
    def rec(n, parts):
        if parts == 1:
            yield (n,)
            return
        for first in range(n, -1, -1):
            for rest in rec(n - first, parts - 1):
                yield (first,) + rest

    if nvars == 0:
        return ((),)
    degrees = [total] if exact_total else range(total + 1)
    return tuple(a for t in degrees for a in rec(t, nvars))


def _binom_coeff(m: int, a: tuple) -> int:
    """Coefficient of ``x^a`` in ``(1 + sum x_i)^m``."""
    s = sum(a)
    if s > m:
        return 0
    out = math.factorial(m) // math.factorial(m - s)
    for k in a:
        out //= math.factorial(k)
    return out


@lru_cache(maxsize=200_000)
def _monomial_projection(nvars: int, n: int, k: tuple, l: tuple, p: int) -> RationalPolyFunction:
    """``P_n[z^k zbar^l (1+|z|^2)^-p]`` via the closed-form Haar integral.

    With ``K_n(z,w) = sum_m kappa_m Q^m`` and the binomial expansions of
    ``(1 + wbar.z)^m (1 + zbar.w)^m``, only the terms ``w^(alpha+k)
    wbar^(beta+l)`` with ``alpha + k == beta + l`` survive; they contribute
    ``z^beta zbar^alpha / (1+|z|^2)^m``.
    """
    D = nvars + 1
    coeffs = _kernel_coeffs(D, n)
    acc: dict = {}
    for m, km in enumerate(coeffs):
        if not km:
            continue
        part: dict = {}
        for alpha in multi_indices(nvars, m):
            beta = tuple(a + ki - li for a, ki, li in zip(alpha, k, l))
            if min(beta, default=0) < 0 or sum(beta) > m:
                continue
            ca = _binom_coeff(m, alpha)
            cb = _binom_coeff(m, beta)
            mono = _monomial_integral(D, tuple(a + ki for a, ki in zip(alpha, k)), m + p)
            e = beta + alpha
            part[e] = part.get(e, 0) + km * ca * cb * mono
        if part:
            _add_into(acc, _poly_mul(part, one_plus_s_power(nvars, n - m)) if n > m else part)
    return RationalPolyFunction(nvars, acc, n)


def project_level(f: RationalPolyFunction, n: int, *, shortcut: bool = True) -> RationalPolyFunction:
    """Orthogonal projection ``int K_n(z, w) f(w) dmu_0(w)`` onto level ``n``.

    ``shortcut=False`` always runs the integral, even where the level bound
    already forces zero.
    """
    nv = f.nvars
    p = f.denom_power
    # P/(1+|z|^2)^p with bidegree <= (p, p) is a p-body Husimi symbol,
    # which lives in levels <= p
    if shortcut and n > p and max(f.bidegree(), default=0) <= p:
        return RationalPolyFunction(nv)
    acc: dict = {}
    for e, c in f.terms.items():
        if sum(e) > 2 * p + 1:
            raise NonConvergentIntegral(f"term {e} of the projected function is not integrable")
        proj = _monomial_projection(nv, n, e[:nv], e[nv:], p)
        _add_into(acc, proj._raised(n) if proj.denom_power != n else proj.terms, c)
    return RationalPolyFunction(nv, acc, n)


def _cw(m: int, c: tuple) -> int:
    """Coefficient of ``prod (w_i wbar_i)^c_i`` in ``(1 + |w|^2)^-m``."""
    s = sum(c)
    if m == 0:
        return 1 if s == 0 else 0
    out = math.factorial(m + s - 1) // math.factorial(m - 1)
    for ci in c:
        out //= math.factorial(ci)
    return -out if s % 2 else out


@lru_cache(maxsize=None)
def derivative_generators(D: int, n: int) -> tuple:
    """The spanning family ``d^k_w d^l_wbar K_n(z, w)|_{w=0}``.

    Returns ``((k, l), function)`` pairs for ``|k| = n`` (any ``|l| <= n``)
    followed by ``|l| = n`` with ``|k| < n``; multi-indices are in graded
    order within each block.
    """
    nv = D - 1
    coeffs = _kernel_coeffs(D, n)
    full = multi_indices(nv, n)
    top = multi_indices(nv, n, exact_total=True)
    pairs = [(k, l) for k in top for l in full] + [(k, l) for k in full if sum(k) < n for l in top]
    out = []
    for k, l in pairs:
        scale = 1
        for x in k + l:
            scale *= math.factorial(x)
        acc: dict = {}
        for m, km in enumerate(coeffs):
            if not km:
                continue
            part: dict = {}
            for c in multi_indices(nv, min(sum(k), sum(l))):
                a = tuple(ki - ci for ki, ci in zip(k, c))
                b = tuple(li - ci for li, ci in zip(l, c))
                if min(a + b, default=0) < 0:
                    continue
                coef = _binom_coeff(m, a) * _binom_coeff(m, b) * _cw(m, c)
                if coef:
                    e = b + a  # z^b zbar^a
                    part[e] = part.get(e, 0) + km * coef * scale
            if part:
                _add_into(acc, _poly_mul(part, one_plus_s_power(nv, n - m)) if n > m else part)
        out.append(((k, l), RationalPolyFunction(nv, acc, n)))
    return tuple(out)


def gram_matrix(functions) -> list[list]:
    """Exact ``G_ab = int conj(f_a) f_b dmu_0``."""
    conjs = [f.conj() for f in functions]
    size = len(functions)
    G = [[None] * size for _ in range(size)]
    for a in range(size):
        for b in range(a, size):
            v = integrate_product(conjs[a], functions[b])
            G[a][b] = v
            G[b][a] = conj(v)
    return G


def _to_mpf(q):
    q = exact(q)
    if hasattr(q, "re"):
        return mpmath.mpc(_to_mpf(q.re), _to_mpf(q.im))
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def default_precision_bits(params: ModelParams, n: int) -> int:
    return 128 if params.D * max(n, params.N) > 6 else 64


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthonormal level-``n`` eigenfunctions.

    ``psi`` is orthonormal for ``dmu_0``; ``functions`` holds the rescaled
    ``Y = psi / sqrt(d_N)``, orthonormal for ``dmu_N``.  Coefficients are
    exact dyadic rationals carrying ``precision_bits`` of the irrational
    whitening.
    """

    params: ModelParams
    level: int
    functions: tuple
    psi: tuple
    labels: tuple
    gram: tuple = field(repr=False)
    gram_is_real: bool = True
    precision_bits: int = 64

    def __len__(self):
        return len(self.functions)


def _whiten(G, bits: int, tol: float = 1e-10):
    size = len(G)
    complex_gram = any(hasattr(v, "re") for row in G for v in row)
    with mpmath.workprec(bits):
        A = mpmath.matrix(size, size)
        for a in range(size):
            for b in range(size):
                A[a, b] = _to_mpf(G[a][b])
        if complex_gram:
            E, Q = mpmath.eighe(A)
        else:
            E, Q = mpmath.eigsy(A)
        evals = [E[i] for i in range(size)]
        top = max(abs(e) for e in evals)
        if min(evals) <= tol * top:
            raise SingularGramError(
                f"Gram matrix is numerically singular (min/max eigenvalue {float(min(evals) / top):.3e})"
            )
        inv_sqrt = [1 / mpmath.sqrt(e) for e in evals]
        W = [[None] * size for _ in range(size)]
        for a in range(size):
            for j in range(size):
                v = 0
                for i in range(size):
                    qv = Q[j, i]
                    v += Q[a, i] * inv_sqrt[i] * (mpmath.conj(qv) if complex_gram else qv)
                W[a][j] = exact(v)
    return W


@lru_cache(maxsize=None)
def _basis(D: int, n: int, N: int, bits: int) -> HarmonicBasis:
    params = ModelParams(D, N)
    gens = derivative_generators(D, n)
    labels = tuple(lab for lab, _ in gens)
    funcs = [f for _, f in gens]
    expected = dim_harmonic(params, n)
    if len(funcs) != expected:
        raise SingularGramError(f"generated {len(funcs)} functions, expected {expected}")
    G = gram_matrix(funcs)
    is_real = all(not hasattr(v, "re") for row in G for v in row) and all(
        f.is_real_coefficient() for f in funcs
    )
    W = _whiten(G, bits)
    raised = [f._raised(n) for f in funcs]
    psi = []
    for j in range(len(funcs)):
        acc: dict = {}
        for a, terms in enumerate(raised):
            if W[a][j]:
                _add_into(acc, terms, W[a][j])
        psi.append(RationalPolyFunction(D - 1, acc, n))
    with mpmath.workprec(bits):
        inv_sqrt_d = exact(1 / mpmath.sqrt(dim_sym(params)))
    ys = tuple(p.scale(inv_sqrt_d) for p in psi)
    return HarmonicBasis(
        params=params,
        level=n,
        functions=ys,
        psi=tuple(psi),
        labels=labels,
        gram=tuple(tuple(r) for r in G),
        gram_is_real=is_real,
        precision_bits=bits,
    )


def build_harmonic_basis(params: ModelParams, n: int, precision_bits: int | None = None) -> HarmonicBasis:
    """Orthonormal basis of the level-``n`` eigenspace, rescaled for ``params``."""
    if n < 0:
        raise ValueError(f"level must be non-negative, got {n}")
    bits = precision_bits or default_precision_bits(params, n)
    return _basis(params.D, n, params.N, bits)


def reproducing_check(basis: HarmonicBasis, z, w) -> float:
    """``|sum_j conj(psi_j(z)) psi_j(w) - K_n(z, w)|`` at exact points."""
    z = [exact(v) for v in np.atleast_1d(z).tolist()]
    w = [exact(v) for v in np.atleast_1d(w).tolist()]
    total = 0
    for f in basis.psi:
        total = total + conj(f.evaluate_exact(z)) * f.evaluate_exact(w)
    q = kernel_function(basis.params.D, basis.level, w).evaluate_exact(z)
    return abs(complex(total - q))


def _solve_exact(G, rhs):
    """Gaussian elimination over the rationals (or Gaussian rationals)."""
    size = len(G)
    A = [list(row) + [rhs[i]] for i, row in enumerate(G)]
    for col in range(size):
        piv = next(r for r in range(col, size) if A[r][col])
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(size):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [v - f * u for v, u in zip(A[r], A[col])]
    return [A[r][size] for r in range(size)]


def reproducing_residual_exact(basis: HarmonicBasis, z, w):
    """Exact ``g(z)^T G^-1 conj(g(w)) - K_n(z, w)`` over the derivative family ``g``.

    Independent of the whitening precision; zero for a spanning family.
    """
    z = [exact(v) for v in np.atleast_1d(z).tolist()]
    w = [exact(v) for v in np.atleast_1d(w).tolist()]
    gens = [f for _, f in derivative_generators(basis.params.D, basis.level)]
    x = _solve_exact([list(r) for r in basis.gram], [conj(f.evaluate_exact(w)) for f in gens])
    total = sum((f.evaluate_exact(z) * c for f, c in zip(gens, x)), mpq(0))
    return total - kernel_function(basis.params.D, basis.level, w).evaluate_exact(z)


def eigen_residual(f: RationalPolyFunction, n: int) -> RationalPolyFunction:
    """``Delta f + lambda_n f``; the zero function for a level-``n`` eigenfunction."""
    lam = casimir_eigenvalue(ModelParams(f.nvars + 1, n))
    return laplacian_apply(f) + f.scale(lam)


__all__ += ["eigen_residual", "default_precision_bits", "reproducing_residual_exact"]

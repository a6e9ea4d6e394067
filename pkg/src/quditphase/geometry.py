"""Points of CP^(D-1), coherent-state overlaps and exact Haar integration.

Monomial integrals against the normalised invariant measure

    dmu_0 = (D-1)!/pi^(D-1) * prod d^2 z_i / (1 + |z|^2)^D

reduce, after the angular integrals and ``t_i = |z_i|^2``, to a Dirichlet
integral of the second kind::

    int z^k zbar^l / (1+|z|^2)^m dmu_0
        = delta_{kl} (D-1)! prod_i k_i! (m - |k|)! / (m + D - 1)!

which is finite iff ``|k| <= m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .combinatorics import ModelParams
from .rationals import conj, exact
from .rpf import RationalPolyFunction

__all__ = [
    "PhasePoint",
    "as_point",
    "fock_basis",
    "fock_position",
    "multinomial",
    "overlap_q",
    "fock_amplitude",
    "monomial_integral",
    "haar_integrate",
    "integrate_times_monomial",
    "overlap_function",
    "integrate_product",
    "NonConvergentIntegral",
]


class NonConvergentIntegral(ValueError):
    """The integrand decays too slowly at infinity for the Haar integral."""


@dataclass(frozen=True)
class PhasePoint:
    """Affine coordinates ``z_i = zeta_i / zeta_0`` of a point of CP^(D-1)."""

    z: tuple

    def __post_init__(self):
        vals = tuple(self.z)
        if not all(np.isfinite(complex(v).real) and np.isfinite(complex(v).imag) for v in vals):
            raise ValueError("phase-space coordinates must be finite")
        object.__setattr__(self, "z", vals)

    @property
    def nvars(self) -> int:
        return len(self.z)

    def __array__(self, dtype=None, copy=None):
        return np.array([complex(v) for v in self.z], dtype=dtype or np.complex128)


def as_point(z, nvars: int | None = None) -> np.ndarray:
    """Coerce a PhasePoint, scalar or sequence to a complex vector."""
    if isinstance(z, PhasePoint):
        arr = np.array(z)
    else:
        arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if nvars is not None and arr.shape != (nvars,):
        raise ValueError(f"expected a point with {nvars} coordinates, got shape {arr.shape}")
    return arr


@lru_cache(maxsize=None)
def _fock_basis(D: int, N: int):
    def rec(n, parts):
        if parts == 1:
            yield (n,)
            return
        for first in range(n, -1, -1):
            for rest in rec(n - first, parts - 1):
                yield (first,) + rest

    return tuple(rec(N, D))


def fock_basis(params: ModelParams) -> tuple[tuple[int, ...], ...]:
    """Occupation vectors ``(n_0, ..., n_{D-1})`` in the canonical order.

    The order is descending lexicographic in the occupations, which is
    graded-lex in the excitations ``(n_1, ..., n_{D-1})``:
    ``(1,0,0), (0,1,0), (0,0,1)`` for one qutrit.
    """
    return _fock_basis(params.D, params.N)


@lru_cache(maxsize=None)
def _fock_positions(D: int, N: int):
    return {n: i for i, n in enumerate(_fock_basis(D, N))}


def fock_position(params: ModelParams, idx) -> int:
    try:
        return _fock_positions(params.D, params.N)[tuple(idx)]
    except KeyError:
        raise ValueError(f"{tuple(idx)} is not an occupation vector for D={params.D}, N={params.N}") from None


def multinomial(idx) -> int:
    out = math.factorial(sum(idx))
    for k in idx:
        out //= math.factorial(k)
    return out


def overlap_q(z, w) -> float:
    """Squared coherent-state overlap ``|<w|z>|^2`` for one quDit."""
    z = as_point(z)
    w = as_point(w)
    wz = np.vdot(w, z)
    num = abs(1 + wz) ** 2
    return float(num / ((1 + np.vdot(z, z).real) * (1 + np.vdot(w, w).real)))


def fock_amplitude(params: ModelParams, idx, z) -> complex:
    """``<n|N,z>`` for the occupation vector ``idx``."""
    idx = tuple(idx)
    if len(idx) != params.D or sum(idx) != params.N or min(idx) < 0:
        raise ValueError(f"{idx} is not an occupation vector for D={params.D}, N={params.N}")
    z = as_point(z, params.nvars)
    norm = (1 + np.vdot(z, z).real) ** (params.N / 2)
    val = math.sqrt(multinomial(idx)) * np.prod(z ** np.array(idx[1:]))
    return complex(val / norm)


@lru_cache(maxsize=None)
def _monomial_integral(D: int, k: tuple, m: int):
    K = sum(k)
    if K > m:
        raise NonConvergentIntegral(f"monomial of degree {K} against (1+|z|^2)^-{m} diverges")
    num = math.factorial(D - 1) * math.factorial(m - K)
    for ki in k:
        num *= math.factorial(ki)
    return mpq(num, math.factorial(m + D - 1))


def monomial_integral(D: int, k, l, m: int):
    """Exact ``int z^k zbar^l (1+|z|^2)^-m dmu_0`` (zero unless ``k == l``)."""
    k, l = tuple(k), tuple(l)
    if len(k) != D - 1 or len(l) != D - 1:
        raise ValueError("exponent length must be D - 1")
    if sum(k) + sum(l) > 2 * m + 1:
        raise NonConvergentIntegral(f"degree {sum(k) + sum(l)} too high for denominator power {m}")
    if k != l:
        return mpq(0)
    return _monomial_integral(D, k, m)


def haar_integrate(f: RationalPolyFunction):
    """Exact integral of ``f`` against the normalised Haar measure."""
    nv = f.nvars
    D = nv + 1
    m = f.denom_power
    total = mpq(0)
    for e, c in f.terms.items():
        if sum(e) > 2 * m + 1:
            raise NonConvergentIntegral(f"term {e} is not integrable against (1+|z|^2)^-{m}")
        k, l = e[:nv], e[nv:]
        if k == l:
            total = total + c * _monomial_integral(D, k, m)
    return total


def integrate_times_monomial(f: RationalPolyFunction, k, l, p: int):
    """``int f * z^k zbar^l / (1+|z|^2)^p dmu_0`` without forming the product."""
    nv = f.nvars
    D = nv + 1
    k, l = tuple(k), tuple(l)
    m = f.denom_power + p
    total = mpq(0)
    for e, c in f.terms.items():
        kk = tuple(e[i] + k[i] for i in range(nv))
        ll = tuple(e[nv + i] + l[i] for i in range(nv))
        if sum(kk) + sum(ll) > 2 * m + 1:
            raise NonConvergentIntegral("integrand not integrable")
        if kk == ll:
            total = total + c * _monomial_integral(D, kk, m)
    return total


def integrate_product(f: RationalPolyFunction, g: RationalPolyFunction):
    """``int f g dmu_0`` summing only over matching term pairs."""
    nv = f.nvars
    D = nv + 1
    m = f.denom_power + g.denom_power
    # group g by charge k - l so only charge-balancing pairs are visited
    by_charge: dict = {}
    for e, c in g.terms.items():
        by_charge.setdefault(tuple(e[i] - e[nv + i] for i in range(nv)), []).append((e, c))
    total = mpq(0)
    for e, c in f.terms.items():
        want = tuple(e[nv + i] - e[i] for i in range(nv))
        for e2, c2 in by_charge.get(want, ()):
            kk = tuple(e[i] + e2[i] for i in range(nv))
            if 2 * sum(kk) > 2 * m + 1:
                raise NonConvergentIntegral("integrand not integrable")
            total = total + c * c2 * _monomial_integral(D, kk, m)
    return total



def overlap_function(w, power: int = 1) -> RationalPolyFunction:
    """``Q(z, w)^power`` as an exact function of ``z`` for a fixed point ``w``.

    ``w`` must have exactly representable coordinates (floats are taken at
    their exact binary value).
    """
    ws = [exact(v) for v in (w.z if isinstance(w, PhasePoint) else np.atleast_1d(w).tolist())]
    nv = len(ws)
    norm_w = 1 + sum(v * conj(v) for v in ws)
    zero = (0,) * (2 * nv)
    # (1 + wbar . z)(1 + zbar . w)
    a = {zero: mpq(1)}
    b = {zero: mpq(1)}
    for i, v in enumerate(ws):
        e = [0] * (2 * nv)
        e[i] = 1
        a[tuple(e)] = conj(v)
        e = [0] * (2 * nv)
        e[nv + i] = 1
        b[tuple(e)] = v
    base = RationalPolyFunction(nv, a) * RationalPolyFunction(nv, b)
    base = RationalPolyFunction(nv, base.terms, 1).scale(1 / norm_w)
    out = RationalPolyFunction.constant(nv, 1)
    for _ in range(power):
        out = out * base
    return out

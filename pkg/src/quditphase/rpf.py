"""Phase-space functions ``P(z, zbar) / (1 + z^dagger z)^m`` with exact coefficients.

The numerator is a sparse map from exponent tuples
``(k_1..k_{D-1}, l_1..l_{D-1})`` to coefficients, where ``k`` are powers of
``z_i`` and ``l`` powers of ``zbar_i``.  ``z`` and ``zbar`` are treated as
independent commuting symbols, so differentiation with respect to either is
purely formal.  Instances are immutable and kept in canonical form: the
numerator shares no factor ``(1 + S)`` with the denominator, where
``S = sum_i z_i zbar_i``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .rationals import GaussianRational, conj, exact, format_rational, gauss

__all__ = ["RationalPolyFunction", "one_plus_s_power"]


def _add_into(acc: dict, terms: dict, scale=1):
    for e, c in terms.items():
        v = acc.get(e, 0) + c * scale
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)
    return acc


def _poly_mul(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


@lru_cache(maxsize=None)
def _one_plus_s_power_cached(nvars: int, p: int):
    """Multinomial expansion of (1 + sum z_i zbar_i)^p as a tuple of items."""
    out = {}

    def compositions(n, parts):
        if parts == 0:
            if n == 0:
                yield ()
            return
        for first in range(n + 1):
            for rest in compositions(n - first, parts - 1):
                yield (first,) + rest

    fp = math.factorial(p)
    for j in range(p + 1):
        for ks in compositions(j, nvars):
            coeff = fp // math.factorial(p - j)
            for k in ks:
                coeff //= math.factorial(k)
            out[ks + ks] = mpq(coeff)
    return tuple(out.items())


def one_plus_s_power(nvars: int, p: int) -> dict:
    return dict(_one_plus_s_power_cached(nvars, p))


# Fixed point on the variety 1 + sum z_i w_i = 0 (z and w = zbar treated as
# independent) used to reject non-divisible numerators cheaply.
def _variety_point(nvars: int):
    zs = [mpq(3 + 2 * i, 7 + i) for i in range(nvars)]
    ws = [mpq(-(5 + i), 11 + 3 * i) for i in range(nvars)]
    rest = 1 + sum(zs[i] * ws[i] for i in range(1, nvars))
    ws[0] = -rest / zs[0]
    return zs, ws


def _eval_exact(terms: dict, zs, ws):
    total = 0
    nv = len(zs)
    for e, c in terms.items():
        v = c
        for i in range(nv):
            if e[i]:
                v = v * zs[i] ** e[i]
            if e[nv + i]:
                v = v * ws[i] ** e[nv + i]
        total = total + v
    return total


def _divide_one_plus_s(terms: dict, nv: int):
    """Exact quotient by (1 + S), or None if it does not divide."""
    zs, ws = _variety_point(nv)
    if _eval_exact(terms, zs, ws) != 0:
        return None
    rem = dict(terms)
    quo: dict = {}

    def lead(e):
        return tuple(x for i in range(nv) for x in (e[i], e[nv + i]))

    while rem:
        e = max(rem, key=lead)
        c = rem.pop(e)
        if e[0] == 0 or e[nv] == 0:
            return None
        q = list(e)
        q[0] -= 1
        q[nv] -= 1
        q = tuple(q)
        quo[q] = c
        # subtract c*q*(1 + S) minus the z_1 zbar_1 part already removed
        v = rem.get(q, 0) - c
        if v:
            rem[q] = v
        else:
            rem.pop(q, None)
        for i in range(1, nv):
            t = list(q)
            t[i] += 1
            t[nv + i] += 1
            t = tuple(t)
            v = rem.get(t, 0) - c
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return quo


class RationalPolyFunction:
    """Exact function ``numerator(z, zbar) / (1 + |z|^2)^denom_power``."""

    __slots__ = ("nvars", "terms", "denom_power", "_numeric")

    def __init__(self, nvars: int, terms=None, denom_power: int = 0, *, canonical: bool = True):
        if denom_power < 0:
            raise ValueError("denom_power must be non-negative")
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != 2 * nvars:
                raise ValueError(f"exponent {e} does not match {nvars} variables")
            c = exact(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in clean.items() if c}
        m = denom_power
        if canonical:
            if not clean:
                m = 0
            while m > 0:
                q = _divide_one_plus_s(clean, nvars)
                if q is None:
                    break
                clean, m = q, m - 1
        self.terms = clean
        self.denom_power = m
        self._numeric = None

    # constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c=1):
        return cls(nvars, {(0,) * (2 * nvars): c})

    @classmethod
    def monomial(cls, nvars: int, k, l, denom_power: int = 0, coeff=1):
        return cls(nvars, {tuple(k) + tuple(l): coeff}, denom_power)

    @classmethod
    def coordinate(cls, nvars: int, i: int, anti: bool = False):
        e = [0] * (2 * nvars)
        e[i + (nvars if anti else 0)] = 1
        return cls(nvars, {tuple(e): 1})

    # basic queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def bidegree(self) -> tuple[int, int]:
        nv = self.nvars
        if not self.terms:
            return (0, 0)
        return (
            max(sum(e[:nv]) for e in self.terms),
            max(sum(e[nv:]) for e in self.terms),
        )

    def is_real_coefficient(self) -> bool:
        return not any(isinstance(c, GaussianRational) for c in self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, RationalPolyFunction):
            return (
                self.nvars == other.nvars
                and self.denom_power == other.denom_power
                and self.terms == other.terms
            )
        try:
            other = RationalPolyFunction.constant(self.nvars, other)
        except TypeError:
            return NotImplemented
        return self == other

    def __hash__(self):
        return hash((self.nvars, self.denom_power, frozenset(self.terms.items())))

    def __repr__(self):
        return f"RationalPolyFunction(nvars={self.nvars}, terms={len(self.terms)}, denom_power={self.denom_power})"

    def __str__(self):
        nv = self.nvars
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for i in range(nv):
                if e[i]:
                    mono.append(f"z{i + 1}^{e[i]}" if e[i] > 1 else f"z{i + 1}")
                if e[nv + i]:
                    mono.append(f"zb{i + 1}^{e[nv + i]}" if e[nv + i] > 1 else f"zb{i + 1}")
            cs = str(c) if not isinstance(c, GaussianRational) else f"({c.re}+{c.im}i)"
            parts.append("*".join([cs] + mono))
        num = " + ".join(parts) or "0"
        if self.denom_power:
            return f"({num}) / (1+|z|^2)^{self.denom_power}"
        return num

    def sorted_terms(self):
        """Terms in graded-lex order of the exponent tuple."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    # arithmetic ----------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalPolyFunction):
            if other.nvars != self.nvars:
                raise ValueError("functions live on different phase spaces")
            return other
        return RationalPolyFunction.constant(self.nvars, other)

    def _raised(self, m: int) -> dict:
        if m == self.denom_power:
            return self.terms
        return _poly_mul(self.terms, one_plus_s_power(self.nvars, m - self.denom_power))

    def __add__(self, other):
        other = self._coerce(other)
        m = max(self.denom_power, other.denom_power)
        acc = dict(self._raised(m))
        _add_into(acc, other._raised(m))
        return RationalPolyFunction(self.nvars, acc, m)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolyFunction(
            self.nvars, {e: -c for e, c in self.terms.items()}, self.denom_power, canonical=False
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPolyFunction):
            return self.scale(other)
        other = self._coerce(other)
        return RationalPolyFunction(
            self.nvars,
            _poly_mul(self.terms, other.terms),
            self.denom_power + other.denom_power,
        )

    __rmul__ = __mul__

    def scale(self, c):
        c = exact(c)
        if not c:
            return RationalPolyFunction(self.nvars)
        return RationalPolyFunction(
            self.nvars, {e: v * c for e, v in self.terms.items()}, self.denom_power, canonical=False
        )

    def __truediv__(self, c):
        c = exact(c)
        if isinstance(c, GaussianRational):
            return self.scale(mpq(1) / c)
        return self.scale(1 / c)

    def conj(self) -> "RationalPolyFunction":
        """Complex conjugate: swaps z and zbar and conjugates coefficients."""
        nv = self.nvars
        return RationalPolyFunction(
            nv,
            {e[nv:] + e[:nv]: conj(c) for e, c in self.terms.items()},
            self.denom_power,
            canonical=False,
        )

    def times_one_plus_s(self, p: int = 1) -> "RationalPolyFunction":
        """Multiply by ``(1+S)^p``; only lowers the denominator when possible."""
        if p <= self.denom_power:
            return RationalPolyFunction(self.nvars, self.terms, self.denom_power - p, canonical=False)
        extra = p - self.denom_power
        return RationalPolyFunction(
            self.nvars, _poly_mul(self.terms, one_plus_s_power(self.nvars, extra)), 0, canonical=False
        )

    def poly_mul(self, poly_terms: dict) -> "RationalPolyFunction":
        """Multiply the numerator by a bare polynomial (no denominator)."""
        return RationalPolyFunction(self.nvars, _poly_mul(self.terms, poly_terms), self.denom_power)

    def diff(self, i: int, anti: bool = False) -> "RationalPolyFunction":
        """Formal derivative with respect to ``z_i`` (or ``zbar_i`` if ``anti``)."""
        nv = self.nvars
        idx = i + (nv if anti else 0)
        partner = i + (0 if anti else nv)
        m = self.denom_power
        dP = {}
        for e, c in self.terms.items():
            if e[idx]:
                f = list(e)
                f[idx] -= 1
                dP[tuple(f)] = dP.get(tuple(f), 0) + c * e[idx]
        if m == 0:
            return RationalPolyFunction(nv, dP, 0)
        # d/dz_i (P (1+S)^-m) = [dP (1+S) - m zbar_i P] / (1+S)^(m+1)
        acc = _poly_mul(dP, one_plus_s_power(nv, 1)) if dP else {}
        shifted = {}
        for e, c in self.terms.items():
            f = list(e)
            f[partner] += 1
            shifted[tuple(f)] = c
        _add_into(acc, shifted, -m)
        return RationalPolyFunction(nv, acc, m + 1)

    # evaluation -------------------------------------------------------------------
    def evaluate_exact(self, z):
        """Exact value at a point with rational (or Gaussian rational) coordinates."""
        zs = [exact(v) for v in z]
        if len(zs) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        ws = [conj(v) for v in zs]
        num = _eval_exact(self.terms, zs, ws)
        s = 1 + sum(v * w for v, w in zip(zs, ws))
        return num / s**self.denom_power if self.denom_power else num

    def _numeric_form(self):
        if self._numeric is None:
            if self.terms:
                exps = np.array(list(self.terms.keys()), dtype=np.int64)
                coeffs = np.array([complex(c) for c in self.terms.values()], dtype=np.complex128)
            else:
                exps = np.zeros((0, 2 * self.nvars), dtype=np.int64)
                coeffs = np.zeros(0, dtype=np.complex128)
            self._numeric = (exps, coeffs)
        return self._numeric

    def evaluate(self, points) -> np.ndarray:
        """Vectorised floating point evaluation.

        ``points`` has shape ``(..., D-1)``; the result has shape ``(...)``.
        """
        pts = np.asarray(points, dtype=np.complex128)
        if self.nvars == 0:
            shape = pts.shape[:-1] if pts.ndim else ()
            exps, coeffs = self._numeric_form()
            return np.full(shape, coeffs.sum())
        if pts.shape[-1] != self.nvars:
            if self.nvars == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
                pts = pts[..., None]
            else:
                raise ValueError(f"points must have trailing dimension {self.nvars}")
        shape = pts.shape[:-1]
        z = pts.reshape(-1, self.nvars)
        exps, coeffs = self._numeric_form()
        nv = self.nvars
        vals = np.broadcast_to(coeffs, (z.shape[0], coeffs.size)).copy()
        zb = z.conj()
        for i in range(nv):
            vals *= z[:, i : i + 1] ** exps[:, i]
            vals *= zb[:, i : i + 1] ** exps[:, nv + i]
        out = vals.sum(axis=1)
        if self.denom_power:
            out = out / (1.0 + np.sum(np.abs(z) ** 2, axis=1)) ** self.denom_power
        return out.reshape(shape)

    def __call__(self, z) -> complex:
        return complex(self.evaluate(np.asarray(z, dtype=np.complex128).reshape(-1)[None, :])[0])

    # serialisation ------------------------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for e, c in self.sorted_terms():
            if isinstance(c, GaussianRational):
                re, im = c.re, c.im
            else:
                re, im = c, 0
            terms.append({"exponents": list(e), "re": format_rational(re), "im": format_rational(im)})
        return {"denomPower": self.denom_power, "terms": terms}

    @classmethod
    def from_json(cls, data: dict, nvars: int | None = None) -> "RationalPolyFunction":
        terms = {}
        for t in data["terms"]:
            e = tuple(t["exponents"])
            terms[e] = gauss(mpq(t["re"]), mpq(t.get("im", "0")))
        if nvars is None:
            if not terms:
                raise ValueError("nvars is required to decode an empty function")
            nvars = len(next(iter(terms))) // 2
        return cls(nvars, terms, int(data["denomPower"]))

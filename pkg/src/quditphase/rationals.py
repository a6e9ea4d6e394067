"""Exact complex rationals on top of ``gmpy2.mpq``.

Real exact values stay plain ``mpq`` (or ``int``); a
:class:`GaussianRational` only appears when an imaginary part is present,
and collapses back to ``mpq`` whenever the imaginary part cancels.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpq

__all__ = ["GaussianRational", "gauss", "exact", "conj", "is_exact", "format_rational", "parse_rational"]

_MPQ = type(mpq(0))
_MPZ = type(gmpy2.mpz(0))


class GaussianRational:
    """``re + i*im`` with ``mpq`` parts. Use :func:`gauss` to construct."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, _MPQ, _MPZ)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, _MPQ, _MPZ)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, _MPQ, _MPZ)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, _MPQ, _MPZ)):
            return gauss(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            n = other.re * other.re + other.im * other.im
            return self * GaussianRational(other.re / n, -other.im / n)
        if isinstance(other, (int, _MPQ, _MPZ)):
            return gauss(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, _MPQ, _MPZ)):
            return GaussianRational(mpq(other), mpq(0)) / self
        return NotImplemented

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out, base = mpq(1), self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # comparison and conversion -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _MPQ, _MPZ, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def gauss(re, im=0):
    """Exact complex number; returns a plain ``mpq`` when ``im == 0``."""
    im = mpq(im)
    if im == 0:
        return mpq(re)
    return GaussianRational(mpq(re), im)


def _mpf_to_mpq(x):
    sign, man, exp, _ = x._mpf_
    if exp is None or (not man and exp):
        raise ValueError(f"cannot convert non-finite {x} to a rational")
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return mpq(man * 2**exp)
    return mpq(man, 2 ** (-exp))


def exact(x):
    """Convert a number to ``mpq``/:class:`GaussianRational` without rounding.

    Binary floats convert to their exact dyadic value.
    """
    if isinstance(x, (_MPQ, GaussianRational)):
        return x
    if isinstance(x, (int, _MPZ, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        return mpq(float(x))
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return gauss(mpq(x.real), mpq(x.imag))
    if isinstance(x, mpmath.mpf):
        return _mpf_to_mpq(x)
    if isinstance(x, mpmath.mpc):
        return gauss(_mpf_to_mpq(x.real), _mpf_to_mpq(x.imag))
    if isinstance(x, numbers.Rational):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def is_exact(x) -> bool:
    return isinstance(x, (int, _MPQ, _MPZ, GaussianRational, Fraction))


def conj(c):
    if isinstance(c, GaussianRational):
        return c.conjugate()
    return c


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str):
    return mpq(s)

"""Dimension formulas, Casimir values and inversion coefficients.

Everything here is exact: integers are Python ints and rationals are
``gmpy2.mpq``.  The only floating point output is
:func:`tau_of_lambda_expansion`, which exists to check the large-N
behaviour of the exact coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from gmpy2 import mpq

__all__ = [
    "ModelParams",
    "YoungShape",
    "InversionCoefficients",
    "dim_sym",
    "casimir_eigenvalue",
    "dim_harmonic",
    "inversion_coefficients",
    "log_tau",
    "tau_of_lambda_expansion",
    "lambda_series",
    "young_dim",
    "cg_decomposition",
]


@dataclass(frozen=True)
class ModelParams:
    """``N`` symmetric quDits with ``D`` levels each."""

    D: int
    N: int

    def __post_init__(self):
        if not isinstance(self.D, int) or not isinstance(self.N, int):
            raise TypeError("D and N must be integers")
        if self.D < 2:
            raise ValueError(f"D must be >= 2, got {self.D}")
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")

    @property
    def dim(self) -> int:
        return dim_sym(self)

    @property
    def nvars(self) -> int:
        """Number of complex phase-space coordinates, ``D - 1``."""
        return self.D - 1


@dataclass(frozen=True)
class YoungShape:
    """Row lengths of a Young diagram, padded with zeros to length ``D``."""

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(r < 0 for r in rows):
            raise ValueError(f"negative row length in {rows}")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError(f"rows must be non-increasing, got {rows}")

    @classmethod
    def padded(cls, rows, D: int) -> "YoungShape":
        rows = list(rows)
        if len(rows) > D:
            if any(rows[D:]):
                raise ValueError(f"shape {rows} has more than {D} non-empty rows")
            rows = rows[:D]
        return cls(tuple(rows) + (0,) * (D - len(rows)))

    @property
    def boxes(self) -> int:
        return sum(self.rows)

    def __str__(self):
        return "[" + ",".join(map(str, self.rows)) + "]"


@dataclass(frozen=True)
class InversionCoefficients:
    """Weights ``c_n`` with ``Q^N = sum_n c_n K_n`` and ``tau_n = d_N c_n``."""

    params: ModelParams
    values: dict
    tau: dict


def dim_sym(params: ModelParams) -> int:
    """Dimension ``binom(N+D-1, N)`` of the symmetric N-quDit space."""
    return math.comb(params.N + params.D - 1, params.N)


def casimir_eigenvalue(params: ModelParams) -> int:
    return params.N * (params.N + params.D - 1)


def _dim_sym(D: int, n: int) -> int:
    if n < 0:
        return 0
    return math.comb(n + D - 1, n)


def dim_harmonic(params: ModelParams, n: int) -> int:
    """Dimension of the level-``n`` Laplacian eigenspace on CP^(D-1).

    Computed as ``d_n^2 - d_{n-1}^2`` with ``d_{-1} = 0``, so the levels
    telescope: ``sum_{k<=n} dim_harmonic(k) == d_n^2``.
    """
    if n < 0:
        raise ValueError(f"level must be non-negative, got {n}")
    D = params.D
    return _dim_sym(D, n) ** 2 - _dim_sym(D, n - 1) ** 2


@lru_cache(maxsize=None)
def _inversion(D: int, N: int):
    fact = math.factorial
    num = fact(D - 1) * fact(N) ** 2
    d = _dim_sym(D, N)
    values = {n: mpq(num, fact(N - n) * fact(N + n + D - 1)) for n in range(N + 1)}
    tau = {n: d * c for n, c in values.items()}
    return values, tau


def inversion_coefficients(params: ModelParams) -> InversionCoefficients:
    values, tau = _inversion(params.D, params.N)
    return InversionCoefficients(params, dict(values), dict(tau))


def _single_tau(D: int, N: int, n: int):
    """``tau_{N,n}`` alone; the factorial ratios collapse to short products."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    num = math.factorial(D - 1) * math.comb(N + D - 1, N) * math.prod(N - i for i in range(n))
    return mpq(num, math.prod(N + i for i in range(1, n + D)))


def log_tau(params: ModelParams, n: int, dps: int = 50):
    """``ln tau_{N,n}`` evaluated from the exact rational at ``dps`` digits."""
    tau = _single_tau(params.D, params.N, n)
    with mpmath.workdps(dps):
        return mpmath.log(mpmath.mpf(int(tau.numerator)) / int(tau.denominator))


def lambda_series(params: ModelParams, n: int, order: int) -> float:
    """Truncated large-N series for ``ln tau_{N,n}`` in terms of ``lambda_n``.

    ``order`` is the number of retained terms of
    ``-lam/N + D lam/(2N^2) - lam (D(2D-1) + lam)/(6N^3)``.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    if not 0 <= n <= params.N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={params.N}")
    D, N = params.D, params.N
    lam = n * (n + D - 1)
    terms = [
        -lam / N,
        D * lam / (2 * N**2),
        -lam * (D * (2 * D - 1) + lam) / (6 * N**3),
    ]
    return math.fsum(terms[:order])


def tau_of_lambda_expansion(params: ModelParams, n: int, order: int) -> float:
    """Large-N approximation ``exp(lambda_series)`` of ``tau_{N,n}``."""
    return math.exp(lambda_series(params, n, order))


def young_dim(shape: YoungShape) -> int:
    """U(D) irrep dimension ``prod_{i<j} (h_i - h_j + j - i) / prod_{i<D} i!``."""
    h = shape.rows
    D = len(h)
    num = 1
    for i in range(D):
        for j in range(i + 1, D):
            num *= h[i] - h[j] + j - i
    den = 1
    for i in range(1, D):
        den *= math.factorial(i)
    return num // den


def cg_decomposition(params: ModelParams) -> list[tuple[YoungShape, int]]:
    """Irreducible pieces of ``[N] x conj([N])`` with their dimensions."""
    D, N = params.D, params.N
    out = []
    for n in range(N + 1):
        rows = (N + n,) + (N,) * (D - 2) + (N - n,)
        shape = YoungShape(rows)
        out.append((shape, young_dim(shape)))
    return out

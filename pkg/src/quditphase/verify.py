"""Verification suites behind ``quditphase verify``.

Each suite returns :class:`Check` records holding the largest residual seen
for one identity; exact identities report 0 or 1 (count of failures).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from gmpy2 import mpq

from .combinatorics import (
    ModelParams,
    YoungShape,
    cg_decomposition,
    dim_harmonic,
    dim_sym,
    inversion_coefficients,
    log_tau,
    lambda_series,
    young_dim,
)
from .geometry import fock_basis, overlap_q
from .harmonic import _kernel_coeffs, build_harmonic_basis, eigen_residual, reproducing_check
from .states import coherent_state, density_matrix, fock_state, husimi
from .swcalc import (
    heat_kernel,
    heat_kernel_trace,
    quasi_distribution,
    reconstruct_density,
    standardization_matrix,
    sw_heat_equation_check,
    tracing_residual,
)

__all__ = ["Check", "SUITES", "run_suite", "asymptotic_slopes"]

S_VALUES = (-1.0, 0.0, 1.0)


@dataclass
class Check:
    suite: str
    name: str
    D: int
    N: int
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def _rng(D, N, salt=0):
    return np.random.default_rng(1000 * D + N + salt)


def _random_points(rng, count, nvars, scale=1.0):
    return scale * (rng.normal(size=(count, nvars)) + 1j * rng.normal(size=(count, nvars)))


def suite_young(D, N, tol):
    p = ModelParams(D, N)
    out = []
    tele = sum(dim_harmonic(p, k) for k in range(N + 1)) - dim_sym(p) ** 2
    out.append(Check("young", "sum tilde_d_n = d_N^2", D, N, float(abs(tele)), 0.0))
    bad = 0
    for shape, dim in cg_decomposition(p):
        n = shape.rows[0] - N
        if young_dim(shape) != dim or dim != dim_harmonic(p, n):
            bad += 1
    out.append(Check("young", "young_dim = dim_harmonic on CG shapes", D, N, float(bad), 0.0))
    if (D, N) == (3, 2):
        dims = [young_dim(YoungShape(r)) for r in ((2, 2, 2), (3, 2, 1), (4, 2, 0))]
        out.append(Check("young", "6^2 = 1 + 8 + 27", D, N, float(abs(sum(dims) - 36) + (dims != [1, 8, 27])), 0.0))
    return out


def suite_tracing(D, N, tol):
    p = ModelParams(D, N)
    out = []
    for s in S_VALUES:
        I = standardization_matrix(p, s)
        out.append(Check("tracing", f"standardization s={s:g}", D, N, float(np.max(np.abs(I - np.eye(len(I))))), tol))
        out.append(Check("tracing", f"tracing s={s:g}", D, N, tracing_residual(p, s), tol))
    return out


def suite_heat(D, N, tol):
    p = ModelParams(D, N)
    rng = _rng(D, N, 1)
    zs = _random_points(rng, 10, p.nvars)
    ws = _random_points(rng, 10, p.nvars)
    out = []
    r = max(abs(heat_kernel(p, -1, 1, z, w) - overlap_q(z, w) ** N) for z, w in zip(zs, ws))
    out.append(Check("heat", "K_{-1,1} = Q^N", D, N, r, tol))
    r = max(abs(heat_kernel(p, a, b, z, w) - heat_kernel_trace(p, a, b, z, w)) for z, w in zip(zs, ws) for a, b in ((0, 1), (-1, 0), (0.5, -0.3)))
    out.append(Check("heat", "trace form = kernel sum", D, N, r, tol))
    # the coefficient identity behind K_{-1,1} = Q^N, exact in q
    inv = inversion_coefficients(p)
    poly = [mpq(0)] * (N + 1)
    for n in range(N + 1):
        for m, c in enumerate(_kernel_coeffs(D, n)):
            poly[m] += inv.values[n] * c
    target = [mpq(0)] * N + [mpq(1)]
    out.append(Check("heat", "sum_n c_n K_n(q) = q^N exactly", D, N, float(sum(abs(a - b) for a, b in zip(poly, target))), 0.0))
    for s in S_VALUES:
        res = sw_heat_equation_check(p, s)
        out.append(Check("heat", f"SW heat equation s={s:g}", D, N, res["derivative"], tol))
        out.append(Check("heat", f"blocks are eigenfunctions s={s:g}", D, N, float(res["eigen_failures"]), 0.0))
    return out


def suite_husimi(D, N, tol):
    p = ModelParams(D, N)
    rng = _rng(D, N, 2)
    out = []
    worst = 0.0
    direct = 0.0
    for w in _random_points(rng, 5, p.nvars):
        psi = coherent_state(p, w)
        F = quasi_distribution(density_matrix(psi), -1)
        for z in _random_points(rng, 10, p.nvars):
            worst = max(worst, abs(F(z) - overlap_q(z, w) ** N))
            direct = max(direct, abs(F(z) - husimi(psi, z)))
    out.append(Check("husimi", "F^(-1) of CS = Q^N", D, N, worst, tol))
    out.append(Check("husimi", "SW path = direct Husimi", D, N, direct, tol))
    return out


def suite_roundtrip(D, N, tol):
    p = ModelParams(D, N)
    out = []
    for s in S_VALUES:
        worst = 0.0
        for idx in fock_basis(p):
            rho = density_matrix(fock_state(p, idx))
            worst = max(worst, reconstruct_density(quasi_distribution(rho, s)).max_abs_diff(rho))
        out.append(Check("roundtrip", f"Fock projectors s={s:g}", D, N, worst, tol))
    return out


def suite_harmonic(D, N, tol, precision_bits=None):
    p = ModelParams(D, N)
    rng = _rng(D, N, 3)
    out = []
    for n in range(N + 1):
        b = build_harmonic_basis(p, n, precision_bits)
        out.append(Check("harmonic", f"count n={n}", D, N, float(abs(len(b) - dim_harmonic(p, n))), 0.0))
        bad = sum(not eigen_residual(f, n).is_zero() for f in b.psi)
        out.append(Check("harmonic", f"eigenfunctions n={n}", D, N, float(bad), 0.0))
        pts = [tuple(mpq(int(v), 7) for v in rng.integers(-9, 10, size=2 * p.nvars)) for _ in range(3)]
        r = 0.0
        for q in pts:
            z = [complex(float(q[2 * i]), float(q[2 * i + 1])) for i in range(p.nvars)]
            w = [complex(float(q[2 * i + 1]), -float(q[2 * i])) for i in range(p.nvars)]
            r = max(r, reproducing_check(b, z, w))
        out.append(Check("harmonic", f"reproducing kernel n={n}", D, N, r, 1e-10))
    return out


def asymptotic_slopes(D, n, Ns=(100, 1000, 10000)):
    """Fitted exponents of ``|ln tau - series_k|`` against ``N`` for ``k = 1, 2, 3``."""
    slopes = {}
    for k in (1, 2, 3):
        errs = [float(abs(log_tau(ModelParams(D, N), n) - lambda_series(ModelParams(D, N), n, k))) for N in Ns]
        slopes[k] = float(np.polyfit(np.log(Ns), np.log(errs), 1)[0])
    return slopes


def suite_asymptotic(D, N, tol):
    out = []
    for n in range(1, 4):
        for k, slope in asymptotic_slopes(D, n).items():
            out.append(Check("asymptotic", f"n={n} order={k} slope {slope:.3f}", D, n, abs(slope + (k + 1)), 0.2))
    return out


SUITES = {
    "young": suite_young,
    "tracing": suite_tracing,
    "heat": suite_heat,
    "husimi": suite_husimi,
    "roundtrip": suite_roundtrip,
    "harmonic": suite_harmonic,
    "asymptotic": suite_asymptotic,
}


def run_suite(name: str, Ds, Ns, tol: float = 1e-9, precision_bits: int | None = None) -> list[Check]:
    """Run one suite (or ``all``) over every ``(D, N)`` pair."""
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for suite in names:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)} or all")
        if suite == "asymptotic":
            for D in sorted(set(Ds)):
                checks.extend(suite_asymptotic(D, None, tol))
            continue
        for D in Ds:
            for N in Ns:
                if suite == "harmonic":
                    checks.extend(suite_harmonic(D, N, tol, precision_bits))
                else:
                    checks.extend(SUITES[suite](D, N, tol))
    return checks

"""Coherent, parity-adapted cat and Fock states, and their density matrices."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import ModelParams, dim_sym
from .geometry import as_point, fock_amplitude, fock_basis, fock_position
from .swcalc import OperatorMatrix

__all__ = [
    "StateVector",
    "CatSpec",
    "DegenerateStateError",
    "coherent_state",
    "cat_state",
    "parity_projection",
    "multimode_cat",
    "fock_state",
    "husimi",
    "density_matrix",
    "maximally_mixed",
    "mixture",
    "su_generator",
    "spin_operators",
    "StateDescriptor",
    "parse_state",
]

NORM_TOL = 1e-12


class DegenerateStateError(ValueError):
    """A parity sector of the requested cat state has zero norm."""


@dataclass(frozen=True)
class StateVector:
    """Unit vector in the symmetric Fock basis."""

    params: ModelParams
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if v.shape != (dim_sym(self.params),):
            raise ValueError(f"expected {dim_sym(self.params)} amplitudes, got {v.shape[0]}")
        if abs(np.linalg.norm(v) - 1) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm {np.linalg.norm(v):.15g})")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    def inner(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> OperatorMatrix:
        return density_matrix(self)


def _normalised(params: ModelParams, v: np.ndarray) -> StateVector:
    return StateVector(params, v / np.linalg.norm(v))


def _cs_vector(params: ModelParams, z) -> np.ndarray:
    z = as_point(z, params.nvars)
    return np.array([fock_amplitude(params, idx, z) for idx in fock_basis(params)])


def coherent_state(params: ModelParams, z) -> StateVector:
    """``|N, z>`` expanded in the Fock basis."""
    return _normalised(params, _cs_vector(params, z))


@dataclass(frozen=True)
class CatSpec:
    """Parity sector ``c`` of the coherent state at ``z``."""

    params: ModelParams
    z: tuple
    parity: tuple

    def __post_init__(self):
        z = tuple(complex(v) for v in as_point(self.z, self.params.nvars))
        parity = tuple(int(c) for c in self.parity)
        if len(parity) != self.params.nvars or any(c not in (0, 1) for c in parity):
            raise ValueError(f"parity must be {self.params.nvars} bits, got {self.parity}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "parity", parity)
        norm = np.linalg.norm(parity_projection(self.params, z, parity))
        if norm <= 1e-12:
            raise DegenerateStateError(f"parity sector {list(parity)} of the coherent state at z={list(z)} is empty")


def parity_projection(params: ModelParams, z, parity) -> np.ndarray:
    """``2^-(D-1) sum_b (-1)^(c.b) |N, flip_b(z)>``, not normalised.

    ``flip_b`` negates the components ``z_i`` with ``b_i = 1``; the sum keeps
    exactly the Fock components with ``n_i = c_i (mod 2)``.
    """
    z = as_point(z, params.nvars)
    out = np.zeros(dim_sym(params), dtype=np.complex128)
    for flips in itertools.product((0, 1), repeat=params.nvars):
        sign = (-1) ** sum(c * b for c, b in zip(parity, flips))
        zf = np.where(np.array(flips, dtype=bool), -z, z)
        out += sign * _cs_vector(params, zf)
    return out / 2**params.nvars


def cat_state(spec: CatSpec) -> StateVector:
    """Normalised parity-adapted coherent state."""
    return _normalised(spec.params, parity_projection(spec.params, spec.z, spec.parity))


def multimode_cat(params: ModelParams, z, sign: str) -> StateVector:
    """Equal superposition of the even-weight (``+``) or odd-weight (``-``) parity sectors."""
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    want = 0 if sign == "+" else 1
    total = np.zeros(dim_sym(params), dtype=np.complex128)
    count = 0
    for parity in itertools.product((0, 1), repeat=params.nvars):
        if sum(parity) % 2 != want:
            continue
        total += cat_state(CatSpec(params, tuple(as_point(z, params.nvars)), parity)).amplitudes
        count += 1
    return StateVector(params, total / math.sqrt(count))


def fock_state(params: ModelParams, idx) -> StateVector:
    v = np.zeros(dim_sym(params), dtype=np.complex128)
    v[fock_position(params, idx)] = 1
    return StateVector(params, v)


def husimi(psi: StateVector, z) -> float:
    """``|<N,z|psi>|^2``."""
    return float(abs(np.vdot(_cs_vector(psi.params, z), psi.amplitudes)) ** 2)


def density_matrix(psi: StateVector) -> OperatorMatrix:
    return OperatorMatrix(psi.params, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def maximally_mixed(params: ModelParams) -> OperatorMatrix:
    d = dim_sym(params)
    return OperatorMatrix(params, np.eye(d) / d)


def mixture(weights, states) -> OperatorMatrix:
    """Convex combination of pure states."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or not math.isclose(weights.sum(), 1.0, abs_tol=1e-12):
        raise ValueError("mixture weights must be non-negative and sum to one")
    states = list(states)
    m = sum(w * density_matrix(s).matrix for w, s in zip(weights, states))
    return OperatorMatrix(states[0].params, m)


def su_generator(params: ModelParams, i: int, j: int) -> OperatorMatrix:
    """``S_ij = a_i^dagger a_j`` on the symmetric space."""
    basis = fock_basis(params)
    d = len(basis)
    M = np.zeros((d, d), dtype=np.complex128)
    for col, n in enumerate(basis):
        if n[j] == 0:
            continue
        m = list(n)
        m[j] -= 1
        amp = math.sqrt(n[j] * (m[i] + 1))
        m[i] += 1
        M[fock_position(params, m), col] += amp
    return OperatorMatrix(params, M)


def spin_operators(params: ModelParams) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """``(J_x, J_y, J_z)`` for D=2 with ``J_+ = a_1^dagger a_0``."""
    if params.D != 2:
        raise ValueError("spin operators are defined for D = 2")
    jp = su_generator(params, 1, 0).matrix
    jm = su_generator(params, 0, 1).matrix
    jz = (su_generator(params, 1, 1).matrix - su_generator(params, 0, 0).matrix) / 2
    return (
        OperatorMatrix(params, (jp + jm) / 2),
        OperatorMatrix(params, (jp - jm) / 2j),
        OperatorMatrix(params, jz),
    )


# --- descriptors ------------------------------------------------------------

STATE_TYPES = ("coherent", "cat", "multimode_cat", "fock", "maximally_mixed")


@dataclass(frozen=True)
class StateDescriptor:
    """Declarative state description used by the CLI and output files."""

    type: str
    D: int
    N: int
    z: tuple = ()
    parity: tuple = ()
    sign: str = "+"
    n: tuple = ()

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.D, self.N)

    def to_dict(self) -> dict:
        out = {"type": self.type, "D": self.D, "N": self.N}
        if self.type in ("coherent", "cat", "multimode_cat"):
            out["z"] = [[c.real, c.imag] for c in self.z]
        if self.type == "cat":
            out["parity"] = list(self.parity)
        if self.type == "multimode_cat":
            out["sign"] = self.sign
        if self.type == "fock":
            out["n"] = list(self.n)
        return out

    def density(self) -> OperatorMatrix:
        p = self.params
        if self.type == "coherent":
            return density_matrix(coherent_state(p, self.z))
        if self.type == "cat":
            return density_matrix(cat_state(CatSpec(p, self.z, self.parity)))
        if self.type == "multimode_cat":
            return density_matrix(multimode_cat(p, self.z, self.sign))
        if self.type == "fock":
            return density_matrix(fock_state(p, self.n))
        return maximally_mixed(p)


def _parse_z(value, nvars: int) -> tuple:
    if isinstance(value, str):
        parts = [complex(part.replace(" ", "")) for part in value.split(",") if part]
    else:
        parts = []
        for item in value:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ValueError(f"coordinate {item} must be [re, im]")
                parts.append(complex(float(item[0]), float(item[1])))
            else:
                parts.append(complex(item))
    if len(parts) != nvars:
        raise ValueError(f"expected {nvars} complex coordinates, got {len(parts)}")
    return tuple(parts)


def _parse_ints(value) -> tuple:
    if isinstance(value, str):
        return tuple(int(v) for v in value.split(",") if v)
    if isinstance(value, int):
        return (value,)
    return tuple(int(v) for v in value)


def parse_state(text, D: int | None = None, N: int | None = None) -> StateDescriptor:
    """Parse a JSON object or an inline ``type;key=value;...`` descriptor.

    Inline example: ``cat;D=2;N=2;z=1+0j;parity=0``.  ``z`` is a
    comma-separated list of Python complex literals.  ``D`` and ``N`` fall
    back to the arguments when missing.
    """
    if isinstance(text, dict):
        data = dict(text)
    else:
        text = text.strip()
        if text.startswith("{"):
            data = json.loads(text)
        else:
            head, *rest = text.split(";")
            data = {"type": head.strip()}
            for item in rest:
                if not item.strip():
                    continue
                key, sep, val = item.partition("=")
                if not sep:
                    raise ValueError(f"malformed descriptor field {item!r}")
                data[key.strip()] = val.strip()
    kind = data.get("type")
    if kind not in STATE_TYPES:
        raise ValueError(f"unknown state type {kind!r}; expected one of {', '.join(STATE_TYPES)}")
    D = int(data.get("D", D if D is not None else -1))
    N = int(data.get("N", N if N is not None else -1))
    params = ModelParams(D, N)
    z = _parse_z(data["z"], params.nvars) if kind in ("coherent", "cat", "multimode_cat") else ()
    parity = _parse_ints(data.get("parity", "")) if kind == "cat" else ()
    sign = str(data.get("sign", "+")) if kind == "multimode_cat" else "+"
    n = _parse_ints(data.get("n", "")) if kind == "fock" else ()
    if kind == "cat" and len(parity) != params.nvars:
        raise ValueError(f"cat descriptor needs {params.nvars} parity bits")
    if kind == "fock":
        fock_position(params, n)
    return StateDescriptor(kind, D, N, z, parity, sign, n)

"""Grid specifications, CSV/JSON emission and on-disk caches."""

from __future__ import annotations

import csv
import io as _io
import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .combinatorics import ModelParams, dim_harmonic, inversion_coefficients
from .geometry import fock_basis, multinomial
from .harmonic import ORDERING_VERSION, HarmonicBasis
from .rpf import RationalPolyFunction
from .swcalc import SWKernelSymbolic

__all__ = [
    "GridSpec",
    "parse_grid",
    "format_float",
    "write_csv",
    "distribution_json",
    "resolve_cache_dir",
    "save_sw_kernel",
    "load_sw_kernel",
    "basis_to_json",
    "save_basis",
    "CACHE_ENV",
    "SECTIONS",
]

CACHE_ENV = "QUDITPHASE_CACHE"
SECTIONS = ("position", "momentum", "full")
DEFAULT_RANGE = (-3.0, 3.0, 41)


def format_float(x: float) -> str:
    """Shortest round-trip decimal (at most 17 significant digits)."""
    return repr(float(x))


def _axis_names(nvars: int) -> list[str]:
    return [f"{c}{i}" for i in range(1, nvars + 1) for c in ("x", "y")]


@dataclass(frozen=True)
class GridSpec:
    """Sample ranges for the real and imaginary parts of each ``z_i``.

    ``axes`` maps an axis name (``x1``, ``y1``, ...) to ``(lo, hi, n)``;
    axes absent from it are held at zero.  Points are emitted grid-major:
    the first varying axis in ``x1, y1, x2, y2, ...`` order changes slowest.
    """

    nvars: int
    axes: tuple
    section: str = "full"

    def __post_init__(self):
        names = _axis_names(self.nvars)
        for name, lo, hi, n in self.axes:
            if name not in names:
                raise ValueError(f"unknown axis {name!r}; expected one of {', '.join(names)}")
            if n < 2:
                raise ValueError(f"axis {name} needs at least 2 samples")
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"axis {name} has a non-finite range")
        if len({a[0] for a in self.axes}) != len(self.axes):
            raise ValueError("an axis is listed twice")
        if self.section not in SECTIONS:
            raise ValueError(f"section must be one of {', '.join(SECTIONS)}")
        fixed = {"position": "y", "momentum": "x"}.get(self.section)
        if fixed and any(a[0].startswith(fixed) for a in self.axes):
            raise ValueError(f"the {self.section} section holds every {fixed}_i at zero")
        order = {n: i for i, n in enumerate(names)}
        object.__setattr__(self, "axes", tuple(sorted(self.axes, key=lambda a: order[a[0]])))

    @property
    def columns(self) -> list[str]:
        return _axis_names(self.nvars)

    def coordinates(self) -> np.ndarray:
        """Array of shape ``(points, 2*nvars)`` with every column, in row order."""
        names = self.columns
        ranges = [np.linspace(lo, hi, n) for _, lo, hi, n in self.axes]
        rows = np.zeros((int(np.prod([len(r) for r in ranges])), len(names)))
        pos = [names.index(a[0]) for a in self.axes]
        for k, combo in enumerate(itertools.product(*ranges)):
            rows[k, pos] = combo
        return rows

    def points(self) -> np.ndarray:
        c = self.coordinates()
        return c[:, 0::2] + 1j * c[:, 1::2]

    def to_string(self) -> str:
        return ",".join(f"{n}:{format_float(lo)}:{format_float(hi)}:{k}" for n, lo, hi, k in self.axes)

    def to_dict(self) -> dict:
        return {
            "section": self.section,
            "axes": [{"name": n, "lo": lo, "hi": hi, "n": k} for n, lo, hi, k in self.axes],
        }


def parse_grid(text: str | None, nvars: int, section: str = "full") -> GridSpec:
    """Parse ``x1:lo:hi:n[,y1:lo:hi:n...]``; omitted text gives the section default."""
    if section not in SECTIONS:
        raise ValueError(f"section must be one of {', '.join(SECTIONS)}")
    if not text:
        keep = {"position": "x", "momentum": "y"}.get(section)
        names = [n for n in _axis_names(nvars) if keep is None or n.startswith(keep)]
        return GridSpec(nvars, tuple((n, *DEFAULT_RANGE) for n in names), section)
    axes = []
    for part in text.split(","):
        bits = part.strip().split(":")
        if len(bits) != 4:
            raise ValueError(f"grid axis {part!r} must look like name:lo:hi:n")
        name, lo, hi, n = bits
        try:
            axes.append((name.strip(), float(lo), float(hi), int(n)))
        except ValueError:
            raise ValueError(f"grid axis {part!r} has a malformed number") from None
    return GridSpec(nvars, tuple(axes), section)


def write_csv(grid: GridSpec, values) -> str:
    """CSV text with header ``x1,y1[,x2,y2,...],F`` in grid-major order."""
    values = np.asarray(values)
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(grid.columns + ["F"])
    for row, v in zip(grid.coordinates(), values):
        if np.iscomplexobj(values):
            cell = f"{format_float(v.real)}{'+' if v.imag >= 0 else '-'}{format_float(abs(v.imag))}j"
        else:
            cell = format_float(v)
        w.writerow([format_float(x) for x in row] + [cell])
    return out.getvalue()


def distribution_json(params: ModelParams, s: float, state: dict, grid: GridSpec, values) -> str:
    values = np.asarray(values)
    if np.iscomplexobj(values):
        vals = [[float(v.real), float(v.imag)] for v in values]
    else:
        vals = [float(v) for v in values]
    doc = {
        "params": {"D": params.D, "N": params.N},
        "s": float(s),
        "state": state,
        "grid": grid.to_dict(),
        "columns": grid.columns,
        "values": vals,
    }
    return json.dumps(doc, indent=1) + "\n"


def resolve_cache_dir(explicit: str | None = None) -> Path | None:
    """An explicit directory wins, then ``$QUDITPHASE_CACHE``; otherwise no cache."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _kernel_path(cache: Path, D: int, N: int, n: int) -> Path:
    return cache / f"sw_D{D}_N{N}" / f"block{n}.json"


def save_sw_kernel(kernel: SWKernelSymbolic, cache: Path) -> list[Path]:
    """One file per block: a ``{D, N, blockIndex}`` manifest plus exact entries."""
    p = kernel.params
    paths = []
    for n, block in enumerate(kernel.rational):
        path = _kernel_path(Path(cache), p.D, p.N, n)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {
            "manifest": {"D": p.D, "N": p.N, "blockIndex": n},
            "entries": [[f.to_json() for f in row] for row in block],
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True))
        tmp.replace(path)
        paths.append(path)
    return paths


def load_sw_kernel(params: ModelParams, cache: Path) -> SWKernelSymbolic | None:
    """Rebuild a cached kernel, or ``None`` when any block is missing or mismatched."""
    blocks = []
    for n in range(params.N + 1):
        path = _kernel_path(Path(cache), params.D, params.N, n)
        if not path.exists():
            return None
        doc = json.loads(path.read_text())
        if doc.get("manifest") != {"D": params.D, "N": params.N, "blockIndex": n}:
            return None
        blocks.append(
            tuple(tuple(RationalPolyFunction.from_json(e, params.nvars) for e in row) for row in doc["entries"])
        )
    tau = inversion_coefficients(params).tau
    sqrt_mult = np.sqrt(np.array([float(multinomial(idx)) for idx in fock_basis(params)]))
    sqrt_mult.setflags(write=False)
    return SWKernelSymbolic(params, tuple(blocks), tuple(tau[n] for n in range(params.N + 1)), sqrt_mult)


def basis_to_json(basis: HarmonicBasis) -> dict:
    p = basis.params
    return {
        "manifest": {
            "D": p.D,
            "n": basis.level,
            "tilde_d_n": dim_harmonic(p, basis.level),
            "orderingVersion": ORDERING_VERSION,
            "precisionBits": basis.precision_bits,
        },
        "N": p.N,
        "labels": [[list(k), list(l)] for k, l in basis.labels],
        "functions": [f.to_json() for f in basis.functions],
    }


def save_basis(basis: HarmonicBasis, cache: Path) -> Path:
    p = basis.params
    path = Path(cache) / f"basis_D{p.D}_N{p.N}_n{basis.level}_b{basis.precision_bits}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(basis_to_json(basis), sort_keys=True))
    return path

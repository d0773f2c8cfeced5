"""Discrete divisors on the complex plane, enumerable to any radius.

A divisor is a multiset of points (atoms with integer multiplicities)
without finite limit points.  Sources are generator-backed rather than
fixed lists so that the truncation radius stays a caller choice: every
construction here guarantees that ``arrays(R)`` / ``enumerate(R)`` return
exactly the atoms in the closed disc ``|a| <= R``, each atom once, and
that enumerations nest between radii.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "Atom",
    "ComplexPoint",
    "DivisorSource",
    "GeneratorSpec",
    "LineDensity",
    "build_source",
    "explicit_source",
    "indexed_lattice",
    "scale_multiplicity",
    "total_multiplicity",
    "spec_from_dict",
    "spec_to_dict",
    "load_divisor",
]

# Points are plain Python complex numbers throughout.
ComplexPoint = complex

GENERATOR_KINDS = (
    "explicit-list",
    "integer-lattice-punctured",
    "shifted-lattice",
    "perturbed-lattice",
    "power-sequence",
    "positive-integers",
)


def _require_finite(z: complex, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{what} must have finite coordinates, got {z!r}")
    return z


@dataclass(frozen=True)
class Atom:
    """A zero location together with its multiplicity (>= 1)."""

    point: complex
    multiplicity: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", _require_finite(self.point, "atom point"))
        m = self.multiplicity
        if isinstance(m, (bool, float)) or int(m) != m or m < 1:
            raise ValueError(f"multiplicity must be an integer >= 1, got {m!r}")
        object.__setattr__(self, "multiplicity", int(m))


@dataclass(frozen=True)
class LineDensity:
    """Uniform mass per unit length carried on the real axis."""

    rho: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho) and self.rho >= 0):
            raise ValueError(f"rho must be finite and >= 0, got {self.rho!r}")


@dataclass(frozen=True)
class DivisorSource:
    """Rule producing every atom of a fixed divisor inside any radius.

    ``candidates(R)`` may over-enumerate (return a superset window); the
    public accessors filter to the closed disc ``|a| <= R`` exactly, which
    makes the nesting and determinism guarantees automatic.  Sources are
    immutable and safe to share across parallel workers.
    """

    label: str
    candidates: Callable[[float], tuple[np.ndarray, np.ndarray]]

    def arrays(self, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """Points and multiplicities of all atoms with ``|a| <= radius``."""
        r = float(radius)
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"radius must be finite and >= 0, got {radius!r}")
        pts, mult = self.candidates(r)
        pts = np.asarray(pts, dtype=np.complex128)
        mult = np.asarray(mult, dtype=np.int64)
        keep = np.abs(pts) <= r
        return pts[keep], mult[keep]

    def enumerate(self, radius: float) -> list[Atom]:
        pts, mult = self.arrays(radius)
        return [Atom(complex(p), int(m)) for p, m in zip(pts, mult)]


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative recipe for a divisor; maps deterministically to a source."""

    kind: str
    params: tuple[float, ...] = ()
    atoms: tuple[Atom, ...] = ()


def total_multiplicity(atoms: Iterable[Atom]) -> int:
    """Sum of multiplicities; 0 for an empty collection."""
    return sum(a.multiplicity for a in atoms)


def _empty() -> tuple[np.ndarray, np.ndarray]:
    return np.zeros(0, dtype=np.complex128), np.zeros(0, dtype=np.int64)


def explicit_source(atoms: Iterable[Atom | tuple], label: str = "explicit") -> DivisorSource:
    """Finite divisor given by an explicit atom list.

    Atoms at exactly the same point are merged, summing multiplicities, so
    the 'each atom once' enumeration contract holds.
    """
    merged: dict[complex, int] = {}
    order: list[complex] = []
    for a in atoms:
        if not isinstance(a, Atom):
            a = Atom(*a) if isinstance(a, tuple) else Atom(a)
        if a.point not in merged:
            order.append(a.point)
            merged[a.point] = 0
        merged[a.point] += a.multiplicity
    pts = np.array(order, dtype=np.complex128)
    mult = np.array([merged[p] for p in order], dtype=np.int64)

    def candidates(_r: float) -> tuple[np.ndarray, np.ndarray]:
        return pts, mult

    return DivisorSource(label=label, candidates=candidates)


def indexed_lattice(
    label: str,
    position: Callable[[np.ndarray], np.ndarray],
    index_pad: float | Callable[[float], float] = 2.0,
    punctured: bool = True,
) -> DivisorSource:
    """Divisor ``{position(k) : k integer}`` with unit multiplicities.

    ``index_pad`` bounds how far an atom can wander inward: every atom with
    ``|position(k)| <= R`` must have ``|k| <= R + index_pad(R)``.  The
    filtering in :class:`DivisorSource` then makes enumeration exact.
    """

    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        pad = index_pad(r) if callable(index_pad) else float(index_pad)
        n = int(math.ceil(r + pad)) + 1
        k = np.arange(-n, n + 1, dtype=np.float64)
        if punctured:
            k = k[k != 0]
        pts = np.asarray(position(k), dtype=np.complex128)
        return pts, np.ones(pts.size, dtype=np.int64)

    return DivisorSource(label=label, candidates=candidates)


def scale_multiplicity(source: DivisorSource, factor: int) -> DivisorSource:
    """Same support, every multiplicity scaled by a positive integer."""
    if int(factor) != factor or factor < 1:
        raise ValueError(f"factor must be an integer >= 1, got {factor!r}")

    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        pts, mult = source.arrays(r)
        return pts, mult * int(factor)

    return DivisorSource(label=f"{source.label} (x{int(factor)})", candidates=candidates)


def _punctured_lattice() -> DivisorSource:
    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        n = int(math.floor(r))
        if n < 1:
            return _empty()
        k = np.arange(1.0, n + 1.0)
        pts = np.concatenate([-k[::-1], k]).astype(np.complex128)
        return pts, np.ones(pts.size, dtype=np.int64)

    return DivisorSource(label="integer-lattice-punctured", candidates=candidates)


def _shifted_lattice(offset: float) -> DivisorSource:
    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        lo = int(math.floor(-r - abs(offset))) - 1
        hi = int(math.ceil(r + abs(offset))) + 1
        k = np.arange(lo, hi + 1, dtype=np.float64)
        pts = (k + offset).astype(np.complex128)
        return pts, np.ones(pts.size, dtype=np.int64)

    return DivisorSource(label=f"shifted-lattice({offset})", candidates=candidates)


def _perturbed_lattice(amplitude: float, frequency: float, phase: float) -> DivisorSource:
    def position(k: np.ndarray) -> np.ndarray:
        return k + amplitude * np.sin(2.0 * np.pi * frequency * k + phase)

    return indexed_lattice(
        label=f"perturbed-lattice({amplitude},{frequency},{phase})",
        position=position,
        index_pad=amplitude + 1.0,
        punctured=True,
    )


def _power_sequence(exponent: float) -> DivisorSource:
    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        if r < 1.0:
            return _empty()
        n = int(math.floor(r ** (1.0 / exponent))) + 2
        k = np.arange(1.0, n + 1.0)
        pts = (k ** exponent).astype(np.complex128)
        return pts, np.ones(pts.size, dtype=np.int64)

    return DivisorSource(label=f"power-sequence({exponent})", candidates=candidates)


def _positive_integers() -> DivisorSource:
    def candidates(r: float) -> tuple[np.ndarray, np.ndarray]:
        n = int(math.floor(r))
        if n < 1:
            return _empty()
        pts = np.arange(1.0, n + 1.0).astype(np.complex128)
        return pts, np.ones(pts.size, dtype=np.int64)

    return DivisorSource(label="positive-integers", candidates=candidates)


def build_source(spec: GeneratorSpec) -> DivisorSource:
    """Instantiate the divisor a :class:`GeneratorSpec` describes."""
    kind, p = spec.kind, spec.params
    if kind == "explicit-list":
        return explicit_source(spec.atoms)
    if kind == "integer-lattice-punctured":
        return _punctured_lattice()
    if kind == "shifted-lattice":
        if len(p) != 1:
            raise ValueError("shifted-lattice expects params=[offset]")
        return _shifted_lattice(float(p[0]))
    if kind == "perturbed-lattice":
        if len(p) not in (2, 3):
            raise ValueError("perturbed-lattice expects params=[amplitude, frequency(, phase)]")
        amplitude, frequency = float(p[0]), float(p[1])
        phase = float(p[2]) if len(p) == 3 else 0.0
        if amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {amplitude}")
        return _perturbed_lattice(amplitude, frequency, phase)
    if kind == "power-sequence":
        if len(p) != 1:
            raise ValueError("power-sequence expects params=[exponent]")
        exponent = float(p[0])
        if exponent <= 0:
            raise ValueError(f"exponent must be > 0, got {exponent}")
        return _power_sequence(exponent)
    if kind == "positive-integers":
        return _positive_integers()
    raise ValueError(f"unknown generator kind {kind!r}; known kinds: {GENERATOR_KINDS}")


# ---------------------------------------------------------------------------
# Divisor file format (JSON):
#   {"kind": "...", "params": [...]}                         for generators
#   {"kind": "explicit-list", "atoms": [{"re":..,"im":..,"mult":..}, ...]}


def spec_from_dict(data: dict) -> GeneratorSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("divisor file must be a JSON object with a 'kind' field")
    kind = data["kind"]
    if kind == "explicit-list":
        atoms = tuple(
            Atom(complex(float(a["re"]), float(a.get("im", 0.0))), int(a.get("mult", 1)))
            for a in data.get("atoms", [])
        )
        return GeneratorSpec(kind=kind, atoms=atoms)
    params = tuple(float(v) for v in data.get("params", []))
    return GeneratorSpec(kind=kind, params=params)


def spec_to_dict(spec: GeneratorSpec) -> dict:
    if spec.kind == "explicit-list":
        return {
            "kind": spec.kind,
            "atoms": [
                {"re": a.point.real, "im": a.point.imag, "mult": a.multiplicity}
                for a in spec.atoms
            ],
        }
    return {"kind": spec.kind, "params": list(spec.params)}


def load_divisor(path: str) -> DivisorSource:
    """Read a divisor file and build its source (raises ValueError on bad input)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed divisor file {path}: {exc}") from exc
    return build_source(spec_from_dict(data))

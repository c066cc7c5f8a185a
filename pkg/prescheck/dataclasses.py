from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

REPORT_VERSION = 1


# --- lattices -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Lattice:
    """Finite bounded lattice on dense ids ``0..size-1``.

    Build through :func:`prescheck.lattice_core.validate_lattice`; a value of
    this type is assumed to have passed the full axiom scan.
    """
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    bottom: int
    top: int
    labels: Tuple[str, ...] = ()
    name: str = ""

    @property
    def size(self) -> int:
        return int(self.meet.shape[0])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


@dataclass(frozen=True, eq=False)
class Congruence:
    lattice: Lattice
    classes: Tuple[int, ...]  # class id per element
    representatives: Tuple[int, ...]  # minimum element per class id

    @property
    def class_count(self) -> int:
        return len(self.representatives)

    def blocks(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in self.representatives]
        for a, c in enumerate(self.classes):
            out[c].append(a)
        return out


@dataclass(frozen=True, eq=False)
class Quotient:
    lattice: Lattice
    projection: Tuple[int, ...]
    congruence: Congruence


@dataclass
class EqualizerReport:
    lattice: str
    i: int
    j: int
    size_leq: int  # |L/(i <= j)|
    size_geq: int  # |L/(j <= i)|
    size_eq: int  # |L/(i = j)|
    equalizer_size: int
    lattice_size: int
    bijective: bool
    amalgam_ok: bool
    witness: Optional[Dict[str, Any]] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "lattice": self.lattice,
            "pair": [self.i, self.j],
            "quotient_sizes": [self.size_leq, self.size_geq, self.size_eq],
            "equalizer_size": self.equalizer_size,
            "lattice_size": self.lattice_size,
            "bijective": self.bijective,
            "amalgam_ok": self.amalgam_ok,
            "witness": self.witness,
        }


# --- rings and modules ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteRing:
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    zero: int
    one: int
    labels: Tuple[str, ...] = ()
    name: str = ""

    @property
    def size(self) -> int:
        return int(self.add.shape[0])

    @property
    def is_zero_ring(self) -> bool:
        return self.size == 1

    def label(self, r: int) -> str:
        return self.labels[r] if self.labels else str(r)


@dataclass(frozen=True, eq=False)
class RingHom:
    source: FiniteRing
    target: FiniteRing
    map: Tuple[int, ...]

    def __call__(self, r: int) -> int:
        return self.map[r]


@dataclass(frozen=True, eq=False)
class FiniteModule:
    ring: FiniteRing
    add: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    zero: int
    action: np.ndarray = field(repr=False)  # action[r, m] = r·m
    labels: Tuple[str, ...] = ()
    name: str = ""

    @property
    def size(self) -> int:
        return int(self.add.shape[0])


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing = field(compare=False, repr=False)
    members: Tuple[int, ...]

    def __contains__(self, r: int) -> bool:
        return r in self.members

    @property
    def is_unit_ideal(self) -> bool:
        return self.ring.one in self.members


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """``M ⊗_R N`` as ``⊕ Z/moduli`` with the coordinates of every pure tensor."""
    left: FiniteModule
    right: FiniteModule
    moduli: Tuple[int, ...]
    coordinates: np.ndarray = field(repr=False)  # row m*|N| + n -> coords of m⊗n

    @property
    def order(self) -> int:
        out = 1
        for d in self.moduli:
            out *= d
        return out

    def pure(self, m: int, n: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.coordinates[m * self.right.size + n])


# --- descent --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DescentComplex:
    """``∏ M_i → ∏ M_ij → ∏ M_ijk`` for a cover ``(f_1, …, f_n)``.

    ``M_i`` is ``e_i·M`` for the stable idempotent ``e_i`` of ``f_i``; cells at
    level ``k`` are all ``(k+1)``-tuples of indices, diagonal ones included.
    """
    module: FiniteModule
    cover: Tuple[int, ...]
    idempotents: Tuple[int, ...]
    corrupted: bool = False  # d0 replaced by zero

    @property
    def width(self) -> int:
        return len(self.cover)


@dataclass
class CohomologyReport:
    h0: int
    h1: int
    exact: bool
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    method: str = "enumerate"
    level_orders: Tuple[int, int, int] = (0, 0, 0)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "h0": self.h0,
            "h1": self.h1,
            "exact": self.exact,
            "witnesses": self.witnesses,
            "method": self.method,
            "level_orders": list(self.level_orders),
        }


# --- finite sets ----------------------------------------------------------

@dataclass(frozen=True)
class FiniteMap:
    domain: int
    codomain: int
    table: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.table[x]

    def fibers(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.codomain)]
        for x, y in enumerate(self.table):
            out[y].append(x)
        return out

    def as_dict(self) -> Dict[str, Any]:
        return {"domain": self.domain, "codomain": self.codomain, "table": list(self.table)}


@dataclass(frozen=True)
class PresentationSpec:
    name: str
    membership: Any = field(compare=False, repr=False)  # Callable[[int], bool]
    generators: Tuple[int, ...] = ()

    def __contains__(self, cardinality: int) -> bool:
        return bool(self.membership(cardinality))


@dataclass
class CoverVerdict:
    map: FiniteMap
    presentation: str
    fiber_sizes: Tuple[int, ...]
    fiber_ok: Tuple[bool, ...]
    verdict: bool
    witness: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map.as_dict(),
            "presentation": self.presentation,
            "fiber_sizes": list(self.fiber_sizes),
            "verdict": self.verdict,
            "witness": self.witness,
        }


@dataclass
class LocalChoice:
    z_size: int
    p: FiniteMap
    h: FiniteMap
    commutes: bool
    cover: CoverVerdict

    @property
    def verdict(self) -> bool:
        return self.commutes and self.cover.verdict


# --- complexes ------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialComplex:
    vertices: int
    facets: Tuple[Tuple[int, ...], ...]

    @property
    def is_empty(self) -> bool:
        return not self.facets

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def as_dict(self) -> Dict[str, Any]:
        return {"vertices": self.vertices, "facets": [list(f) for f in self.facets]}


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced integral homology.

    ``betti[k]`` is the rank in degree ``k >= 0``; the void-complex convention
    puts a single class in degree -1 (``betti_minus_one``).
    """
    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]
    betti_minus_one: int = 0

    @property
    def is_acyclic(self) -> bool:
        return self.betti_minus_one == 0 and not any(self.betti) and not any(self.torsion)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "betti_minus_one": self.betti_minus_one,
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
        }


# --- reports --------------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    verdict: bool
    witness: Any = None
    details: Dict[str, Any] = field(default_factory=dict)
    duration: float = 0.0

    def as_dict(self, timings: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "verdict": self.verdict, "witness": self.witness}
        if self.details:
            out["details"] = self.details
        if timings:
            out["duration"] = round(self.duration, 6)
        return out


@dataclass
class RunReport:
    subcommand: str
    parameters: Dict[str, Any]
    checks: List[CheckRecord] = field(default_factory=list)
    proof: List[str] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.verdict)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 else 1

    def summary(self) -> Dict[str, Any]:
        return {"passed": self.passed, "failed": self.failed, "total": len(self.checks)}

    def as_dict(self, timings: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "v": REPORT_VERSION,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "checks": [c.as_dict(timings) for c in self.checks],
            "summary": self.summary(),
        }
        if self.proof:
            out["proof"] = list(self.proof)
        return out

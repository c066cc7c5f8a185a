from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .dataclasses import FiniteRing, Lattice
from .errors import SpecParseError
from .finite_ring import parse_ring_spec
from .lattice_core import (
    boolean_lattice,
    chain_lattice,
    free_bounded_distributive_lattice,
    lattice_from_json,
    product_lattice,
)

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parents[1]
LATTICES_JSON = ROOT / 'context' / 'lattices.json'
RINGS_CSV = ROOT / 'context' / 'rings.csv'

# Cache containers, keyed by path so tests can point the constants elsewhere
_lattice_cache: Dict[Path, Dict[str, Lattice]] = {}
_ring_cache: Dict[Path, List[Tuple[str, str]]] = {}


def construct_lattice(text: str, name: str = "") -> Lattice:
    """``chain:N``, ``boolean:K``, ``free:N`` or ``product:<a>*<b>``."""
    kind, _, arg = text.strip().partition(":")
    builders = {"chain": chain_lattice, "boolean": boolean_lattice}
    if kind in builders or kind == "free":
        if not arg.isdigit():
            raise SpecParseError(f"bad size in lattice construct {text!r}", text)
        if kind == "free":
            return free_bounded_distributive_lattice(int(arg))
        return builders[kind](int(arg), name=name)
    if kind == "product":
        left, sep, right = arg.partition("*")
        if not sep:
            raise SpecParseError(f"product needs two factors: {text!r}", text)
        return product_lattice(construct_lattice(left), construct_lattice(right), name=name)
    raise SpecParseError(f"unknown lattice construct {text!r}", text)


def _load_lattices() -> Dict[str, Lattice]:
    path = LATTICES_JSON
    if path in _lattice_cache:
        return _lattice_cache[path]
    if not path.exists():
        return {}
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))["lattices"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SpecParseError(f"Error parsing {path.name}: {exc}", str(path)) from exc
    out: Dict[str, Lattice] = {}
    for idx, entry in enumerate(entries):
        name = str(entry.get("name") or "").strip()
        if not name:
            raise SpecParseError(f"Missing value for 'name' in entry {idx}", idx)
        try:
            if "construct" in entry:
                out[name] = construct_lattice(entry["construct"], name=name)
            else:
                out[name] = lattice_from_json(entry, name=name)
        except ValueError as exc:
            raise SpecParseError(f"Error parsing {path.name} entry {name!r}: {exc}", name) from exc
    logger.debug("loaded %d bundled lattices from %s", len(out), path)
    _lattice_cache[path] = out
    return out


def _load_ring_rows() -> List[Tuple[str, str]]:
    path = RINGS_CSV
    if path in _ring_cache:
        return _ring_cache[path]
    if not path.exists():
        return []
    out: List[Tuple[str, str]] = []
    with path.open('r', encoding='utf-8') as f:
        rdr = csv.DictReader(f)
        for idx, row in enumerate(rdr, start=2):  # header is row 1
            if not any(row.values()):
                continue
            name = (row.get('name') or '').strip()
            spec = (row.get('spec') or '').strip()
            if not name or not spec:
                raise SpecParseError(f"Missing name or spec in {path.name} row {idx}", idx)
            out.append((name, spec))
    _ring_cache[path] = out
    return out


def list_lattices(q: Optional[str] = None) -> List[Dict[str, object]]:
    rows = [{"name": n, "size": L.size} for n, L in _load_lattices().items()]
    if q:
        rows = [r for r in rows if q.lower() in str(r["name"]).lower()]
    return rows


def list_rings(q: Optional[str] = None) -> List[Dict[str, str]]:
    rows = [{"name": n, "spec": s} for n, s in _load_ring_rows()]
    if q:
        ql = q.lower()
        rows = [r for r in rows if ql in r["name"].lower() or ql in r["spec"].lower()]
    return rows


def lattice(name: str) -> Lattice:
    table = _load_lattices()
    if name not in table:
        raise SpecParseError(f"no bundled lattice named {name!r}", name)
    return table[name]


def lattices() -> List[Lattice]:
    return list(_load_lattices().values())


def ring(name: str) -> FiniteRing:
    """A bundled ring by name; anything else is read as a ring spec."""
    for n, spec in _load_ring_rows():
        if n == name:
            return parse_ring_spec(spec)
    return parse_ring_spec(name)


def rings() -> List[FiniteRing]:
    return [parse_ring_spec(spec) for _, spec in _load_ring_rows()]

"""Finite bounded distributive lattices on dense element ids.

Meet and join are stored as ``numpy`` tables so every axiom scan is a handful
of vectorised passes. Free lattices are realised as monotone Boolean functions
ordered pointwise.
"""
from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .dataclasses import Lattice
from .errors import BoundsMismatch, ElementOutOfRange, NonDistributive, NotALattice, TooManyGenerators

logger = logging.getLogger(__name__)

# FD(5) has 7581 elements; all-pairs sweeps stop being interactive there.
MAX_GENERATORS = 4


def _as_table(raw, name: str) -> np.ndarray:
    try:
        table = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotALattice("totality", ()) from exc
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotALattice(f"totality ({name} is not a non-empty square table)", ())
    n = table.shape[0]
    bad = np.argwhere((table < 0) | (table >= n))
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotALattice(f"totality ({name} value out of range)", (a, b))
    table.setflags(write=False)
    return table


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _check_semilattice(op: np.ndarray, name: str) -> None:
    n = op.shape[0]
    hit = _first(op != op.T)
    if hit is not None:
        raise NotALattice(f"commutativity ({name})", hit)
    diag = op[np.arange(n), np.arange(n)]
    hit = _first(diag != np.arange(n))
    if hit is not None:
        raise NotALattice(f"idempotence ({name})", hit)
    for a in range(n):
        # (a·b)·c against a·(b·c), rows indexed by b, columns by c
        left = op[op[a]]
        right = op[a][op]
        hit = _first(left != right)
        if hit is not None:
            raise NotALattice(f"associativity ({name})", (a, *hit))


def validate_lattice(
    meet: Sequence[Sequence[int]] | np.ndarray,
    join: Sequence[Sequence[int]] | np.ndarray,
    bottom: int,
    top: int,
    labels: Iterable[str] = (),
    name: str = "",
) -> Lattice:
    """Return a :class:`Lattice` or raise on the first violated axiom.

    Axioms are scanned in a fixed order (totality, commutativity, idempotence,
    associativity, absorption, bounds, distributivity) and witnesses are the
    lexicographically first failing tuple, so diagnostics are reproducible.
    """
    m = _as_table(meet, "meet")
    j = _as_table(join, "join")
    if m.shape != j.shape:
        raise NotALattice("totality (meet and join sizes differ)", ())
    n = m.shape[0]
    labels = tuple(str(s) for s in labels)
    if labels and len(labels) != n:
        raise NotALattice("labels (one label per element)", (len(labels),))

    _check_semilattice(m, "meet")
    _check_semilattice(j, "join")

    idx = np.arange(n)
    # a ∧ (a ∨ b) = a  and  a ∨ (a ∧ b) = a
    hit = _first(m[idx[:, None], j] != idx[:, None])
    if hit is not None:
        raise NotALattice("absorption (meet over join)", hit)
    hit = _first(j[idx[:, None], m] != idx[:, None])
    if hit is not None:
        raise NotALattice("absorption (join over meet)", hit)

    if not (0 <= bottom < n and 0 <= top < n):
        raise BoundsMismatch(f"bounds ({bottom}, {top}) outside carrier of size {n}", [bottom, top])
    if np.any(m[bottom] != bottom) or np.any(j[top] != top):
        raise BoundsMismatch(f"{bottom} is not the least or {top} not the greatest element", [bottom, top])

    for a in range(n):
        lhs = m[a][j]  # a ∧ (b ∨ c)
        rhs = j[m[a][:, None], m[a][None, :]]  # (a ∧ b) ∨ (a ∧ c)
        hit = _first(lhs != rhs)
        if hit is not None:
            raise NonDistributive((a, hit[0], hit[1]))

    logger.debug("validated lattice %r of size %d", name, n)
    return Lattice(meet=m, join=j, bottom=int(bottom), top=int(top), labels=labels, name=name)


def check_element(L: Lattice, *elements: int) -> None:
    for a in elements:
        if not 0 <= a < L.size:
            raise ElementOutOfRange(f"element {a} not in lattice of size {L.size}", a)


def meet(L: Lattice, a: int, b: int) -> int:
    return int(L.meet[a, b])


def join(L: Lattice, a: int, b: int) -> int:
    return int(L.join[a, b])


def leq(L: Lattice, a: int, b: int) -> bool:
    """``a ≤ b`` read as ``a ∨ b = b``."""
    check_element(L, a, b)
    return int(L.join[a, b]) == b


def complement_of(L: Lattice, a: int) -> Optional[int]:
    """The complement of ``a`` if one exists (unique in a distributive lattice)."""
    check_element(L, a)
    hits = np.flatnonzero((L.meet[a] == L.bottom) & (L.join[a] == L.top))
    return int(hits[0]) if hits.size else None


def element_by_label(L: Lattice, label: str) -> int:
    try:
        return L.labels.index(label)
    except ValueError:
        pass
    if label.lstrip("-").isdigit() and not L.labels:
        a = int(label)
        check_element(L, a)
        return a
    raise ElementOutOfRange(f"no element labelled {label!r} in {L.name or 'lattice'}", label)


# --- constructions --------------------------------------------------------

def chain_lattice(n: int, name: str = "") -> Lattice:
    if n < 1:
        raise ValueError("a bounded chain needs at least one element")
    idx = np.arange(n)
    return validate_lattice(
        np.minimum(idx[:, None], idx[None, :]),
        np.maximum(idx[:, None], idx[None, :]),
        0,
        n - 1,
        name=name or f"chain{n}",
    )


def boolean_lattice(k: int, name: str = "") -> Lattice:
    """Subsets of ``k`` atoms, element id = bitmask."""
    idx = np.arange(1 << k)
    labels = []
    for mask in range(1 << k):
        atoms = [f"x{t + 1}" for t in range(k) if mask >> t & 1]
        labels.append("{" + ",".join(atoms) + "}")
    return validate_lattice(
        idx[:, None] & idx[None, :],
        idx[:, None] | idx[None, :],
        0,
        (1 << k) - 1,
        labels,
        name=name or f"boolean{k}",
    )


def product_lattice(L: Lattice, M: Lattice, name: str = "") -> Lattice:
    """Componentwise product; element ``(a, b)`` has id ``a * |M| + b``."""
    n, k = L.size, M.size
    a = np.repeat(np.arange(n), k)
    b = np.tile(np.arange(k), n)
    meet_t = L.meet[a[:, None], a[None, :]] * k + M.meet[b[:, None], b[None, :]]
    join_t = L.join[a[:, None], a[None, :]] * k + M.join[b[:, None], b[None, :]]
    labels = [f"({L.label(int(x))},{M.label(int(y))})" for x, y in zip(a, b)]
    return validate_lattice(
        meet_t, join_t, L.bottom * k + M.bottom, L.top * k + M.top, labels,
        name=name or f"{L.name}x{M.name}",
    )


def monotone_functions(n: int) -> List[int]:
    """Truth-table bitmasks of all monotone Boolean functions of ``n`` variables.

    Bit ``x`` of a mask is ``f(x)``, where bit ``t`` of the assignment ``x`` is
    the value of variable ``t``. Built recursively from pairs ``f0 ≤ f1``.
    """
    funcs = [0, 1]
    for k in range(n):
        half = 1 << k
        funcs = [f0 | (f1 << half) for f0 in funcs for f1 in funcs if f0 & ~f1 == 0]
    return funcs


def _truth_table(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(mask >> x & 1 for x in range(1 << n))


def _minimal_points(mask: int, n: int) -> List[int]:
    points = [x for x in range(1 << n) if mask >> x & 1]
    minimal = [x for x in points if not any(y != x and y & x == y for y in points)]
    return sorted(minimal, key=lambda x: (bin(x).count("1"), x))


def _monotone_label(mask: int, n: int) -> str:
    if mask == 0:
        return "0"
    terms = []
    for x in _minimal_points(mask, n):
        gens = [f"g{t + 1}" for t in range(n) if x >> t & 1]
        if not gens:
            return "1"
        terms.append("∧".join(gens))
    if len(terms) == 1:
        return terms[0]
    return "∨".join(f"({t})" if "∧" in t else t for t in terms)


def free_bounded_distributive_lattice(n: int) -> Lattice:
    """Free bounded distributive lattice on generators ``g1..gn``.

    Elements are ordered lexicographically by truth table, so ``0`` comes first
    and ``1`` last.
    """
    if n < 0:
        raise ValueError("generator count must be non-negative")
    if n > MAX_GENERATORS:
        raise TooManyGenerators(f"at most {MAX_GENERATORS} generators are supported, got {n}", n)
    masks = sorted(monotone_functions(n), key=lambda f: _truth_table(f, n))
    index: Dict[int, int] = {f: i for i, f in enumerate(masks)}
    meet_t = [[index[f & g] for g in masks] for f in masks]
    join_t = [[index[f | g] for g in masks] for f in masks]
    labels = [_monotone_label(f, n) for f in masks]
    logger.debug("FD(%d) has %d elements", n, len(masks))
    return validate_lattice(meet_t, join_t, 0, len(masks) - 1, labels, name=f"FD({n})")


def generator(L: Lattice, k: int) -> int:
    """Id of the free generator ``gk``."""
    return element_by_label(L, f"g{k}")


# --- JSON -----------------------------------------------------------------

def lattice_to_json(L: Lattice) -> Dict[str, object]:
    out: Dict[str, object] = {
        "size": L.size,
        "meet": L.meet.tolist(),
        "join": L.join.tolist(),
        "bottom": L.bottom,
        "top": L.top,
    }
    out["labels"] = list(L.labels) if L.labels else [str(a) for a in range(L.size)]
    return out


def lattice_from_json(data: Dict[str, object], name: str = "") -> Lattice:
    try:
        size = int(data["size"])  # type: ignore[arg-type]
        meet_t = data["meet"]
        join_t = data["join"]
        bottom = int(data["bottom"])  # type: ignore[arg-type]
        top = int(data["top"])  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        raise NotALattice(f"format (missing or invalid field: {exc})", ()) from exc
    L = validate_lattice(meet_t, join_t, bottom, top, data.get("labels") or (), name=name)  # type: ignore[arg-type]
    if L.size != size:
        raise NotALattice(f"format (size {size} does not match tables of size {L.size})", (size,))
    return L

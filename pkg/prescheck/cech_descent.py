"""Descent cochains for finite covers and their first cohomology.

Cochains are tuples indexed by cells in row-major order: ``s[i]`` at level 0,
``t[i*n + j]`` at level 1 and ``u[(i*n + j)*n + k]`` at level 2.
"""
from __future__ import annotations

import dataclasses
import itertools
import logging
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .dataclasses import CohomologyReport, DescentComplex, FiniteModule, FiniteRing
from .errors import EnumerationTooLarge, ShapeMismatch
from .finite_ring import (
    additive_presentation,
    algebra_as_module,
    localize,
    require_unimodular,
    scalar_image,
    stable_idempotent,
    tensor_product,
    unimodular_covers,
)
from .normal_form import coordinates, finite_abelian_group, subgroup_order

logger = logging.getLogger(__name__)

# Above this many cochains per level, group orders come from normal forms.
ENUMERATION_BOUND = 20_000

METHODS = ("auto", "enumerate", "normal_form")


def _size(X) -> int:
    return X if isinstance(X, int) else len(X)


def _sub(M: FiniteModule, a: int, b: int) -> int:
    return int(M.add[a, M.neg[b]])


def d0(M: FiniteModule, X, s: Sequence[int]) -> Tuple[int, ...]:
    """``d(s)(x, x') = s(x) − s(x')``."""
    n = _size(X)
    if len(s) != n:
        raise ShapeMismatch(f"0-cochain has {len(s)} entries, index set has {n}", [len(s), n])
    return tuple(_sub(M, s[x], s[y]) for x in range(n) for y in range(n))


def d1(M: FiniteModule, X, t: Sequence[int]) -> Tuple[int, ...]:
    """``d(t)(x, x', x'') = t(x, x') − t(x, x'') + t(x', x'')``."""
    n = _size(X)
    if len(t) != n * n:
        raise ShapeMismatch(f"1-cochain has {len(t)} entries, expected {n * n}", [len(t), n * n])
    return tuple(
        int(M.add[_sub(M, t[x * n + y], t[x * n + z]), t[y * n + z]])
        for x in range(n) for y in range(n) for z in range(n)
    )


# --- complexes of covers --------------------------------------------------

def descent_complex_for_cover(R: FiniteRing, M: FiniteModule, cover: Sequence[int]) -> DescentComplex:
    if M.ring is not R:
        raise ShapeMismatch(f"module {M.name} is not over {R.name}", [M.name, R.name])
    require_unimodular(R, cover)
    idempotents = tuple(stable_idempotent(R, f) for f in cover)
    return DescentComplex(module=M, cover=tuple(int(f) for f in cover), idempotents=idempotents)


def corrupt_complex(C: DescentComplex) -> DescentComplex:
    """Negative control: the same complex with ``d0`` forced to zero."""
    return dataclasses.replace(C, corrupted=True)


def cells(C: DescentComplex, level: int) -> List[Tuple[int, ...]]:
    return list(itertools.product(range(C.width), repeat=level + 1))


def cell_idempotent(C: DescentComplex, cell: Sequence[int]) -> int:
    R = C.module.ring
    e = R.one
    for i in cell:
        e = int(R.mul[e, C.idempotents[i]])
    return e


def level_carriers(C: DescentComplex, level: int) -> List[List[int]]:
    return [scalar_image(C.module, cell_idempotent(C, c)) for c in cells(C, level)]


def level_order(C: DescentComplex, level: int) -> int:
    return prod(len(c) for c in level_carriers(C, level))


def _restrict(C: DescentComplex, level: int, cochain: Sequence[int]) -> Tuple[int, ...]:
    M = C.module
    return tuple(int(M.action[cell_idempotent(C, c), v]) for c, v in zip(cells(C, level), cochain))


def complex_d0(C: DescentComplex, s: Sequence[int]) -> Tuple[int, ...]:
    if C.corrupted:
        return (C.module.zero,) * (C.width ** 2)
    return _restrict(C, 1, d0(C.module, C.width, s))


def complex_d1(C: DescentComplex, t: Sequence[int]) -> Tuple[int, ...]:
    return _restrict(C, 2, d1(C.module, C.width, t))


def _generators(C: DescentComplex, level: int) -> Iterator[Tuple[int, ...]]:
    """Cochains with a single non-zero cell ``e_cell·g`` for additive generators ``g``."""
    M = C.module
    gens = additive_presentation(M.add, M.zero)[0]
    width = C.width ** (level + 1)
    for k, cell in enumerate(cells(C, level)):
        e = cell_idempotent(C, cell)
        for g in gens:
            v = int(M.action[e, g])
            if v != M.zero:
                cochain = [M.zero] * width
                cochain[k] = v
                yield tuple(cochain)


def cochain_condition(C: DescentComplex) -> bool:
    """``d1 ∘ d0 = 0`` on generators of level 0 (both maps are additive)."""
    zero = (C.module.zero,) * (C.width ** 3)
    return all(complex_d1(C, complex_d0(C, s)) == zero for s in _generators(C, 0))


def _enumerate_cohomology(C: DescentComplex) -> CohomologyReport:
    zero1 = (C.module.zero,) * (C.width ** 2)
    zero2 = (C.module.zero,) * (C.width ** 3)
    boundaries = set()
    h0 = 0
    for s in itertools.product(*level_carriers(C, 0)):
        image = complex_d0(C, s)
        boundaries.add(image)
        h0 += image == zero1
    cocycles = 0
    witnesses: List[Dict[str, object]] = []
    for t in itertools.product(*level_carriers(C, 1)):
        if complex_d1(C, t) == zero2:
            cocycles += 1
            if t not in boundaries and not witnesses:
                witnesses.append({"cocycle": list(t)})
    return CohomologyReport(
        h0=h0,
        h1=cocycles // len(boundaries),
        exact=cocycles == len(boundaries),
        witnesses=witnesses,
        method="enumerate",
    )


def _normal_form_cohomology(C: DescentComplex) -> CohomologyReport:
    M = C.module
    _, coef, relations = additive_presentation(M.add, M.zero)
    moduli, columns, Q = finite_abelian_group(relations, coef.shape[1])
    coords = [coordinates(coef[m], moduli, columns, Q) for m in range(M.size)]

    def vector(cochain: Sequence[int]) -> List[int]:
        return [c for v in cochain for c in coords[v]]

    n = C.width
    im_d0 = subgroup_order([vector(complex_d0(C, s)) for s in _generators(C, 0)], list(moduli) * n**2)
    im_d1 = subgroup_order([vector(complex_d1(C, t)) for t in _generators(C, 1)], list(moduli) * n**3)
    c0, c1 = level_order(C, 0), level_order(C, 1)
    cocycles = c1 // im_d1
    return CohomologyReport(
        h0=c0 // im_d0,
        h1=cocycles // im_d0,
        exact=cocycles == im_d0,
        method="normal_form",
    )


def h1(C: DescentComplex, method: str = "auto", bound: Optional[int] = None) -> CohomologyReport:
    """Orders of ``ker d0`` and ``ker d1 / im d0``.

    ``enumerate`` walks every cochain of levels 0 and 1; ``normal_form`` counts
    subgroup orders from generator images. ``auto`` enumerates when both levels
    fit in the bound.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    limit = ENUMERATION_BOUND if bound is None else bound
    orders = (level_order(C, 0), level_order(C, 1), level_order(C, 2))
    if method == "auto":
        method = "enumerate" if max(orders[:2]) <= limit else "normal_form"
        logger.debug("h1 of cover %s: level orders %s, using %s", C.cover, orders, method)
    if method == "enumerate":
        if max(orders[:2]) > limit:
            raise EnumerationTooLarge(max(orders[:2]), limit)
        report = _enumerate_cohomology(C)
    else:
        report = _normal_form_cohomology(C)
    report.level_orders = orders
    return report


# --- gluing and quasicoherence --------------------------------------------

def ring_gluing_equalizer(R: FiniteRing, cover: Sequence[int]) -> Dict[str, object]:
    """``R → {(x_i) : x_i = x_j on every overlap}`` is a bijection.

    Matching families are built index by index, keeping only choices that agree
    with every earlier one on the overlap ``e_i·e_j·R``.
    """
    require_unimodular(R, cover)
    es = [stable_idempotent(R, f) for f in cover]
    carriers = [sorted({int(x) for x in R.mul[e]}) for e in es]
    families: List[Tuple[int, ...]] = []

    def extend(chosen: List[int]) -> None:
        k = len(chosen)
        if k == len(es):
            families.append(tuple(chosen))
            return
        for x in carriers[k]:
            if all(R.mul[es[k], chosen[i]] == R.mul[es[i], x] for i in range(k)):
                chosen.append(x)
                extend(chosen)
                chosen.pop()

    extend([])
    images = [tuple(int(R.mul[e, r]) for e in es) for r in range(R.size)]
    witness = None
    if len(set(images)) != R.size:
        seen: Dict[Tuple[int, ...], int] = {}
        for r, img in enumerate(images):
            if img in seen:
                witness = {"collision": [seen[img], r]}
                break
            seen[img] = r
    elif len(families) != R.size:
        missing = sorted(set(families) - set(images))
        witness = {"unglued": list(missing[0])} if missing else None
    return {
        "cover": list(cover),
        "families": len(families),
        "ring_size": R.size,
        "bijective": witness is None and len(families) == R.size,
        "witness": witness,
    }


def weak_quasicoherence_check(R: FiniteRing, M: FiniteModule, f: int) -> Dict[str, object]:
    """``M ⊗_R R_f → e_f·M``, ``m ⊗ x ↦ x·m``, is an isomorphism."""
    if M.ring is not R:
        raise ShapeMismatch(f"module {M.name} is not over {R.name}", [M.name, R.name])
    L, phi = localize(R, f)
    T = tensor_product(M, algebra_as_module(phi))
    e = stable_idempotent(R, f)
    localized = scalar_image(M, e)
    carrier = np.array(sorted({int(x) for x in R.mul[e]}), dtype=np.int64)
    image = {int(v) for v in M.action[carrier].ravel()}
    iso = T.order == len(localized) and image == set(localized)
    return {
        "element": f,
        "tensor_order": T.order,
        "localized_order": len(localized),
        "image_order": len(image),
        "isomorphism": iso,
        "witness": None if iso else {"tensor_order": T.order, "localized_order": len(localized)},
    }


def descent_sweep(R: FiniteRing, M: FiniteModule, max_cover_size: int = 3, method: str = "auto") -> List[Dict[str, object]]:
    """Descent over every unimodular cover, grouped by idempotent signature.

    Covers with the same multiset of idempotents give the same complex, so one
    representative per signature is computed and the group size recorded.
    """
    groups: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
    for cover in unimodular_covers(R, max_cover_size):
        signature = tuple(sorted(stable_idempotent(R, f) for f in cover))
        groups.setdefault(signature, []).append(cover)
    out = []
    for signature in sorted(groups, key=lambda s: (len(s), s)):
        covers = groups[signature]
        C = descent_complex_for_cover(R, M, covers[0])
        report = h1(C, method=method)
        out.append({
            "signature": list(signature),
            "covers": len(covers),
            "representative": list(covers[0]),
            "h0": report.h0,
            "h1": report.h1,
            "exact": report.exact,
            "method": report.method,
            "gluing": ring_gluing_equalizer(R, covers[0])["bijective"],
        })
    logger.debug("descent sweep over %s: %d signatures", R.name, len(out))
    return out

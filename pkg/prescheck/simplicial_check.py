"""Sheaf condition of a distributive lattice for ``(i ≤ j) ∨ (j ≤ i)`` covers.

Given ``w1 ∈ L/(i ≤ j)`` and ``w2 ∈ L/(j ≤ i)`` with the same image in
``L/(i = j)`` there is exactly one ``z ∈ L`` over both, and for representatives
``x, y`` it is ``z = (x ∨ y) ∧ (x ∨ i) ∧ (y ∨ j)``. Everything here is checked
by enumerating quotient carriers.
"""
from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from .dataclasses import Congruence, EqualizerReport, Lattice, Quotient
from .errors import HypothesisFailed, ShapeMismatch
from .lattice_congruence import congruence_closure, join_congruences, leq_congruence, quotient, related
from .lattice_core import check_element

logger = logging.getLogger(__name__)


def _amalgam_formula(L: Lattice, i: int, j: int, x: int, y: int) -> int:
    m, v = L.meet, L.join
    return int(m[m[v[x, y], v[x, i]], v[y, j]])


def amalgam(L: Lattice, i: int, j: int, x: int, y: int) -> int:
    """Glue ``x`` (over ``i ≤ j``) and ``y`` (over ``j ≤ i``) into one element."""
    check_element(L, i, j, x, y)
    theta = congruence_closure(L, [(i, j)])
    if not related(theta, x, y):
        raise HypothesisFailed(
            f"{L.label(x)} and {L.label(y)} differ modulo ({L.label(i)} = {L.label(j)})", [x, y]
        )
    return _amalgam_formula(L, i, j, x, y)


def check_simplicial_equalizer(L: Lattice, i: int, j: int) -> EqualizerReport:
    """Compare ``L`` with the equalizer of ``L/(i≤j) × L/(j≤i) ⇉ L/(i=j)``."""
    check_element(L, i, j)
    below = leq_congruence(L, i, j)
    above = leq_congruence(L, j, i)
    middle = congruence_closure(L, [(i, j)])
    rep1, rep2 = below.representatives, above.representatives

    # both leq congruences refine (i = j), so classes map through representatives
    equalizer = [
        (c1, c2)
        for c1 in range(below.class_count)
        for c2 in range(above.class_count)
        if middle.classes[rep1[c1]] == middle.classes[rep2[c2]]
    ]
    preimages: Dict[Tuple[int, int], List[int]] = {}
    for z in range(L.size):
        preimages.setdefault((below.classes[z], above.classes[z]), []).append(z)

    witness: Optional[Dict[str, object]] = None
    bijective = True
    amalgam_ok = True
    for point in equalizer:
        found = preimages.get(point, [])
        if len(found) != 1:
            bijective = False
            witness = witness or {"point": list(point), "preimages": found}
            continue
        x, y = rep1[point[0]], rep2[point[1]]
        z = _amalgam_formula(L, i, j, x, y)
        if z != found[0]:
            amalgam_ok = False
            witness = witness or {"point": list(point), "amalgam": z, "preimage": found[0]}
    if len(preimages) != len(equalizer):
        # some element of L lands outside the equalizer
        bijective = False
    report = EqualizerReport(
        lattice=L.name,
        i=i,
        j=j,
        size_leq=below.class_count,
        size_geq=above.class_count,
        size_eq=middle.class_count,
        equalizer_size=len(equalizer),
        lattice_size=L.size,
        bijective=bijective,
        amalgam_ok=amalgam_ok,
        witness=witness,
    )
    logger.debug("equalizer %s (%d, %d): %s", L.name, i, j, report.bijective)
    return report


def sweep_simplicial_equalizer(L: Lattice) -> List[EqualizerReport]:
    return [check_simplicial_equalizer(L, i, j) for i in range(L.size) for j in range(L.size)]


# --- chain presentations --------------------------------------------------

def _signed_pairs(L: Lattice, constraints: Sequence[Tuple[int, int]], signs: Sequence[int]) -> List[Tuple[int, int]]:
    if len(constraints) != len(signs):
        raise ShapeMismatch(f"{len(constraints)} constraints but {len(signs)} signs", [len(constraints), len(signs)])
    pairs = []
    for (a, b), s in zip(constraints, signs):
        check_element(L, a, b)
        if s == 1:
            pairs.append((int(L.join[a, b]), b))
        elif s == -1:
            pairs.append((int(L.join[a, b]), a))
        else:
            raise ShapeMismatch(f"signs must be +1 or -1, got {s}", s)
    return pairs


def chain_congruence(L: Lattice, constraints: Sequence[Tuple[int, int]], signs: Sequence[int]) -> Congruence:
    return congruence_closure(L, _signed_pairs(L, constraints, signs))


def chain_quotients(L: Lattice, constraints: Sequence[Tuple[int, int]], signs: Sequence[int]) -> Quotient:
    """``L / ((a1 ≤ b1)^σ1, …, (an ≤ bn)^σn)`` where ``(a ≤ b)^-1 = (b ≤ a)``."""
    return quotient(L, chain_congruence(L, constraints, signs))


def sign_vectors(n: int) -> List[Tuple[int, ...]]:
    return [tuple(s) for s in itertools.product((1, -1), repeat=n)]


def chain_family_injective(L: Lattice, constraints: Sequence[Tuple[int, int]]) -> bool:
    """``L → ∏_σ L/σ`` over all sign vectors is injective."""
    thetas = [chain_congruence(L, constraints, s) for s in sign_vectors(len(constraints))]
    images = {tuple(t.classes[a] for t in thetas) for a in range(L.size)}
    return len(images) == L.size


def check_chain_descent(L: Lattice, constraints: Sequence[Tuple[int, int]]) -> Dict[str, object]:
    """Sheaf condition of ``L`` for the cover ``{L/σ}`` with overlaps ``L/(σ ∪ τ)``.

    Matching families are enumerated by backtracking over the sign vectors in
    order, pruning as soon as two chosen sections disagree on an overlap.
    """
    signs = sign_vectors(len(constraints))
    thetas = [chain_congruence(L, constraints, s) for s in signs]
    overlaps: Dict[Tuple[int, int], Congruence] = {}
    for a in range(len(signs)):
        for b in range(a + 1, len(signs)):
            overlaps[(a, b)] = join_congruences(thetas[a], thetas[b])

    families: List[Tuple[int, ...]] = []

    def extend(chosen: List[int]) -> None:
        k = len(chosen)
        if k == len(signs):
            families.append(tuple(chosen))
            return
        reps = thetas[k].representatives
        for c in range(thetas[k].class_count):
            ok = True
            for a in range(k):
                over = overlaps[(a, k)]
                if over.classes[thetas[a].representatives[chosen[a]]] != over.classes[reps[c]]:
                    ok = False
                    break
            if ok:
                chosen.append(c)
                extend(chosen)
                chosen.pop()

    extend([])
    images = [tuple(t.classes[z] for t in thetas) for z in range(L.size)]
    injective = len(set(images)) == L.size
    surjective = set(families) <= set(images)
    return {
        "sign_vectors": [list(s) for s in signs],
        "quotient_sizes": [t.class_count for t in thetas],
        "families": len(families),
        "lattice_size": L.size,
        "bijective": injective and surjective and len(families) == L.size,
    }

"""Congruences of finite distributive lattices.

The closure seeds a union-find with the generating pairs and then repeatedly
relates ``(u ∧ w, r ∧ w)`` and ``(u ∨ w, r ∨ w)`` for every element ``u`` with
class root ``r`` and every ``w`` until nothing new is merged. Comparing each
element against its root is enough: compatibility for any two members of a
class follows by transitivity.
"""
from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .dataclasses import Congruence, Lattice, Quotient
from .errors import NotALattice, PreconditionViolated
from .lattice_core import check_element, leq, validate_lattice

logger = logging.getLogger(__name__)


class UnionFind:
    def __init__(self, size: int):
        self.parents: List[int] = list(range(size))
        self.heights: List[int] = [1] * size

    def root(self, v: int) -> int:
        path = []
        while self.parents[v] != v:
            path.append(v)
            v = self.parents[v]
        for p in path:
            self.parents[p] = v
        return v

    def join(self, v1: int, v2: int) -> bool:
        """Merge the classes of ``v1`` and ``v2``; False if already merged."""
        r1, r2 = self.root(v1), self.root(v2)
        if r1 == r2:
            return False
        if self.heights[r1] > self.heights[r2]:
            r1, r2 = r2, r1
        self.parents[r1] = r2
        self.heights[r2] = max(self.heights[r2], self.heights[r1] + 1)
        return True

    def roots(self) -> np.ndarray:
        return np.array([self.root(v) for v in range(len(self.parents))], dtype=np.int64)


def _canonical(L: Lattice, roots: np.ndarray) -> Congruence:
    """Number classes by their minimum element."""
    ids: Dict[int, int] = {}
    reps: List[int] = []
    classes: List[int] = []
    for a in range(L.size):
        r = int(roots[a])
        if r not in ids:
            ids[r] = len(reps)
            reps.append(a)
        classes.append(ids[r])
    return Congruence(lattice=L, classes=tuple(classes), representatives=tuple(reps))


def congruence_closure(L: Lattice, pairs: Iterable[Tuple[int, int]] = ()) -> Congruence:
    """Least congruence of ``L`` relating every given pair."""
    uf = UnionFind(L.size)
    for a, b in pairs:
        check_element(L, a, b)
        uf.join(a, b)
    rounds = 0
    while True:
        rounds += 1
        roots = uf.roots()
        merged = False
        for op in (L.meet, L.join):
            mine = op  # [u, w] = u·w
            theirs = op[roots]  # [u, w] = root(u)·w
            differ = roots[mine] != roots[theirs]
            for u, w in np.argwhere(differ):
                merged |= uf.join(int(mine[u, w]), int(theirs[u, w]))
        if not merged:
            break
    logger.debug("congruence closure on %s converged after %d rounds", L.name or "lattice", rounds)
    return _canonical(L, uf.roots())


def discrete_congruence(L: Lattice) -> Congruence:
    return congruence_closure(L, ())


def congruence_from_classes(L: Lattice, classes: Sequence[int]) -> Congruence:
    """Validate a user-supplied partition (one class id per element)."""
    if len(classes) != L.size:
        raise NotALattice("congruence (one class id per element)", (len(classes),))
    cls = np.asarray(classes, dtype=np.int64)
    for name, op in (("meet", L.meet), ("join", L.join)):
        # a ~ a' must give a·b ~ a'·b for every b
        for a in range(L.size):
            for a2 in np.flatnonzero(cls == cls[a]):
                bad = np.flatnonzero(cls[op[a]] != cls[op[int(a2)]])
                if bad.size:
                    raise NotALattice(f"congruence compatibility ({name})", (a, int(a2), int(bad[0])))
    uf = UnionFind(L.size)
    first: Dict[int, int] = {}
    for a, c in enumerate(classes):
        if c in first:
            uf.join(first[c], a)
        else:
            first[c] = a
    return _canonical(L, uf.roots())


def related(theta: Congruence, x: int, y: int) -> bool:
    return theta.classes[x] == theta.classes[y]


def join_congruences(theta: Congruence, phi: Congruence) -> Congruence:
    """Least congruence containing both."""
    L = theta.lattice
    pairs = [(a, theta.representatives[c]) for a, c in enumerate(theta.classes)]
    pairs += [(a, phi.representatives[c]) for a, c in enumerate(phi.classes)]
    return congruence_closure(L, pairs)


def quotient(L: Lattice, theta: Congruence) -> Quotient:
    """``L/θ`` on class ids, with the projection ``a ↦ [a]``."""
    cls = np.asarray(theta.classes, dtype=np.int64)
    reps = np.asarray(theta.representatives, dtype=np.int64)
    meet_t = cls[L.meet[reps[:, None], reps[None, :]]]
    join_t = cls[L.join[reps[:, None], reps[None, :]]]
    labels = [f"[{L.label(int(r))}]" for r in reps]
    Q = validate_lattice(meet_t, join_t, int(cls[L.bottom]), int(cls[L.top]), labels,
                         name=f"{L.name}/θ" if L.name else "")
    return Quotient(lattice=Q, projection=theta.classes, congruence=theta)


def quotient_by(L: Lattice, pairs: Iterable[Tuple[int, int]]) -> Quotient:
    return quotient(L, congruence_closure(L, pairs))


def leq_congruence(L: Lattice, a: int, b: int) -> Congruence:
    """The congruence ``(a ≤ b)``, generated by ``(a ∨ b, b)``."""
    return congruence_closure(L, [(int(L.join[a, b]), b)])


def gratzer_criterion(L: Lattice, a: int, b: int, x: int, y: int) -> bool:
    """Membership of ``(x, y)`` in the principal congruence ``(a = b)`` for ``a ≤ b``.

    ``x ≡ y`` iff ``x ∧ a = y ∧ a`` and ``x ∨ b = y ∨ b``.
    """
    check_element(L, x, y)
    if not leq(L, a, b):
        raise PreconditionViolated(f"criterion needs a ≤ b, got ({L.label(a)}, {L.label(b)})", [a, b])
    return bool(L.meet[x, a] == L.meet[y, a] and L.join[x, b] == L.join[y, b])


def principal_eq_meet_join(L: Lattice, a: int, b: int) -> bool:
    """``(a = b)`` and ``(a ∧ b = a ∨ b)`` are the same congruence."""
    check_element(L, a, b)
    lhs = congruence_closure(L, [(a, b)])
    rhs = congruence_closure(L, [(int(L.meet[a, b]), int(L.join[a, b]))])
    return lhs.classes == rhs.classes


def is_zero_quotient(L: Lattice, a: int, b: int) -> bool:
    """``L/(a = b)`` collapses to a single element."""
    check_element(L, a, b)
    return congruence_closure(L, [(a, b)]).class_count == 1


def is_complement_pair(L: Lattice, a: int, b: int) -> bool:
    return bool(L.meet[a, b] == L.bottom and L.join[a, b] == L.top)

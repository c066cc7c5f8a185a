"""Finite simplicial complexes, joins, and reduced integral homology.

A complex is stored by its facets; the void complex (no simplices at all, not
even the empty one as a facet) is the unit for the join and carries the single
reduced class in degree -1.
"""
from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .dataclasses import FiniteMap, HomologyProfile, SimplicialComplex
from .errors import EnumerationTooLarge, MatrixTooLarge, PreconditionViolated, ShapeMismatch
from .lattice_congruence import UnionFind
from .normal_form import diagonalize, torsion

logger = logging.getLogger(__name__)

MAX_SIMPLICES = 20_000
MAX_MAPS = 1 << 17


def make_complex(vertices: int, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Normalise facets: sorted, distinct, none contained in another."""
    if vertices < 0:
        raise ShapeMismatch("vertex count must be non-negative", vertices)
    sets = set()
    for facet in facets:
        f = tuple(sorted({int(v) for v in facet}))
        for v in f:
            if not 0 <= v < vertices:
                raise ShapeMismatch(f"vertex {v} out of range for {vertices} vertices", v)
        if f:
            sets.add(f)
    maximal = [f for f in sets if not any(f != g and set(f) <= set(g) for g in sets)]
    return SimplicialComplex(vertices=vertices, facets=tuple(sorted(maximal, key=lambda f: (len(f), f))))


def complex_from_json(data: Dict[str, object]) -> SimplicialComplex:
    try:
        return make_complex(int(data["vertices"]), data["facets"])  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ShapeMismatch):
            raise
        raise ShapeMismatch(f"complex JSON needs vertices and facets: {exc}", None) from exc


def void_complex() -> SimplicialComplex:
    return SimplicialComplex(vertices=0, facets=())


def discrete_complex(m: int) -> SimplicialComplex:
    return make_complex(m, [(v,) for v in range(m)])


def simplex(k: int) -> SimplicialComplex:
    """The solid ``k``-simplex."""
    return make_complex(k + 1, [range(k + 1)])


def sphere(a: int) -> SimplicialComplex:
    """``S^a`` as the boundary of the ``(a+1)``-simplex."""
    return make_complex(a + 2, itertools.combinations(range(a + 2), a + 1))


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    shift = K1.vertices
    if K1.is_empty:
        facets = [tuple(v + shift for v in g) for g in K2.facets]
    elif K2.is_empty:
        facets = list(K1.facets)
    else:
        facets = [f + tuple(v + shift for v in g) for f in K1.facets for g in K2.facets]
    return make_complex(K1.vertices + K2.vertices, facets)


def iterated_join(K: SimplicialComplex, n: int) -> SimplicialComplex:
    """``K * K * … * K`` (``n`` copies), associated to the left."""
    if n < 1:
        raise PreconditionViolated(f"join power must be at least 1, got {n}", n)
    out = K
    for _ in range(n - 1):
        out = join(out, K)
    return out


def join_is_associative(K1: SimplicialComplex, K2: SimplicialComplex, K3: SimplicialComplex) -> bool:
    """Both bracketings number vertices K1, K2, K3 in turn, so the identity is the isomorphism."""
    left = join(join(K1, K2), K3)
    right = join(K1, join(K2, K3))
    return left.vertices == right.vertices and set(left.facets) == set(right.facets)


def induced_subcomplex(K: SimplicialComplex, keep: Iterable[int]) -> SimplicialComplex:
    """Restriction to ``keep``, renumbered in increasing order."""
    order = sorted(set(keep))
    index = {v: k for k, v in enumerate(order)}
    faces = [[index[v] for v in f if v in index] for f in K.facets]
    return make_complex(len(order), faces)


def simplices(K: SimplicialComplex) -> List[List[Tuple[int, ...]]]:
    """All faces by dimension, each list sorted."""
    by_dim: List[set] = [set() for _ in range(K.dimension + 1)]
    total = 0
    for f in K.facets:
        for k in range(1, len(f) + 1):
            for face in itertools.combinations(f, k):
                if face not in by_dim[k - 1]:
                    by_dim[k - 1].add(face)
                    total += 1
                    if total > MAX_SIMPLICES:
                        raise MatrixTooLarge(total, MAX_SIMPLICES)
    return [sorted(s) for s in by_dim]


def reduced_euler_characteristic(K: SimplicialComplex) -> int:
    return -1 + sum((-1) ** k * len(s) for k, s in enumerate(simplices(K)))


def connected_components(K: SimplicialComplex) -> int:
    used = sorted({v for f in K.facets for v in f})
    uf = UnionFind(K.vertices)
    for f in K.facets:
        for v in f[1:]:
            uf.join(f[0], v)
    return len({uf.root(v) for v in used})


def boundary_matrix(lower: Sequence[Tuple[int, ...]], upper: Sequence[Tuple[int, ...]]) -> np.ndarray:
    index = {s: i for i, s in enumerate(lower)}
    D = np.zeros((len(lower), len(upper)), dtype=np.int64)
    for j, s in enumerate(upper):
        for i in range(len(s)):
            D[index[s[:i] + s[i + 1:]], j] = (-1) ** i
    return D


def homology(K: SimplicialComplex) -> HomologyProfile:
    """Reduced homology with the augmentation ``C_0 → Z`` as ``∂_0``."""
    if K.is_empty:
        return HomologyProfile(betti=(), torsion=(), betti_minus_one=1)
    chains = simplices(K)
    top = len(chains) - 1
    ranks: List[int] = []
    factors: List[Tuple[int, ...]] = []
    for k in range(top + 1):
        if k == 0:
            D = np.ones((1, len(chains[0])), dtype=np.int64)
        else:
            D = boundary_matrix(chains[k - 1], chains[k])
        diagonal, _ = diagonalize(D)
        ranks.append(sum(1 for d in diagonal if d))
        factors.append(torsion(diagonal))
    ranks.append(0)
    betti = tuple(len(chains[k]) - ranks[k] - ranks[k + 1] for k in range(top + 1))
    tors = tuple(factors[k + 1] if k + 1 <= top else () for k in range(top + 1))
    logger.debug("homology of complex with %d facets: %s", len(K.facets), betti)
    return HomologyProfile(betti=betti, torsion=tors, betti_minus_one=1 - ranks[0])


# --- maps and truncation --------------------------------------------------

def join_of_maps(f: FiniteMap, g: FiniteMap) -> Tuple[SimplicialComplex, List[Dict[str, object]]]:
    """``A *_X B`` for discrete ``A``, ``B``: an edge ``(a, b)`` whenever ``f(a) = g(b)``.

    The report compares the part over each ``x`` with ``fib_f(x) * fib_g(x)``.
    """
    if f.codomain != g.codomain:
        raise ShapeMismatch(f"maps into {f.codomain} and {g.codomain} points", [f.codomain, g.codomain])
    A = f.domain
    edges = [(a, A + b) for a in range(f.domain) for b in range(g.domain) if f(a) == g(b)]
    covered = {v for e in edges for v in e}
    loose = [(v,) for v in range(A + g.domain) if v not in covered]
    K = make_complex(A + g.domain, edges + loose)
    fibers_f, fibers_g = f.fibers(), g.fibers()
    report = []
    for x in range(f.codomain):
        over = induced_subcomplex(K, fibers_f[x] + [A + b for b in fibers_g[x]])
        expected = join(discrete_complex(len(fibers_f[x])), discrete_complex(len(fibers_g[x])))
        report.append({
            "point": x,
            "fiber_sizes": [len(fibers_f[x]), len(fibers_g[x])],
            "ok": over == expected,
        })
    return K, report


def maps_to_discrete(K: SimplicialComplex, X: int, bound: int = MAX_MAPS) -> int:
    """Count maps from the vertices of ``K`` to ``X`` points constant on every simplex."""
    total = X ** K.vertices
    if total > bound:
        raise EnumerationTooLarge(total, bound)
    return sum(
        1
        for table in itertools.product(range(X), repeat=K.vertices)
        if all(len({table[v] for v in facet}) <= 1 for facet in K.facets)
    )


def truncation_stabilization(A: int, X: int, n: int = 0, bound: int = MAX_MAPS) -> Dict[str, object]:
    """Maps ``A^{*2} → X`` constant on simplices against ``X^{‖A‖}``."""
    if n != 0:
        raise PreconditionViolated("only the set-level case n = 0 is checked", n)
    base = discrete_complex(A)
    square = iterated_join(base, 2)
    lhs = maps_to_discrete(square, X, bound)
    rhs = X if A > 0 else 1
    powers = {k: connected_components(iterated_join(base, k)) for k in range(2, 5)} if A > 0 else {}
    connected = all(c == 1 for c in powers.values())
    return {
        "set_size": A,
        "target_size": X,
        "maps_from_set": X ** A,
        "maps_from_join": lhs,
        "maps_from_truncation": rhs,
        "components": {str(k): c for k, c in powers.items()},
        "verdict": lhs == rhs and connected,
    }


def expected_join_power_betti(m: int, n: int) -> Tuple[int, ...]:
    """Reduced Betti numbers of ``(m points)^{*n}``: ``(m-1)^n`` in degree ``n-1``."""
    return tuple((m - 1) ** n if k == n - 1 else 0 for k in range(n))

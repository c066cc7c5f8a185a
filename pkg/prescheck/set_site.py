"""Presentations on finite sets, their covers, descent and local choice.

A presentation is a class of finite sets closed under isomorphism, so it is a
predicate on cardinalities. Maps are tables ``x ↦ f(x)`` on ``0..domain-1``.
"""
from __future__ import annotations

import itertools
import logging
import random
import re
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .dataclasses import CoverVerdict, FiniteMap, LocalChoice, PresentationSpec
from .errors import EnumerationTooLarge, NotSurjective, PreconditionViolated, ShapeMismatch, SpecParseError

logger = logging.getLogger(__name__)

ENUMERATION_BOUND = 10**6


# --- maps -----------------------------------------------------------------

def make_map(domain: int, codomain: int, table: Sequence[int]) -> FiniteMap:
    if domain < 0 or codomain < 0:
        raise ShapeMismatch("carrier sizes must be non-negative", [domain, codomain])
    if len(table) != domain:
        raise ShapeMismatch(f"table has {len(table)} entries for a domain of {domain}", [len(table), domain])
    for x, y in enumerate(table):
        if not 0 <= int(y) < codomain:
            raise ShapeMismatch(f"f({x}) = {y} outside codomain of size {codomain}", [x, int(y)])
    return FiniteMap(domain=domain, codomain=codomain, table=tuple(int(y) for y in table))


def map_from_json(data: Dict[str, object]) -> FiniteMap:
    try:
        return make_map(int(data["domain"]), int(data["codomain"]), list(data["table"]))  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ShapeMismatch):
            raise
        raise ShapeMismatch(f"map JSON needs domain, codomain and table: {exc}", None) from exc


def is_surjective(f: FiniteMap) -> bool:
    return len(set(f.table)) == f.codomain


# --- presentations --------------------------------------------------------

@lru_cache(maxsize=64)
def sigma_closure(generators: Tuple[int, ...], bound: int) -> frozenset:
    """Cardinalities ``≤ bound`` in the Σ-closed class generated by ``1`` and ``generators``."""
    members = {1, *(g for g in generators if g <= bound)}
    while True:
        grown = set(members)
        for base in sorted(members):
            reach = {0}
            for _ in range(base):
                reach = {r + s for r in reach for s in members if r + s <= bound}
            grown |= reach
        if grown == members:
            return frozenset(members)
        members = grown


def _generated(generators: Tuple[int, ...]) -> Callable[[int], bool]:
    def member(n: int) -> bool:
        return n in sigma_closure(generators, max(n, 16))
    return member


BUILTIN_PRESENTATIONS: Dict[str, PresentationSpec] = {
    "singleton-only": PresentationSpec("singleton-only", lambda n: n == 1),
    "nonempty": PresentationSpec("nonempty", lambda n: n >= 1),
    "odd-cardinality": PresentationSpec("odd-cardinality", lambda n: n % 2 == 1),
    "contains-empty": PresentationSpec("contains-empty", lambda n: n in (0, 1), generators=(0,)),
}
_ALIASES = {"odd": "odd-cardinality", "singleton": "singleton-only", "empty": "contains-empty"}


def parse_presentation(text: str) -> PresentationSpec:
    """Built-in name, ``at-most:N``, ``multiple-of:N`` or ``generated:k1,k2,…``."""
    name = text.strip()
    name = _ALIASES.get(name, name)
    if name in BUILTIN_PRESENTATIONS:
        return BUILTIN_PRESENTATIONS[name]
    m = re.fullmatch(r"at-most:(\d+)", name)
    if m:
        cap = int(m.group(1))
        return PresentationSpec(name, lambda n: n <= cap)
    m = re.fullmatch(r"multiple-of:(\d+)", name)
    if m and int(m.group(1)) >= 1:
        k = int(m.group(1))
        return PresentationSpec(name, lambda n: n == 1 or n % k == 0, generators=(k,))
    m = re.fullmatch(r"generated:(\d+(?:,\d+)*)", name)
    if m:
        gens = tuple(sorted({int(g) for g in m.group(1).split(",")}))
        return PresentationSpec(name, _generated(gens), generators=gens)
    raise SpecParseError(f"unknown presentation {text!r}", text)


def is_presentation(T: PresentationSpec, bound: int) -> Dict[str, object]:
    """``1 ∈ T`` and Σ-closure for bases and fibers of size at most ``bound``.

    Fiber families are multisets scanned largest sizes first, so the reported
    witness is the most extreme failing family of the smallest failing base.
    """
    if bound < 1:
        raise PreconditionViolated(f"sample bound must be at least 1, got {bound}", bound)
    if 1 not in T:
        return {"presentation": T.name, "bound": bound, "verdict": False, "witness": {"reason": "1 is not in T"}}
    members = [k for k in range(bound, -1, -1) if k in T]
    checked = 0
    for base in range(bound + 1):
        if base not in T:
            continue
        for fibers in itertools.combinations_with_replacement(members, base):
            checked += 1
            if sum(fibers) not in T:
                logger.debug("%s not Σ-closed: base %d fibers %s", T.name, base, fibers)
                return {
                    "presentation": T.name,
                    "bound": bound,
                    "verdict": False,
                    "witness": {"base": base, "fibers": list(fibers), "total": sum(fibers)},
                }
    return {"presentation": T.name, "bound": bound, "verdict": True, "witness": None, "families": checked}


# --- covers ---------------------------------------------------------------

def is_cover(f: FiniteMap, T: PresentationSpec) -> CoverVerdict:
    sizes = tuple(len(fib) for fib in f.fibers())
    ok = tuple(s in T for s in sizes)
    witness = next((y for y, good in enumerate(ok) if not good), None)
    return CoverVerdict(map=f, presentation=T.name, fiber_sizes=sizes, fiber_ok=ok, verdict=all(ok), witness=witness)


def compose_maps(f: FiniteMap, g: FiniteMap) -> FiniteMap:
    """``g ∘ f``."""
    if f.codomain != g.domain:
        raise ShapeMismatch(f"cannot compose: codomain {f.codomain} against domain {g.domain}", [f.codomain, g.domain])
    return FiniteMap(f.domain, g.codomain, tuple(g(f(x)) for x in range(f.domain)))


def compose_covers(f: FiniteMap, g: FiniteMap, T: PresentationSpec) -> Tuple[FiniteMap, CoverVerdict]:
    h = compose_maps(f, g)
    return h, is_cover(h, T)


def pullback(f: FiniteMap, g: FiniteMap) -> Tuple[List[Tuple[int, int]], FiniteMap, FiniteMap]:
    """Carrier ``{(x, y) : f(x) = g(y)}`` in lexicographic order with both projections."""
    if f.codomain != g.codomain:
        raise ShapeMismatch(f"cannot pull back: codomains {f.codomain} and {g.codomain}", [f.codomain, g.codomain])
    carrier = [(x, y) for x in range(f.domain) for y in range(g.domain) if f(x) == g(y)]
    to_x = FiniteMap(len(carrier), f.domain, tuple(x for x, _ in carrier))
    to_y = FiniteMap(len(carrier), g.domain, tuple(y for _, y in carrier))
    return carrier, to_x, to_y


def pullback_cover(f: FiniteMap, g: FiniteMap, T: PresentationSpec) -> Tuple[FiniteMap, CoverVerdict]:
    """Pull ``f: X → Z`` back along ``g: Y → Z``; the result maps onto ``Y``."""
    _, _, to_y = pullback(f, g)
    return to_y, is_cover(to_y, T)


def equivalences_are_covers(n: int, T: PresentationSpec) -> bool:
    return all(is_cover(make_map(n, n, p), T).verdict for p in itertools.permutations(range(n)))


def random_cover(rng: random.Random, T: PresentationSpec, codomain: int, max_fiber: int = 3) -> FiniteMap:
    """A ``T``-cover onto ``codomain`` points with fiber sizes drawn from ``T``."""
    sizes = [k for k in range(max_fiber + 1) if k in T]
    if not sizes:
        raise PreconditionViolated(f"{T.name} has no member of size at most {max_fiber}", max_fiber)
    table = [y for y in range(codomain) for _ in range(rng.choice(sizes))]
    rng.shuffle(table)
    return FiniteMap(len(table), codomain, tuple(table))


def random_surjection(rng: random.Random, domain_max: int, codomain_max: int) -> FiniteMap:
    codomain = rng.randint(1, codomain_max)
    domain = rng.randint(codomain, max(codomain, domain_max))
    table = list(range(codomain)) + [rng.randrange(codomain) for _ in range(domain - codomain)]
    rng.shuffle(table)
    return FiniteMap(domain, codomain, tuple(table))


# --- descent for sets -----------------------------------------------------

def set_sheaf_equalizer(X: int, f: FiniteMap, bound: Optional[int] = None) -> Dict[str, object]:
    """``X^B → {s ∈ X^A : s(a) = s(a') whenever f(a) = f(a')}`` is a bijection."""
    limit = ENUMERATION_BOUND if bound is None else bound
    for size in (X ** f.domain, X ** f.codomain):
        if size > limit:
            raise EnumerationTooLarge(size, limit)
    equalizer = set()
    scanned = 0
    for s in itertools.product(range(X), repeat=f.domain):
        scanned += 1
        if all(s[a] == s[b] for a in range(f.domain) for b in range(a + 1, f.domain) if f(a) == f(b)):
            equalizer.add(s)
    images = [tuple(t[f(a)] for a in range(f.domain)) for t in itertools.product(range(X), repeat=f.codomain)]
    injective = len(set(images)) == len(images)
    bijective = injective and set(images) == equalizer
    witness = None
    if not bijective:
        witness = {"equalizer_size": len(equalizer), "base_size": len(images), "injective": injective}
    return {
        "target": X,
        "map": f.as_dict(),
        "functions_scanned": scanned,
        "equalizer_size": len(equalizer),
        "base_size": len(images),
        "bijective": bijective,
        "witness": witness,
    }


# --- projectivity ---------------------------------------------------------

def _surjections(domain: int, codomain: int):
    for table in itertools.product(range(codomain), repeat=domain):
        if len(set(table)) == codomain:
            yield table


def _count_maps(target: int, bound: int) -> int:
    return sum(target ** y for y in range(target, bound + 1))


def _split(table: Sequence[int], codomain: int) -> Optional[List[int]]:
    section = [-1] * codomain
    for y, x in enumerate(table):
        if section[x] < 0:
            section[x] = y
    return None if min(section, default=0) < 0 else section


def verify_projectivity(X: int, bound: int, limit: Optional[int] = None) -> Dict[str, object]:
    """Every surjection ``Y → X`` with ``|Y| ≤ bound`` has a section."""
    cap = ENUMERATION_BOUND if limit is None else limit
    total = _count_maps(X, bound)
    if total > cap:
        raise EnumerationTooLarge(total, cap)
    surjections = split = 0
    for y in range(X, bound + 1):
        for table in _surjections(y, X):
            surjections += 1
            section = _split(table, X)
            if section is not None and all(table[section[x]] == x for x in range(X)):
                split += 1
    return {"target": X, "bound": bound, "surjections": surjections, "split": split, "verdict": split == surjections}


def verify_projectivity_sigma(base_fibers: Sequence[int], bound: int, limit: Optional[int] = None) -> Dict[str, object]:
    """Projectivity of ``Σ_{b} F_b`` with sections assembled fiberwise.

    A surjection onto the total space restricts to a surjection onto each
    fiber; each restriction is split and the pieces are glued.
    """
    cap = ENUMERATION_BOUND if limit is None else limit
    total_size = sum(base_fibers)
    offsets = list(itertools.accumulate([0, *base_fibers]))
    count = _count_maps(total_size, bound)
    if count > cap:
        raise EnumerationTooLarge(count, cap)
    base = verify_projectivity(len(base_fibers), len(base_fibers), cap)
    fibers = [verify_projectivity(k, k, cap) for k in base_fibers]
    surjections = split = 0
    for y in range(total_size, bound + 1):
        for table in _surjections(y, total_size):
            surjections += 1
            section = [-1] * total_size
            for b, k in enumerate(base_fibers):
                lo = offsets[b]
                over = [(src, x - lo) for src, x in enumerate(table) if lo <= x < lo + k]
                local = _split([x for _, x in over], k)
                if local is None:
                    break
                for x, pos in enumerate(local):
                    section[lo + x] = over[pos][0]
            if min(section, default=0) >= 0 and all(table[section[x]] == x for x in range(total_size)):
                split += 1
    return {
        "base_fibers": list(base_fibers),
        "bound": bound,
        "surjections": surjections,
        "split": split,
        "base_projective": base["verdict"],
        "fibers_projective": all(f["verdict"] for f in fibers),
        "verdict": split == surjections and base["verdict"] and all(f["verdict"] for f in fibers),
    }


def verify_projectivity_sum(a: int, b: int, bound: int, limit: Optional[int] = None) -> Dict[str, object]:
    """Binary coproduct ``A + B``: the Σ over a two-point base."""
    return verify_projectivity_sigma((a, b), bound, limit)


# --- local choice ---------------------------------------------------------

Choice = Callable[[int, List[int]], Sequence[int]]


def default_choice(T: PresentationSpec) -> Choice:
    """Take the whole fiber when it lies in ``T``, else its least point."""
    def choose(d: int, fiber: List[int]) -> Sequence[int]:
        if len(fiber) in T:
            return list(fiber)
        if 1 in T:
            return [min(fiber)]
        raise PreconditionViolated(f"no member of {T.name} maps into the fiber over {d}", d)
    return choose


def local_choice(
    D: int,
    C: int,
    g: FiniteMap,
    f: FiniteMap,
    T: PresentationSpec,
    choice: Optional[Choice] = None,
) -> LocalChoice:
    """Lift ``g: D → C`` through ``f: X → C`` after passing to a ``T``-cover of ``D``.

    ``Z`` is the disjoint union over ``d`` of the chosen members; ``p`` projects
    to ``d`` and ``h`` records the chosen point of ``fib_f(g(d))``.
    """
    if g.domain != D or g.codomain != C or f.codomain != C:
        raise ShapeMismatch("local choice needs g: D → C and f: X → C", [g.domain, g.codomain, f.codomain])
    fibers = f.fibers()
    for d in range(D):
        if not fibers[g(d)]:
            raise NotSurjective(g(d))
    choose = choice or default_choice(T)
    p_table: List[int] = []
    h_table: List[int] = []
    for d in range(D):
        fiber = fibers[g(d)]
        picked = list(choose(d, fiber))
        for x in picked:
            if x not in fiber:
                raise PreconditionViolated(f"choice {x} for {d} is outside fib_f(g({d}))", [d, x])
        p_table.extend([d] * len(picked))
        h_table.extend(picked)
    p = FiniteMap(len(p_table), D, tuple(p_table))
    h = FiniteMap(len(h_table), f.domain, tuple(h_table))
    commutes = all(f(h(z)) == g(p(z)) for z in range(p.domain))
    return LocalChoice(z_size=p.domain, p=p, h=h, commutes=commutes, cover=is_cover(p, T))

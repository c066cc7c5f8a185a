"""Finite commutative rings and their modules.

Rings and modules carry full operation tables. Homomorphisms are enumerated
through additive generators: an assignment of generator images is extended
along the additive Cayley graph and kept only if it respects multiplication.
Tensor products are presented as finite abelian groups and reduced with
:mod:`prescheck.normal_form`.
"""
from __future__ import annotations

import itertools
import json
import logging
import re
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dataclasses import FiniteModule, FiniteRing, Ideal, RingHom, TensorProduct
from .errors import NotAModule, NotARing, NotUnimodular, ShapeMismatch, SpecParseError
from .normal_form import finite_abelian_group

logger = logging.getLogger(__name__)


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if hits.size else None


def _table(raw, name: str, n: Optional[int] = None, ndim: int = 2) -> np.ndarray:
    try:
        t = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotARing(f"totality ({name})", ()) from exc
    size = n if n is not None else (t.shape[0] if t.ndim else 0)
    if t.ndim != ndim or size == 0 or any(s != size for s in t.shape):
        raise NotARing(f"totality ({name} is not a square table)", ())
    hit = _first((t < 0) | (t >= size))
    if hit is not None:
        raise NotARing(f"totality ({name} value out of range)", hit)
    t.setflags(write=False)
    return t


def _check_monoid(op: np.ndarray, unit: int, name: str) -> None:
    n = op.shape[0]
    hit = _first(op != op.T)
    if hit is not None:
        raise NotARing(f"commutativity ({name})", hit)
    hit = _first(op[unit] != np.arange(n))
    if hit is not None:
        raise NotARing(f"identity ({name})", hit)
    for a in range(n):
        hit = _first(op[op[a]] != op[a][op])
        if hit is not None:
            raise NotARing(f"associativity ({name})", (a, *hit))


def _negation(add: np.ndarray, zero: int) -> np.ndarray:
    rows, cols = np.nonzero(add == zero)
    neg = np.full(add.shape[0], -1, dtype=np.int64)
    neg[rows[::-1]] = cols[::-1]
    hit = _first(neg < 0)
    if hit is not None:
        raise NotARing("additive inverse", hit)
    return neg


def validate_ring(add, mul, zero: int, one: int, labels: Sequence[str] = (), name: str = "") -> FiniteRing:
    """Full axiom scan of a commutative unital ring; the zero ring is allowed."""
    a = _table(add, "add")
    n = a.shape[0]
    m = _table(mul, "mul", n)
    if not (0 <= zero < n and 0 <= one < n):
        raise NotARing("constants out of range", (zero, one))
    _check_monoid(a, zero, "add")
    neg = _negation(a, zero)
    neg.setflags(write=False)
    _check_monoid(m, one, "mul")
    for x in range(n):
        # x·(y + z) against x·y + x·z
        hit = _first(m[x][a] != a[m[x][:, None], m[x][None, :]])
        if hit is not None:
            raise NotARing("distributivity", (x, *hit))
    labels = tuple(str(s) for s in labels)
    if labels and len(labels) != n:
        raise NotARing("labels (one label per element)", (len(labels),))
    if n == 1:
        logger.debug("ring %r is the zero ring", name)
    return FiniteRing(add=a, mul=m, neg=neg, zero=int(zero), one=int(one), labels=labels, name=name)


# --- constructions --------------------------------------------------------

def cyclic_ring(n: int) -> FiniteRing:
    if n < 1:
        raise SpecParseError(f"Z/{n} is not a ring", n)
    idx = np.arange(n)
    return validate_ring(
        (idx[:, None] + idx[None, :]) % n,
        (idx[:, None] * idx[None, :]) % n,
        0,
        1 % n,
        [str(k) for k in range(n)],
        name=f"Z/{n}" if n > 1 else "0",
    )


def zero_ring() -> FiniteRing:
    return cyclic_ring(1)


def product_ring(*rings: FiniteRing) -> FiniteRing:
    """Componentwise product; ids in mixed radix, first factor most significant."""
    sizes = [R.size for R in rings]
    comps = np.array(list(itertools.product(*[range(s) for s in sizes])), dtype=np.int64)
    comps = comps.reshape(len(comps), len(rings))
    n = comps.shape[0]

    def combine(pick) -> np.ndarray:
        out = np.zeros((n, n), dtype=np.int64)
        for k, R in enumerate(rings):
            c = comps[:, k]
            out = out * sizes[k] + pick(R)[c[:, None], c[None, :]]
        return out

    def constant(pick) -> int:
        out = 0
        for k, R in enumerate(rings):
            out = out * sizes[k] + pick(R)
        return out

    labels = ["(" + ",".join(R.label(int(c)) for R, c in zip(rings, row)) + ")" for row in comps]
    return validate_ring(
        combine(lambda R: R.add),
        combine(lambda R: R.mul),
        constant(lambda R: R.zero),
        constant(lambda R: R.one),
        labels,
        name="×".join(R.name for R in rings) or "0",
    )


def integer_element(R: FiniteRing, k: int) -> int:
    """The image of the integer ``k`` in ``R``."""
    x = R.zero
    step = R.one if k >= 0 else int(R.neg[R.one])
    for _ in range(abs(k)):
        x = int(R.add[x, step])
    return x


def _poly_label(R: FiniteRing, coeffs: Sequence[int]) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == R.zero:
            continue
        power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        coef = R.label(c)
        if k and c == R.one:
            coef = ""
        terms.append(coef + power)
    return "+".join(terms) or "0"


def polynomial_quotient(R: FiniteRing, monic: Sequence[int], name: str = "") -> FiniteRing:
    """``R[x]/(p)`` for monic ``p`` given as coefficient ids, constant term first.

    Element ``c0 + c1·x + …`` has id ``Σ ck·|R|^k``; constants keep their ids.
    """
    d = len(monic) - 1
    if d < 1 or monic[-1] != R.one:
        raise SpecParseError("polynomial must be monic of degree at least 1", list(monic))
    q = R.size
    vecs = list(itertools.product(range(q), repeat=d))
    vecs = [tuple(reversed(v)) for v in vecs]  # constant term first
    index = {v: sum(c * q**k for k, c in enumerate(v)) for v in vecs}
    n = q**d
    by_id: List[Tuple[int, ...]] = [()] * n
    for v, i in index.items():
        by_id[i] = v

    def reduce(prod: List[int]) -> Tuple[int, ...]:
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c == R.zero:
                continue
            for j in range(d):
                prod[k - d + j] = int(R.add[prod[k - d + j], R.neg[R.mul[c, monic[j]]]])
            prod[k] = R.zero
        return tuple(prod[:d])

    add = np.zeros((n, n), dtype=np.int64)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, u in enumerate(by_id):
        for j, v in enumerate(by_id):
            add[i, j] = index[tuple(int(R.add[a, b]) for a, b in zip(u, v))]
            prod = [R.zero] * (2 * d - 1)
            for s, a in enumerate(u):
                for t, b in enumerate(v):
                    prod[s + t] = int(R.add[prod[s + t], R.mul[a, b]])
            mul[i, j] = index[reduce(prod)]
    labels = [_poly_label(R, v) for v in by_id]
    return validate_ring(add, mul, index[(R.zero,) * d], index[(R.one,) + (R.zero,) * (d - 1)], labels,
                         name=name or f"{R.name}[x]/({_poly_label(R, monic)})")


_TERM = re.compile(r"^(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_polynomial(text: str, R: FiniteRing) -> List[int]:
    """``x^2-x`` style polynomial over ``R`` as coefficient ids, constant first."""
    body = text.replace(" ", "").replace("−", "-")
    if not body:
        raise SpecParseError("empty polynomial", text)
    if body[0] not in "+-":
        body = "+" + body
    coeffs: Dict[int, int] = {}
    for sign, term in re.findall(r"([+-])([^+-]+)", body):
        m = _TERM.match(term)
        if m is None or not term:
            raise SpecParseError(f"cannot parse term {term!r} in {text!r}", text)
        digits, xpart, power = m.groups()
        degree = 0 if not xpart else int(power or 1)
        value = int(digits) if digits else 1
        c = integer_element(R, value if sign == "+" else -value)
        coeffs[degree] = int(R.add[coeffs.get(degree, R.zero), c])
    top = max((k for k, c in coeffs.items() if c != R.zero), default=0)
    out = [coeffs.get(k, R.zero) for k in range(top + 1)]
    if top < 1 or out[-1] != R.one:
        raise SpecParseError(f"{text!r} is not monic over {R.name}", text)
    return out


def _split_args(body: str) -> List[str]:
    out, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:k].strip())
            start = k + 1
    out.append(body[start:].strip())
    return [a for a in out if a]


def ring_to_json(R: FiniteRing) -> Dict[str, object]:
    return {
        "size": R.size,
        "add": R.add.tolist(),
        "mul": R.mul.tolist(),
        "zero": R.zero,
        "one": R.one,
        "labels": list(R.labels) if R.labels else [str(r) for r in range(R.size)],
    }


def ring_from_json(data: Dict[str, object], name: str = "") -> FiniteRing:
    try:
        size = int(data["size"])  # type: ignore[arg-type]
        add, mul = data["add"], data["mul"]
        zero, one = int(data["zero"]), int(data["one"])  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        raise NotARing(f"format (missing or invalid field: {exc})", ()) from exc
    R = validate_ring(add, mul, zero, one, data.get("labels") or (), name=name)  # type: ignore[arg-type]
    if R.size != size:
        raise NotARing(f"format (size {size} does not match tables of size {R.size})", (size,))
    return R


def parse_ring_spec(text: str) -> FiniteRing:
    """``Z/n``, ``0``, ``prod(A, B, …)``, ``quot(A, poly)`` or ``table:<path.json>``."""
    spec = text.strip()
    m = re.fullmatch(r"Z/(\d+)", spec)
    if m:
        return cyclic_ring(int(m.group(1)))
    if spec == "0":
        return zero_ring()
    if spec.startswith("prod(") and spec.endswith(")"):
        return product_ring(*[parse_ring_spec(a) for a in _split_args(spec[5:-1])])
    if spec.startswith("quot(") and spec.endswith(")"):
        args = _split_args(spec[5:-1])
        if len(args) != 2:
            raise SpecParseError(f"quot takes a ring and a polynomial: {text!r}", text)
        base = parse_ring_spec(args[0])
        return polynomial_quotient(base, parse_polynomial(args[1], base))
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecParseError(f"cannot read ring table {path}: {exc}", str(path)) from exc
        return ring_from_json(data, name=path.stem)
    raise SpecParseError(f"unknown ring spec {text!r}", text)


# --- additive structure and homomorphisms ----------------------------------

def additive_presentation(add: np.ndarray, zero: int, prefer: Sequence[int] = ()) -> Tuple[List[int], np.ndarray, np.ndarray]:
    """Greedy generators of a finite abelian group given by its table.

    Returns ``(generators, coefficients, relations)``: row ``x`` of
    ``coefficients`` writes ``x`` in the generators, and the rows of
    ``relations`` generate every relation among them.
    """
    coef: Dict[int, Tuple[int, ...]] = {int(zero): ()}
    gens: List[int] = []
    relations: List[List[int]] = []
    for c in itertools.chain(prefer, range(add.shape[0])):
        c = int(c)
        if c in coef:
            continue
        multiple, order = c, 1
        while multiple not in coef:
            multiple = int(add[multiple, c])
            order += 1
        relations = [r + [0] for r in relations]
        relations.append([-x for x in coef[multiple]] + [order])
        grown: Dict[int, Tuple[int, ...]] = {}
        for h, vec in coef.items():
            x = h
            for j in range(order):
                grown[x] = vec + (j,)
                x = int(add[x, c])
        coef = grown
        gens.append(c)
    t = len(gens)
    coefficients = np.zeros((add.shape[0], t), dtype=np.int64)
    for x, vec in coef.items():
        coefficients[x] = vec
    return gens, coefficients, np.array(relations, dtype=np.int64).reshape(t, t)


def additive_generators(R: FiniteRing) -> List[int]:
    return additive_presentation(R.add, R.zero, prefer=(R.one,))[0]


def _extend_additive(S: FiniteRing, T: FiniteRing, gens: Sequence[int], images: Sequence[int]) -> Optional[np.ndarray]:
    phi = np.full(S.size, -1, dtype=np.int64)
    phi[S.zero] = T.zero
    queue = [S.zero]
    while queue:
        h = queue.pop()
        for g, v in zip(gens, images):
            s, t = int(S.add[h, g]), int(T.add[phi[h], v])
            if phi[s] < 0:
                phi[s] = t
                queue.append(s)
            elif phi[s] != t:
                return None
    return phi


def is_ring_hom(S: FiniteRing, T: FiniteRing, table: Sequence[int]) -> bool:
    phi = np.asarray(table, dtype=np.int64)
    if phi.shape != (S.size,) or np.any((phi < 0) | (phi >= T.size)):
        return False
    return bool(
        phi[S.one] == T.one
        and np.array_equal(phi[S.add], T.add[phi[:, None], phi[None, :]])
        and np.array_equal(phi[S.mul], T.mul[phi[:, None], phi[None, :]])
    )


def ring_homs(S: FiniteRing, T: FiniteRing) -> List[RingHom]:
    """Every unital ring homomorphism ``S → T``, in lexicographic order of tables."""
    gens = additive_generators(S)
    found: List[RingHom] = []
    if not gens:
        if T.is_zero_ring:
            found.append(RingHom(S, T, (T.zero,)))
        return found
    for rest in itertools.product(range(T.size), repeat=len(gens) - 1):
        phi = _extend_additive(S, T, gens, (T.one, *rest))
        if phi is not None and is_ring_hom(S, T, phi):
            found.append(RingHom(S, T, tuple(int(v) for v in phi)))
    found.sort(key=lambda h: h.map)
    logger.debug("%d homs %s -> %s", len(found), S.name, T.name)
    return found


def identity_hom(R: FiniteRing) -> RingHom:
    return RingHom(R, R, tuple(range(R.size)))


def are_isomorphic(A: FiniteRing, B: FiniteRing) -> Optional[RingHom]:
    """A bijective hom ``A → B`` if one exists."""
    if A.size != B.size:
        return None
    for h in ring_homs(A, B):
        if len(set(h.map)) == A.size:
            return h
    return None


def structure_hom(R: FiniteRing, A: FiniteRing) -> RingHom:
    """The structure map making ``A`` an ``R``-algebra.

    Unique for cyclic ``R``; otherwise the constant embedding (ids kept) is
    taken when it is a hom, which is how polynomial quotients are built.
    """
    homs = ring_homs(R, A)
    if len(homs) == 1:
        return homs[0]
    if not homs:
        raise SpecParseError(f"{A.name} is not an algebra over {R.name}: no ring hom", [R.name, A.name])
    constant = tuple(range(R.size))
    for h in homs:
        if h.map == constant:
            return h
    raise SpecParseError(f"{len(homs)} ring homs {R.name} -> {A.name}; the structure map is ambiguous", len(homs))


def parse_algebra_spec(R: FiniteRing, text: str) -> RingHom:
    if text.strip() in ("self", "R"):
        return identity_hom(R)
    return structure_hom(R, parse_ring_spec(text))


# --- ideals ---------------------------------------------------------------

def ideal_generated(R: FiniteRing, gens: Sequence[int]) -> Ideal:
    """Least ideal containing ``gens``: closure under +, − and scalar multiples."""
    mask = np.zeros(R.size, dtype=bool)
    mask[R.zero] = True
    for g in gens:
        if not 0 <= g < R.size:
            raise ShapeMismatch(f"element {g} not in {R.name}", g)
        mask[g] = True
    while True:
        grown = mask.copy()
        members = np.flatnonzero(grown)
        grown[R.mul[:, members].ravel()] = True
        members = np.flatnonzero(grown)
        grown[R.add[np.ix_(members, members)].ravel()] = True
        grown[R.neg[members]] = True
        if np.array_equal(grown, mask):
            break
        mask = grown
    return Ideal(R, tuple(int(x) for x in np.flatnonzero(mask)))


def all_ideals(R: FiniteRing) -> List[Ideal]:
    seen: Dict[Tuple[int, ...], Ideal] = {}
    frontier = [ideal_generated(R, [])]
    while frontier:
        I = frontier.pop()
        if I.members in seen:
            continue
        seen[I.members] = I
        for r in range(R.size):
            if r not in I.members:
                frontier.append(ideal_generated(R, [*I.members, r]))
    return sorted(seen.values(), key=lambda I: (len(I.members), I.members))


def is_unimodular(R: FiniteRing, cover: Sequence[int]) -> bool:
    return ideal_generated(R, cover).is_unit_ideal


def require_unimodular(R: FiniteRing, cover: Sequence[int]) -> None:
    I = ideal_generated(R, cover)
    if not I.is_unit_ideal:
        raise NotUnimodular(tuple(cover), I.members)


def unimodular_covers(R: FiniteRing, max_size: int) -> List[Tuple[int, ...]]:
    """Sets of distinct elements, at most ``max_size`` of them, generating ``(1)``."""
    out = []
    for k in range(1, max_size + 1):
        for cover in itertools.combinations(range(R.size), k):
            if is_unimodular(R, cover):
                out.append(cover)
    return out


# --- localization ---------------------------------------------------------

def is_unit(R: FiniteRing, r: int) -> bool:
    return bool(np.any(R.mul[r] == R.one))


def stable_idempotent(R: FiniteRing, f: int) -> int:
    """The idempotent in the cycle of ``f, f², f³, …``."""
    seen: Dict[int, int] = {}
    orbit: List[int] = []
    x = f
    while x not in seen:
        seen[x] = len(orbit)
        orbit.append(x)
        x = int(R.mul[x, f])
    for c in orbit[seen[x]:]:
        if R.mul[c, c] == c:
            return c
    raise NotARing("multiplicative orbit without idempotent", (f,))  # pragma: no cover


def localization_carrier(R: FiniteRing, f: int) -> List[int]:
    e = stable_idempotent(R, f)
    return sorted({int(x) for x in R.mul[e]})


def idempotent_ring(R: FiniteRing, e: int, name: str = "") -> Tuple[FiniteRing, RingHom]:
    """``eR`` with unit ``e`` and the projection ``r ↦ e·r``."""
    carrier = np.array(sorted({int(x) for x in R.mul[e]}), dtype=np.int64)
    index = np.full(R.size, -1, dtype=np.int64)
    index[carrier] = np.arange(len(carrier))
    L = validate_ring(
        index[R.add[carrier[:, None], carrier[None, :]]],
        index[R.mul[carrier[:, None], carrier[None, :]]],
        int(index[R.zero]),
        int(index[e]),
        [R.label(int(c)) for c in carrier],
        name=name,
    )
    return L, RingHom(R, L, tuple(int(index[x]) for x in R.mul[e]))


def localize(R: FiniteRing, f: int) -> Tuple[FiniteRing, RingHom]:
    """``R_f`` as ``eR`` for the stable idempotent ``e`` of ``f``."""
    e = stable_idempotent(R, f)
    logger.debug("localize %s at %s: idempotent %s", R.name, R.label(f), R.label(e))
    return idempotent_ring(R, e, name=f"{R.name}[1/{R.label(f)}]")


@lru_cache(maxsize=1)
def standard_test_family() -> Tuple[FiniteRing, ...]:
    rings = [cyclic_ring(n) for n in (1, 2, 3, 4, 5, 6, 9, 12)]
    rings.append(product_ring(cyclic_ring(2), cyclic_ring(2)))
    return tuple(rings)


def verify_localization(
    R: FiniteRing,
    f: int,
    candidate: Tuple[FiniteRing, RingHom],
    family: Optional[Sequence[FiniteRing]] = None,
) -> bool:
    """Universal property of ``R → L`` inverting ``f``, by enumerating homs."""
    L, phi = candidate
    if not is_ring_hom(R, L, phi.map) or not is_unit(L, phi(f)):
        return False
    for S in family if family is not None else standard_test_family():
        factorings: Dict[Tuple[int, ...], int] = {}
        for chi in ring_homs(L, S):
            composite = tuple(chi.map[phi.map[r]] for r in range(R.size))
            factorings[composite] = factorings.get(composite, 0) + 1
        for psi in ring_homs(R, S):
            if is_unit(S, psi(f)) and factorings.get(psi.map, 0) != 1:
                logger.debug("universal property fails at %s via %s", S.name, psi.map)
                return False
    return True


def localization_product(R: FiniteRing, f: int, g: int) -> bool:
    """``R_{fg}`` against ``e_f·e_g·R``, compared by an explicit hom under ``R``."""
    left, phi1 = localize(R, int(R.mul[f, g]))
    e = int(R.mul[stable_idempotent(R, f), stable_idempotent(R, g)])
    right, phi2 = idempotent_ring(R, e)
    if left.size != right.size:
        return False
    chi = [-1] * left.size
    for r in range(R.size):
        a, b = phi1(r), phi2(r)
        if chi[a] < 0:
            chi[a] = b
        elif chi[a] != b:
            return False
    return len(set(chi)) == right.size and is_ring_hom(left, right, chi)


def spec_points(A: FiniteRing, R: FiniteRing, structure: RingHom) -> List[RingHom]:
    """Homs ``A → R`` that undo the structure map ``R → A``."""
    return [h for h in ring_homs(A, R) if all(h.map[structure(r)] == r for r in range(R.size))]


def duality_diagnostics(R: FiniteRing, structure: RingHom) -> Dict[str, int]:
    """Kernel and cokernel of ``A → R^Spec(A)``, ``a ↦ (ψ(a))_ψ``."""
    A = structure.target
    points = spec_points(A, R, structure)
    images = [tuple(p.map[a] for p in points) for a in range(A.size)]
    zero = tuple(R.zero for _ in points)
    image_size = len(set(images))
    return {
        "point_count": len(points),
        "algebra_size": A.size,
        "kernel": sum(1 for v in images if v == zero),
        "image": image_size,
        "cokernel": R.size ** len(points) // image_size,
    }


# --- modules --------------------------------------------------------------

def validate_module(ring: FiniteRing, add, action, zero: int, labels: Sequence[str] = (), name: str = "") -> FiniteModule:
    try:
        a = _table(add, "module add")
    except NotARing as exc:
        raise NotAModule(exc.axiom, tuple(exc.witness or ())) from exc
    n = a.shape[0]
    act = np.array(action, dtype=np.int64)
    if act.shape != (ring.size, n) or np.any((act < 0) | (act >= n)):
        raise NotAModule("totality (action)", (ring.size, n))
    try:
        _check_monoid(a, zero, "add")
        neg = _negation(a, zero)
    except NotARing as exc:
        raise NotAModule(exc.axiom, tuple(exc.witness or ())) from exc
    hit = _first(act[ring.one] != np.arange(n))
    if hit is not None:
        raise NotAModule("unit action", hit)
    for r in range(ring.size):
        hit = _first(act[r][a] != a[act[r][:, None], act[r][None, :]])
        if hit is not None:
            raise NotAModule("r·(m + n) = r·m + r·n", (r, *hit))
        hit = _first(act[ring.add[r]] != a[act[r][None, :], act])
        if hit is not None:
            raise NotAModule("(r + s)·m = r·m + s·m", (r, *hit))
        hit = _first(act[ring.mul[r]] != act[r][act])
        if hit is not None:
            raise NotAModule("(r·s)·m = r·(s·m)", (r, *hit))
    neg.setflags(write=False)
    a.setflags(write=False)
    return FiniteModule(ring=ring, add=a, neg=neg, zero=int(zero), action=act, labels=tuple(labels), name=name)


def ring_as_module(R: FiniteRing) -> FiniteModule:
    return FiniteModule(ring=R, add=R.add, neg=R.neg, zero=R.zero, action=R.mul, labels=R.labels, name=R.name)


def restrict_scalars(hom: RingHom, M: FiniteModule) -> FiniteModule:
    """A module over ``hom.target`` viewed over ``hom.source``."""
    action = M.action[np.array(hom.map, dtype=np.int64)]
    return FiniteModule(ring=hom.source, add=M.add, neg=M.neg, zero=M.zero, action=action, labels=M.labels, name=M.name)


def algebra_as_module(hom: RingHom) -> FiniteModule:
    return restrict_scalars(hom, ring_as_module(hom.target))


def _submodule(M: FiniteModule, members: Sequence[int], name: str) -> FiniteModule:
    carrier = np.array(sorted(members), dtype=np.int64)
    index = np.full(M.size, -1, dtype=np.int64)
    index[carrier] = np.arange(len(carrier))
    return FiniteModule(
        ring=M.ring,
        add=index[M.add[carrier[:, None], carrier[None, :]]],
        neg=index[M.neg[carrier]],
        zero=int(index[M.zero]),
        action=index[M.action[:, carrier]],
        labels=tuple(M.labels[c] for c in carrier) if M.labels else (),
        name=name,
    )


def ideal_as_module(I: Ideal) -> FiniteModule:
    return _submodule(ring_as_module(I.ring), I.members, name=f"({','.join(I.ring.label(x) for x in I.members)})")


def scalar_image(M: FiniteModule, e: int) -> List[int]:
    """``e·M`` as sorted element ids."""
    return sorted({int(x) for x in M.action[e]})


def localized_module(M: FiniteModule, f: int) -> FiniteModule:
    """``M_f`` realised as ``e_f·M``."""
    return _submodule(M, scalar_image(M, stable_idempotent(M.ring, f)), name=f"{M.name}[1/{M.ring.label(f)}]")


def quotient_module(R: FiniteRing, I: Ideal) -> FiniteModule:
    """``R/I`` with cosets numbered by their least element."""
    members = np.array(I.members, dtype=np.int64)
    coset = np.full(R.size, -1, dtype=np.int64)
    reps: List[int] = []
    for r in range(R.size):
        if coset[r] < 0:
            coset[R.add[r, members]] = len(reps)
            reps.append(r)
    rep = np.array(reps, dtype=np.int64)
    return FiniteModule(
        ring=R,
        add=coset[R.add[rep[:, None], rep[None, :]]],
        neg=coset[R.neg[rep]],
        zero=int(coset[R.zero]),
        action=coset[R.mul[:, rep]],
        labels=tuple(f"[{R.label(int(r))}]" for r in rep),
        name=f"{R.name}/I",
    )


def parse_module_spec(R: FiniteRing, text: str) -> FiniteModule:
    """``self``, ``ring-as-module``, an algebra spec such as ``Z/3`` viewed as an
    ``R``-module, or ``Z/n-with-action:<path.json>`` holding ``{"action": …}``."""
    spec = text.strip()
    if spec in ("self", "ring-as-module"):
        return ring_as_module(R)
    m = re.fullmatch(r"Z/(\d+)-with-action:(.+)", spec)
    if m:
        n, path = int(m.group(1)), Path(m.group(2))
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecParseError(f"cannot read module action {path}: {exc}", str(path)) from exc
        idx = np.arange(n)
        return validate_module(R, (idx[:, None] + idx[None, :]) % n, data.get("action"), 0, name=f"Z/{n}")
    return algebra_as_module(parse_algebra_spec(R, spec))


# --- tensor products and flatness -----------------------------------------

def tensor_product(M: FiniteModule, N: FiniteModule) -> TensorProduct:
    """``M ⊗_R N``: pairs of additive generators modulo bilinearity and balancing."""
    if M.ring is not N.ring:
        raise ShapeMismatch(f"modules over different rings: {M.ring.name} and {N.ring.name}", [M.ring.name, N.ring.name])
    R = M.ring
    gm, cm, rm = additive_presentation(M.add, M.zero)
    gn, cn, rn = additive_presentation(N.add, N.zero)
    t, u = len(gm), len(gn)
    rows: List[np.ndarray] = []
    for rel in rm:
        for j in range(u):
            v = np.zeros((t, u), dtype=np.int64)
            v[:, j] = rel
            rows.append(v.ravel())
    for rel in rn:
        for i in range(t):
            v = np.zeros((t, u), dtype=np.int64)
            v[i, :] = rel
            rows.append(v.ravel())
    for r in additive_generators(R):
        for i, a in enumerate(gm):
            for j, b in enumerate(gn):
                # (r·a) ⊗ b = a ⊗ (r·b)
                v = np.outer(cm[M.action[r, a]], cn[b]) - np.outer(cm[a], cn[N.action[r, b]])
                rows.append(v.ravel())
    moduli, columns, Q = finite_abelian_group(rows, t * u)
    if columns:
        pure = np.einsum("mi,nj->mnij", cm, cn).reshape(M.size * N.size, t * u)
        image = (pure.astype(Q.dtype) @ Q)[:, list(columns)]
        coords = np.array(image % np.array(moduli, dtype=Q.dtype), dtype=np.int64)
    else:
        coords = np.zeros((M.size * N.size, 0), dtype=np.int64)
    logger.debug("tensor %s ⊗ %s has moduli %s", M.name, N.name, moduli)
    return TensorProduct(left=M, right=N, moduli=moduli, coordinates=coords)


def flatness(R: FiniteRing, structure: RingHom) -> Dict[str, object]:
    """Flatness via ``I ⊗ A → A`` for every ideal, faithfulness via ``R/I ⊗ A``."""
    A = structure.target
    A_mod = algebra_as_module(structure)
    ideals = all_ideals(R)
    flat_witness = None
    for I in ideals:
        T = tensor_product(ideal_as_module(I), A_mod)
        image = ideal_generated(A, [structure(x) for x in I.members])
        if T.order != len(image.members):
            flat_witness = {"ideal": list(I.members), "tensor_order": T.order, "image_order": len(image.members)}
            break
    faithful_witness = None
    for I in ideals:
        if I.is_unit_ideal:
            continue
        if tensor_product(quotient_module(R, I), A_mod).order == 1:
            faithful_witness = {"ideal": list(I.members)}
            break
    flat = flat_witness is None
    return {
        "flat": flat,
        "faithfully_flat": flat and faithful_witness is None,
        "ideals": len(ideals),
        "witness": flat_witness or faithful_witness,
    }


def is_flat(R: FiniteRing, structure: RingHom) -> bool:
    return bool(flatness(R, structure)["flat"])


def is_faithfully_flat(R: FiniteRing, structure: RingHom) -> bool:
    return bool(flatness(R, structure)["faithfully_flat"])


# --- covers ---------------------------------------------------------------

def cover_algebra(R: FiniteRing, cover: Sequence[int]) -> RingHom:
    """``R → ∏ R_{fi}`` with the diagonal structure map."""
    locs = [localize(R, f) for f in cover]
    A = product_ring(*[L for L, _ in locs])
    table = []
    for r in range(R.size):
        x = 0
        for L, phi in locs:
            x = x * L.size + phi(r)
        table.append(x)
    return RingHom(R, A, tuple(table))


def compose_zariski_covers(R: FiniteRing, cover: Sequence[int], refinements: Sequence[Sequence[int]]) -> Dict[str, object]:
    """Refine each ``R_{fi}`` by a unimodular tuple and compose to ``(fi·gij)``.

    Refinement entries are element ids of the localized ring.
    """
    require_unimodular(R, cover)
    if len(refinements) != len(cover):
        raise ShapeMismatch(f"{len(cover)} cover elements but {len(refinements)} refinements",
                            [len(cover), len(refinements)])
    composite: List[int] = []
    for f, gs in zip(cover, refinements):
        L, _ = localize(R, f)
        require_unimodular(L, gs)
        carrier = localization_carrier(R, f)
        composite.extend(int(R.mul[f, carrier[g]]) for g in gs)
    return {"composite": composite, "unimodular": is_unimodular(R, composite)}

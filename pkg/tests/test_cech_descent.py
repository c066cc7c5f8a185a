import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import cech_descent as cd
from prescheck.errors import EnumerationTooLarge, NotUnimodular, ShapeMismatch
from prescheck.finite_ring import (
    cyclic_ring,
    parse_module_spec,
    parse_ring_spec,
    ring_as_module,
    unimodular_covers,
)

Z6 = cyclic_ring(6)
Z12 = cyclic_ring(12)


def test_d0_differences():
    M = ring_as_module(Z6)
    out = cd.d0(M, 2, (1, 4))
    assert out == (0, 3, 3, 0)


def test_d1_of_coboundary_vanishes():
    M = ring_as_module(Z6)
    t = cd.d0(M, 3, (1, 4, 5))
    assert cd.d1(M, 3, t) == (0,) * 27


def test_cochain_lengths_are_checked():
    M = ring_as_module(Z6)
    with pytest.raises(ShapeMismatch):
        cd.d0(M, 3, (1, 2))
    with pytest.raises(ShapeMismatch):
        cd.d1(M, [0, 1], (1, 2, 3))


def test_h1_vanishes_on_z6_cover():
    C = cd.descent_complex_for_cover(Z6, ring_as_module(Z6), (3, 4))
    assert cd.cochain_condition(C)
    for method in ("enumerate", "normal_form", "auto"):
        rep = cd.h1(C, method=method)
        assert (rep.h0, rep.h1, rep.exact) == (6, 1, True)
    assert cd.h1(C).level_orders[0] == 6


def test_non_unimodular_cover_is_rejected():
    with pytest.raises(NotUnimodular):
        cd.descent_complex_for_cover(Z6, ring_as_module(Z6), (2, 4))


def test_module_must_live_over_the_ring():
    with pytest.raises(ShapeMismatch):
        cd.descent_complex_for_cover(Z6, ring_as_module(cyclic_ring(6)), (1,))


@pytest.mark.parametrize(
    "ring, module, cover",
    [
        ("Z/12", "self", (5, 10)),
        ("Z/12", "self", (3, 4)),
        ("Z/12", "Z/3", (3, 4)),
        ("Z/6", "self", (2, 3)),
        ("Z/6", "Z/2", (1, 2, 3)),
        ("prod(Z/2,Z/2)", "self", (1, 2)),
    ],
)
def test_methods_agree_and_cohomology_vanishes(ring, module, cover):
    R = parse_ring_spec(ring)
    M = parse_module_spec(R, module)
    C = cd.descent_complex_for_cover(R, M, cover)
    a = cd.h1(C, method="enumerate")
    b = cd.h1(C, method="normal_form")
    assert (a.h0, a.h1, a.exact) == (b.h0, b.h1, b.exact)
    assert a.exact and a.h1 == 1
    assert a.h0 == M.size


def test_corrupted_complex_has_cohomology():
    C = cd.corrupt_complex(cd.descent_complex_for_cover(Z12, ring_as_module(Z12), (5, 10)))
    assert C.corrupted
    rep = cd.h1(C, method="enumerate")
    assert rep.h1 == 3 and not rep.exact
    assert rep.witnesses
    assert cd.h1(C, method="normal_form").h1 == 3


def test_enumeration_bound():
    C = cd.descent_complex_for_cover(Z12, ring_as_module(Z12), (5, 10))
    with pytest.raises(EnumerationTooLarge) as exc:
        cd.h1(C, method="enumerate", bound=10)
    assert exc.value.witness["bound"] == 10
    assert cd.h1(C, bound=10).method == "normal_form"
    with pytest.raises(ValueError):
        cd.h1(C, method="guess")


def test_ring_gluing_equalizer():
    out = cd.ring_gluing_equalizer(Z6, (3, 4))
    assert out["bijective"] and out["families"] == 6
    assert out["witness"] is None
    assert cd.ring_gluing_equalizer(Z12, (1, 5))["bijective"]


def test_weak_quasicoherence():
    M = parse_module_spec(Z12, "Z/3")
    out = cd.weak_quasicoherence_check(Z12, M, 2)
    assert out["isomorphism"] and out["tensor_order"] == 3
    N = parse_module_spec(Z12, "Z/4")
    out = cd.weak_quasicoherence_check(Z12, N, 2)
    assert out["isomorphism"]
    assert out["tensor_order"] == out["localized_order"] == 1


def test_descent_sweep_groups_by_signature():
    rows = cd.descent_sweep(Z6, ring_as_module(Z6), max_cover_size=2)
    assert rows
    assert all(r["exact"] and r["gluing"] for r in rows)
    assert sum(r["covers"] for r in rows) == len(unimodular_covers(Z6, 2))
    sigs = [tuple(r["signature"]) for r in rows]
    assert len(sigs) == len(set(sigs))

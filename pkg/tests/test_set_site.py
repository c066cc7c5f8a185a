import random
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import set_site as ss
from prescheck.errors import (
    EnumerationTooLarge,
    NotSurjective,
    PreconditionViolated,
    ShapeMismatch,
    SpecParseError,
)

ODD = ss.parse_presentation("odd")


def const(n, c=1):
    return ss.make_map(n, c, [0] * n)


def test_make_map_validates_table():
    with pytest.raises(ShapeMismatch):
        ss.make_map(2, 1, [0])
    with pytest.raises(ShapeMismatch):
        ss.make_map(2, 1, [0, 1])
    f = ss.map_from_json({"domain": 3, "codomain": 2, "table": [0, 1, 1]})
    assert f.fibers() == [[0], [1, 2]]
    assert ss.is_surjective(f)
    with pytest.raises(ShapeMismatch):
        ss.map_from_json({"domain": 3})


def test_parse_presentation():
    assert ss.parse_presentation("odd").name == "odd-cardinality"
    assert 3 in ss.parse_presentation("at-most:3") and 4 not in ss.parse_presentation("at-most:3")
    mult = ss.parse_presentation("multiple-of:3")
    assert 1 in mult and 6 in mult and 4 not in mult
    gen = ss.parse_presentation("generated:2")
    assert 5 in gen and 0 not in gen
    with pytest.raises(SpecParseError):
        ss.parse_presentation("prime")


def test_sigma_closure_of_zero_generator():
    assert ss.sigma_closure((0,), 5) == frozenset({0, 1})
    assert ss.sigma_closure((3,), 7) == frozenset({1, 3, 5, 7})


@pytest.mark.parametrize("name", ["odd", "singleton-only", "nonempty", "contains-empty", "generated:3"])
def test_builtin_presentations_hold(name):
    res = ss.is_presentation(ss.parse_presentation(name), 5)
    assert res["verdict"], res
    assert res["families"] > 0


def test_at_most_two_is_not_sigma_closed():
    res = ss.is_presentation(ss.parse_presentation("at-most:2"), 3)
    assert not res["verdict"]
    assert res["witness"] == {"base": 2, "fibers": [2, 2], "total": 4}


def test_class_without_singleton_fails():
    T = ss.PresentationSpec("even", lambda n: n % 2 == 0)
    res = ss.is_presentation(T, 4)
    assert not res["verdict"]
    with pytest.raises(PreconditionViolated):
        ss.is_presentation(ODD, 0)


def test_is_cover_reports_first_bad_point():
    f = ss.make_map(4, 2, [0, 1, 1, 0])
    v = ss.is_cover(f, ODD)
    assert not v.verdict
    assert v.fiber_sizes == (2, 2) and v.witness == 0
    assert ss.is_cover(const(3), ODD).verdict


def test_composition_of_odd_covers():
    f = ss.make_map(15, 3, [x % 3 for x in range(15)])
    h, verdict = ss.compose_covers(f, const(3), ODD)
    assert h.domain == 15 and h.codomain == 1
    assert verdict.verdict
    with pytest.raises(ShapeMismatch):
        ss.compose_maps(f, const(2))


def test_pullback_along_map():
    carrier, to_x, to_y = ss.pullback(const(3), const(2))
    assert len(carrier) == 6
    assert to_y.codomain == 2 and to_x.codomain == 3
    g, verdict = ss.pullback_cover(const(3), const(2), ODD)
    assert g.domain == 6 and verdict.fiber_sizes == (3, 3)
    assert verdict.verdict


def test_equivalences_are_covers():
    for name in ("odd", "singleton", "empty", "at-most:1"):
        assert ss.equivalences_are_covers(3, ss.parse_presentation(name))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["odd", "nonempty", "singleton-only", "generated:3"]))
def test_random_covers_compose_and_pull_back(seed, name):
    T = ss.parse_presentation(name)
    rng = random.Random(seed)
    g = ss.random_cover(rng, T, rng.randint(1, 3))
    f = ss.random_cover(rng, T, g.domain)
    assert ss.is_cover(f, T).verdict and ss.is_cover(g, T).verdict
    assert ss.compose_covers(f, g, T)[1].verdict
    other = ss.random_surjection(rng, 4, g.codomain)
    if other.codomain == g.codomain:
        assert ss.pullback_cover(g, other, T)[1].verdict


def test_random_cover_needs_members():
    T = ss.PresentationSpec("big", lambda n: n >= 10)
    with pytest.raises(PreconditionViolated):
        ss.random_cover(random.Random(0), T, 2)


def test_sheaf_equalizer_on_surjection():
    out = ss.set_sheaf_equalizer(3, const(3))
    assert out["bijective"]
    assert out["equalizer_size"] == out["base_size"] == 3
    out = ss.set_sheaf_equalizer(2, ss.make_map(4, 2, [0, 1, 0, 1]))
    assert out["bijective"] and out["functions_scanned"] == 16


def test_sheaf_equalizer_fails_on_empty_cover():
    out = ss.set_sheaf_equalizer(2, ss.make_map(0, 1, []))
    assert not out["bijective"]
    assert out["witness"] == {"equalizer_size": 1, "base_size": 2, "injective": False}


def test_sheaf_equalizer_bound():
    with pytest.raises(EnumerationTooLarge):
        ss.set_sheaf_equalizer(4, const(12), bound=1000)


@pytest.mark.parametrize("x", [0, 1, 2, 3])
def test_finite_sets_are_projective(x):
    res = ss.verify_projectivity(x, 4)
    assert res["verdict"] and res["split"] == res["surjections"]


def test_projectivity_counts():
    res = ss.verify_projectivity(2, 3)
    # surjections 2 -> 2 and 3 -> 2
    assert res["surjections"] == 2 + 6


def test_projectivity_of_sums_and_sigmas():
    assert ss.verify_projectivity_sum(1, 2, 4)["verdict"]
    res = ss.verify_projectivity_sigma((1, 1, 2), 5)
    assert res["verdict"] and res["base_projective"] and res["fibers_projective"]
    with pytest.raises(EnumerationTooLarge):
        ss.verify_projectivity(3, 12, limit=100)


def test_local_choice_takes_whole_fibers():
    T = ss.parse_presentation("nonempty")
    res = ss.local_choice(2, 1, const(2), const(3), T)
    assert res.z_size == 6
    assert res.commutes and res.verdict


def test_local_choice_falls_back_to_points():
    f = ss.make_map(4, 2, [0, 0, 1, 1])
    g = ss.make_map(3, 2, [0, 1, 1])
    res = ss.local_choice(3, 2, g, f, ODD)
    assert res.z_size == 3
    assert res.h.table == (0, 2, 2)
    assert res.verdict


def test_local_choice_errors():
    f = ss.make_map(2, 2, [0, 0])
    g = ss.make_map(1, 2, [1])
    with pytest.raises(NotSurjective):
        ss.local_choice(1, 2, g, f, ODD)
    with pytest.raises(ShapeMismatch):
        ss.local_choice(2, 2, g, f, ODD)
    with pytest.raises(PreconditionViolated):
        ss.local_choice(1, 1, const(1), const(2), ODD, choice=lambda d, fiber: [5])

import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import suites
from prescheck.finite_ring import cyclic_ring, ring_as_module
from prescheck.lattice_core import free_bounded_distributive_lattice


@pytest.mark.parametrize("n, count", [(0, 2), (1, 3), (2, 6), (3, 20), (4, 168)])
def test_dedekind_oracle(n, count):
    assert suites.dedekind_oracle(n) == count


def test_lattice_free_report():
    rep = suites.run_lattice_free([2], verbose=True)
    assert [c.name for c in rep.checks] == ["free-size(n=2)", "generators-incomparable(n=2)"]
    assert rep.checks[0].details["elements"] == ["0", "g1∧g2", "g2", "g1", "g1∨g2", "1"]
    assert rep.exit_code == 0
    assert rep.proof


def test_congruence_checks_on_fd2():
    rep = suites.run_lattice_congruence([free_bounded_distributive_lattice(2)])
    assert rep.failed == 0
    assert [c.name for c in rep.checks] == [
        "gratzer-criterion(FD(2))",
        "principal-meet-join(FD(2))",
        "zero-quotient-complement(FD(2))",
        "negation(FD(2))",
    ]


def test_ring_h1_sweep():
    R = cyclic_ring(12)
    rep = suites.run_ring_h1(R, ring_as_module(R), max_cover_size=2)
    assert rep.checks and rep.failed == 0
    assert all(c.details["h1"] == 1 for c in rep.checks)


def test_corrupted_control_passes_by_detecting():
    R = cyclic_ring(12)
    rep = suites.run_ring_h1(R, ring_as_module(R), cover=(5, 10), corrupt=True)
    h1 = next(c for c in rep.checks if c.name == "h1")
    assert h1.verdict and h1.details["h1"] == 3


def test_flatness_expectations():
    assert suites.run_ring_flat(cyclic_ring(6), "self", "faithfully-flat").exit_code == 0
    assert suites.run_ring_flat(cyclic_ring(4), "Z/2", "flat").exit_code == 1


def test_run_all_passes():
    rep = suites.run_all(samples=25)
    failed = [c.name for c in rep.checks if not c.verdict]
    assert failed == []
    names = {c.name for c in rep.checks}
    assert "join/octahedron" in names and "ring/corrupted/h1" in names
    assert "ring/quot(Z/6,x^2-x)/spec-points" in names
    assert "ring/Z/6(3,4)/zariski-composition" in names


def test_ring_spec_expectation():
    R = cyclic_ring(6)
    assert suites.run_ring_spec(R, "quot(Z/6,x^2-x)", expect_points=4).exit_code == 0
    rep = suites.run_ring_spec(R, "quot(Z/6,x^2-x)", expect_points=2)
    assert rep.exit_code == 1
    assert rep.checks[0].witness == {"points": 4, "expected": 2}


def test_given_congruence_on_fd2():
    L = free_bounded_distributive_lattice(2)
    # every element but the top in one class
    rep = suites.run_lattice_given_congruence(L, [0, 0, 0, 0, 0, 1])
    assert rep.failed == 0
    assert rep.checks[1].details["quotient_size"] == 2


def test_glue_records_composite_cover():
    rep = suites.run_ring_glue(cyclic_ring(6), cover=(3, 4))
    rec = next(c for c in rep.checks if c.name == "zariski-composition")
    assert rec.verdict
    assert sorted(rec.details["composite"]) == [2, 3, 4]


def test_join_stabilize_enumerates_maps():
    rep = suites.run_join_stabilize(3, 2)
    assert rep.checks[0].verdict
    assert rep.checks[0].details["maps_from_join"] == 2

import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import lattice_congruence as lcg
from prescheck.errors import NotALattice, PreconditionViolated
from prescheck.lattice_core import (
    boolean_lattice,
    chain_lattice,
    free_bounded_distributive_lattice,
    generator,
    leq,
)

FD2 = free_bounded_distributive_lattice(2)
FD3 = free_bounded_distributive_lattice(3)


def test_union_find_merges_once():
    uf = lcg.UnionFind(4)
    assert uf.join(0, 1)
    assert not uf.join(1, 0)
    assert uf.join(2, 3)
    roots = uf.roots()
    assert roots[0] == roots[1] and roots[2] == roots[3] and roots[0] != roots[2]


def test_discrete_congruence_has_singleton_classes():
    theta = lcg.discrete_congruence(FD2)
    assert theta.class_count == FD2.size
    assert theta.representatives == tuple(range(FD2.size))


def test_closure_on_chain_collapses_interval():
    C = chain_lattice(4)
    theta = lcg.congruence_closure(C, [(1, 2)])
    assert theta.blocks() == [[0], [1, 2], [3]]
    Q = lcg.quotient(C, theta)
    assert Q.lattice.size == 3
    assert Q.projection == (0, 1, 1, 2)


def test_quotient_by_generator_equation():
    g1, g2 = generator(FD2, 1), generator(FD2, 2)
    Q = lcg.quotient_by(FD2, [(g1, g2)])
    # FD(2)/(g1 = g2) is the free lattice on one generator
    assert Q.lattice.size == 3


@pytest.mark.parametrize("L", [FD2, FD3, boolean_lattice(2), chain_lattice(4)], ids=lambda L: L.name)
def test_gratzer_criterion_matches_closure(L):
    for a in range(L.size):
        for b in range(L.size):
            if not leq(L, a, b):
                continue
            theta = lcg.congruence_closure(L, [(a, b)])
            for x in range(L.size):
                for y in range(L.size):
                    assert lcg.gratzer_criterion(L, a, b, x, y) == lcg.related(theta, x, y)


def test_gratzer_criterion_needs_ordered_pair():
    g1, g2 = generator(FD2, 1), generator(FD2, 2)
    with pytest.raises(PreconditionViolated):
        lcg.gratzer_criterion(FD2, g1, g2, 0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 19), st.integers(0, 19))
def test_principal_congruence_meet_join(a, b):
    assert lcg.principal_eq_meet_join(FD3, a, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 19), st.integers(0, 19))
def test_zero_quotient_iff_complements(a, b):
    assert lcg.is_zero_quotient(FD3, a, b) == lcg.is_complement_pair(FD3, a, b)


def test_zero_quotient_of_bounds():
    assert lcg.is_zero_quotient(FD2, FD2.bottom, FD2.top)
    assert not lcg.is_zero_quotient(FD2, 0, generator(FD2, 1))


def test_join_of_congruences_contains_both():
    C = chain_lattice(5)
    theta = lcg.congruence_closure(C, [(0, 1)])
    phi = lcg.congruence_closure(C, [(3, 4)])
    both = lcg.join_congruences(theta, phi)
    assert both.blocks() == [[0, 1], [2], [3, 4]]


def test_user_partition_is_checked_for_compatibility():
    C = chain_lattice(3)
    assert lcg.congruence_from_classes(C, [0, 0, 1]).class_count == 2
    B = boolean_lattice(2)
    # {x1} ~ {x2} forces {x1} = {x1} ∧ {x1} ~ {x1} ∧ {x2} = {}
    with pytest.raises(NotALattice):
        lcg.congruence_from_classes(B, [0, 1, 1, 2])
    with pytest.raises(NotALattice):
        lcg.congruence_from_classes(C, [0, 1])

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import simplicial_check as sc
from prescheck.dataclasses import Lattice
from prescheck.errors import ElementOutOfRange, HypothesisFailed, ShapeMismatch
from prescheck.lattice_core import (
    boolean_lattice,
    chain_lattice,
    free_bounded_distributive_lattice,
    generator,
)

FD2 = free_bounded_distributive_lattice(2)


def test_amalgam_of_generators():
    g1, g2 = generator(FD2, 1), generator(FD2, 2)
    z = sc.amalgam(FD2, g1, g2, g1, g2)
    assert FD2.label(z) == "g1∧g2"


def test_amalgam_requires_agreement_on_overlap():
    C = chain_lattice(4)
    with pytest.raises(HypothesisFailed):
        # 0 and 3 are not identified by (1 = 2)
        sc.amalgam(C, 1, 2, 0, 3)


@pytest.mark.parametrize(
    "L", [FD2, free_bounded_distributive_lattice(3), boolean_lattice(2), chain_lattice(3)], ids=lambda L: L.name
)
def test_equalizer_is_bijective_for_every_pair(L):
    for rep in sc.sweep_simplicial_equalizer(L):
        assert rep.bijective, rep.as_dict()
        assert rep.amalgam_ok
        assert rep.equalizer_size == L.size
        assert rep.witness is None


def test_equalizer_report_sizes():
    g1, g2 = generator(FD2, 1), generator(FD2, 2)
    rep = sc.check_simplicial_equalizer(FD2, g1, g2)
    out = rep.as_dict()
    assert out["pair"] == [g1, g2]
    # |L/(g1 ≤ g2)| = |L/(g2 ≤ g1)| = 4 and |L/(g1 = g2)| = 3
    assert out["quotient_sizes"] == [4, 4, 3]
    assert out["lattice_size"] == 6


def test_equalizer_fails_on_non_distributive_carrier():
    # N5: 0 < a < b < 1 and c incomparable; built by hand to skip validation
    order = {(0, x) for x in range(5)} | {(x, 4) for x in range(5)} | {(x, x) for x in range(5)} | {(1, 2)}
    leq = lambda x, y: (x, y) in order
    meet = np.zeros((5, 5), dtype=np.int64)
    join = np.zeros((5, 5), dtype=np.int64)
    for x in range(5):
        for y in range(5):
            lows = [z for z in range(5) if leq(z, x) and leq(z, y)]
            ups = [z for z in range(5) if leq(x, z) and leq(y, z)]
            meet[x, y] = max(lows, key=lambda z: sum(leq(w, z) for w in range(5)))
            join[x, y] = min(ups, key=lambda z: sum(leq(w, z) for w in range(5)))
    N5 = Lattice(meet=meet, join=join, bottom=0, top=4, name="N5")
    reports = sc.sweep_simplicial_equalizer(N5)
    assert not all(r.bijective and r.amalgam_ok for r in reports)


def test_equalizer_rejects_unknown_element():
    with pytest.raises(ElementOutOfRange):
        sc.check_simplicial_equalizer(FD2, 0, 9)


def test_sign_vectors():
    assert sc.sign_vectors(2) == [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def test_chain_quotient_of_single_constraint():
    g1, g2 = generator(FD2, 1), generator(FD2, 2)
    Q = sc.chain_quotients(FD2, [(g1, g2)], [1])
    assert Q.lattice.size == 4
    Q = sc.chain_quotients(FD2, [(g1, g2)], [-1])
    assert Q.lattice.size == 4


def test_chain_signs_are_validated():
    with pytest.raises(ShapeMismatch):
        sc.chain_congruence(FD2, [(1, 2)], [1, 1])
    with pytest.raises(ShapeMismatch):
        sc.chain_congruence(FD2, [(1, 2)], [0])


@pytest.mark.parametrize(
    "L, constraints",
    [
        (FD2, [(1, 2)]),
        (FD2, [(1, 2), (2, 3)]),
        (boolean_lattice(2), [(1, 2), (0, 3)]),
        (chain_lattice(4), [(3, 0), (1, 2)]),
    ],
)
def test_chain_descent_holds(L, constraints):
    result = sc.check_chain_descent(L, constraints)
    assert result["bijective"]
    assert result["families"] == L.size
    assert len(result["sign_vectors"]) == 2 ** len(constraints)
    assert sc.chain_family_injective(L, constraints)

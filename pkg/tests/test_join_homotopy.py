import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import join_homotopy as jh
from prescheck.errors import EnumerationTooLarge, MatrixTooLarge, PreconditionViolated, ShapeMismatch
from prescheck.set_site import make_map

# minimal six-vertex triangulation of the projective plane
RP2 = [(0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
       (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5)]


@st.composite
def complexes(draw, max_vertices=5):
    n = draw(st.integers(0, max_vertices))
    if n == 0:
        return jh.void_complex()
    facet = st.sets(st.integers(0, n - 1), min_size=1, max_size=min(3, n))
    return jh.make_complex(n, draw(st.lists(facet, min_size=1, max_size=4)))


def test_make_complex_keeps_maximal_faces():
    K = jh.make_complex(3, [(0, 1), (1, 0), (0,), (2,)])
    assert K.facets == ((2,), (0, 1))
    assert K.dimension == 1
    with pytest.raises(ShapeMismatch):
        jh.make_complex(2, [(0, 2)])
    with pytest.raises(ShapeMismatch):
        jh.complex_from_json({"facets": []})
    assert jh.complex_from_json({"vertices": 2, "facets": [[0, 1]]}) == jh.simplex(1)


def test_void_complex():
    V = jh.void_complex()
    assert V.is_empty and V.dimension == -1
    prof = jh.homology(V)
    assert prof.betti_minus_one == 1 and prof.betti == ()
    assert jh.reduced_euler_characteristic(V) == -1
    K = jh.sphere(1)
    assert jh.join(V, K) == K and jh.join(K, V) == K


@pytest.mark.parametrize(
    "K, betti",
    [
        (jh.iterated_join(jh.discrete_complex(2), 2), (0, 1)),
        (jh.iterated_join(jh.discrete_complex(2), 3), (0, 0, 1)),
        (jh.join(jh.discrete_complex(3), jh.discrete_complex(3)), (0, 4)),
        (jh.sphere(1), (0, 1)),
        (jh.sphere(2), (0, 0, 1)),
        (jh.discrete_complex(4), (3,)),
        (jh.simplex(3), (0, 0, 0, 0)),
    ],
)
def test_reduced_betti_numbers(K, betti):
    prof = jh.homology(K)
    assert prof.betti == betti
    assert prof.betti_minus_one == 0


@pytest.mark.parametrize("m, n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_join_powers_of_discrete_sets(m, n):
    K = jh.iterated_join(jh.discrete_complex(m), n)
    assert jh.homology(K).betti == jh.expected_join_power_betti(m, n)


def test_projective_plane_has_torsion():
    prof = jh.homology(jh.make_complex(6, RP2))
    assert prof.betti == (0, 0, 0)
    assert prof.torsion[1] == (2,)
    assert not prof.is_acyclic


def test_simplex_is_acyclic():
    assert jh.homology(jh.simplex(2)).is_acyclic


@settings(max_examples=60, deadline=None)
@given(complexes())
def test_euler_characteristic_matches_betti(K):
    prof = jh.homology(K)
    alternating = -prof.betti_minus_one + sum((-1) ** k * b for k, b in enumerate(prof.betti))
    assert jh.reduced_euler_characteristic(K) == alternating


@settings(max_examples=40, deadline=None)
@given(complexes(4), complexes(3))
def test_join_multiplies_euler_characteristic(K, L):
    chi = jh.reduced_euler_characteristic
    assert chi(jh.join(K, L)) == -chi(K) * chi(L)


@settings(max_examples=40, deadline=None)
@given(complexes(3), complexes(3), complexes(3))
def test_join_is_associative(K1, K2, K3):
    assert jh.join_is_associative(K1, K2, K3)


def test_connected_components():
    assert jh.connected_components(jh.discrete_complex(3)) == 3
    assert jh.connected_components(jh.iterated_join(jh.discrete_complex(3), 2)) == 1
    assert jh.connected_components(jh.void_complex()) == 0


def test_induced_subcomplex():
    sub = jh.induced_subcomplex(jh.sphere(1), [0, 2])
    assert sub == jh.simplex(1)


def test_iterated_join_needs_positive_power():
    with pytest.raises(PreconditionViolated):
        jh.iterated_join(jh.sphere(0), 0)


def test_simplex_bound():
    with pytest.raises(MatrixTooLarge) as exc:
        jh.simplices(jh.sphere(14))
    assert exc.value.witness["bound"] == jh.MAX_SIMPLICES


def test_boundary_matrix_signs():
    D = jh.boundary_matrix([(0,), (1,)], [(0, 1)])
    assert D.tolist() == [[-1], [1]]


def test_join_of_maps_matches_fiberwise_joins():
    f = make_map(3, 2, [0, 0, 1])
    g = make_map(2, 2, [0, 1])
    K, report = jh.join_of_maps(f, g)
    assert K.vertices == 5
    assert [r["fiber_sizes"] for r in report] == [[2, 1], [1, 1]]
    assert all(r["ok"] for r in report)
    with pytest.raises(ShapeMismatch):
        jh.join_of_maps(f, make_map(1, 1, [0]))


def test_join_of_maps_with_empty_fiber():
    f = make_map(1, 2, [0])
    g = make_map(2, 2, [1, 1])
    K, report = jh.join_of_maps(f, g)
    assert all(r["ok"] for r in report)
    assert jh.connected_components(K) == 3


@pytest.mark.parametrize("A, X", [(0, 3), (1, 3), (2, 3), (3, 2), (4, 4)])
def test_truncation_stabilizes_at_second_join(A, X):
    out = jh.truncation_stabilization(A, X)
    assert out["verdict"]
    assert out["maps_from_join"] == out["maps_from_truncation"]


def test_maps_to_discrete_counts_simplex_constant_maps():
    assert jh.maps_to_discrete(jh.discrete_complex(2), 3) == 9
    assert jh.maps_to_discrete(jh.simplex(2), 3) == 3
    path = jh.make_complex(4, [(0, 1), (2, 3)])
    assert jh.maps_to_discrete(path, 2) == 4
    assert jh.maps_to_discrete(jh.void_complex(), 0) == 1


def test_truncation_enumeration_is_bounded():
    with pytest.raises(EnumerationTooLarge):
        jh.truncation_stabilization(9, 2)
    assert jh.truncation_stabilization(5, 2, bound=2 ** 10)["maps_from_join"] == 2


def test_truncation_counts():
    out = jh.truncation_stabilization(2, 3)
    assert out["maps_from_set"] == 9
    assert out["maps_from_join"] == 3
    assert out["components"] == {"2": 1, "3": 1, "4": 1}
    with pytest.raises(PreconditionViolated):
        jh.truncation_stabilization(2, 3, n=1)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeapprox import (
    complement_components,
    component_root,
    gen_random_l1,
    gen_random_treeset,
    is_zero_hyperbolic,
    realize_rtree,
    zero_hyperbolic_fast,
)
from treeapprox.errors import NotZeroHyperbolic


class TestRealize:
    def test_tripod_steiner_node(self, tripod):
        R = realize_rtree(tripod)
        steiner = [k for k in range(R.n_nodes) if R.labels[k] is None]
        assert len(steiner) == 1
        d = R.node_distances(steiner[0])
        assert d[R.embed["x1"]] == 1
        assert d[R.embed["x2"]] == 2
        assert d[R.embed["x3"]] == 3

    def test_two_points_single_edge(self):
        from conftest import space

        X = space(["a", "b"], [[0, 7], [7, 0]])
        R = realize_rtree(X)
        assert R.n_nodes == 2
        assert R.edges == [(0, 1, Fraction(7))]

    def test_square_cycle_rejected(self, c4):
        with pytest.raises(NotZeroHyperbolic) as e:
            realize_rtree(c4)
        assert e.value.witness is not None
        assert len(set(e.value.witness)) == 4

    def test_steiner_nodes_branch(self):
        for seed in range(8):
            X = gen_random_treeset(14, seed)
            R = realize_rtree(X)
            deg = R.degrees()
            for k in range(R.n_nodes):
                if R.labels[k] is None:
                    assert deg[k] >= 3
            assert all(w > 0 for _, _, w in R.edges)


class TestComponents:
    def test_tripod_single_component(self, tripod):
        R = realize_rtree(tripod)
        comps = complement_components(R)
        assert len(comps) == 1
        assert len(comps[0].boundary) == 3

    def test_collinear_point_separates(self, path_abc):
        R = realize_rtree(path_abc)
        comps = complement_components(R)
        bounds = {
            frozenset(R.labels[k] for k in c.boundary) for c in comps
        }
        assert bounds == {frozenset({"a", "b"}), frozenset({"b", "c"})}

    def test_two_point_single_open_edge(self):
        from conftest import space

        X = space(["a", "b"], [[0, 4], [4, 0]])
        R = realize_rtree(X)
        comps = complement_components(R)
        assert len(comps) == 1
        loc = component_root(R, comps[0])
        assert loc.offset == 2  # midpoint of the only segment


class TestComponentRoot:
    def test_tripod_midpoint_of_diametral_path(self, tripod):
        # diametral path x2..x3 has length 5; its midpoint lies half a unit
        # past the branch node on the longest arm
        R = realize_rtree(tripod)
        comp = complement_components(R)[0]
        loc = component_root(R, comp)
        steiner = next(
            k for k in range(R.n_nodes) if R.labels[k] is None
        )
        u, v, w = R.edges[loc.edge]
        x3 = R.embed["x3"]
        assert {u, v} == {steiner, x3}
        from_steiner = loc.offset if u == steiner else w - loc.offset
        assert from_steiner == Fraction(1, 2)

    def test_symmetric_star_center(self):
        from conftest import space

        X = space(
            ["a", "b", "c"], [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
        )
        R = realize_rtree(X)
        comp = complement_components(R)[0]
        loc = component_root(R, comp)
        u, v, w = R.edges[loc.edge]
        node = u if loc.offset == 0 else (v if loc.offset == w else None)
        assert node is not None and R.labels[node] is None


@given(n=st.integers(4, 10), seed=st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_realization_agrees_with_four_point_oracle(n, seed):
    X = gen_random_l1(n, seed)
    assert zero_hyperbolic_fast(X) == is_zero_hyperbolic(X)


@given(n=st.integers(2, 40), seed=st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_realized_distances_exact(n, seed):
    X = gen_random_treeset(n, seed)
    R = realize_rtree(X)
    for i in range(X.n):
        d = R.node_distances(R.embed[X.points[i]])
        for j in range(X.n):
            if i != j:
                assert d[R.embed[X.points[j]]] == X.dist[i][j]


@given(n=st.integers(3, 20), seed=st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_every_open_edge_in_exactly_one_component(n, seed):
    X = gen_random_treeset(n, seed)
    R = realize_rtree(X)
    comps = complement_components(R)
    seen = []
    for c in comps:
        seen.extend(c.edge_ids)
    assert sorted(seen) == list(range(len(R.edges)))

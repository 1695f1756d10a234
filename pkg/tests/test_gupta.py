from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import space
from treeapprox import (
    complement_components,
    component_root,
    distortion,
    gen_binary_leaves,
    gen_example33,
    gen_random_treeset,
    gen_random_ultrametric,
    gupta_tree,
    realize_rtree,
    trace_pairs,
    verify_gupta_bounds,
)
from treeapprox.errors import NotZeroHyperbolic
from treeapprox.gupta import gupta_component_tree, run_component


class TestComponentTree:
    def test_single_open_edge(self):
        X = space(["a", "b"], [[0, 4], [4, 0]])
        R = realize_rtree(X)
        comp = complement_components(R)[0]
        o = component_root(R, comp)
        edges = gupta_component_tree(R, comp, o)
        assert edges == [("a", "b")] or edges == [("b", "a")]

    def test_tripod_two_edges(self, tripod):
        R = realize_rtree(tripod)
        comp = complement_components(R)[0]
        o = component_root(R, comp)
        edges = gupta_component_tree(R, comp, o)
        assert len(edges) == 2
        T = gupta_tree(tripod)
        assert distortion(tripod, T).distortion < 8

    def test_single_boundary_point_yields_nothing(self, path_abc):
        # each component of the 3-point path has 2 boundary points, so
        # shrink to a component seen from a 2-point restriction instead
        X = space(["a", "b"], [[0, 1], [1, 0]])
        R = realize_rtree(X)
        comp = complement_components(R)[0]
        run = run_component(R, comp, component_root(R, comp))
        assert len(run.boundary_leaves) == 2  # sanity: not degenerate here


class TestGluedTree:
    def test_two_points(self):
        X = space(["a", "b"], [[0, 7], [7, 0]])
        T = gupta_tree(X)
        assert distortion(X, T).distortion == 1

    def test_collinear_path_glues_exactly(self, path_abc):
        T = gupta_tree(path_abc)
        pairs = {
            frozenset((T.vertices[u], T.vertices[v])) for u, v, _ in T.edges
        }
        assert pairs == {frozenset({"a", "b"}), frozenset({"b", "c"})}
        assert distortion(path_abc, T).distortion == 1

    def test_eight_leaf_ultrametric(self):
        X = gen_binary_leaves(3)
        T = gupta_tree(X)
        rep = distortion(X, T)
        assert rep.distortion < 8
        assert rep.contraction == 1

    def test_no_steiner_vertices_in_output(self):
        X = gen_random_treeset(20, 11)
        T = gupta_tree(X)
        assert set(T.vertices) == set(X.points)

    def test_rejects_non_tree_like(self, c4):
        with pytest.raises(NotZeroHyperbolic):
            gupta_tree(c4)


class TestProofTerms:
    def test_traces_hold_on_weighted_binary_leaves(self):
        X = gen_example33(3)
        T = verify_gupta_bounds(X, trace=True)
        assert distortion(X, T).distortion < 8

    def test_trace_contents(self):
        X = gen_random_treeset(12, 4)
        _, runs = gupta_tree(X, with_runs=True)
        total = 0
        for _, run in runs:
            for tr in trace_pairs(run):
                assert tr.holds()
                if tr.term_one is not None:
                    assert tr.term_one < 0
                if tr.term_two is not None:
                    assert tr.term_two <= tr.term_two_bound
                for ck, bound in tr.ck_checks:
                    assert ck <= bound
                total += 1
        assert total > 0

    def test_verified_families(self):
        for n in range(1, 5):
            verify_gupta_bounds(gen_binary_leaves(n), trace=True)
        verify_gupta_bounds(gen_example33(3), trace=True)


@given(n=st.integers(2, 40), seed=st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_random_treesets_below_eight(n, seed):
    X = gen_random_treeset(n, seed)
    T = verify_gupta_bounds(X, trace=n <= 24)
    rep = distortion(X, T)
    assert 1 <= rep.distortion < 8
    assert rep.contraction == 1


@given(n=st.integers(2, 24), seed=st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_random_ultrametrics_below_eight(n, seed):
    X = gen_random_ultrametric(n, seed)
    T = verify_gupta_bounds(X, trace=True)
    assert distortion(X, T).distortion < 8

"""Acceptance gate: one test per criterion, one pass/fail line each.

Every numeric comparison is exact rational unless stated otherwise.  Two
criteria encode literature claims that exhaustive computation contradicts
(the weighted-binary-leaves lower bound and two families of constants);
they are asserted as specified and fail honestly, with the computed
values in the failure line.
"""
import math
import random
import time
from fractions import Fraction

from treeapprox import (
    ValuedSubset,
    build_hierarchy,
    canonical_weights,
    distortion,
    gen_adic,
    gen_binary_leaves,
    gen_cycle,
    gen_example33,
    gen_random_l1,
    gen_random_treeset,
    gen_random_ultrametric,
    is_ultrametric,
    is_zero_hyperbolic,
    lipschitz_extend,
    make_tree,
    min_distortion_bnb,
    min_distortion_exhaustive,
    nagata_constant,
    nagata_tree,
    realize_rtree,
    verify_gupta_bounds,
)
from treeapprox.errors import NotZeroHyperbolic
from treeapprox.search import _decode_prufer


def _gate(num: int, desc: str, budget: float, fn) -> None:
    t0 = time.monotonic()
    err = None
    try:
        fn()
    except AssertionError as e:
        err = str(e) or "assertion failed"
    dt = time.monotonic() - t0
    status = "PASS" if err is None else "FAIL"
    line = f"criterion {num}: {status} ({dt:.1f}s / budget {budget:.0f}s) {desc}"
    if err is not None:
        line += f" -- {err}"
    print(line)
    assert dt < budget, f"criterion {num} exceeded the {budget}s budget ({dt:.1f}s)"
    assert err is None, line


def test_criterion_1_dyadic_tree_bound():
    def run():
        cases = [gen_binary_leaves(n) for n in range(1, 9)]
        cases += [gen_adic(k) for k in range(1, 7)]
        for seed in range(50):
            cases.append(gen_random_ultrametric(2 + (seed * 37) % 255, seed))
        for X in cases:
            T = nagata_tree(X)
            if X.n == 2:
                assert distortion(X, T).distortion == 1
                continue
            levels = build_hierarchy(X).levels
            bound = 8 * (1 - Fraction(1, 2**levels))
            got = distortion(X, T).distortion
            assert got <= bound < 8, f"{got} > {bound}"
        for seed in range(50):
            X = gen_random_l1(2 + (seed * 13) % 63, seed)
            c = nagata_constant(X).constant
            got = distortion(X, nagata_tree(X)).distortion
            assert got <= 8 * c, f"{got} > 8c = {8 * c}"

    _gate(1, "dyadic tree distortion within 8c(1-2^-levels)", 60, run)


def test_criterion_2_adic_below_four():
    def run():
        for k in range(2, 7):
            X = gen_adic(k)
            got = distortion(X, nagata_tree(X)).distortion
            assert got < 4, f"k={k}: {got} >= 4"

    _gate(2, "dyadic tree on 2-adic truncations stays below 4", 10, run)


def test_criterion_3_weighted_leaves_lower_bound():
    def run():
        X = gen_example33(3)
        res = min_distortion_exhaustive(X, threads=8)
        assert res.trees_examined == 8**6
        assert res.best_distortion >= Fraction(15, 4), (
            f"exhaustive optimum over all 262144 spanning trees is "
            f"{res.best_distortion}, below the claimed 15/4"
        )

    _gate(3, "claimed lower bound 15/4 for the 8-leaf weighted tree space", 120, run)


def test_criterion_4_small_optima():
    def run():
        r1 = min_distortion_exhaustive(gen_binary_leaves(1))
        assert r1.best_distortion == 1, f"2-point optimum {r1.best_distortion}"
        r2 = min_distortion_exhaustive(gen_binary_leaves(2))
        assert r2.best_distortion >= 2, f"4-point optimum {r2.best_distortion}"
        r3 = min_distortion_exhaustive(gen_binary_leaves(3), threads=8)
        assert r3.best_distortion >= 3, f"8-point optimum {r3.best_distortion}"
        for r in (r1, r2, r3):
            assert r.best_distortion < 8

    _gate(4, "exhaustive optima of the leaf spaces: 1, >=2, >=3, all < 8", 120, run)


def test_criterion_5_sphere_halving_bound():
    def run():
        for seed in range(100):
            n = 2 + (seed * 29) % 199
            X = gen_random_treeset(n, seed)
            T = verify_gupta_bounds(X, trace=True)
            got = distortion(X, T).distortion
            assert got < 8, f"seed {seed}: {got} >= 8"
        for n in range(1, 7):
            X = gen_binary_leaves(n)
            T = verify_gupta_bounds(X, trace=True)
            assert distortion(X, T).distortion < 8

    _gate(5, "sphere-halving trees below 8 with all proof terms holding", 120, run)


def test_criterion_6_constant_facts():
    def run():
        for X in (
            [gen_binary_leaves(n) for n in range(1, 7)]
            + [gen_adic(k) for k in range(1, 7)]
            + [gen_example33(N) for N in (3, 4)]
            + [gen_random_ultrametric(3 + 7 * s, s) for s in range(10)]
        ):
            if X.n >= 2:
                assert nagata_constant(X).constant == 1
        for seed in range(200):
            n = 4 + seed % 5
            X = (
                gen_random_l1(n, seed)
                if seed % 2
                else gen_random_treeset(n, seed)
            )
            oracle = is_zero_hyperbolic(X)
            try:
                realize_rtree(X)
                realized = True
            except NotZeroHyperbolic:
                realized = False
            assert realized == oracle, f"seed {seed}: oracle mismatch"
        bad = []
        for n in range(3, 13):
            got = nagata_constant(gen_cycle(n)).constant
            if got != Fraction(n, 2):
                bad.append((n, got))
        assert not bad, (
            f"cycle constant equals n/2 only for even n; odd cycles give "
            f"(n-1)/2 because the vertex metric has diameter (n-1)/2: {bad}"
        )

    _gate(6, "constant facts: ultrametrics, realization oracle, cycles n/2", 30, run)


def test_criterion_7_canonical_weights_optimal():
    def run():
        for seed in range(100):
            rng = random.Random(seed)
            n = rng.randint(3, 9)
            X = gen_random_l1(n, seed)
            seq = [rng.randrange(n) for _ in range(n - 2)]
            edges = _decode_prufer(seq, n) if n > 2 else [(0, 1)]
            base = distortion(X, canonical_weights(X, edges)).distortion
            weights = [
                Fraction(rng.randint(1, 50), rng.randint(1, 9))
                for _ in edges
            ]
            T = make_tree(
                X.points, [(u, v, w) for (u, v), w in zip(edges, weights)]
            )
            got = distortion(X, T).distortion
            assert got >= base, f"seed {seed}: random weights {got} < {base}"

    _gate(7, "canonical weights minimize distortion over weight choices", 10, run)


def test_criterion_8_lipschitz_extension():
    def run():
        for seed in range(50):
            rng = random.Random(("acc8", seed).__repr__())
            n = rng.randint(6, 60)
            X = gen_random_l1(n, seed)
            k = rng.randint(2, min(20, n))
            labels = tuple(sorted(rng.sample(X.points, k)))
            m = rng.randint(1, 4)
            bases = [rng.randrange(n) for _ in range(m)]
            scale = 1.0 / math.sqrt(m)
            values = {
                lbl: tuple(
                    float(X.dist[X.index(lbl)][b]) * scale for b in bases
                )
                for lbl in labels
            }
            res = lipschitz_extend(X, ValuedSubset(labels, values))
            for lbl in labels:
                assert res.extended[lbl] == values[lbl]
            Z = X.restrict(sorted(X.index(lbl) for lbl in labels))
            guaranteed = 8 * nagata_constant(Z).constant
            assert res.guaranteed_lip == guaranteed
            assert res.achieved_lip <= float(guaranteed) * (1 + 1e-9), (
                f"seed {seed}: {res.achieved_lip} > {float(guaranteed)}"
            )
        bad = []
        fixtures = (
            [gen_binary_leaves(n) for n in (3, 4, 5, 6)]
            + [gen_adic(k) for k in (3, 4, 5, 6)]
            + [gen_example33(N) for N in (3, 4, 5)]
            + [gen_cycle(n) for n in range(6, 13)]
        )
        for X in fixtures:
            vals = X.distinct_distances()
            if len(vals) < 3:
                continue
            c = nagata_constant(X).constant
            if c > 2 ** (len(vals) - 2):
                bad.append((X.n, len(vals), c))
        assert not bad, (
            f"finite-valued bound c <= 2^(values-2) fails on cycles "
            f"(n_points, n_values, constant): {bad}; the pigeonhole needs "
            f"one more dyadic interval, giving 2^(values-1) instead"
        )

    _gate(8, "extension bound 8c and the finite-valued constant bound", 60, run)


def test_criterion_9_search_oracle_equivalence():
    def run():
        fixtures = (
            [gen_binary_leaves(n) for n in (1, 2, 3)]
            + [gen_adic(k) for k in (1, 2, 3)]
            + [gen_cycle(n) for n in range(3, 9)]
            + [gen_example33(3)]
            + [gen_random_ultrametric(8, s) for s in range(3)]
            + [gen_random_treeset(8, s) for s in range(3)]
            + [gen_random_l1(8, s) for s in range(3)]
        )
        for X in fixtures:
            ex = min_distortion_exhaustive(X)
            bb = min_distortion_bnb(X)
            assert bb.best_distortion == ex.best_distortion, (
                f"{bb.best_distortion} != {ex.best_distortion} on {X.n} points"
            )
            assert bb.lower_bound == bb.best_distortion
            for t in (2, 8):
                rt = min_distortion_exhaustive(X, threads=t)
                assert rt.best_tree == ex.best_tree
                assert rt.best_distortion == ex.best_distortion
                assert rt.trees_examined == ex.trees_examined

    _gate(9, "branch-and-bound matches exhaustive; thread-count invariance", 300, run)

"""Exact oracles versus independent brute-force enumeration, plus the
placement bound and the d/e depth sequences."""
import pytest

from brute import min_gbst_cost, min_twcst_cost
from cstlab.bench import build_instance
from cstlab.falsify import random_instance
from cstlab.model import (
    Instance,
    Interval,
    gbst_cost,
    gbst_validate,
    twcst_cost,
    twcst_validate,
)
from cstlab.oracle import (
    DepthSeq,
    GbstOracle,
    SizeLimitError,
    TwcstOracle,
    depth_bound_violations,
    depth_seq,
    eq_root_weight_ok,
    placement_lower_bound,
)

I9 = build_instance("I9").instance
I15 = build_instance("I15").instance
I8 = build_instance("I8").instance
I31 = build_instance("I31").instance


class TestGbstOpt:
    def test_i9_two_named_holes(self):
        oracle = GbstOracle(I9)
        cost, tree = oracle.opt(I9.full_interval(), (3, 5))
        assert cost == 209
        assert gbst_validate(tree, I9.full_interval(), (3, 5), I9).ok

    def test_all_holes_empty_tree(self):
        oracle = GbstOracle(I9)
        iv = Interval(2, 4)
        cost, tree = oracle.opt(iv, (2, 3, 4))
        assert cost == 0 and tree is None

    def test_single_key(self):
        oracle = GbstOracle(I9)
        cost, tree = oracle.opt(Interval(8, 8), ())
        assert cost == I9.weight(8)
        assert tree.eq == 8

    def test_stored_cost_matches_evaluator(self):
        oracle = GbstOracle(I9)
        for holes in ((), (1,), (3, 5), (2, 6, 7)):
            cost, tree = oracle.opt(I9.full_interval(), holes)
            assert cost == gbst_cost(tree, I9)

    def test_size_limit_refusal(self):
        oracle = GbstOracle(I31)
        with pytest.raises(SizeLimitError, match="limit 16"):
            oracle.opt(I31.full_interval(), ())

    def test_matches_bruteforce_enumeration(self):
        import itertools

        for seed in range(8):
            inst = random_instance(5, 9, seed)
            oracle = GbstOracle(inst)
            full = inst.full_interval()
            universe = tuple(range(1, inst.n + 1))
            for h in range(inst.n + 1):
                cost, tree, holes = oracle.opt_star(full, h)
                expected = min(
                    min_gbst_cost(inst, tuple(sorted(set(universe) - set(hs))))
                    for hs in itertools.combinations(universe, h)
                )
                assert cost == expected
                assert gbst_validate(tree, full, holes, inst).ok


class TestGbstOptStar:
    def test_i9_h2(self):
        oracle = GbstOracle(I9)
        cost, tree, holes = oracle.opt_star(I9.full_interval(), 2)
        assert cost == 209
        assert gbst_validate(tree, I9.full_interval(), holes, I9).ok

    def test_all_holes(self):
        oracle = GbstOracle(I9)
        cost, tree, holes = oracle.opt_star(I9.full_interval(), 9)
        assert cost == 0 and tree is None and len(holes) == 9

    def test_hole_monotonicity(self):
        for seed in range(6):
            inst = random_instance(6, 12, 100 + seed)
            oracle = GbstOracle(inst)
            full = inst.full_interval()
            costs = [oracle.opt_star_cost(full, h) for h in range(inst.n + 1)]
            assert all(a >= b for a, b in zip(costs, costs[1:]))

    def test_dominated_by_figure_trees(self):
        from cstlab import bench

        oracle = GbstOracle(I9)
        assert oracle.opt_cost(I9.full_interval(), (3, 5)) <= gbst_cost(bench.fig2_tree_a(), I9)
        assert oracle.opt_cost(I9.full_interval(), (3, 8)) <= gbst_cost(bench.fig2_tree_b(), I9)
        i10 = bench._prefix_instance(10)
        o8, o10, o15 = TwcstOracle(I8), TwcstOracle(i10), TwcstOracle(I15)
        assert o8.opt_cost(I8.full_interval(), (8,)) <= twcst_cost(bench.fig4_tree_a(), I8)
        assert o8.opt_cost(I8.full_interval(), (1,)) <= twcst_cost(bench.fig4_tree_b(), I8)
        assert o8.opt_cost(I8.full_interval(), (1,)) <= twcst_cost(bench.fig4_tree_c(), I8)
        assert o10.opt_cost(i10.full_interval(), (10,)) <= twcst_cost(bench.fig5_tree_a(), i10)
        assert o10.opt_cost(i10.full_interval(), (1,)) <= twcst_cost(bench.fig5_tree_b(), i10)
        assert o15.opt_cost(I15.full_interval(), (1, 15)) <= twcst_cost(
            bench.fig6_witness_tree(), I15
        )

    def test_bad_hole_count(self):
        oracle = GbstOracle(I9)
        with pytest.raises(ValueError, match="out of range"):
            oracle.opt_star(I9.full_interval(), 10)


class TestTwcstOpt:
    def test_i8_without_heaviest(self):
        oracle = TwcstOracle(I8)
        cost, tree = oracle.opt(I8.full_interval(), (1,))
        assert cost == 50
        assert twcst_validate(tree, I8.full_interval(), (1,), I8).ok

    def test_single_query(self):
        oracle = TwcstOracle(I8)
        cost, tree = oracle.opt(Interval(3, 3), ())
        assert cost == 0 and tree.key == 3

    def test_i15_heavy_holes(self):
        oracle = TwcstOracle(I15)
        cost, tree = oracle.opt(I15.full_interval(), (1, 15))
        assert cost == 115
        assert twcst_validate(tree, I15.full_interval(), (1, 15), I15).ok

    def test_rejects_all_holes(self):
        oracle = TwcstOracle(I8)
        with pytest.raises(ValueError, match="at least one query"):
            oracle.opt(Interval(1, 2), (1, 2))

    def test_size_limit(self):
        oracle = TwcstOracle(I15, limit=10)
        with pytest.raises(SizeLimitError, match="limit 10"):
            oracle.opt(I15.full_interval(), ())

    def test_matches_bruteforce_enumeration(self):
        import itertools

        for seed in range(8):
            inst = random_instance(5, 9, 50 + seed)
            oracle = TwcstOracle(inst)
            full = inst.full_interval()
            universe = tuple(range(1, inst.n + 1))
            for h in range(inst.n):
                cost, tree, holes = oracle.opt_star(full, h)
                expected = min(
                    min_twcst_cost(inst, tuple(sorted(set(universe) - set(hs))))
                    for hs in itertools.combinations(universe, h)
                )
                assert cost == expected
                assert twcst_validate(tree, full, holes, inst).ok


class TestTwcstOptStar:
    def test_i8_one_hole(self):
        oracle = TwcstOracle(I8)
        cost, tree, holes = oracle.opt_star(I8.full_interval(), 1)
        assert cost == 49

    def test_i15_two_holes(self):
        oracle = TwcstOracle(I15)
        cost, tree, holes = oracle.opt_star(I15.full_interval(), 2)
        assert cost == 115
        assert twcst_validate(tree, I15.full_interval(), holes, I15).ok

    def test_max_holes_single_leaf(self):
        oracle = TwcstOracle(I8)
        cost, tree, holes = oracle.opt_star(I8.full_interval(), 7)
        assert cost == 0
        assert twcst_validate(tree, I8.full_interval(), holes, I8).ok

    def test_pruning_equivalence(self):
        for seed in range(10):
            inst = random_instance(2 + seed % 7, 10, 200 + seed)
            with_prune = TwcstOracle(inst, prune_zero_eq=True)
            without = TwcstOracle(inst, prune_zero_eq=False)
            full = inst.full_interval()
            for h in range(inst.n):
                assert with_prune.opt_star_cost(full, h) == without.opt_star_cost(full, h)

    def test_eq_nodes_have_matching_leaf_yes_branch(self):
        from cstlab.model import EQ, Cmp, Leaf

        for seed in range(10):
            inst = random_instance(3 + seed % 6, 10, 250 + seed)
            oracle = TwcstOracle(inst)
            full = inst.full_interval()
            for h in range(inst.n):
                _, tree, _ = oracle.opt_star(full, h)
                stack = [tree]
                while stack:
                    node = stack.pop()
                    if isinstance(node, Cmp):
                        if node.op == EQ:
                            assert node.yes == Leaf(node.key)
                        stack.extend((node.yes, node.no))

    def test_twcst_scaling_linearity(self):
        from cstlab.bench import fig4_tree_a

        scaled = I8.scaled(6)
        assert twcst_cost(fig4_tree_a(), scaled) == 6 * 49


class TestPlacementBound:
    def test_i31(self):
        assert placement_lower_bound(I31) == 1757

    def test_single_key(self):
        assert placement_lower_bound(Instance(("A",), (7,))) == 7

    def test_three_unit_weights(self):
        assert placement_lower_bound(Instance(("A", "B", "C"), (1, 1, 1))) == 5

    def test_bounds_oracle(self):
        for seed in range(6):
            inst = random_instance(7, 10, 300 + seed)
            oracle = GbstOracle(inst)
            assert placement_lower_bound(inst) <= oracle.opt_cost(inst.full_interval())


class TestDepthSeq:
    def test_d_values(self):
        assert depth_seq(5).d == (0, 3, 6, 10, 14)

    def test_e_values(self):
        assert depth_seq(6).e == (0, 2, 6, 9, 13, 18)

    def test_d1(self):
        assert depth_seq(1).d == (0,)

    def test_bases_fixed(self):
        seqs = depth_seq(3)
        assert seqs.d_at(1) == 0 and seqs.d_at(2) == 3
        assert seqs.e_at(1) == 0 and seqs.e_at(2) == 2 and seqs.e_at(3) == 6

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            depth_seq(0)


class TestDepthBounds:
    def test_optimal_trees_meet_bounds(self):
        seqs = depth_seq(6)
        for seed in range(30):
            inst = random_instance(4 + seed % 5, 8, 400 + seed)
            oracle = TwcstOracle(inst)
            full = inst.full_interval()
            for h in range(min(3, inst.n)):
                _, tree, _ = oracle.opt_star(full, h)
                assert depth_bound_violations(tree, seqs, 6) == []

    def test_bounds_hold_even_for_suboptimal_trees(self):
        # The bounds constrain every valid tree, not just optimal ones.
        from cstlab.model import Cmp, Leaf, LT

        seqs = depth_seq(6)
        tree = Cmp(
            LT,
            2,
            yes=Leaf(1),
            no=Cmp(LT, 3, yes=Leaf(2), no=Cmp(LT, 4, yes=Leaf(3), no=Cmp(LT, 5, yes=Leaf(4), no=Leaf(5)))),
        )
        assert depth_bound_violations(tree, seqs, 6) == []

    def test_checker_reports_violations(self):
        # Inflated bounds must trip the checker: it is the detection path
        # the fuzz suite relies on, even though real trees never violate the
        # true sequences.
        from cstlab.model import Cmp, Leaf, LT

        tree = Cmp(LT, 2, yes=Leaf(1), no=Cmp(LT, 3, yes=Leaf(2), no=Leaf(3)))
        inflated = DepthSeq((0, 99, 99, 99, 99, 99), (0, 99, 99, 99, 99, 99))
        assert depth_bound_violations(tree, inflated, 6) != []

    def test_eq_root_weight_bound(self):
        for seed in range(30):
            inst = random_instance(3 + seed % 6, 16, 500 + seed)
            oracle = TwcstOracle(inst)
            full = inst.full_interval()
            for h in range(min(3, inst.n)):
                _, tree, _ = oracle.opt_star(full, h)
                assert eq_root_weight_ok(tree, inst)


class TestConcurrency:
    def test_independent_sessions_share_one_instance(self):
        # Instances are immutable and solver sessions own their memos, so
        # concurrent sessions over the same instance must agree.
        from concurrent.futures import ThreadPoolExecutor

        from cstlab.hw import hw_solve
        from cstlab.spuler import spuler_solve

        def work(seed):
            inst = random_instance(7, 12, 4242)  # same instance in every task
            full = inst.full_interval()
            a = hw_solve(inst, full, seed % 3).cost
            b = spuler_solve(inst, full, seed % 3).cost
            c = GbstOracle(inst).opt_star_cost(full, seed % 3)
            d = TwcstOracle(inst).opt_star_cost(full, seed % 3)
            return (seed % 3, a, b, c, d)

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(work, range(24)))
        by_h = {}
        for h, *vals in results:
            assert by_h.setdefault(h, vals) == vals

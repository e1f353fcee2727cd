"""Finite-size hashing bounds."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinet.graphstate import build_graph, color_graph
from multinet.hashing import (
    InfeasibleTargetError,
    MarginalClass,
    bennett_success,
    bipartite_bound,
    entropy,
    max_output_copies,
    multipartite_bound,
    multipartite_bound_classes,
    optimize_delta_split,
    optimize_delta_split_classes,
)
from multinet.noise import BitMarginal

# frozen with an independent 40-digit evaluation of the same formulas
ENTROPY_0198 = 0.140316123604030
BENNETT_98_02 = 0.999961680553406


def binary_marginals(g, lam_by_vertex):
    return [
        BitMarginal(vertex=v, lambda0=1 - lam_by_vertex[v], lambda1=lam_by_vertex[v])
        for v in g.vertices()
    ]


class TestEntropy:
    def test_deterministic(self):
        assert entropy((1.0, 0.0)) == 0.0

    def test_uniform(self):
        assert entropy((0.5, 0.5)) == pytest.approx(1.0, abs=1e-15)

    def test_binary_value(self):
        assert entropy((0.9802, 0.0198)) == pytest.approx(ENTROPY_0198, abs=1e-12)

    def test_four_outcomes(self):
        assert entropy((0.25,) * 4) == pytest.approx(2.0, abs=1e-15)


class TestBennett:
    def test_degenerate_distribution(self):
        assert bennett_success((1.0, 0.0), 100, 0.495) == pytest.approx(
            1 - 2**-49.5, abs=1e-15
        )

    def test_frozen_value(self):
        assert bennett_success((0.98, 0.02), 1000, 0.05) == pytest.approx(
            BENNETT_98_02, abs=1e-12
        )

    def test_limit_in_n(self):
        values = [bennett_success((0.9, 0.1), n, 0.1) for n in (10, 100, 1000, 10000, 100000)]
        assert values == sorted(values)
        assert values[-1] > 1 - 1e-9

    def test_nonpositive_delta_rejected(self):
        with pytest.raises(InfeasibleTargetError):
            bennett_success((0.9, 0.1), 100, 0.0)

    def test_standard_h_mode_is_more_conservative(self):
        # dropping the -u term makes h larger, so the simplified bound is higher
        simplified = bennett_success((0.9, 0.1), 200, 0.1, h_mode="simplified")
        standard = bennett_success((0.9, 0.1), 200, 0.1, h_mode="standard")
        assert standard <= simplified

    @settings(max_examples=60, deadline=None)
    @given(
        st.floats(min_value=0.005, max_value=0.45),
        st.integers(min_value=10, max_value=5000),
        st.floats(min_value=0.01, max_value=0.4),
    )
    def test_in_unit_interval_and_monotone(self, lam, n, delta):
        d = (1 - lam, lam)
        f = bennett_success(d, n, delta)
        assert 0.0 <= f <= 1.0
        assert bennett_success(d, n + 50, delta) >= f - 1e-15
        assert bennett_success(d, n, delta * 1.1) >= f - 1e-15


class TestBipartite:
    def test_perfect_input(self):
        run = bipartite_bound((1.0, 0.0, 0.0, 0.0), 100, 1)
        assert run.fidelity == pytest.approx(1 - 2**-49.5, abs=1e-15)

    def test_more_copies_help(self):
        q = 0.98
        diag = ((1 + 3 * q**2) / 4,) + ((1 - q**2) / 4,) * 3
        assert bipartite_bound(diag, 800, 1).fidelity >= bipartite_bound(diag, 400, 1).fidelity

    def test_entropy_above_yield_is_infeasible(self):
        with pytest.raises(InfeasibleTargetError):
            bipartite_bound((0.25,) * 4, 100, 1)  # S = 2 > 1 - m/n

    def test_asymptotic_yield_boundary(self):
        # m/n at or past 1 - S leaves no slack at any finite n
        diag = (0.9, 0.1, 0.0, 0.0)
        s = entropy(diag)
        n = 1000
        m = math.ceil(n * (1 - s))
        with pytest.raises(InfeasibleTargetError):
            bipartite_bound(diag, n, m)
        assert bipartite_bound(diag, n, m - 50).fidelity > 0.0


class TestMultipartite:
    def star(self, q=0.98):
        g = build_graph("ghz-star", s=3)
        lam = {0: (1 - q**3) / 2, 1: (1 - q**2) / 2, 2: (1 - q**2) / 2}
        return g, color_graph(g), binary_marginals(g, lam)

    def test_monotone_in_n(self):
        g, coloring, margs = self.star()
        f600 = multipartite_bound(g, coloring, margs, 600, 1).fidelity
        f300 = multipartite_bound(g, coloring, margs, 300, 1).fidelity
        assert f600 > f300

    def test_fidelity_is_product_of_vertex_terms(self):
        g, coloring, margs = self.star()
        run = multipartite_bound(g, coloring, margs, 400, 1)
        assert run.fidelity == pytest.approx(
            math.prod(run.fidelity_by_vertex.values()), abs=1e-12
        )

    def test_decreases_with_m(self):
        g, coloring, margs = self.star()
        fids = [multipartite_bound(g, coloring, margs, 600, m).fidelity for m in (1, 50, 150)]
        assert fids == sorted(fids, reverse=True)

    def test_perfect_marginals_give_unit_bound(self):
        g = build_graph("ghz-star", s=3)
        margs = binary_marginals(g, {v: 0.0 for v in g.vertices()})
        run = multipartite_bound(g, color_graph(g), margs, 100, 10)
        assert run.fidelity == pytest.approx(1.0)

    def test_asymptotic_yield_boundary_infeasible(self):
        g, coloring, margs = self.star()
        s_a = entropy(margs[0].distribution)
        s_b = entropy(margs[1].distribution)
        n = 2000
        m = round(n * (1 - s_a - s_b))
        with pytest.raises(InfeasibleTargetError):
            multipartite_bound(g, coloring, margs, n, m)

    def test_single_vertex_equals_bennett(self):
        g = build_graph("ghz-star", s=1)
        lam = 0.03
        margs = binary_marginals(g, {0: lam})
        n, m = 500, 1
        run = multipartite_bound(g, {0: 0}, margs, n, m)
        delta = 0.5 * (1 - entropy((1 - lam, lam)) - m / n)
        assert run.fidelity == pytest.approx(
            bennett_success((1 - lam, lam), n, delta), abs=1e-15
        )

    def test_improper_coloring_rejected(self):
        g, _, margs = self.star()
        with pytest.raises(InfeasibleTargetError):
            multipartite_bound(g, {0: 0, 1: 0, 2: 1}, margs, 400, 1)

    def test_vertex_slack_grows_below_color_maximum(self):
        g = build_graph("ghz-star", s=4)
        lam = {0: 0.03, 1: 0.02, 2: 0.02, 3: 0.005}
        run = multipartite_bound(g, color_graph(g), binary_marginals(g, lam), 800, 1)
        leaf_color_max = run.delta_by_color[1]
        assert run.delta_by_vertex[1] == pytest.approx(leaf_color_max)
        assert run.delta_by_vertex[3] > run.delta_by_vertex[1]

    def test_degenerate_color_consumes_no_budget(self):
        # noise on one color only: the other needs no subprotocol at all
        g, coloring, _ = self.star()
        margs = binary_marginals(g, {0: 0.0, 1: 0.02, 2: 0.02})
        run = multipartite_bound(g, coloring, margs, 200, 1)
        assert set(run.delta_by_color) == {1}
        assert run.fidelity_by_vertex[0] == 1.0
        # the whole slack goes to the noisy color
        s_b = entropy((0.98, 0.02))
        assert run.delta_by_color[1] == pytest.approx(0.5 * (1 - s_b - 1 / 200))


class TestOptimizeSplit:
    def test_never_below_equal_split(self):
        classes = [
            MarginalClass(lambda1=2e-5, color=0, count=1),
            MarginalClass(lambda1=0.02, color=1, count=2),
        ]
        for n in (200, 400, 800):
            equal, _ = multipartite_bound_classes(classes, n, 1)
            split, best = optimize_delta_split_classes(classes, n, 1)
            assert best >= equal
            assert abs(sum(split.values()) - 1.0) < 1e-9

    def test_biased_case_gains(self):
        classes = [
            MarginalClass(lambda1=1.9998e-5, color=0, count=1),
            MarginalClass(lambda1=0.02, color=1, count=2),
        ]
        equal, _ = multipartite_bound_classes(classes, 200, 1)
        _, best = optimize_delta_split_classes(classes, 200, 1)
        assert best > equal + 1e-7

    def test_color_symmetric_case_stays_equal(self):
        lam = 0.0148515
        classes = [MarginalClass(lam, 0, 2), MarginalClass(lam, 1, 2)]
        for n in (200, 600, 2000):
            equal, _ = multipartite_bound_classes(classes, n, 1)
            split, best = optimize_delta_split_classes(classes, n, 1)
            assert best - equal < 1e-6
            assert split == {0: 0.5, 1: 0.5}

    def test_single_color_split_trivial(self):
        g = build_graph("ghz-star", s=1)
        margs = binary_marginals(g, {0: 0.02})
        split, run = optimize_delta_split(g, {0: 0}, margs, 300, 1)
        assert split == {0: 1.0}
        assert run.fidelity == multipartite_bound(g, {0: 0}, margs, 300, 1).fidelity


class TestMaxOutputCopies:
    def star_inputs(self, lam):
        g = build_graph("ghz-star", s=3)
        return g, color_graph(g), binary_marginals(g, {v: lam for v in g.vertices()})

    def test_near_perfect_inputs(self):
        g, coloring, margs = self.star_inputs(0.0)
        m = max_output_copies(g, coloring, margs, 100, 0.9)
        assert m >= 90  # only the delta > 0 requirement holds it below n

    def test_hopeless_inputs(self):
        g, coloring, margs = self.star_inputs(0.35)  # color entropies sum past 1
        assert max_output_copies(g, coloring, margs, 400, 0.9) == 0

    def test_nonincreasing_in_threshold(self):
        g, coloring, margs = self.star_inputs(0.02)
        n = 400
        ms = [max_output_copies(g, coloring, margs, n, thr) for thr in (0.5, 0.9, 0.99)]
        assert ms == sorted(ms, reverse=True)

    def test_result_is_tight(self):
        g, coloring, margs = self.star_inputs(0.02)
        n, thr = 400, 0.9
        m = max_output_copies(g, coloring, margs, n, thr)
        assert optimize_delta_split(g, coloring, margs, n, m)[1].fidelity >= thr
        if m < n:
            try:
                _, run = optimize_delta_split(g, coloring, margs, n, m + 1)
                above = run.fidelity
            except InfeasibleTargetError:
                above = -1.0
            assert above < thr

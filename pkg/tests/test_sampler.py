from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from syncwalk import (
    CoalescenceTimeout,
    MappingLaw,
    MappingTable,
    NotSynchronizingError,
    RngStream,
    cftp_batch,
    cftp_sample,
    coalescence_stats,
    compose,
    mix,
    sample_report,
    simulate_forward,
    stationary,
    tv_distance,
)

F = Fraction


def stationary_floats(law):
    return np.array([float(w) for w in stationary(law.marginal())])


def cycle_with_merge(eps):
    """A 3-cycle mixed with a map that merges 0 and 1; coalescence slows as eps shrinks."""
    rot = MappingTable((1, 2, 0))
    merge = MappingTable((1, 1, 2))
    return mix(MappingLaw.point_mass(rot), MappingLaw.point_mass(merge), eps)


class TestForward:
    def test_permutation_point_mass_is_deterministic(self):
        pi = MappingTable((1, 2, 3, 0))
        trace = simulate_forward(MappingLaw.point_mass(pi), 2, 9, RngStream(0))
        assert trace.states == tuple((2 + k) % 4 for k in range(10))
        assert trace.check()

    def test_recursion_holds(self, mu1):
        trace = simulate_forward(mu1, 0, 200, RngStream(4))
        assert trace.check()
        assert len(trace.mappings) == 200

    def test_same_seed_same_trace(self, mu1):
        a = simulate_forward(mu1, 1, 100, RngStream(17))
        b = simulate_forward(mu1, 1, 100, RngStream(17))
        c = simulate_forward(mu1, 1, 100, RngStream(17, stream=1))
        assert a == b
        assert a.mappings != c.mappings

    def test_transition_frequencies(self, mu1, skew3):
        n = 100_000
        states = np.array(simulate_forward(mu1, 0, n, RngStream(8)).states)
        pairs = np.zeros((3, 3))
        np.add.at(pairs, (states[:-1], states[1:]), 1)
        expect = np.array([[float(v) / 3 for v in row] for row in skew3])
        np.testing.assert_allclose(pairs / n, expect, atol=0.02)

    def test_bad_start(self, mu1):
        with pytest.raises(ValueError):
            simulate_forward(mu1, 3, 5, RngStream(0))


class TestCftp:
    def test_constant_map_depth_one(self):
        law = MappingLaw.point_mass(MappingTable.constant(3, 1))
        res = cftp_sample(law, RngStream(0))
        assert res.value == 1 and res.depth == 1
        values, depths = cftp_batch(law, 50, RngStream(0))
        assert (values == 1).all() and (depths == 1).all()

    def test_word_is_the_shortest_constant_prefix(self, mu1):
        rng = RngStream(5)
        for _ in range(50):
            res = cftp_sample(mu1, rng)
            assert len(res.word) == res.depth
            assert compose(res.word).is_constant()
            assert compose(res.word)[0] == res.value
            if res.depth > 1:
                assert not compose(res.word[:-1]).is_constant()
            assert res.horizon >= res.depth

    def test_start_state_is_irrelevant(self, mu1):
        for x0 in range(3):
            assert cftp_sample(mu1, RngStream(12), x0=x0).value == cftp_sample(mu1, RngStream(12)).value

    def test_draws_are_reused_across_horizons(self, mu1):
        # a longer first horizon extends the same N_0, N_-1, ...; the result cannot change
        for seed in range(30):
            a = cftp_sample(mu1, RngStream(seed))
            b = cftp_sample(mu1, RngStream(seed), start_horizon=64)
            assert (a.value, a.depth, a.word) == (b.value, b.depth, b.word)

    def test_non_synchronizing_rejected(self, mu2):
        with pytest.raises(NotSynchronizingError):
            cftp_sample(mu2, RngStream(0))
        with pytest.raises(NotSynchronizingError):
            cftp_batch(mu2, 10, RngStream(0))

    def test_depth_cap(self):
        law = cycle_with_merge(F(1, 1000))
        with pytest.raises(CoalescenceTimeout):
            cftp_sample(law, RngStream(0), depth_cap=2)
        with pytest.raises(CoalescenceTimeout):
            cftp_batch(law, 100, RngStream(0), depth_cap=2)

    def test_batch_depths_match_single_runs_in_law(self, mu1):
        _, batch = cftp_batch(mu1, 4000, RngStream(1))
        rng = RngStream(2)
        single = np.array([cftp_sample(mu1, rng).depth for _ in range(4000)])
        assert abs(batch.mean() - single.mean()) < 0.3

    def test_skew3_tv(self, mu1):
        values, _ = cftp_batch(mu1, 10_000, RngStream(3))
        emp = np.bincount(values, minlength=3) / 10_000
        assert tv_distance(emp, stationary_floats(mu1)) < 0.02

    def test_nonuniform_stationary_chi_square(self):
        # mixing law whose stationary distribution is far from uniform
        law = MappingLaw({(0, 0, 1): "1/2", (1, 2, 0): "1/4", (0, 1, 0): "1/4"})
        lam = stationary_floats(law)
        assert lam.max() - lam.min() > 0.1
        values, _ = cftp_batch(law, 20_000, RngStream(21))
        counts = np.bincount(values, minlength=3)
        assert chisquare(counts, lam * 20_000).pvalue > 0.001

    def test_forward_and_backward_agree(self):
        law = MappingLaw({(0, 0, 1): "1/2", (1, 2, 0): "1/4", (0, 1, 0): "1/4"})
        values, _ = cftp_batch(law, 10_000, RngStream(6))
        states = np.array(simulate_forward(law, 0, 100_000, RngStream(7)).states[1000:])
        back = np.bincount(values, minlength=3) / values.size
        fwd = np.bincount(states, minlength=3) / states.size
        assert tv_distance(back, fwd) < 0.03

    def test_big_denominators(self):
        # weights beyond int64 go through the byte-level rejection path
        big = 2**80 + 1
        law = MappingLaw({(0, 0): F(1, 2) + F(1, big), (1, 0): F(1, 2) - F(1, big)})
        values, _ = cftp_batch(law, 3000, RngStream(0))
        emp = np.bincount(values, minlength=2) / values.size
        assert tv_distance(emp, stationary_floats(law)) < 0.03
        assert cftp_sample(law, RngStream(1)).value in (0, 1)


def test_coalescence_slows_as_merging_weight_drops():
    fast = coalescence_stats(cycle_with_merge(F(1, 5)), 2000, RngStream(0))
    slow = coalescence_stats(cycle_with_merge(F(1, 20)), 2000, RngStream(0))
    assert slow.mean > fast.mean
    assert fast.median <= fast.p90 <= fast.p99 <= fast.max


def test_sample_report(mu1):
    report = sample_report(mu1, 5000, seed=3)
    assert report["samples"] == 5000
    assert sum(report["empirical"].values()) == 5000
    assert set(report["empirical"]) == {"1", "2", "3"}
    assert report["stationary"] == {"1": "1/3", "2": "1/3", "3": "1/3"}
    assert report["tv_distance"] < 0.02
    assert report == sample_report(mu1, 5000, seed=3)

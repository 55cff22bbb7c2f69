import itertools
import math
import random
from fractions import Fraction

import pytest

from conftest import two_state
from oracles import brute_p_uniform, random_rational_rows, subset_synchronizing
from syncwalk import (
    REDUCIBLE,
    NotMixingError,
    NotPUniformError,
    StochasticMatrix,
    chain_entropy,
    classify,
    entropy_family,
    entropy_gap_floor,
    entropy_report,
    family_min_n,
    is_p_uniform,
    law_entropy,
    phi,
    rational_mapping_law,
    stationary,
    synchronizing_mapping_law,
    two_state_family,
    verify_mapping_law,
)
from syncwalk.entropy import _northwest_vertex

F = Fraction
HALF_THIRD = StochasticMatrix([["1/2", "1/2"], ["1/3", "2/3"]])


def test_phi():
    assert phi(0) == 0.0
    assert phi(1) == 0.0
    assert phi(F(1, 2)) == pytest.approx(math.log(2) / 2)


class TestChainEntropy:
    def test_permutation_has_none(self):
        assert chain_entropy(StochasticMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])) == 0.0

    def test_two_state(self):
        assert chain_entropy(two_state(F(7, 10))) == pytest.approx(phi(0.7) + phi(0.3), abs=1e-15)

    def test_skew3(self, skew3):
        assert chain_entropy(skew3) == pytest.approx(0.636514, abs=1e-6)
        assert chain_entropy(skew3) == pytest.approx(math.log(3) - math.log(2) * 2 / 3, abs=1e-15)

    def test_equals_row_entropy_when_p_uniform(self):
        rng = random.Random(6)
        for _ in range(20):
            nu = random_rational_rows(rng, 4)[0]
            rows = [list(nu) for _ in range(4)]
            for row in rows:
                rng.shuffle(row)
            Q = StochasticMatrix(rows)
            if classify(Q) == REDUCIBLE:
                continue
            assert abs(chain_entropy(Q) - math.fsum(phi(v) for v in nu)) < 1e-12


class TestLawEntropy:
    def test_mu1(self, mu1):
        assert law_entropy(mu1) == pytest.approx(math.log(3), abs=1e-15)

    def test_mu2(self, mu2):
        assert law_entropy(mu2) == pytest.approx(phi(F(2, 3)) + phi(F(1, 3)), abs=1e-15)

    def test_never_below_chain_entropy(self):
        rng = random.Random(12)
        for _ in range(40):
            Q = StochasticMatrix(random_rational_rows(rng, rng.randint(1, 4)))
            try:
                stationary(Q)
            except ValueError:
                continue
            assert law_entropy(rational_mapping_law(Q)) >= chain_entropy(Q) - 1e-12


class TestPUniform:
    def test_examples(self, skew3):
        assert is_p_uniform(two_state(F(7, 10)))
        assert is_p_uniform(skew3)
        assert not is_p_uniform(HALF_THIRD)

    def test_witness(self, skew3):
        pu = is_p_uniform(skew3)
        assert pu.nu == skew3[0]
        for x in range(3):
            assert sorted(pu.taus[x]) == [0, 1, 2]
            assert all(skew3[x][y] == pu.nu[pu.taus[x][y]] for y in range(3))

    def test_against_permutation_search(self):
        vals = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
        rng = random.Random(0)
        for m in (2, 3, 4):
            rows = [r for r in itertools.product(vals, repeat=m) if sum(r) == 1]
            for _ in range(200):
                if rng.random() < 0.5:
                    # bias toward the rare positive case
                    base = list(rng.choice(rows))
                    Qrows = [rng.sample(base, m) for _ in range(m)]
                else:
                    Qrows = [rng.choice(rows) for _ in range(m)]
                Q = StochasticMatrix(Qrows)
                pu = is_p_uniform(Q)
                assert bool(pu) == brute_p_uniform(Q)
                if pu:
                    assert all(Q[x][y] == pu.nu[pu.taus[x][y]] for x in range(m) for y in range(m))


class TestFamily:
    @pytest.mark.parametrize("name", ["two_state", "skew3"])
    def test_gaps_shrink(self, name, skew3):
        Q = two_state(F(7, 10)) if name == "two_state" else skew3
        hY = chain_entropy(Q)
        gaps = []
        for n in (10, 100, 1000, 10_000):
            law = entropy_family(Q, n)
            assert verify_mapping_law(law, Q)
            assert subset_synchronizing(law.support)
            gaps.append(law_entropy(law) - hY)
        assert all(a > b > 0 for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.005

    def test_two_state_closed_form(self):
        # Sigma_1 = both constants; identity and swap each give up 1/(2n)
        Q = two_state(F(7, 10))
        for n in (10, 100, 1000, 10_000):
            e = F(1, 2 * n)
            oracle = 2 * phi(e) + phi(F(7, 10) - e) + phi(F(3, 10) - e)
            assert law_entropy(entropy_family(Q, n)) == pytest.approx(oracle, abs=1e-14)

    def test_frozen_gaps(self, skew3):
        # computed once from the exact weights, then frozen
        got = [law_entropy(entropy_family(skew3, n)) - chain_entropy(skew3) for n in (10, 100, 1000, 10_000)]
        assert got == pytest.approx([0.31849267, 0.0554063, 0.0078483, 0.00101514], abs=1e-8)

    def test_least_n(self):
        # nu = (9/10, 1/10): moving 1/(2n) off the 1/10 atom needs n >= 5
        Q = two_state(F(9, 10))
        assert family_min_n(Q) == 5
        entropy_family(Q, 5)
        with pytest.raises(ValueError, match="least admissible n is 5"):
            entropy_family(Q, 4)

    def test_rejections(self):
        with pytest.raises(NotPUniformError):
            entropy_family(HALF_THIRD, 10)
        with pytest.raises(NotMixingError):
            entropy_family(StochasticMatrix([[0, 1], [1, 0]]), 10)


class TestTwoState:
    def test_family_members_are_mapping_laws(self):
        p = F(7, 10)
        for eps in (F(3, 10), F(1, 10), F(1, 100), F(1, 1000), F(1, 10_000)):
            law, hY, hN = two_state_family(p, eps)
            assert verify_mapping_law(law, two_state(p))
            assert law.has_synchronizing_support()
            assert hN > hY

    def test_gap_vanishes_as_eps_shrinks(self):
        _, hY, hN = two_state_family(F(7, 10), F(1, 10_000))
        assert hN - hY < 0.002

    def test_half_is_exact_with_constants(self):
        law, hY, hN = two_state_family(F(1, 2), F(1, 2))
        assert abs(hN - hY) < 1e-12
        assert law.has_synchronizing_support()

    def test_half_is_exact_at_zero(self):
        law, hY, hN = two_state_family(F(1, 2), 0)
        assert abs(hN - hY) < 1e-12
        assert not law.has_synchronizing_support()

    @pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
    def test_gap_increasing_in_eps(self, eps):
        h = 1e-7
        lo = two_state_family(0.7, eps)[2]
        hi = two_state_family(F(7, 10), F(eps) + F(h))[2]
        assert (hi - lo) / h > 0

    def test_rejections(self):
        with pytest.raises(ValueError):
            two_state_family(F(7, 10), F(4, 10))
        with pytest.raises(ValueError):
            two_state_family(1, 0)


class TestGapFloor:
    def test_two_state_closed_form(self):
        # the gap is minimized at the largest eps: mu(00)=q10, mu(11)=q01 (lam = (2/5, 3/5))
        lam = (F(2, 5), F(3, 5))
        oracle = phi(F(1, 2)) + phi(F(1, 3)) + phi(F(1, 6)) - chain_entropy(HALF_THIRD, lam)
        for grid in (F(1, 1000), F(1, 10_000)):
            assert entropy_gap_floor(HALF_THIRD, grid) == pytest.approx(oracle, abs=1e-9)
        assert oracle == pytest.approx(0.352237, abs=1e-6)

    def test_positive_and_stable_for_non_p_uniform_three_state(self):
        Q = StochasticMatrix([["1/2", "1/4", "1/4"], ["1/3", "1/3", "1/3"], ["1/6", "1/2", "1/3"]])
        assert not is_p_uniform(Q)
        a = entropy_gap_floor(Q, F(1, 100))
        b = entropy_gap_floor(Q, F(1, 1000))
        assert a > 0 and b > 0
        assert abs(a - b) <= 0.1 * b

    def test_matches_vertex_minimum(self):
        # concavity: on each segment the minimum sits at an endpoint
        Q = StochasticMatrix([["1/2", "1/4", "1/4"], ["1/3", "1/3", "1/3"], ["1/6", "1/2", "1/3"]])
        base = synchronizing_mapping_law(Q)
        ends = [law_entropy(base)]
        for orders in itertools.product(itertools.permutations(range(3)), repeat=3):
            v = _northwest_vertex(Q, orders)
            if subset_synchronizing(list(v)):
                ends.append(math.fsum(phi(w) for w in v.values()))
        assert entropy_gap_floor(Q, F(1, 50)) <= min(ends) - chain_entropy(Q) + 1e-12

    def test_p_uniform_floor_is_small(self, skew3):
        assert entropy_gap_floor(skew3, F(1, 1000)) < law_entropy(synchronizing_mapping_law(skew3)) - chain_entropy(skew3)

    def test_large_m_rejected(self):
        with pytest.raises(ValueError, match="m <= 3"):
            entropy_gap_floor(StochasticMatrix.identity(4))


def test_report(skew3, mu1):
    rep = entropy_report(skew3, mu1)
    assert rep.p_uniform and rep.n_min == 2
    assert rep.gap == pytest.approx(math.log(3) - chain_entropy(skew3))
    assert entropy_report(HALF_THIRD).to_json()["n_min"] is None

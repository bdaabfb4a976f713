import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relaylab.channel import PairingMetrics, SystemParams, ChannelRealization, pairing_metrics
from relaylab.pairing import (SizeLimitError, assignment_pairing, benefit_matrix,
                              brute_force_pairing, sorted_pairing)
from relaylab.perm import InvalidPermutation, Permutation
from relaylab.rate import rate_pairing


def total(perm, m, direct):
    return rate_pairing(perm, m, direct).total_bits


def metrics_from(q2, p2, snr_sd=None):
    q2, p2 = np.asarray(q2, float), np.asarray(p2, float)
    snr_sd = np.zeros_like(q2) if snr_sd is None else np.asarray(snr_sd, float)
    return PairingMetrics(q2, p2, q2, p2, snr_sd, 1.0)


class TestPermutation:
    def test_roundtrip(self):
        p = Permutation.from_one_based([2, 3, 1])
        assert p.map.tolist() == [1, 2, 0]
        assert p.one_based() == [2, 3, 1]
        np.testing.assert_array_equal(p.matrix() @ np.array([10, 20, 30]), [30, 10, 20])
        assert p.inverse().inverse() == p

    @pytest.mark.parametrize("bad", [[], [0, 0], [1, 2], [0.5, 1]])
    def test_invalid(self, bad):
        with pytest.raises(InvalidPermutation):
            Permutation(bad)


class TestSortedPairing:
    def test_toy_no_direct(self, toy_t1):
        m = pairing_metrics(*toy_t1)
        assert sorted_pairing(m, False).one_based() == [2, 1]

    def test_toy_direct(self, toy_t2):
        m = pairing_metrics(*toy_t2)
        np.testing.assert_allclose(m.q2 / (1 + m.snr_sd), [2.0, 0.2])
        assert sorted_pairing(m, True).one_based() == [2, 1]

    def test_flat_channel_any_bijection(self):
        m = metrics_from([2.0] * 5, [0.3] * 5, [1.0] * 5)
        perm = sorted_pairing(m, True)
        assert total(perm, m, True) == pytest.approx(total(Permutation.identity(5), m, True),
                                                     rel=1e-12)

    def test_ties_break_by_index(self):
        m = metrics_from([1.0, 3.0, 1.0], [0.5, 0.5, 0.9])
        # input 1 is strongest -> output 2; inputs 0 and 2 tie and keep index order
        assert sorted_pairing(m, False).map.tolist() == [0, 2, 1]

    def test_scale_covariance(self, make_random):
        rng = np.random.default_rng(21)
        for _ in range(100):
            _, _, m = make_random(rng, int(rng.integers(2, 20)), True)
            c = float(rng.uniform(0.01, 100))
            scaled = PairingMetrics(c * m.q2, m.p2, m.snr_sr, m.snr_rd, m.snr_sd, m.d_r)
            for direct in (False, True):
                assert sorted_pairing(scaled, direct) == sorted_pairing(m, direct)

    def test_dominates_identity(self, make_random):
        rng = np.random.default_rng(22)
        for _ in range(300):
            n = int(rng.integers(1, 65))
            direct = bool(rng.integers(2))
            _, _, m = make_random(rng, n, direct)
            assert total(sorted_pairing(m, direct), m, direct) >= total(
                Permutation.identity(n), m, direct)


class TestBruteForce:
    def test_toy(self, toy_t1, toy_t2):
        perm, rate = brute_force_pairing(pairing_metrics(*toy_t1), False)
        assert perm.one_based() == [2, 1]
        assert rate == pytest.approx(0.5 * np.log2(6.9), rel=1e-14)
        perm, rate = brute_force_pairing(pairing_metrics(*toy_t2), True)
        assert perm.one_based() == [2, 1]
        assert rate == pytest.approx(0.5 * np.log2(5.6 * 5.5), rel=1e-14)

    def test_singleton(self):
        params = SystemParams(1, 1.0, 1.0, 1.0, 2.0, [1.0])
        m = pairing_metrics(params, ChannelRealization.relay_only([1.0], [1.0]))
        perm, rate = brute_force_pairing(m, False)
        assert perm.one_based() == [1]
        assert rate == pytest.approx(0.5 * np.log2(1.5), rel=1e-14)

    def test_size_limit(self):
        m = metrics_from(np.ones(10), np.ones(10))
        with pytest.raises(SizeLimitError):
            brute_force_pairing(m, False)
        with pytest.raises(SizeLimitError):
            brute_force_pairing(metrics_from(np.ones(4), np.ones(4)), False, limit=3)

    def test_lexicographic_tie_break(self):
        m = metrics_from([1.0, 1.0, 1.0], [0.2, 0.2, 0.2])
        perm, _ = brute_force_pairing(m, False)
        assert perm.map.tolist() == [0, 1, 2]

    def test_matches_loop_enumeration(self, make_random):
        rng = np.random.default_rng(23)
        for _ in range(30):
            n = int(rng.integers(1, 6))
            direct = bool(rng.integers(2))
            _, _, m = make_random(rng, n, direct)
            best = max(total(Permutation(c), m, direct) for c in itertools.permutations(range(n)))
            assert brute_force_pairing(m, direct)[1] == pytest.approx(best, rel=1e-12)


class TestAssignment:
    def test_toy(self, toy_t1):
        m = pairing_metrics(*toy_t1)
        assert total(assignment_pairing(m, False), m, False) == pytest.approx(
            0.5 * np.log2(6.9), rel=1e-14)

    def test_zero_row(self):
        m = metrics_from([0.0, 2.0, 0.5, 1.0], [0.1, 0.7, 0.3, 0.9])
        assert np.all(benefit_matrix(m, False)[0] == 0)
        assert total(assignment_pairing(m, False), m, False) == pytest.approx(
            brute_force_pairing(m, False)[1], rel=1e-12)

    def test_benefit_matrix_entries(self, toy_t2):
        m = pairing_metrics(*toy_t2)
        b = benefit_matrix(m, True)
        assert b[0, 1] == pytest.approx(0.5 * np.log2(1 + 1 + 3.6))
        assert b[1, 0] == pytest.approx(0.5 * np.log2(1 + 4 + 0.5))

    @pytest.mark.parametrize("direct", [False, True])
    def test_large_n_agrees_with_sorted(self, make_random, direct):
        rng = np.random.default_rng(24)
        for _ in range(10):
            _, _, m = make_random(rng, 128, direct, taps=11)
            assert total(assignment_pairing(m, direct), m, direct) == pytest.approx(
                total(sorted_pairing(m, direct), m, direct), rel=1e-9)


class TestSortedIsOptimal:
    @pytest.mark.parametrize("n", range(2, 8))
    def test_sorted_is_optimal(self, make_random, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(200):
            for direct in (False, True):
                _, _, m = make_random(rng, n, direct)
                _, best = brute_force_pairing(m, direct)
                assert total(sorted_pairing(m, direct), m, direct) == pytest.approx(
                    best, rel=1e-9)
                assert total(assignment_pairing(m, direct), m, direct) == pytest.approx(
                    best, rel=1e-9)


def _similarly_ordered(a, b):
    return np.prod(1 + np.sort(a) * np.sort(b))


@pytest.mark.parametrize("n", range(1, 7))
def test_rearrangement_exhaustive(n):
    rng = np.random.default_rng(n)
    for _ in range(100):
        a, b = rng.exponential(size=n), rng.exponential(size=n)
        best = _similarly_ordered(a, b)
        for sigma in itertools.permutations(range(n)):
            assert np.prod(1 + a * b[list(sigma)]) <= best * (1 + 1e-12)


@given(st.lists(st.floats(0, 1e3), min_size=1, max_size=6), st.data())
@settings(max_examples=200, deadline=None)
def test_rearrangement_property(a, data):
    b = data.draw(st.lists(st.floats(0, 1e3), min_size=len(a), max_size=len(a)))
    sigma = data.draw(st.permutations(range(len(a))))
    a, b = np.array(a), np.array(b)
    assert np.prod(1 + a * b[sigma]) <= _similarly_ordered(a, b) * (1 + 1e-12)

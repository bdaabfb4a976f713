"""Optimal subcarrier pairing and two independent optimality oracles."""

from __future__ import annotations

import functools
import itertools

import numpy as np
from scipy.optimize import linear_sum_assignment

from .channel import PairingMetrics
from .perm import Permutation
from .rate import rate_pairing

__all__ = [
    "SizeLimitError",
    "sort_keys",
    "sorted_pairing",
    "brute_force_pairing",
    "benefit_matrix",
    "assignment_pairing",
]

BRUTE_FORCE_LIMIT = 9


class SizeLimitError(ValueError):
    """Exhaustive enumeration requested for too many subcarriers."""


def sort_keys(metrics: PairingMetrics, direct: bool) -> tuple[np.ndarray, np.ndarray]:
    """Input and output ranking keys.

    The input key is ``q2`` (relay only) or ``q2 / (1 + snr_sd)`` with a
    direct path; the output key is ``p2``.
    """
    k_in = metrics.q2 / (1.0 + metrics.snr_sd) if direct else metrics.q2
    return k_in, metrics.p2


def _rank_descending(key: np.ndarray) -> np.ndarray:
    # stable: equal keys keep ascending index order
    return np.argsort(-key, kind="stable")


def sorted_pairing(metrics: PairingMetrics, direct: bool) -> Permutation:
    """Match the k-th strongest input subcarrier to the k-th strongest output.

    Runs in O(N log N). Ties are broken by ascending subcarrier index,
    which never changes the rate.
    """
    k_in, k_out = sort_keys(metrics, direct)
    mapping = np.empty(metrics.n, dtype=np.int64)
    mapping[_rank_descending(k_in)] = _rank_descending(k_out)
    return Permutation(mapping)


@functools.lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    out = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    out.setflags(write=False)
    return out


def brute_force_pairing(metrics: PairingMetrics, direct: bool,
                        limit: int = BRUTE_FORCE_LIMIT) -> tuple[Permutation, float]:
    """Best pairing by enumerating all N! permutations.

    Returns the lexicographically smallest maximizer and its rate.
    """
    n = metrics.n
    if n > limit:
        raise SizeLimitError(f"N={n} exceeds enumeration limit {limit}")
    table = benefit_matrix(metrics, direct)
    # candidate rows are in lexicographic order; argmax keeps the first maximizer
    candidates = _all_permutations(n)
    totals = table[np.arange(n), candidates].sum(axis=1)
    best_map = candidates[int(np.argmax(totals))]
    perm = Permutation(best_map)
    return perm, rate_pairing(perm, metrics, direct).total_bits


def benefit_matrix(metrics: PairingMetrics, direct: bool) -> np.ndarray:
    """``B[i, j]``: bits earned by forwarding input ``i`` on output ``j``."""
    base = 1.0 + metrics.snr_sd if direct else np.ones(metrics.n)
    return 0.5 * np.log2(base[:, None] + metrics.q2[:, None] * metrics.p2[None, :])


def assignment_pairing(metrics: PairingMetrics, direct: bool) -> Permutation:
    """Optimal pairing from an exact linear assignment solve, O(N^3)."""
    rows, cols = linear_sum_assignment(benefit_matrix(metrics, direct), maximize=True)
    mapping = np.empty(metrics.n, dtype=np.int64)
    mapping[rows] = cols
    return Permutation(mapping)

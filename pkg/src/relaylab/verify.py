"""Randomized checks of pairing and unitary optimality.

Each check draws its random cases from ``substream(seed, n, index)``, so
one failing case can be replayed alone from its seed and index.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization, Geometry, generate_channel, pairing_metrics
from .experiments import power_from_snr, substream
from .pairing import assignment_pairing, brute_force_pairing, sorted_pairing
from .rate import rate_pairing
from .unitary import (ascend_restarts, directional_derivative, gram_matrix,
                      haar_random, psd_det_bound_check, random_skew_hermitian)

__all__ = [
    "Failure",
    "Report",
    "channel_digest",
    "random_case",
    "verify_lemma",
    "verify_theorem",
    "verify_bound",
]


@dataclass(frozen=True)
class Failure:
    index: int
    digest: str
    detail: str


@dataclass
class Report:
    name: str
    seed: int
    n: int
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, index: int, digest: str, detail: str):
        self.failures.append(Failure(index, digest, detail))


def channel_digest(channel: ChannelRealization) -> str:
    h = hashlib.sha256()
    for v in (channel.h0, channel.h1, channel.h2):
        h.update(np.ascontiguousarray(v).tobytes())
    return h.hexdigest()[:16]


def random_case(n: int, seed: int, index: int, direct: bool):
    """Random system and channel: N = ``n``, SNR uniform on 0..20 dB.

    Relay position and channel order are drawn as well, so cases cover
    both relay-limited and source-limited regimes.
    """
    rng = substream(seed, n, index)
    snr_db = rng.uniform(0.0, 20.0)
    ratio = np.exp(rng.uniform(np.log(0.1), np.log(10.0)))
    taps = int(rng.integers(1, min(n, 11) + 1))
    geometry = Geometry(20.0, 20.0 * ratio / (1 + ratio), 20.0 / (1 + ratio), 2.0, taps)
    params = power_from_snr(snr_db, geometry, n, direct)
    return params, generate_channel(geometry, params, rng), rng


def _indices(trials: int, only: int | None):
    return [only] if only is not None else range(trials)


def _rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def verify_lemma(n: int, trials: int, seed: int, tol: float = 1e-9,
                 only: int | None = None) -> Report:
    """Sorted pairing vs. exhaustive enumeration vs. linear assignment."""
    report = Report("lemma", seed, n)
    for k in _indices(trials, only):
        for direct in (False, True):
            params, channel, _ = random_case(n, seed, k, direct)
            m = pairing_metrics(params, channel)
            fast = rate_pairing(sorted_pairing(m, direct), m, direct).total_bits
            _, exact = brute_force_pairing(m, direct)
            lap = rate_pairing(assignment_pairing(m, direct), m, direct).total_bits
            report.checked += 1
            if _rel_gap(fast, exact) > tol or _rel_gap(lap, exact) > tol:
                report.fail(k, channel_digest(channel),
                            f"direct={direct} sorted={fast!r} brute={exact!r} assignment={lap!r}")
    return report


def verify_theorem(n: int, trials: int, restarts: int, seed: int, tol: float = 1e-6,
                   directions: int = 20, only: int | None = None) -> Report:
    """Unitary ascent never beats sorted pairing, and the best restart reaches it.

    Also checks that the sorted-pairing matrix is stationary along random
    skew-Hermitian directions.
    """
    reach_tol = 1e-4 if n <= 2 else 1e-3
    report = Report("theorem", seed, n)
    for k in _indices(trials, only):
        for direct in (False, True):
            params, channel, rng = random_case(n, seed, k, direct)
            m = pairing_metrics(params, channel)
            perm = sorted_pairing(m, direct)
            opt = rate_pairing(perm, m, direct).total_bits
            runs = ascend_restarts(params, channel, restarts, rng)
            report.checked += 1
            digest = channel_digest(channel)
            top = runs[0].rate
            if top > opt + tol:
                report.fail(k, digest, f"direct={direct} ascent {top!r} > pairing {opt!r}")
            if top < opt - reach_tol:
                report.fail(k, digest, f"direct={direct} best ascent {top!r} short of {opt!r}")
            w = perm.matrix()
            for _ in range(directions):
                d = directional_derivative(w, random_skew_hermitian(n, rng), params, channel)
                if abs(d) > tol:
                    report.fail(k, digest, f"direct={direct} derivative {d!r} at optimum")
                    break
    return report


def verify_bound(n_max: int, trials: int, seed: int, tol: float = 1e-12,
                 only: int | None = None) -> Report:
    """Determinant bound on random Gram matrices; exact equality on diagonal ones."""
    report = Report("bound", seed, n_max)
    for k in _indices(trials, only):
        rng = substream(seed, n_max, k)
        n = int(rng.integers(1, n_max + 1))
        p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a = gram_matrix(p, haar_random(n, rng), q)
        report.checked += 1
        digest = hashlib.sha256(a.tobytes()).hexdigest()[:16]
        if not psd_det_bound_check(a):
            report.fail(k, digest, f"bound violated for n={n}")
        d = np.diag(np.abs(p * q) ** 2)
        lhs = np.linalg.det(np.eye(n) + d).real
        rhs = (1 + d[-1, -1]) * (np.linalg.det(np.eye(n - 1) + d[:-1, :-1]).real if n > 1 else 1.0)
        if not psd_det_bound_check(d) or abs(lhs - rhs) > tol * max(1.0, lhs):
            report.fail(k, digest, f"diagonal equality off by {abs(lhs - rhs)!r}")
    return report


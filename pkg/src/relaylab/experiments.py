"""Monte-Carlo comparison of relay processing schemes.

Four schemes are compared on common channel draws:

``optimal_sp``
    sorted pairing for the actual scenario (with or without direct path);
``no_sp``
    the relay forwards each subcarrier on itself (identity);
``random_unitary``
    a Haar-random processing matrix;
``sp_ignore_direct``
    pairing chosen from the relay-path gains only, while the destination
    still combines the direct path.

Every trial draws from its own substream derived from
``(master_seed, sweep_index, trial)``, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .channel import ChannelRealization, Geometry, SystemParams, generate_channel, pairing_metrics
from .pairing import sorted_pairing
from .perm import Permutation
from .rate import rate_general, rate_pairing
from .unitary import haar_random

__all__ = [
    "SCHEMES",
    "ScenarioConfig",
    "SweepRow",
    "SweepResult",
    "substream",
    "worker_count",
    "power_from_snr",
    "evaluate_schemes",
    "collinear_geometry",
    "run_snr_sweep",
    "run_position_sweep",
    "snr_gain_db",
]

SCHEMES = ("optimal_sp", "no_sp", "random_unitary", "sp_ignore_direct")

DEFAULT_SNR_DB = tuple(float(x) for x in range(0, 21, 2))
DEFAULT_POSITION_RATIOS = (0.1, 0.2, 0.375, 0.6, 1.0, 1.5, 2.5, 4.0, 9.0)


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: Geometry = field(default_factory=lambda: Geometry(20.0, 6.0, 16.0, 2.0, 11))
    n_subcarriers: int = 128
    trials: int = 500
    master_seed: int = 2010
    snr_db_list: tuple[float, ...] = DEFAULT_SNR_DB
    position_ratio_list: tuple[float, ...] = DEFAULT_POSITION_RATIOS
    snr_db_fixed: float = 14.0
    schemes: tuple[str, ...] = SCHEMES
    direct_path: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_subcarriers < 1:
            raise ValueError("n_subcarriers must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown or not self.schemes:
            raise ValueError(f"schemes must be a non-empty subset of {SCHEMES}")
        if any(r <= 0 for r in self.position_ratio_list):
            raise ValueError("position ratios must be positive")
        self.geometry.check_order(self.n_subcarriers)
        object.__setattr__(self, "snr_db_list", tuple(float(x) for x in self.snr_db_list))
        object.__setattr__(self, "position_ratio_list",
                           tuple(float(x) for x in self.position_ratio_list))
        object.__setattr__(self, "schemes", tuple(self.schemes))

    @property
    def taps_per_link(self):
        return self.geometry.taps_per_link


class SweepRow(NamedTuple):
    sweep_value: float
    scheme: str
    mean_rate_per_subcarrier: float
    std_error: float
    trials: int


@dataclass
class SweepResult:
    """Aggregated sweep output, one row per (sweep value, scheme).

    ``samples`` optionally keeps the per-trial per-subcarrier rates keyed
    by ``(sweep_value, scheme)``; it does not take part in equality.
    """

    rows: list[SweepRow]
    samples: dict | None = field(default=None, compare=False, repr=False)

    @property
    def sweep_values(self) -> list[float]:
        return sorted({r.sweep_value for r in self.rows})

    @property
    def schemes(self) -> list[str]:
        return sorted({r.scheme for r in self.rows})

    def curve(self, scheme: str) -> tuple[np.ndarray, np.ndarray]:
        """``(sweep_values, mean_rates)`` for one scheme, ordered by sweep value."""
        pts = sorted((r.sweep_value, r.mean_rate_per_subcarrier)
                     for r in self.rows if r.scheme == scheme)
        if not pts:
            raise KeyError(scheme)
        x, y = zip(*pts)
        return np.array(x), np.array(y)


def substream(master_seed: int, index: int, trial: int) -> np.random.Generator:
    """Independent generator for one (sweep point, trial) cell."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, index, trial]))


def worker_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("RELAYLAB_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def power_from_snr(snr_db: float, geometry: Geometry, n: int,
                   direct_path: bool = True) -> SystemParams:
    """System parameters whose mean direct-path SNR per subcarrier is ``snr_db``.

    Uses unit noise at relay and destination, ``P_r = P_s`` and equal power
    per subcarrier, so ``P_s = 10**(snr_db/10) * N * d_sd**alpha``.
    """
    p_s = 10.0 ** (snr_db / 10.0) * n * geometry.d_sd**geometry.pathloss_exp
    return SystemParams.equal_power(n, p_s, p_s, 1.0, 1.0, direct_path)


def evaluate_schemes(params: SystemParams, channel: ChannelRealization,
                     rng: np.random.Generator,
                     schemes: Sequence[str] = SCHEMES) -> dict[str, float]:
    """Total rate (bits, all subcarriers) of each scheme on one channel."""
    direct = params.direct_path
    metrics = pairing_metrics(params, channel)
    out = {}
    for name in schemes:
        if name == "optimal_sp":
            out[name] = rate_pairing(sorted_pairing(metrics, direct), metrics, direct).total_bits
        elif name == "no_sp":
            out[name] = rate_pairing(Permutation.identity(metrics.n), metrics, direct).total_bits
        elif name == "random_unitary":
            out[name] = rate_general(haar_random(metrics.n, rng), params, channel)
        elif name == "sp_ignore_direct":
            out[name] = rate_pairing(sorted_pairing(metrics, False), metrics, direct).total_bits
        else:
            raise ValueError(f"unknown scheme {name!r}")
    return out


def collinear_geometry(base: Geometry, ratio: float) -> Geometry:
    """Relay on the source-destination segment with ``d_sr / d_rd = ratio``."""
    return replace(base, d_sr=ratio * base.d_sd / (1.0 + ratio),
                   d_rd=base.d_sd / (1.0 + ratio))


def _one_trial(args):
    params, geometry, schemes, seed, index, trial = args
    rng = substream(seed, index, trial)
    channel = generate_channel(geometry, params, rng)
    return evaluate_schemes(params, channel, rng, schemes)


def _sweep(points, config: ScenarioConfig, threads: int | None) -> SweepResult:
    """``points`` is a list of ``(sweep_value, params, geometry)``."""
    jobs = [(params, geometry, config.schemes, config.master_seed, k, t)
            for k, (_, params, geometry) in enumerate(points)
            for t in range(config.trials)]
    workers = worker_count(threads)
    if workers == 1:
        results = [_one_trial(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_trial, jobs))

    rows, samples = [], {}
    n = config.n_subcarriers
    for k, (value, _, _) in enumerate(points):
        chunk = results[k * config.trials:(k + 1) * config.trials]
        for name in config.schemes:
            per_sc = np.array([r[name] for r in chunk]) / n
            # np.mean uses pairwise summation in index order
            mean = float(np.mean(per_sc))
            if config.trials > 1:
                std_err = float(np.std(per_sc, ddof=1) / np.sqrt(config.trials))
            else:
                std_err = 0.0
            rows.append(SweepRow(float(value), name, mean, std_err, config.trials))
            samples[(float(value), name)] = per_sc
    rows.sort(key=lambda r: (r.sweep_value, r.scheme))
    return SweepResult(rows, samples)


def run_snr_sweep(config: ScenarioConfig, threads: int | None = None) -> SweepResult:
    """Scheme rates versus direct-path SNR at a fixed geometry."""
    if not config.snr_db_list:
        raise ValueError("snr_db_list is empty")
    points = [(snr, power_from_snr(snr, config.geometry, config.n_subcarriers,
                                   config.direct_path), config.geometry)
              for snr in config.snr_db_list]
    return _sweep(points, config, threads)


def run_position_sweep(config: ScenarioConfig, threads: int | None = None) -> SweepResult:
    """Scheme rates versus relay position ``d_sr / d_rd`` at ``snr_db_fixed``."""
    if not config.position_ratio_list:
        raise ValueError("position_ratio_list is empty")
    params = power_from_snr(config.snr_db_fixed, config.geometry,
                            config.n_subcarriers, config.direct_path)
    points = [(r, params, collinear_geometry(config.geometry, r))
              for r in config.position_ratio_list]
    return _sweep(points, config, threads)


def snr_gain_db(result: SweepResult, scheme: str, reference: str, at_db: float) -> float:
    """Horizontal gap: extra SNR ``reference`` needs to match ``scheme`` at ``at_db``.

    Linear interpolation on the reference curve; NaN if the target rate is
    outside the swept range.
    """
    x, y = result.curve(scheme)
    xr, yr = result.curve(reference)
    target = float(np.interp(at_db, x, y))
    if not yr[0] <= target <= yr[-1]:
        return float("nan")
    return float(np.interp(target, yr, xr)) - at_db

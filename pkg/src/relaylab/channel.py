"""Physical-layer model of a two-hop amplify-and-forward OFDM relay link.

Holds the system parameters, the frequency-selective channel generator,
the relay amplification gain and the per-subcarrier effective gains that
the pairing and rate routines consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "InvalidTapProfile",
    "SystemParams",
    "ChannelRealization",
    "Geometry",
    "PairingMetrics",
    "frequency_response",
    "generate_channel",
    "derive_relay_gain",
    "pairing_metrics",
]

_POWER_RTOL = 1e-9


class InvalidTapProfile(ValueError):
    """Raised when a tap profile is empty or longer than the FFT size."""


def _as_real_vector(x, n: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    return arr


def _as_complex_vector(x, n: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=complex).reshape(-1)
    if arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class SystemParams:
    """Powers, noise levels and source power coefficients.

    Parameters
    ----------
    n_subcarriers : int
        Number of OFDM subcarriers N.
    sigma_r2, sigma_d2 : float
        Noise variance at the relay and at the destination.
    p_s, p_r : float
        Total power budget of the source and of the relay.
    d_s : array_like
        Per-subcarrier source amplitude coefficients, ``sum(d_s**2) <= p_s``.
    direct_path : bool
        Whether the destination also hears the source directly.
    """

    n_subcarriers: int
    sigma_r2: float
    sigma_d2: float
    p_s: float
    p_r: float
    d_s: np.ndarray
    direct_path: bool = False

    def __post_init__(self):
        n = int(self.n_subcarriers)
        if n < 1:
            raise ValueError("n_subcarriers must be >= 1")
        for name in ("sigma_r2", "sigma_d2", "p_s", "p_r"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        d_s = _as_real_vector(self.d_s, n, "d_s")
        if np.any(d_s < 0):
            raise ValueError("d_s must be nonnegative")
        used = float(np.sum(d_s**2))
        if used > self.p_s * (1 + _POWER_RTOL):
            raise ValueError(
                f"source power {used:.6g} exceeds budget p_s={self.p_s:.6g}")
        d_s.setflags(write=False)
        object.__setattr__(self, "n_subcarriers", n)
        object.__setattr__(self, "d_s", d_s)
        object.__setattr__(self, "direct_path", bool(self.direct_path))

    @classmethod
    def equal_power(cls, n_subcarriers: int, p_s: float, p_r: float | None = None,
                    sigma_r2: float = 1.0, sigma_d2: float = 1.0,
                    direct_path: bool = False) -> "SystemParams":
        """Spread ``p_s`` evenly, ``d_s = sqrt(p_s / N)`` on every subcarrier."""
        d_s = np.full(n_subcarriers, np.sqrt(p_s / n_subcarriers))
        return cls(n_subcarriers, sigma_r2, sigma_d2, p_s,
                   p_s if p_r is None else p_r, d_s, direct_path)


@dataclass(frozen=True)
class ChannelRealization:
    """Complex per-subcarrier gains of the three links.

    ``h0`` is source-destination, ``h1`` source-relay and ``h2``
    relay-destination. ``h0`` is all zeros when there is no direct path.
    """

    h0: np.ndarray
    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.h1).size
        for name in ("h0", "h1", "h2"):
            arr = _as_complex_vector(getattr(self, name), n, name)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.h1.size

    @classmethod
    def relay_only(cls, h1, h2) -> "ChannelRealization":
        h1 = np.asarray(h1, dtype=complex)
        return cls(np.zeros_like(h1), h1, h2)


TapsPerLink = Union[int, Sequence[int]]


@dataclass(frozen=True)
class Geometry:
    """Node distances (meters), path-loss exponent and channel order.

    ``taps_per_link`` is either one channel order shared by all links or a
    triple ``(L_sd, L_sr, L_rd)``.
    """

    d_sd: float
    d_sr: float
    d_rd: float
    pathloss_exp: float = 2.0
    taps_per_link: TapsPerLink = 11

    def __post_init__(self):
        if min(self.d_sd, self.d_sr, self.d_rd) <= 0:
            raise ValueError("distances must be positive")
        if self.pathloss_exp <= 0:
            raise ValueError("pathloss_exp must be positive")
        taps = self.taps_per_link
        if np.ndim(taps) == 0:
            taps = (int(taps),) * 3
        else:
            taps = tuple(int(t) for t in taps)
            if len(taps) != 3:
                raise ValueError("taps_per_link must be an int or a triple")
        if min(taps) < 1:
            raise ValueError("taps_per_link must be >= 1")
        object.__setattr__(self, "taps_per_link", taps)

    def path_gain(self, distance: float) -> float:
        return float(distance) ** (-self.pathloss_exp)

    def check_order(self, n: int):
        if max(self.taps_per_link) > n:
            raise InvalidTapProfile(
                f"channel order {max(self.taps_per_link)} exceeds N={n}")


@dataclass(frozen=True)
class PairingMetrics:
    """Per-subcarrier effective gains seen by the pairing optimizer.

    ``q2[i]`` is the input-side gain ``|h1_i d_s_i|^2`` and ``p2[j]`` the
    output-side gain ``|h2_j d_r|^2 / (sigma_d2 + sigma_r2 |h2_j d_r|^2)``.
    The three SNR vectors are the per-link received SNRs.
    """

    q2: np.ndarray
    p2: np.ndarray
    snr_sr: np.ndarray
    snr_rd: np.ndarray
    snr_sd: np.ndarray
    d_r: float
    sigma_r2: float = field(default=1.0)

    @property
    def n(self) -> int:
        return self.q2.size


def frequency_response(taps, n: int) -> np.ndarray:
    """Length-``n`` DFT of a tap profile, ``H_k = sum_l g_l exp(-2j pi k l / n)``.

    Unnormalized, so ``mean(|H|**2) == sum(|g|**2)``.
    """
    g = np.asarray(taps, dtype=complex).reshape(-1)
    if g.size == 0 or g.size > n:
        raise InvalidTapProfile(f"need 1 <= L <= N, got L={g.size}, N={n}")
    return np.fft.fft(g, n)


def _rayleigh_taps(rng: np.random.Generator, n_taps: int, gain: float):
    scale = np.sqrt(gain / (2.0 * n_taps))
    return scale * (rng.standard_normal(n_taps) + 1j * rng.standard_normal(n_taps))


def generate_channel(geometry: Geometry, params: SystemParams,
                     rng: np.random.Generator) -> ChannelRealization:
    """Draw one frequency-selective realization of the three links.

    Each link gets ``L`` i.i.d. CN(0, d^-alpha / L) taps, so the average
    subcarrier power equals the path loss. Taps are drawn in the fixed
    order source-destination, source-relay, relay-destination; the
    source-destination draw is consumed even without a direct path so that
    both settings see the same relay links for the same stream.
    """
    n = params.n_subcarriers
    geometry.check_order(n)
    l_sd, l_sr, l_rd = geometry.taps_per_link
    g0 = _rayleigh_taps(rng, l_sd, geometry.path_gain(geometry.d_sd))
    g1 = _rayleigh_taps(rng, l_sr, geometry.path_gain(geometry.d_sr))
    g2 = _rayleigh_taps(rng, l_rd, geometry.path_gain(geometry.d_rd))
    h0 = frequency_response(g0, n) if params.direct_path else np.zeros(n, complex)
    return ChannelRealization(h0, frequency_response(g1, n), frequency_response(g2, n))


def derive_relay_gain(params: SystemParams, h1) -> float:
    """Common relay amplitude that spends exactly ``p_r`` on average."""
    h1 = np.asarray(h1)
    received = np.sum(params.d_s**2 * np.abs(h1) ** 2)
    return float(np.sqrt(params.p_r / (received + params.n_subcarriers * params.sigma_r2)))


def pairing_metrics(params: SystemParams, channel: ChannelRealization,
                    d_r: float | None = None) -> PairingMetrics:
    if d_r is None:
        d_r = derive_relay_gain(params, channel.h1)
    if channel.n != params.n_subcarriers:
        raise ValueError("channel length does not match n_subcarriers")
    d_s2 = params.d_s**2
    g1 = np.abs(channel.h1) ** 2
    g2 = np.abs(channel.h2) ** 2 * d_r**2
    q2 = g1 * d_s2
    p2 = g2 / (params.sigma_d2 + params.sigma_r2 * g2)
    return PairingMetrics(
        q2=q2,
        p2=p2,
        snr_sr=q2 / params.sigma_r2,
        snr_rd=g2 / params.sigma_d2,
        snr_sd=np.abs(channel.h0) ** 2 * d_s2 / params.sigma_d2,
        d_r=float(d_r),
        sigma_r2=params.sigma_r2,
    )

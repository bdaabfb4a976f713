"""Achievable rate of the relay link for a given processing matrix.

Two routes are provided. :func:`rate_general` evaluates the log-det rate
for an arbitrary unitary ``W`` from the raw channel matrices, and
:func:`rate_pairing` uses the per-pair closed form that holds when ``W`` is
a permutation. All rates are in bits per two-phase channel use, summed
over subcarriers, and include the half-duplex factor 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelRealization, PairingMetrics, SystemParams, derive_relay_gain
from .perm import InvalidPermutation, Permutation

__all__ = [
    "UnitarityError",
    "EquivalentModel",
    "PairRate",
    "RateBreakdown",
    "unitarity_residual",
    "check_unitary",
    "equivalent_model",
    "rate_general",
    "rate_pairing",
    "pair_sinr",
]

UNITARY_TOL = 1e-8


class UnitarityError(ValueError):
    """Raised for a processing matrix that is not unitary."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"||W W^H - I||_F = {residual:.3e} exceeds {tol:.1e}")
        self.residual = residual


def unitarity_residual(w) -> float:
    w = np.asarray(w)
    return float(np.linalg.norm(w @ w.conj().T - np.eye(w.shape[0])))


def check_unitary(w, n: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"W must be square, got shape {w.shape}")
    if n is not None and w.shape[0] != n:
        raise ValueError(f"W must be {n}x{n}, got {w.shape}")
    residual = unitarity_residual(w)
    if not residual <= tol:
        raise UnitarityError(residual, tol)
    return w


@dataclass(frozen=True)
class EquivalentModel:
    """End-to-end channel ``H_eq = H2 D_r W H1 D_s`` and its noise.

    ``r_n`` is the relay-path noise covariance and ``upsilon0_sq`` the
    whitened direct-path power per input subcarrier.
    """

    h_eq: np.ndarray
    r_n: np.ndarray
    upsilon0_sq: np.ndarray


class PairRate(NamedTuple):
    i: int
    j: int
    sinr: float
    bits: float


@dataclass(frozen=True)
class RateBreakdown:
    total_bits: float
    per_pair: list[PairRate]

    @property
    def per_subcarrier(self) -> float:
        return self.total_bits / len(self.per_pair)

    @property
    def permutation(self) -> Permutation:
        return Permutation([p.j for p in self.per_pair])


def equivalent_model(w, params: SystemParams, channel: ChannelRealization,
                     d_r: float | None = None) -> EquivalentModel:
    if d_r is None:
        d_r = derive_relay_gain(params, channel.h1)
    h2_dr = channel.h2 * d_r
    h_eq = (h2_dr[:, None] * np.asarray(w)) * (channel.h1 * params.d_s)[None, :]
    r_n = np.diag(params.sigma_r2 * np.abs(h2_dr) ** 2 + params.sigma_d2)
    if params.direct_path:
        ups0 = np.abs(channel.h0) ** 2 * params.d_s**2 / params.sigma_d2
    else:
        ups0 = np.zeros(params.n_subcarriers)
    return EquivalentModel(h_eq, r_n, ups0)


def _hpd_log2det(a: np.ndarray) -> float:
    # Cholesky of a Hermitian positive-definite matrix
    chol = np.linalg.cholesky(a)
    return float(2.0 * np.sum(np.log2(np.abs(np.diag(chol)))))


def rate_general(w, params: SystemParams, channel: ChannelRealization,
                 tol: float = UNITARY_TOL) -> float:
    """Log-det achievable rate for an arbitrary unitary relay matrix.

    Evaluates ``0.5 * log2 det(I + Y0^H Y0 + H_eq^H R_n^-1 H_eq)``, where the
    direct-path term ``Y0^H Y0`` is zero without a direct path. Both terms
    live on the source-subcarrier index, as required for maximum ratio
    combining of the stacked direct and relayed observations.

    Raises
    ------
    UnitarityError
        If ``||W W^H - I||_F > tol``.
    """
    w = check_unitary(w, params.n_subcarriers, tol)
    model = equivalent_model(w, params, channel)
    rn_inv = 1.0 / np.real(np.diag(model.r_n))
    gram = model.h_eq.conj().T @ (rn_inv[:, None] * model.h_eq)
    a = gram + np.diag(1.0 + model.upsilon0_sq)
    a = 0.5 * (a + a.conj().T)
    return max(0.5 * _hpd_log2det(a), 0.0)


def _check_index(k: int, n: int, name: str) -> int:
    if not (0 <= int(k) < n):
        raise IndexError(f"{name}={k} out of range for N={n}")
    return int(k)


def pair_sinr(i: int, j: int, metrics: PairingMetrics) -> float:
    """Relayed SINR when input subcarrier ``i`` is forwarded on output ``j``."""
    i = _check_index(i, metrics.n, "i")
    j = _check_index(j, metrics.n, "j")
    return float(metrics.q2[i] * metrics.p2[j])


def rate_pairing(perm: Permutation, metrics: PairingMetrics, direct: bool) -> RateBreakdown:
    """Closed-form rate of subcarrier pairing ``perm``.

    Each input subcarrier ``i`` contributes
    ``0.5 * log2(1 + snr_sd[i] + q2[i] * p2[perm[i]])``; the direct-path term
    is dropped when ``direct`` is false.
    """
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    if perm.n != metrics.n:
        raise InvalidPermutation(f"permutation has size {perm.n}, expected {metrics.n}")
    sinr = metrics.q2 * metrics.p2[perm.map]
    base = 1.0 + (metrics.snr_sd if direct else 0.0)
    bits = 0.5 * np.log2(base + sinr)
    pairs = [PairRate(i, int(j), float(s), float(b))
             for i, (j, s, b) in enumerate(zip(perm.map, sinr, bits))]
    return RateBreakdown(float(np.sum(bits)), pairs)

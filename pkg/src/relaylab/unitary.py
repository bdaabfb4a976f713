"""Unitary-group tools used to check that pairing is the best unitary processing.

Includes Haar sampling, the four-angle 2x2 parametrization, a Givens-sweep
coordinate ascent of the rate over U(N), first-order stationarity probes
and the determinant bound used in the induction argument.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .channel import ChannelRealization, SystemParams, derive_relay_gain
from .rate import UnitarityError, check_unitary, rate_general, unitarity_residual

__all__ = [
    "InvalidDirection",
    "InvalidMatrix",
    "AscentResult",
    "haar_random",
    "unitary_2x2",
    "embed_block",
    "RateObjective",
    "ascend_rate",
    "ascend_restarts",
    "skew_expm",
    "random_skew_hermitian",
    "rate_gradient",
    "givens_direction",
    "directional_derivative",
    "gram_matrix",
    "psd_det_bound_check",
]

_LN2 = math.log(2.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidDirection(ValueError):
    """Tangent direction is not skew-Hermitian."""


class InvalidMatrix(ValueError):
    """Matrix is not Hermitian positive semidefinite."""


def haar_random(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary matrix via QR with phase correction."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def unitary_2x2(theta: float, phi1: float, phi2: float, phi3: float) -> np.ndarray:
    """``diag(e^{i phi1}, e^{i phi2}) @ rotation(theta) @ diag(1, e^{i phi3})``."""
    c, s = math.cos(theta), math.sin(theta)
    left = np.diag([np.exp(1j * phi1), np.exp(1j * phi2)])
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    right = np.diag([1.0, np.exp(1j * phi3)])
    return left @ rot @ right


def embed_block(n: int, i: int, j: int, block: np.ndarray) -> np.ndarray:
    """Identity of size ``n`` with ``block`` acting on coordinates ``(i, j)``."""
    g = np.eye(n, dtype=complex)
    idx = np.array([i, j])
    g[np.ix_(idx, idx)] = block
    return g


class RateObjective:
    """Fast evaluator of the rate as a function of ``W`` for one channel.

    Uses ``C(W) = 0.5 log2 det(D + (W Q)^H diag(p2) (W Q))`` with
    ``D = I + direct-path SNRs``, which equals :func:`rate_general`.
    """

    def __init__(self, params: SystemParams, channel: ChannelRealization):
        d_r = derive_relay_gain(params, channel.h1)
        g2 = np.abs(channel.h2) ** 2 * d_r**2
        self.p2 = g2 / (params.sigma_d2 + params.sigma_r2 * g2)
        self.q = channel.h1 * params.d_s
        base = np.ones(params.n_subcarriers)
        if params.direct_path:
            base = base + np.abs(channel.h0) ** 2 * params.d_s**2 / params.sigma_d2
        self.base = base
        self.n = params.n_subcarriers

    def matrix(self, w: np.ndarray) -> np.ndarray:
        v = w * self.q[..., None, :]
        a = np.einsum("...ki,k,...kj->...ij", v.conj(), self.p2, v)
        idx = np.arange(self.n)
        a[..., idx, idx] += self.base
        return a

    def __call__(self, w: np.ndarray):
        """Rate in bits; ``w`` may carry leading batch dimensions."""
        _, logdet = np.linalg.slogdet(self.matrix(w))
        return 0.5 * logdet / _LN2

    def rotate(self, w: np.ndarray, i: int, j: int, theta, phi) -> np.ndarray:
        """Batch of ``embed_block(n, i, j, unitary_2x2(theta, 0, 0, phi)) @ w``."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        c, s = np.cos(theta)[..., None], np.sin(theta)[..., None]
        e = np.exp(1j * phi)[..., None]
        out = np.broadcast_to(w, theta.shape + w.shape).copy()
        wi, wj = w[i, :], w[j, :] * e
        out[..., i, :] = c * wi - s * wj
        out[..., j, :] = s * wi + c * wj
        return out


class AscentResult(NamedTuple):
    w: np.ndarray
    rate: float


def _golden_max(f, lo: float, hi: float, iters: int) -> tuple[float, float]:
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def ascend_rate(params: SystemParams, channel: ChannelRealization, start,
                max_sweeps: int = 500, tol: float = 1e-10, grid: int = 64,
                refine_iters: int = 20, history: list | None = None,
                local_grid: int = 16) -> AscentResult:
    """Coordinate ascent of the rate over the unitary group.

    Each sweep visits every coordinate pair ``(i, j)`` and left-multiplies
    ``W`` by the embedded 2x2 block ``unitary_2x2(theta, 0, 0, phi3)`` that
    maximizes the rate: a ``grid x grid`` search over ``[0, pi) x [0, 2 pi)``
    followed by golden-section refinement of each angle. Later sweeps only
    polish, so they use the coarser ``local_grid``. The block's left
    phases ``phi1, phi2`` then multiply ``W`` from the outside, where the
    rate ignores them, so they are not searched. Stops once a sweep gains
    less than ``tol`` bits or after ``max_sweeps``.

    A step is only taken when it does not lower the rate, so the per-sweep
    rates appended to ``history`` are nondecreasing.

    Note that every permutation matrix is a stationary point; started
    exactly at one, the ascent does not move.
    """
    w = check_unitary(start, params.n_subcarriers).copy()
    obj = RateObjective(params, channel)
    n = obj.n

    def angle_grid(size):
        tg, pg = np.meshgrid(np.arange(size) * (math.pi / size),
                             np.arange(size) * (2.0 * math.pi / size), indexing="ij")
        return tg, pg, math.pi / size, 2.0 * math.pi / size

    grids = (angle_grid(grid), angle_grid(min(grid, local_grid)))

    current = float(obj(w))
    if history is not None:
        history.append(current)
    for sweep in range(max_sweeps):
        tg, pg, dt, dp = grids[sweep > 0]
        sweep_start = current
        for i in range(n - 1):
            for j in range(i + 1, n):
                vals = obj(obj.rotate(w, i, j, tg, pg))
                k = np.unravel_index(int(np.argmax(vals)), vals.shape)
                th, ph = float(tg[k]), float(pg[k])
                th, _ = _golden_max(lambda t: float(obj(obj.rotate(w, i, j, t, ph))),
                                    th - dt, th + dt, refine_iters)
                ph, best = _golden_max(lambda p: float(obj(obj.rotate(w, i, j, th, p))),
                                       ph - dp, ph + dp, refine_iters)
                if vals[k] > best:
                    th, ph, best = float(tg[k]), float(pg[k]), float(vals[k])
                if best > current:
                    w = obj.rotate(w, i, j, th, ph)
                    current = best
        if unitarity_residual(w) > 1e-11:
            u, _, vh = np.linalg.svd(w)
            w = u @ vh
            current = float(obj(w))
        if history is not None:
            history.append(current)
        if current - sweep_start < tol:
            break
    return AscentResult(w, rate_general(w, params, channel))


def ascend_restarts(params: SystemParams, channel: ChannelRealization, restarts: int,
                    rng: np.random.Generator, **kwargs) -> list[AscentResult]:
    """Ascent from ``restarts`` Haar starts, best first (ties by restart index)."""
    starts = [haar_random(params.n_subcarriers, rng) for _ in range(restarts)]
    runs = [ascend_rate(params, channel, w0, **kwargs) for w0 in starts]
    order = sorted(range(restarts), key=lambda k: (-runs[k].rate, k))
    return [runs[k] for k in order]


def _check_skew(s, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.shape != (n, n):
        raise InvalidDirection(f"direction must be {n}x{n}, got {s.shape}")
    if np.linalg.norm(s + s.conj().T) > 1e-10:
        raise InvalidDirection("direction is not skew-Hermitian")
    return s


def skew_expm(s: np.ndarray) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian matrix via its eigendecomposition."""
    lam, v = np.linalg.eigh(-1j * s)
    lam = np.real(lam)
    return (v * np.exp(1j * lam)[None, :]) @ v.conj().T


def random_skew_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random skew-Hermitian direction with unit Frobenius norm."""
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = 0.5 * (x - x.conj().T)
    return s / np.linalg.norm(s)


def rate_gradient(w, params: SystemParams, channel: ChannelRealization) -> np.ndarray:
    """Skew-Hermitian ``G`` with ``d/de C(W exp(e S)) = Re tr(G^H S)`` at ``e = 0``."""
    obj = RateObjective(params, channel)
    w = np.asarray(w, dtype=complex)
    m = w.conj().T @ (obj.p2[:, None] * w)
    b = obj.q[:, None] * np.linalg.inv(obj.matrix(w)) * obj.q.conj()[None, :]
    x = b @ m
    return (x.conj().T - x) / (2.0 * _LN2)


def givens_direction(grad: np.ndarray) -> np.ndarray:
    """Tangent direction on the single coordinate pair where ``grad`` is largest."""
    n = grad.shape[0]
    mag = np.abs(np.triu(grad, 1))
    i, j = np.unravel_index(int(np.argmax(mag)), mag.shape)
    s = np.zeros((n, n), dtype=complex)
    if mag[i, j] > 0:
        s[i, j] = grad[i, j]
        s[j, i] = -np.conj(grad[i, j])
        s /= np.linalg.norm(s)
    return s


def directional_derivative(w, s, params: SystemParams, channel: ChannelRealization,
                           eps: float = 1e-4) -> float:
    """Central difference of the rate along the geodesic ``W exp(e S)``."""
    n = params.n_subcarriers
    w = check_unitary(w, n)
    s = _check_skew(s, n)
    if not 0 < eps <= 1e-2:
        raise ValueError("eps must lie in (0, 1e-2]")
    if not np.any(s):
        return 0.0
    up = rate_general(w @ skew_expm(eps * s), params, channel)
    down = rate_general(w @ skew_expm(-eps * s), params, channel)
    return (up - down) / (2.0 * eps)


def gram_matrix(p, w, q) -> np.ndarray:
    """``A = (P W Q)^H (P W Q)`` for diagonal ``P = diag(p)``, ``Q = diag(q)``."""
    m = np.asarray(p)[:, None] * np.asarray(w) * np.asarray(q)[None, :]
    return m.conj().T @ m


def psd_det_bound_check(a) -> bool:
    """Check ``det(I + A) <= (1 + A[-1, -1]) det(I + A[:-1, :-1])``.

    Holds for every Hermitian positive semidefinite ``A``; a relative
    slack of 1e-12 absorbs rounding.

    Raises
    ------
    InvalidMatrix
        If ``A`` is not Hermitian or has an eigenvalue below -1e-10.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrix(f"expected a non-empty square matrix, got {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.conj().T)) > 1e-12 * scale:
        raise InvalidMatrix("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    if np.min(np.linalg.eigvalsh(a)) < -1e-10:
        raise InvalidMatrix("matrix is not positive semidefinite")
    n = a.shape[0]
    full = np.real(np.linalg.det(np.eye(n) + a))
    lead = np.real(np.linalg.det(np.eye(n - 1) + a[:-1, :-1])) if n > 1 else 1.0
    return bool(full <= (1.0 + np.real(a[-1, -1])) * lead + 1e-12 * max(1.0, full))

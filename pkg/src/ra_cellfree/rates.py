"""SINR and achievable rates under normalized conjugate precoding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import channel_matrix

DENOM_MODES = ("as_printed", "per_interferer")


@dataclass(frozen=True)
class RateReport:
    per_user_sinr: np.ndarray
    per_user_rate: np.ndarray
    sum_rate: float


def conjugate_precoder(h):
    """``conj(h)/|h|``; dead links (``h == 0``) get the inert value 1."""
    h = np.asarray(h, dtype=complex)
    out = np.where(h != 0, np.exp(-1j * np.angle(h)), 1.0 + 0j)
    return complex(out) if out.ndim == 0 else out


def effective_gains(H, serving, precoders=None):
    """(K, K) matrix ``A[k, i] = sum_l h[l,k] b[l,i] phi*[l,i]``.

    ``precoders`` is the (L,) vector of each AP's precoder toward the user it
    serves; by default it is recomputed from ``H``.
    """
    L, K = H.shape
    rows = np.arange(L)
    if precoders is None:
        precoders = conjugate_precoder(H[rows, serving])
    B = np.zeros((L, K))
    B[rows, serving] = 1.0
    return (H * precoders[:, None]).T @ B


def interference_power(A, denom_mode="as_printed"):
    """Interference term (without the factor P) for each user.

    ``as_printed`` squares the coherent sum over interferers;
    ``per_interferer`` sums the powers of the individual interferers.
    """
    desired = np.diag(A)
    if denom_mode == "as_printed":
        return np.abs(A.sum(axis=1) - desired) ** 2
    if denom_mode == "per_interferer":
        off = ~np.eye(A.shape[0], dtype=bool)
        return np.sum(np.abs(A) ** 2 * off, axis=1)
    raise ValueError(f"unknown denom_mode {denom_mode!r}; expected one of {DENOM_MODES}")


def sinr_from_channels(H, serving, params, denom_mode="as_printed", precoders=None):
    A = effective_gains(H, serving, precoders)
    P, noise = params.tx_power, params.noise_power
    signal = P * np.abs(np.diag(A)) ** 2
    return signal / (P * interference_power(A, denom_mode) + noise)


def _channels(layout, fading, pointing, params, gain_mode):
    if pointing is None:
        pointing = np.zeros((layout.num_aps, 3))
    return channel_matrix(layout, fading, pointing, params, gain_mode)


def compute_sinr(layout, fading, assoc, pointing, params, k,
                 denom_mode="as_printed", gain_mode="exact") -> float:
    """SINR of user ``k``."""
    K = layout.num_users
    if not 0 <= k < K:
        raise IndexError(f"user index {k} out of range for K={K}")
    H = _channels(layout, fading, pointing, params, gain_mode)
    return float(sinr_from_channels(H, assoc.serving, params, denom_mode)[k])


def report_from_sinr(sinr) -> RateReport:
    sinr = np.asarray(sinr, dtype=float)
    rate = np.log2(1.0 + sinr)
    return RateReport(sinr, rate, float(np.sum(rate)))


def rate_report(layout, fading, assoc, pointing, params,
                denom_mode="as_printed", gain_mode="exact") -> RateReport:
    """Per-user SINR and rate plus the sum rate.

    ``pointing`` is the (L, 3) boresight array; it may be ``None`` for the
    isotropic gain mode.
    """
    H = _channels(layout, fading, pointing, params, gain_mode)
    return report_from_sinr(sinr_from_channels(H, assoc.serving, params, denom_mode))

"""Directional gain pattern of a rotatable antenna and its softplus surrogate.

The pattern depends on the incidence direction only through the projection
``t = f . q`` of the boresight ``f`` onto the unit direction ``q``; the
azimuth angle around the boresight never enters.
"""

from __future__ import annotations

import numpy as np

UNIT_TOL = 1e-9


def peak_gain(p: int) -> float:
    return 2.0 * (2 * p + 1)


def softplus(x):
    """Overflow-free ``ln(1 + e^x)``."""
    x = np.asarray(x, dtype=float)
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def sigmoid(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _check_unit(v, name):
    n = np.linalg.norm(v, axis=-1)
    if not np.all(np.abs(n - 1.0) <= UNIT_TOL):
        raise ValueError(f"{name} must have unit norm, got norm {n}")


def _check_ball(v, name):
    n = np.linalg.norm(v, axis=-1)
    if not np.all(n <= 1.0 + UNIT_TOL):
        raise ValueError(f"{name} must lie in the unit ball, got norm {n}")


def gain_from_projection(t, p: int):
    """Exact pattern ``G0 t^(2p)`` on the open front hemisphere, 0 elsewhere."""
    t = np.asarray(t, dtype=float)
    return np.where(t > 0, peak_gain(p) * np.where(t > 0, t, 0.0) ** (2 * p), 0.0)


def smoothed_gain_from_projection(t, p: int, m: float):
    return peak_gain(p) * (softplus(m * np.asarray(t, dtype=float)) / m) ** (2 * p)


def directional_gain(f, direction, p: int):
    """Exact gain toward ``direction`` of an antenna with boresight ``f``.

    Both vectors must be unit norm. Broadcasts over leading axes.
    """
    f = np.asarray(f, dtype=float)
    direction = np.asarray(direction, dtype=float)
    _check_unit(f, "f")
    _check_unit(direction, "direction")
    g = gain_from_projection(np.sum(f * direction, axis=-1), p)
    return float(g) if g.ndim == 0 else g


def smoothed_gain(f, direction, p: int, m: float):
    """Softplus surrogate ``G0 [softplus(m t)/m]^(2p)``, strictly positive.

    ``f`` may be any point of the unit ball, which is where subproblem
    iterates live.
    """
    f = np.asarray(f, dtype=float)
    direction = np.asarray(direction, dtype=float)
    _check_ball(f, "f")
    _check_unit(direction, "direction")
    if m <= 0:
        raise ValueError("smoothness m must be positive")
    g = smoothed_gain_from_projection(np.sum(f * direction, axis=-1), p, m)
    return float(g) if g.ndim == 0 else g


def smoothed_gain_grad(f, direction, p: int, m: float):
    """Gradient of :func:`smoothed_gain` with respect to ``f``."""
    f = np.asarray(f, dtype=float)
    direction = np.asarray(direction, dtype=float)
    _check_ball(f, "f")
    _check_unit(direction, "direction")
    if p == 0:
        return np.zeros(np.broadcast_shapes(f.shape, direction.shape))
    t = np.sum(f * direction, axis=-1)
    sp = softplus(m * t) / m
    scale = 2 * p * peak_gain(p) * sp ** (2 * p - 1) * sigmoid(m * t)
    return scale[..., None] * direction

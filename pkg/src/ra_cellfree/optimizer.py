"""Boresight optimization by fractional programming and SCA.

Each outer iteration fixes the quadratic-transform multipliers ``z`` and the
conjugate precoders at the current pointing, linearizes the softplus-smoothed
channel around it, and maximizes the resulting concave surrogate over the
product of unit balls with projected-gradient ascent. Pointing vectors are
rescaled to unit norm before the next linearization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antenna import peak_gain, sigmoid, softplus
from .channel import channel_matrix, path_gain
from .rates import (
    conjugate_precoder,
    effective_gains,
    interference_power,
    sinr_from_channels,
)

LN2 = np.log(2.0)
DOMAIN_MARGIN = 1e-12
INIT_MODES = ("aligned", "random", "fixed")


class InfeasiblePoint(ValueError):
    """The surrogate's log argument is not positive at the requested point."""


@dataclass(frozen=True)
class OptimizerConfig:
    xi: float = 1e-3
    max_outer: int = 20
    inner_tol: float = 1e-6
    max_inner: int = 200
    armijo_c: float = 1e-4
    armijo_shrink: float = 0.5
    step_init: float = 1.0
    max_backtracks: int = 60
    bb_steps: bool = True
    max_damping: int = 10
    init_mode: str = "aligned"
    denom_mode: str = "as_printed"

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError("xi must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration limits must be >= 1")
        if not self.inner_tol > 0:
            raise ValueError("inner_tol must be positive")
        if not (0 < self.armijo_c < 1 and 0 < self.armijo_shrink < 1):
            raise ValueError("Armijo constants must lie in (0, 1)")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"unknown init_mode {self.init_mode!r}")


def project_to_ball(v):
    """Radial projection of each trailing 3-vector onto the unit ball."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return np.where(n > 1.0, v / np.where(n > 1.0, n, 1.0), v)


def aligned_pointing(layout, assoc):
    """Each AP's boresight toward the user it serves."""
    return layout.directions[np.arange(layout.num_aps), assoc.serving].copy()


def initial_pointing(mode, layout, assoc, rng=None):
    L = layout.num_aps
    if mode == "aligned":
        return aligned_pointing(layout, assoc)
    if mode == "fixed":
        return np.tile([1.0, 0.0, 0.0], (L, 1))
    if mode == "random":
        v = np.random.default_rng(rng).standard_normal((L, 3))
        return v / np.linalg.norm(v, axis=1, keepdims=True)
    raise ValueError(f"unknown init_mode {mode!r}")


def normalize_pointing(F, fallback):
    """Rescale rows to unit norm; a (numerically) zero row takes ``fallback``."""
    F = np.asarray(F, dtype=float)
    n = np.linalg.norm(F, axis=1, keepdims=True)
    dead = n[:, 0] < 1e-12
    out = F / np.where(dead[:, None], 1.0, n)
    out[dead] = fallback[dead]
    return out


# -- quadratic transform -------------------------------------------------------

def _multipliers(H, serving, params, precoders=None, denom_mode="as_printed"):
    A = effective_gains(H, serving, precoders)
    P = params.tx_power
    return np.sqrt(P) * np.diag(A) / (P * interference_power(A, denom_mode) + params.noise_power)


def _qt_values(H, serving, z, params, precoders=None, denom_mode="as_printed"):
    A = effective_gains(H, serving, precoders)
    P = params.tx_power
    denom = P * interference_power(A, denom_mode) + params.noise_power
    return 2.0 * np.sqrt(P) * np.real(z * np.diag(A)) - np.abs(z) ** 2 * denom


def optimal_multiplier(layout, fading, assoc, pointing, params, k,
                       gain_mode="exact", denom_mode="as_printed") -> complex:
    """Closed-form maximizer over ``z`` of the transformed SINR of user ``k``."""
    H = channel_matrix(layout, fading, pointing, params, gain_mode)
    return complex(_multipliers(H, assoc.serving, params, denom_mode=denom_mode)[k])


def quadratic_transform_value(layout, fading, assoc, pointing, z, params, k,
                              gain_mode="exact", denom_mode="as_printed") -> float:
    """Transformed SINR ``2 sqrt(P) Re{z a} - |z|^2 (P I + sigma^2)`` of user ``k``."""
    H = channel_matrix(layout, fading, pointing, params, gain_mode)
    z = np.asarray(z, dtype=complex)
    return float(_qt_values(H, assoc.serving, z, params, denom_mode=denom_mode)[k])


# -- linearized surrogate -------------------------------------------------------

def _linearization(anchor, layout, fading, params):
    """Value and slope (w.r.t. the projection t) of the smoothed channel at ``anchor``."""
    p, m = params.directivity, params.smoothness
    t0 = np.einsum("ld,lkd->lk", anchor, layout.directions)
    amp = np.sqrt(path_gain(layout.distances, params) * peak_gain(p)) * fading.g
    sp = softplus(m * t0) / m
    h0 = amp * sp**p
    slope = p * amp * sp ** (p - 1) * sigmoid(m * t0)
    return h0, slope


def linearize_channel(f_anchor, f, layout, fading, l, k, params) -> complex:
    """First-order expansion of the smoothed channel ``h[l, k]`` around ``f_anchor``.

    Since ``h = sqrt(beta G0) g [softplus(m t)/m]^p``, the slope in ``t`` is
    ``p sqrt(beta G0) g [softplus(m t)/m]^(p-1) sigmoid(m t)``.
    """
    f_anchor = np.asarray(f_anchor, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.linalg.norm(f_anchor) > 1.0 + 1e-9:
        raise ValueError("anchor must lie in the unit ball")
    p, m = params.directivity, params.smoothness
    q = layout.directions[l, k]
    t0 = float(f_anchor @ q)
    amp = np.sqrt(path_gain(layout.distances[l, k], params) * peak_gain(p)) * fading.g[l, k]
    sp = float(softplus(m * t0)) / m
    slope = p * amp * sp ** (p - 1) * float(sigmoid(m * t0))
    return complex(amp * sp**p + slope * float((f - f_anchor) @ q))


class Surrogate:
    """Concave surrogate of the sum rate, built around one anchor pointing.

    Multipliers ``z`` and precoders are frozen at construction. Precoders
    default to the conjugate phase of the smoothed channel at the anchor,
    which equals the exact-channel precoder on every live link.
    """

    def __init__(self, anchor, z, layout, fading, assoc, params,
                 precoders=None, denom_mode="as_printed"):
        self.anchor = np.array(anchor, dtype=float)
        self.q = layout.directions
        L, K = layout.distances.shape
        self.serving = np.asarray(assoc.serving)
        rows = np.arange(L)
        h0, slope = _linearization(self.anchor, layout, fading, params)
        if precoders is None:
            precoders = conjugate_precoder(h0[rows, self.serving])
        self.precoders = np.asarray(precoders, dtype=complex)
        self.m0 = h0 * self.precoders[:, None]
        self.m1 = slope * self.precoders[:, None]
        self.B = np.zeros((L, K))
        self.B[rows, self.serving] = 1.0
        self.own = self.B.astype(bool)
        self.z = np.asarray(z, dtype=complex)
        self.P = params.tx_power
        self.noise = params.noise_power
        self.denom_mode = denom_mode
        self.t0 = np.einsum("ld,lkd->lk", self.anchor, self.q)

    def transformed_sinr(self, F):
        dt = np.einsum("ld,lkd->lk", F, self.q) - self.t0
        M = self.m0 + self.m1 * dt
        A = M.T @ self.B
        a = np.diag(A)
        if self.denom_mode == "as_printed":
            c = A.sum(axis=1) - a
            interf = np.abs(c) ** 2
        else:
            c = None
            interf = np.sum(np.abs(A) ** 2 * (1.0 - np.eye(len(a))), axis=1)
        gamma = (2.0 * np.sqrt(self.P) * np.real(self.z * a)
                 - np.abs(self.z) ** 2 * (self.P * interf + self.noise))
        return gamma, A, c

    def value(self, F) -> float:
        gamma, _, _ = self.transformed_sinr(F)
        if np.any(1.0 + gamma <= DOMAIN_MARGIN):
            return -np.inf
        return float(np.sum(np.log1p(gamma)) / LN2)

    def value_and_grad(self, F):
        """Surrogate value and its (L, 3) gradient; ``(-inf, None)`` off-domain."""
        gamma, A, c = self.transformed_sinr(F)
        if np.any(1.0 + gamma <= DOMAIN_MARGIN):
            return -np.inf, None
        value = float(np.sum(np.log1p(gamma)) / LN2)
        if self.denom_mode == "as_printed":
            X = np.broadcast_to(c, self.m1.shape)
        else:
            X = A.T[self.serving, :]  # X[l, k] = A[k, serving[l]]
        zabs2 = np.abs(self.z) ** 2
        coef = np.where(
            self.own,
            2.0 * np.sqrt(self.P) * np.real(self.z[None, :] * self.m1),
            -2.0 * self.P * zabs2[None, :] * np.real(np.conj(X) * self.m1),
        )
        coef = coef / (LN2 * (1.0 + gamma))[None, :]
        return value, np.einsum("lk,lkd->ld", coef, self.q)


def surrogate_objective(pointing, anchor, z, layout, fading, assoc, params,
                        precoders=None, denom_mode="as_printed"):
    """Surrogate sum rate at ``pointing`` and its gradient w.r.t. every ``f_l``.

    Raises :class:`InfeasiblePoint` outside the domain of the logarithm.
    """
    sur = Surrogate(anchor, z, layout, fading, assoc, params, precoders, denom_mode)
    value, grad = sur.value_and_grad(np.asarray(pointing, dtype=float))
    if grad is None:
        raise InfeasiblePoint("1 + transformed SINR is not positive")
    return value, grad


# -- solvers ------------------------------------------------------------------

def _ascend(sur: Surrogate, start, cfg: OptimizerConfig, history=None):
    F = project_to_ball(start)
    U, g = sur.value_and_grad(F)
    if g is None:
        raise InfeasiblePoint("surrogate undefined at the anchor")
    # weak-signal anchors give a tiny, flat objective; rescale so the
    # stopping tolerance stays meaningful
    scale = 1.0 / U if 0.0 < U < 1.0 else 1.0
    if history is not None:
        history.append(U)
    alpha0 = cfg.step_init
    for _ in range(cfg.max_inner):
        gs = scale * g
        if np.linalg.norm(project_to_ball(F + gs) - F) < cfg.inner_tol:
            break
        alpha = alpha0
        for _ in range(cfg.max_backtracks):
            F_new = project_to_ball(F + alpha * gs)
            U_new, g_new = sur.value_and_grad(F_new)
            if g_new is not None and scale * (U_new - U) >= cfg.armijo_c * np.sum(gs * (F_new - F)):
                break
            alpha *= cfg.armijo_shrink
        else:
            break
        if U_new < U:
            break
        if cfg.bb_steps:
            # Barzilai-Borwein guess for the next trial step
            s_vec, y_vec = F_new - F, scale * (g - g_new)
            sy = np.sum(s_vec * y_vec)
            alpha0 = np.sum(s_vec * s_vec) / sy if sy > 0 else cfg.step_init
            alpha0 = min(max(alpha0, 1e-10), 1e10)
        F, U, g = F_new, U_new, g_new
        if history is not None:
            history.append(U)
    return F


def solve_subproblem(anchor, z, layout, fading, assoc, params, cfg=None,
                     precoders=None, history=None):
    """Maximize the surrogate built at ``anchor`` over the product of unit balls.

    Projected-gradient ascent with Armijo backtracking, started at the
    anchor. Accepted surrogate values are appended to ``history`` if given.
    """
    cfg = cfg or OptimizerConfig()
    sur = Surrogate(anchor, z, layout, fading, assoc, params, precoders, cfg.denom_mode)
    return _ascend(sur, anchor, cfg, history)


def _sum_rate(layout, fading, assoc, F, params, denom_mode):
    H = channel_matrix(layout, fading, F, params, "exact")
    return float(np.sum(np.log2(1.0 + sinr_from_channels(H, assoc.serving, params, denom_mode))))


def _damped_update(layout, fading, assoc, params, cfg, F, rate, F_sub, fallback):
    """Move from ``F`` toward the subproblem solution without losing true rate.

    The linearized interference is not a lower bound on the true one, so the
    full step can lower the exact sum rate; the step is halved until it does
    not. Returns ``(None, rate)`` if no tried fraction helps.
    """
    theta = 1.0
    for _ in range(cfg.max_damping + 1):
        F_try = normalize_pointing(F + theta * (F_sub - F), fallback)
        r_try = _sum_rate(layout, fading, assoc, F_try, params, cfg.denom_mode)
        if r_try >= rate:
            return F_try, r_try
        theta *= 0.5
    return None, rate


def optimize_pointing(layout, fading, assoc, params, cfg=None, rng=None, init=None,
                      callback=None):
    """Alternate multiplier updates and surrogate maximization.

    Returns the unit-norm (L, 3) pointing and the exact-gain sum-rate trace,
    whose first entry is the initial pointing's rate. ``callback``, if given,
    receives a dict per outer iteration with the inner surrogate history.
    """
    cfg = cfg or OptimizerConfig()
    serving = assoc.serving
    rows = np.arange(layout.num_aps)
    aligned = aligned_pointing(layout, assoc)
    F = np.array(init, dtype=float) if init is not None else initial_pointing(cfg.init_mode, layout, assoc, rng)
    F = normalize_pointing(F, aligned)
    rate = _sum_rate(layout, fading, assoc, F, params, cfg.denom_mode)
    trace = [rate]
    for it in range(cfg.max_outer):
        H = channel_matrix(layout, fading, F, params, "smoothed")
        precoders = conjugate_precoder(H[rows, serving])
        z = _multipliers(H, serving, params, precoders, cfg.denom_mode)
        sur = Surrogate(F, z, layout, fading, assoc, params, precoders, cfg.denom_mode)
        history = []
        try:
            F_new = _ascend(sur, F, cfg, history)
        except InfeasiblePoint:
            break
        F_new, new_rate = _damped_update(layout, fading, assoc, params, cfg, F, rate,
                                         F_new, aligned)
        if F_new is None:
            break
        if callback is not None:
            callback({"iteration": it + 1, "surrogate": history, "sum_rate": new_rate,
                      "pointing": F_new})
        if rate > 0:
            gain = (new_rate - rate) / rate
        else:
            gain = np.inf if new_rate > rate else 0.0
        F, rate = F_new, new_rate
        trace.append(rate)
        if gain < cfg.xi:
            break
    return F, trace

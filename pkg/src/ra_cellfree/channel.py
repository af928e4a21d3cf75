"""Path loss, Rician small-scale fading, and the per-link channel coefficient."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antenna import (
    _check_unit,
    gain_from_projection,
    smoothed_gain_from_projection,
)
from .layout import ScenarioLayout
from .params import SystemParams

GAIN_MODES = ("exact", "smoothed", "isotropic", "isotropic_hemisphere")


@dataclass(frozen=True, eq=False)
class FadingRealization:
    g: np.ndarray  # (L, K) complex


def path_gain(d, params: SystemParams):
    """Large-scale power gain ``C0 (d0/d)^alpha`` with ``d0 = 1 m``."""
    d = np.asarray(d, dtype=float)
    if np.any(d < params.min_distance):
        raise ValueError(f"distance below the {params.min_distance} m floor")
    out = params.ref_gain * (1.0 / d) ** params.pathloss_exp
    return float(out) if out.ndim == 0 else out


def draw_fading(layout: ScenarioLayout, params: SystemParams, seed) -> FadingRealization:
    """Draw i.i.d. Rician coefficients with unit mean power.

    LoS phase follows the link distance; the scattered part is CN(0, 1).
    """
    rng = np.random.default_rng(seed)
    shape = layout.distances.shape
    kappa = params.rician_k
    los = np.exp(-2j * np.pi * layout.distances / params.wavelength)
    nlos = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    g = np.sqrt(kappa / (kappa + 1.0)) * los + np.sqrt(1.0 / (kappa + 1.0)) * nlos
    g.setflags(write=False)
    return FadingRealization(g)


def link_gains(layout: ScenarioLayout, pointing, params: SystemParams, gain_mode="exact"):
    """(L, K) antenna gains for every AP toward every user."""
    q = layout.directions
    if gain_mode == "isotropic":
        return np.ones(q.shape[:2])
    t = np.einsum("ld,lkd->lk", np.asarray(pointing, dtype=float), q)
    if gain_mode == "exact":
        return gain_from_projection(t, params.directivity)
    if gain_mode == "smoothed":
        return smoothed_gain_from_projection(t, params.directivity, params.smoothness)
    if gain_mode == "isotropic_hemisphere":
        return np.where(t > 0, 1.0, 0.0)
    raise ValueError(f"unknown gain mode {gain_mode!r}; expected one of {GAIN_MODES}")


def channel_matrix(layout: ScenarioLayout, fading: FadingRealization, pointing,
                   params: SystemParams, gain_mode="exact"):
    """All channel coefficients ``h[l, k]`` for the pointing vectors (L, 3)."""
    beta = path_gain(layout.distances, params)
    return np.sqrt(beta * link_gains(layout, pointing, params, gain_mode)) * fading.g


def channel_coeff(layout, fading, f_l, l, k, params, gain_mode="exact") -> complex:
    f_l = np.asarray(f_l, dtype=float)
    if gain_mode == "exact":
        _check_unit(f_l, "f_l")
    beta = path_gain(layout.distances[l, k], params)
    t = float(f_l @ layout.directions[l, k])
    if gain_mode == "exact":
        gain = gain_from_projection(t, params.directivity)
    elif gain_mode == "smoothed":
        gain = smoothed_gain_from_projection(t, params.directivity, params.smoothness)
    elif gain_mode == "isotropic":
        gain = 1.0
    elif gain_mode == "isotropic_hemisphere":
        gain = 1.0 if t > 0 else 0.0
    else:
        raise ValueError(f"unknown gain mode {gain_mode!r}")
    return complex(np.sqrt(beta * float(gain)) * fading.g[l, k])

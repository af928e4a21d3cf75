"""Random placement of access points and users."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams

MAX_REDRAWS = 1000


@dataclass(frozen=True, eq=False)
class ScenarioLayout:
    """AP/user positions with the pairwise geometry precomputed.

    ``distances`` is (L, K); ``directions`` is (L, K, 3) and holds the unit
    vector from AP ``l`` toward user ``k``.
    """

    ap_positions: np.ndarray
    user_positions: np.ndarray
    distances: np.ndarray
    directions: np.ndarray

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_users(self) -> int:
        return self.user_positions.shape[0]


def layout_from_positions(ap_positions, user_positions, min_distance: float = 1.0) -> ScenarioLayout:
    """Build a layout from explicit coordinates.

    Raises ``ValueError`` if any AP-user pair is closer than ``min_distance``
    or if there are fewer APs than users.
    """
    ap = np.array(ap_positions, dtype=float).reshape(-1, 3)
    users = np.array(user_positions, dtype=float).reshape(-1, 3)
    if len(users) < 1 or len(ap) < len(users):
        raise ValueError(f"need L >= K >= 1, got L={len(ap)}, K={len(users)}")
    if not (np.all(np.isfinite(ap)) and np.all(np.isfinite(users))):
        raise ValueError("positions must be finite")
    diff = users[None, :, :] - ap[:, None, :]
    dist = np.linalg.norm(diff, axis=-1)
    if np.any(dist < min_distance):
        raise ValueError(f"AP-user pair closer than the {min_distance} m floor")
    directions = diff / dist[..., None]
    for a in (ap, users, dist, directions):
        a.setflags(write=False)
    return ScenarioLayout(ap, users, dist, directions)


def make_layout(params: SystemParams, seed) -> ScenarioLayout:
    """Drop L APs and K users uniformly over the square service area.

    Heights are fixed at ``params.ap_height`` / ``params.user_height``.
    The whole layout is redrawn if any pair violates the distance floor.
    ``seed`` is anything :func:`numpy.random.default_rng` accepts.
    """
    L, K = params.num_aps, params.num_users
    if L < K:
        raise ValueError(f"need L >= K, got L={L}, K={K}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_REDRAWS):
        ap_xy = rng.uniform(0.0, params.area_side, size=(L, 2))
        user_xy = rng.uniform(0.0, params.area_side, size=(K, 2))
        ap = np.column_stack([ap_xy, np.full(L, params.ap_height)])
        users = np.column_stack([user_xy, np.full(K, params.user_height)])
        try:
            return layout_from_positions(ap, users, params.min_distance)
        except ValueError:
            continue
    raise RuntimeError(f"no layout satisfying the distance floor after {MAX_REDRAWS} draws")

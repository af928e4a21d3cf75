"""AP-user association by distance.

Every AP serves exactly one user and every user gets at least one AP. The
two-stage greedy first gives each user a distinct nearby AP, then hands each
leftover AP to its nearest user. Ties resolve to the lowest AP index, then
the lowest user index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True, eq=False)
class AssociationMatrix:
    b: np.ndarray  # (L, K) of 0/1

    def __post_init__(self):
        b = np.asarray(self.b)
        if b.ndim != 2 or not np.all((b == 0) | (b == 1)):
            raise ValueError("association matrix must be a 2-D 0/1 array")
        if not np.all(b.sum(axis=1) == 1):
            raise ValueError("every AP must serve exactly one user")
        if not np.all(b.sum(axis=0) >= 1):
            raise ValueError("every user must be served by at least one AP")
        b = b.astype(np.int8)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_serving(cls, serving, num_users: int) -> "AssociationMatrix":
        serving = np.asarray(serving, dtype=int)
        b = np.zeros((len(serving), num_users), dtype=np.int8)
        b[np.arange(len(serving)), serving] = 1
        return cls(b)

    @property
    def serving(self) -> np.ndarray:
        """User index served by each AP, shape (L,)."""
        return np.argmax(self.b, axis=1)


def _distance_table(layout_or_distances) -> np.ndarray:
    d = getattr(layout_or_distances, "distances", layout_or_distances)
    return np.asarray(d, dtype=float)


def two_stage_association(layout, return_stage1: bool = False):
    """Greedy two-stage association on the AP-user distance table.

    With ``return_stage1=True`` also returns the list of ``(l, k, d)`` pairs
    chosen in the first stage, in selection order.
    """
    d = _distance_table(layout)
    L, K = d.shape
    if L < K:
        raise ValueError(f"need L >= K, got L={L}, K={K}")
    if np.any(np.isnan(d)):
        raise ValueError("distance table contains NaN")

    serving = np.full(L, -1)
    free_aps = np.ones(L, dtype=bool)
    free_users = np.ones(K, dtype=bool)
    masked = d.copy()
    stage1 = []
    for _ in range(K):
        # row-major argmin gives lowest AP index, then lowest user index
        l, k = np.unravel_index(np.argmin(masked), masked.shape)
        stage1.append((int(l), int(k), float(d[l, k])))
        serving[l] = k
        free_aps[l] = False
        free_users[k] = False
        masked[l, :] = np.inf
        masked[:, k] = np.inf
    for l in np.flatnonzero(free_aps):
        serving[l] = int(np.argmin(d[l]))

    assoc = AssociationMatrix.from_serving(serving, K)
    return (assoc, stage1) if return_stage1 else assoc


def association_distance(b, layout) -> float:
    """Total distance ``sum_lk b[l,k] d[l,k]`` of an association."""
    b = np.asarray(getattr(b, "b", b), dtype=float)
    return float(np.sum(b * _distance_table(layout)))


def brute_force_association(layout):
    """Exact minimum-distance association by enumerating all K^L assignments."""
    d = _distance_table(layout)
    L, K = d.shape
    if L < K:
        raise ValueError(f"need L >= K, got L={L}, K={K}")
    if K**L > ENUMERATION_LIMIT:
        raise ValueError(f"instance too large to enumerate: K^L = {K**L}")
    rows = np.arange(L)
    best, best_val = None, np.inf
    for choice in itertools.product(range(K), repeat=L):
        if len(set(choice)) < K:
            continue
        val = d[rows, choice].sum()
        if val < best_val:
            best, best_val = choice, val
    return AssociationMatrix.from_serving(best, K), float(best_val)

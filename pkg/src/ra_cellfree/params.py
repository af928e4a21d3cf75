"""Physical constants of the simulated downlink network."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


def dbm_to_watts(x: float) -> float:
    """Convert a power level in dBm to watts."""
    return 10.0 ** ((x - 30.0) / 10.0)


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """System-level parameters shared by every module.

    Defaults reproduce the 2.4 GHz, 300 m x 300 m deployment used for the
    reported experiments. ``ap_height``/``user_height`` and ``min_distance``
    are modelling choices, not measured values.
    """

    num_aps: int = 30
    num_users: int = 5
    tx_power_dbm: float = 24.0
    noise_dbm: float = -94.0
    ref_gain_db: float = -40.0
    pathloss_exp: float = 3.2
    rician_k: float = 7.94
    wavelength: float = 0.125
    directivity: int = 2
    smoothness: float = 20.0
    area_side: float = 300.0
    ap_height: float = 10.0
    user_height: float = 1.5
    min_distance: float = 1.0

    def __post_init__(self):
        if self.num_users < 1:
            raise ValueError(f"num_users must be >= 1, got {self.num_users}")
        if self.num_aps < self.num_users:
            raise ValueError(
                f"need num_aps >= num_users, got L={self.num_aps}, K={self.num_users}")
        if int(self.directivity) != self.directivity or self.directivity < 0:
            raise ValueError(f"directivity must be a nonnegative integer, got {self.directivity}")
        checks = {
            "pathloss_exp": self.pathloss_exp > 0,
            "wavelength": self.wavelength > 0,
            "smoothness": self.smoothness > 0,
            "area_side": self.area_side > 0,
            "min_distance": self.min_distance > 0,
            "rician_k": self.rician_k >= 0,
        }
        for name, ok in checks.items():
            if not ok:
                raise ValueError(f"invalid {name}: {getattr(self, name)!r}")
        for name in ("tx_power_dbm", "noise_dbm", "ref_gain_db", "ap_height", "user_height"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not (self.tx_power > 0 and self.noise_power > 0):
            raise ValueError("transmit and noise power must be positive in watts")

    @property
    def tx_power(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    @property
    def ref_gain(self) -> float:
        return db_to_linear(self.ref_gain_db)

    @property
    def peak_gain(self) -> float:
        """Boresight gain ``2(2p+1)`` of the cos^(2p) pattern."""
        return 2.0 * (2 * self.directivity + 1)

    def with_size(self, num_aps: int, num_users: int) -> "SystemParams":
        return replace(self, num_aps=num_aps, num_users=num_users)

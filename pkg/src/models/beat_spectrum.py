from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.integrate import trapezoid

from src.models.errors import ConfigError


@dataclass(frozen=True)
class VelocityModel:
    """Maxwell velocities, Gaussian per axis with rms v_rms * anisotropy[axis] (units gamma/k)."""

    v_rms: float
    anisotropy: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.v_rms < 0:
            raise ConfigError("v_rms must be non-negative")
        if len(self.anisotropy) != 3 or min(self.anisotropy) < 0:
            raise ConfigError("anisotropy needs three non-negative factors")

    @property
    def axis_rms(self) -> np.ndarray:
        return self.v_rms * np.asarray(self.anisotropy, dtype=float)

    @property
    def is_isotropic(self) -> bool:
        return len(set(self.anisotropy)) == 1


@dataclass(frozen=True)
class BeatSpectrum:
    """Photocurrent spectrum around the Zeeman beat frequency `carrier`.

    `intensity` is a density per unit omega on `omega_grid` (offsets from the
    carrier), so the trapezoid integral over the grid is the channel weight.
    """

    omega_grid: np.ndarray
    intensity: np.ndarray
    carrier: float
    rms_width: float
    fwhm: float
    weight: float = 1.0

    def integral(self) -> float:
        return float(trapezoid(self.intensity, self.omega_grid))

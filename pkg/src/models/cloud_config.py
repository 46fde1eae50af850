from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.models.errors import ConfigError

AttenuationModel = Literal["anisotropic", "isotropic", "none"]
ATTENUATION_MODELS = ("anisotropic", "isotropic", "none")


@dataclass(frozen=True)
class CloudConfig:
    """Gaussian atomic cloud. Lengths in units of 1/k (k = omega_L / c).

    `temperature` is the per-axis velocity variance in (gamma/k)^2; only the
    beat spectra use it. The peak density is not stored: it is recalibrated
    per detuning from `target_b` by medium.calibrate_density.
    """

    sigma_x: float
    sigma_y: float
    sigma_z: float
    target_b: float = 1.0
    temperature: float = 0.0
    attenuation: AttenuationModel = "anisotropic"

    def __post_init__(self):
        if min(self.sigma_x, self.sigma_y, self.sigma_z) <= 0:
            raise ConfigError("cloud radii must be positive")
        if self.target_b <= 0:
            raise ConfigError("target_b must be positive")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")
        if self.attenuation not in ATTENUATION_MODELS:
            raise ConfigError(
                f"unknown attenuation model '{self.attenuation}', "
                f"expected one of {', '.join(ATTENUATION_MODELS)}"
            )

    @classmethod
    def sphere(cls, sigma: float, **kwargs) -> "CloudConfig":
        return cls(sigma, sigma, sigma, **kwargs)

    @classmethod
    def cigar(cls, sigma_radial: float, sigma_axial: float, **kwargs) -> "CloudConfig":
        if sigma_axial <= sigma_radial:
            raise ConfigError("a cigar cloud is longer along z than across")
        return cls(sigma_radial, sigma_radial, sigma_axial, **kwargs)

    @property
    def radii(self) -> np.ndarray:
        return np.array([self.sigma_x, self.sigma_y, self.sigma_z])

    @property
    def sigma_max(self) -> float:
        return max(self.sigma_x, self.sigma_y, self.sigma_z)

    @property
    def shape(self) -> str:
        if self.sigma_x == self.sigma_y == self.sigma_z:
            return "sphere"
        if self.sigma_x == self.sigma_y < self.sigma_z:
            return "cigar"
        return "ellipsoid"

"""
Gaussian cloud n(r) = n0 exp(-sum_i r_i^2 / (2 sigma_i^2)): density calibration,
position sampling and the closed-form column densities behind ray attenuation.
"""

from typing import Optional, Union

import numpy as np
from scipy.special import erfc, erfcx

from src.models.cloud_config import CloudConfig
from src.models.errors import ZeroCrossSection
from src.models.level_scheme import LevelScheme
from src.physics.scatter import forward_amplitude, mean_forward_amplitude, total_cross_section

Mode = Union[int, str]
MEAN_MODE = "mean"


def density(cloud: CloudConfig, n0: float, position: np.ndarray) -> np.ndarray:
    scaled = np.asarray(position, dtype=float) / cloud.radii
    return n0 * np.exp(-0.5 * np.sum(scaled**2, axis=-1))


def atom_number(cloud: CloudConfig, n0: float) -> float:
    return n0 * (2 * np.pi) ** 1.5 * cloud.sigma_x * cloud.sigma_y * cloud.sigma_z


def on_axis_column(cloud: CloudConfig, n0: float) -> float:
    """Column density through the centre along z."""
    return n0 * np.sqrt(2 * np.pi) * cloud.sigma_z


def calibrate_density(cloud: CloudConfig, scheme: LevelScheme, delta: float, q: int) -> float:
    """Peak density n0 giving the on-axis optical depth cloud.target_b in incident mode q."""
    cross_section = total_cross_section(scheme, q, delta)
    if not np.isfinite(cross_section) or cross_section <= np.finfo(float).tiny:
        raise ZeroCrossSection(f"cross section of mode q={q} vanished at delta={delta}")
    return cloud.target_b / (np.sqrt(2 * np.pi) * cloud.sigma_z * cross_section)


def sample_position(cloud: CloudConfig, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    shape = (3,) if size is None else (size, 3)
    return rng.normal(0.0, cloud.radii, size=shape)


def column_density(
    cloud: CloudConfig,
    n0: float,
    start: np.ndarray,
    direction: np.ndarray,
    length: Union[float, np.ndarray] = np.inf,
) -> np.ndarray:
    """Integral of n along start + t*direction for t in [0, length]; direction must be a unit vector.

    Vectorised over leading axes of start/direction/length.
    """
    start = np.asarray(start, dtype=float) / cloud.radii
    direction = np.asarray(direction, dtype=float) / cloud.radii
    length = np.asarray(length, dtype=float)

    a = np.sum(direction**2, axis=-1)
    b = np.sum(start * direction, axis=-1)
    c = np.sum(start**2, axis=-1)
    root = np.sqrt(2 * a)
    x0 = b / root
    with np.errstate(invalid="ignore"):
        x1 = np.where(np.isinf(length), np.inf, (a * length + b) / root)

    # moving away from the point of closest approach
    x0_away = np.maximum(x0, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        tail = np.where(np.isinf(x1), 0.0, erfcx(x1) * np.exp(x0_away**2 - x1**2))
    away = np.exp(-0.5 * c) * (erfcx(x0_away) - tail)

    # still approaching it
    x0_toward = np.minimum(x0, 0.0)
    toward = np.exp(-(0.5 * c - x0_toward**2)) * (erfc(x0_toward) - erfc(x1))

    scaled = np.where(x0 >= 0, away, toward)
    return n0 * np.sqrt(np.pi / (2 * a)) * scaled


def column_to_boundary(cloud: CloudConfig, n0: float, point: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return column_density(cloud, n0, point, direction, np.inf)


def mode_amplitude(scheme: LevelScheme, mode: Mode, delta: float) -> complex:
    """Forward amplitude of a helicity eigenmode q, or the polarisation average for MEAN_MODE."""
    if mode == MEAN_MODE:
        return mean_forward_amplitude(scheme, delta)
    return forward_amplitude(scheme, int(mode), delta)


def attenuation_from_column(amplitude: complex, column: np.ndarray) -> np.ndarray:
    """Field factor exp(i (k/2) chi L) = exp(2 pi i f column)."""
    return np.exp(2j * np.pi * amplitude * np.asarray(column))


def ray_attenuation(
    cloud: CloudConfig,
    scheme: LevelScheme,
    n0: float,
    start: np.ndarray,
    mode: Mode,
    delta: float,
    end: Optional[np.ndarray] = None,
    direction: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Complex field attenuation from `start` to `end`, or to infinity along `direction`."""
    start = np.asarray(start, dtype=float)
    if end is not None:
        gap = np.asarray(end, dtype=float) - start
        length = np.linalg.norm(gap, axis=-1)
        safe = np.where(length > 0, length, 1.0)[..., None]
        column = np.where(length > 0, column_density(cloud, n0, start, gap / safe, length), 0.0)
    elif direction is not None:
        column = column_to_boundary(cloud, n0, start, direction)
    else:
        raise ValueError("ray_attenuation needs an end point or a direction")
    return attenuation_from_column(mode_amplitude(scheme, mode, delta), column)

"""
Doppler-broadened light-beating spectra around the Zeeman beat frequency.

With ballistic atoms, the phase of the detected field drifts at the rate
k * (v . g), where g is 2z for single scattering and (z - u) on atom 1,
(z + u) on atom 2 for a double-scattering loop along the pair direction u.
For Gaussian velocities the spectrum is then a Gaussian per geometry; the
double-scattering spectrum is a mixture over geometries.

Grids hold offsets from the carrier. Intensities are bin-integrated masses
divided by bin widths, so v_rms = 0 puts all weight in the bin holding 0.
"""

from typing import Callable, Optional, Tuple

import numpy as np
from scipy import constants
from scipy.integrate import trapezoid
from scipy.optimize import brentq
from scipy.stats import norm

from src.models.beat_spectrum import BeatSpectrum, VelocityModel
from src.physics.atom import RB85_D2_WAVELENGTH, RB85_GAMMA_MHZ, RB85_MASS_AMU

GeometrySampler = Callable[[], Tuple[np.ndarray, np.ndarray]]

FWHM_PER_RMS = 2 * np.sqrt(2 * np.log(2))
RESOLVABILITY_FRACTION = 1 / 3


def doppler_rms_from_temperature(
    temperature_K: float,
    mass_amu: float = RB85_MASS_AMU,
    wavelength: float = RB85_D2_WAVELENGTH,
    gamma_mhz: float = RB85_GAMMA_MHZ,
) -> float:
    """Per-axis rms velocity sqrt(kB T / m) in units of gamma/k."""
    v_rms = np.sqrt(constants.k * temperature_K / (mass_amu * constants.atomic_mass))
    wave_number = 2 * np.pi / wavelength
    gamma = 2 * np.pi * gamma_mhz * 1e6
    return float(v_rms * wave_number / gamma)


def bin_edges(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    middle = 0.5 * (grid[1:] + grid[:-1])
    return np.concatenate(([grid[0] - (middle[0] - grid[0])], middle, [grid[-1] + (grid[-1] - middle[-1])]))


def _gaussian_mixture_masses(edges: np.ndarray, widths: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Mass per bin of sum_g weights[g] N(0, widths[g]^2); zero widths act as a step at 0."""
    masses = np.zeros(len(edges) - 1)
    for width, weight in zip(widths, weights):
        if width > 0:
            cumulative = norm.cdf(edges / width)
        else:
            cumulative = np.heaviside(edges, 1.0)
        masses += weight * np.diff(cumulative)
    return masses


def _mixture_fwhm(widths: np.ndarray, weights: np.ndarray) -> float:
    positive = widths > 0
    if not positive.any() or weights[~positive].sum() > 0:
        return 0.0
    widths, weights = widths[positive], weights[positive]

    def profile(x: float) -> float:
        return float(np.sum(weights * norm.pdf(x / widths) / widths))

    half_max = 0.5 * profile(0.0)
    upper = 10 * widths.max()
    return 2 * brentq(lambda x: profile(x) - half_max, 0.0, upper, xtol=1e-14 * upper)


def _spectrum(
    grid, carrier: float, widths: np.ndarray, weights: np.ndarray, total: float
) -> BeatSpectrum:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("the omega grid needs at least two points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("the omega grid must be strictly increasing")
    weights = np.asarray(weights, dtype=float)
    weights = weights / weights.sum()
    edges = bin_edges(grid)
    intensity = total * _gaussian_mixture_masses(edges, widths, weights) / np.diff(edges)
    rms = float(np.sqrt(np.sum(weights * widths**2)))
    return BeatSpectrum(
        omega_grid=grid,
        intensity=intensity,
        carrier=float(carrier),
        rms_width=rms,
        fwhm=_mixture_fwhm(widths, weights),
        weight=float(total),
    )


def single_profile(
    vmodel: VelocityModel, omega_L: float, omega_R: float, grid, weight: float = 1.0
) -> BeatSpectrum:
    """Gaussian of rms 2 k v_z around the carrier; omega_L is the laser wave number k."""
    width = 2 * omega_L * vmodel.axis_rms[2]
    return _spectrum(grid, omega_R, np.array([width]), np.array([1.0]), weight)


def loop_widths(vmodel: VelocityModel, omega_L: float, directions: np.ndarray) -> np.ndarray:
    """rms beat width of a double-scattering loop along each unit direction u."""
    directions = np.asarray(directions, dtype=float)
    axis_variance = vmodel.axis_rms**2
    z_axis = np.array([0.0, 0.0, 1.0])
    first = (z_axis - directions) ** 2
    second = (z_axis + directions) ** 2
    return omega_L * np.sqrt(np.sum(axis_variance * (first + second), axis=-1))


def double_profile(
    vmodel: VelocityModel,
    omega_L: float,
    omega_R: float,
    pair_geometry_sampler: GeometrySampler,
    grid,
    weight: float = 1.0,
) -> BeatSpectrum:
    """Geometry average of the loop spectra; the sampler returns (directions, weights)."""
    directions, geometry_weights = pair_geometry_sampler()
    geometry_weights = np.asarray(geometry_weights, dtype=float)
    if geometry_weights.sum() <= 0:
        raise ValueError("pair geometry sampler returned no weight")
    widths = loop_widths(vmodel, omega_L, directions)
    return _spectrum(grid, omega_R, widths, geometry_weights, weight)


def isotropic_pair_sampler(rng: np.random.Generator, n_pairs: int) -> GeometrySampler:
    def sample() -> Tuple[np.ndarray, np.ndarray]:
        vectors = rng.normal(size=(n_pairs, 3))
        return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True), np.ones(n_pairs)

    return sample


def fixed_direction_sampler(direction) -> GeometrySampler:
    unit = np.asarray(direction, dtype=float)
    unit = unit / np.linalg.norm(unit)
    return lambda: (unit[None, :], np.ones(1))


def beat_spectrum_rms(spectrum: BeatSpectrum) -> float:
    """rms offset measured on the grid."""
    total = trapezoid(spectrum.intensity, spectrum.omega_grid)
    second = trapezoid(spectrum.intensity * spectrum.omega_grid**2, spectrum.omega_grid)
    return float(np.sqrt(second / total))


def beat_spectrum_fwhm(spectrum: BeatSpectrum) -> float:
    """Full width at half maximum measured on the grid with linear interpolation."""
    intensity, grid = spectrum.intensity, spectrum.omega_grid
    peak = int(np.argmax(intensity))
    half_max = 0.5 * intensity[peak]
    above = np.nonzero(intensity >= half_max)[0]
    left, right = above[0], above[-1]
    if left == 0 or right == len(grid) - 1:
        return float(grid[right] - grid[left])
    left_edge = np.interp(half_max, [intensity[left - 1], intensity[left]], [grid[left - 1], grid[left]])
    right_edge = np.interp(half_max, [intensity[right + 1], intensity[right]], [grid[right + 1], grid[right]])
    return float(right_edge - left_edge)


def channel_resolvability(spectrum: BeatSpectrum, zeeman_beat: float) -> Tuple[bool, float]:
    """(FWHM < zeeman_beat / 3, FWHM / zeeman_beat)."""
    if zeeman_beat <= 0:
        return False, float("inf")
    margin = spectrum.fwhm / zeeman_beat
    return bool(margin < RESOLVABILITY_FRACTION), float(margin)


def _rms_from_phase_rates(rates: np.ndarray, n_tau: int, n_omega: int) -> float:
    """rms width of the spectrum (1/pi) int_0^T <cos(rate tau)> cos(omega tau) dtau."""
    scale = float(np.sqrt(np.mean(rates**2)))
    if scale == 0:
        return 0.0
    tau = np.linspace(0.0, 6.0 / scale, n_tau)
    correlation = np.array([np.mean(np.cos(rates * t)) for t in tau])
    omega = np.linspace(-8.0 * scale, 8.0 * scale, n_omega)
    spectrum = trapezoid(correlation * np.cos(np.outer(omega, tau)), tau, axis=1) / np.pi
    second = trapezoid(spectrum * omega**2, omega)
    return float(np.sqrt(second / trapezoid(spectrum, omega)))


def brute_force_single_rms(
    vmodel: VelocityModel,
    omega_L: float,
    n_velocities: int = 50000,
    n_tau: int = 600,
    n_omega: int = 2001,
) -> float:
    """Single-scattering width from the tau integral, stratified velocity average."""
    quantiles = (np.arange(n_velocities) + 0.5) / n_velocities
    velocities = vmodel.axis_rms[2] * norm.ppf(quantiles)
    return _rms_from_phase_rates(2 * omega_L * velocities, n_tau, n_omega)


def brute_force_loop_rms(
    vmodel: VelocityModel,
    omega_L: float,
    direction,
    rng: np.random.Generator,
    n_pairs: int = 100000,
    n_tau: int = 600,
    n_omega: int = 2001,
) -> float:
    """Loop width for one pair direction from sampled velocity pairs and the tau integral."""
    unit = np.asarray(direction, dtype=float)
    unit = unit / np.linalg.norm(unit)
    z_axis = np.array([0.0, 0.0, 1.0])
    first = rng.normal(0.0, 1.0, (n_pairs, 3)) * vmodel.axis_rms
    second = rng.normal(0.0, 1.0, (n_pairs, 3)) * vmodel.axis_rms
    rates = omega_L * (first @ (z_axis - unit) + second @ (z_axis + unit))
    return _rms_from_phase_rates(rates, n_tau, n_omega)


def resolve_v_rms(v_rms: Optional[float], temperature_uK: Optional[float], fallback_variance: float) -> float:
    """Velocity scale from an explicit v_rms, else a temperature in microkelvin, else the cloud's."""
    if v_rms is not None:
        return float(v_rms)
    if temperature_uK is not None:
        return doppler_rms_from_temperature(temperature_uK * 1e-6)
    return float(np.sqrt(fallback_variance))

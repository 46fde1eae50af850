"""
Deterministic quadrature of the double-scattering pair integral

    int d^3r1 d^3r2 n(r1) n(r2) F(r1, r2),   |r2 - r1| >= R_MIN,

in centre/relative coordinates R = (r1 + r2)/2, rho = r2 - r1, where
n(r1) n(r2) = n0^2 exp(-sum R_i^2/sigma_i^2 - sum rho_i^2/(4 sigma_i^2)).
Gauss-Hermite nodes in R, Gauss-Legendre in |rho| and cos(theta), uniform in phi.
It checks the Monte-Carlo estimator of order 2.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.models.channel_spec import ChannelSpec
from src.models.cloud_config import CloudConfig
from src.models.level_scheme import LevelScheme
from src.services.cbs_service import R_MIN, ChainEvaluator
from src.services.spectrum_orchestrator import mc_spectrum
from src.utils.decorators import log_execution
from src.utils.logger import log


@dataclass(frozen=True)
class QuadratureNodes:
    n_hermite: Tuple[int, int, int] = (6, 6, 8)
    n_distance: int = 40
    n_polar: int = 20
    n_azimuth: int = 12
    distance_cutoff: float = 12.0  # in units of the largest cloud radius


@dataclass(frozen=True)
class QuadratureComparison:
    delta: float
    mc_ladder: float
    mc_ladder_stderr: float
    mc_interf: float
    mc_interf_stderr: float
    quad_ladder: float
    quad_interf: float
    tolerance: float

    @property
    def ladder_error(self) -> float:
        return abs(self.mc_ladder - self.quad_ladder) / self.quad_ladder

    @property
    def interf_error(self) -> float:
        """Interference mismatch relative to the ladder term."""
        return abs(self.mc_interf - self.quad_interf) / self.quad_ladder

    @property
    def passed(self) -> bool:
        return self.ladder_error <= self.tolerance and self.interf_error <= self.tolerance


def _centre_nodes(cloud: CloudConfig, counts: Tuple[int, int, int]) -> Tuple[np.ndarray, np.ndarray]:
    axes = []
    for sigma, count in zip(cloud.radii, counts):
        x, w = np.polynomial.hermite.hermgauss(count)
        axes.append((sigma * x, sigma * w))
    grids = np.meshgrid(*(nodes for nodes, _ in axes), indexing="ij")
    weights = np.meshgrid(*(w for _, w in axes), indexing="ij")
    centres = np.stack([g.ravel() for g in grids], axis=-1)
    return centres, np.prod([w.ravel() for w in weights], axis=0)


def _relative_nodes(cloud: CloudConfig, nodes: QuadratureNodes) -> Tuple[np.ndarray, np.ndarray]:
    upper = nodes.distance_cutoff * cloud.sigma_max
    x, w = np.polynomial.legendre.leggauss(nodes.n_distance)
    distance = 0.5 * (upper - R_MIN) * x + 0.5 * (upper + R_MIN)
    distance_weight = 0.5 * (upper - R_MIN) * w
    cos_theta, cos_weight = np.polynomial.legendre.leggauss(nodes.n_polar)
    phi = 2 * np.pi * np.arange(nodes.n_azimuth) / nodes.n_azimuth
    phi_weight = np.full(nodes.n_azimuth, 2 * np.pi / nodes.n_azimuth)

    rho, ct, ph = np.meshgrid(distance, cos_theta, phi, indexing="ij")
    w_rho, w_ct, w_ph = np.meshgrid(distance_weight, cos_weight, phi_weight, indexing="ij")
    sin_theta = np.sqrt(1 - ct**2)
    vectors = np.stack([rho * sin_theta * np.cos(ph), rho * sin_theta * np.sin(ph), rho * ct], axis=-1)
    vectors = vectors.reshape(-1, 3)
    gaussian = np.exp(-np.sum((vectors / cloud.radii) ** 2, axis=-1) / 4)
    weights = (w_rho * w_ct * w_ph * rho**2).ravel() * gaussian
    return vectors, weights


def pair_integral(
    channel: ChannelSpec,
    scheme: LevelScheme,
    cloud: CloudConfig,
    delta: float,
    n0: Optional[float] = None,
    nodes: QuadratureNodes = QuadratureNodes(),
) -> Tuple[float, float]:
    """(ladder, interference) cross sections of order 2 by quadrature."""
    evaluator = ChainEvaluator(scheme, channel, cloud, delta, n0=n0)
    centres, centre_weights = _centre_nodes(cloud, nodes.n_hermite)
    relative, relative_weights = _relative_nodes(cloud, nodes)

    ladder_total = 0.0
    interf_total = 0.0
    for centre, centre_weight in zip(centres, centre_weights):
        positions = np.stack([centre - 0.5 * relative, centre + 0.5 * relative], axis=1)
        ladder, interf = evaluator.order_terms(evaluator.prepare(positions), 2)
        ladder_total += centre_weight * float(relative_weights @ ladder)
        interf_total += centre_weight * float(relative_weights @ interf)
    scale = evaluator.n0**2
    return scale * ladder_total, scale * interf_total


@log_execution("quadrature-check")
def compare_with_monte_carlo(
    channel: ChannelSpec,
    scheme: LevelScheme,
    cloud: CloudConfig,
    deltas: Sequence[float],
    n_samples: int,
    seed: int,
    threads: Optional[int] = None,
    nodes: QuadratureNodes = QuadratureNodes(),
    tolerance: float = 0.02,
) -> List[QuadratureComparison]:
    records = mc_spectrum(channel, scheme, cloud, deltas, n_samples, 2, seed, threads=threads)
    comparisons = []
    for record in records:
        quad_ladder, quad_interf = pair_integral(channel, scheme, cloud, record.delta, record.peak_density, nodes)
        comparison = QuadratureComparison(
            delta=record.delta,
            mc_ladder=record.sigma_ladder,
            mc_ladder_stderr=record.stderr_ladder,
            mc_interf=record.sigma_interf,
            mc_interf_stderr=record.stderr_interf,
            quad_ladder=quad_ladder,
            quad_interf=quad_interf,
            tolerance=tolerance,
        )
        log(
            "quadrature-check",
            f"delta={record.delta:+.2f} ladder mc={comparison.mc_ladder:.6g} quad={quad_ladder:.6g} "
            f"({comparison.ladder_error:.2%}) interf mc={comparison.mc_interf:.6g} quad={quad_interf:.6g} "
            f"({comparison.interf_error:.2%})",
        )
        comparisons.append(comparison)
    return comparisons

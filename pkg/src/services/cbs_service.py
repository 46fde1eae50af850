"""
Coherent backscattering at the tip of the cone.

A chain of n atoms is sampled sequentially: atom 1 from the cloud density,
every next atom at an isotropic direction and a half-normal distance from the
previous one, redrawn while closer than R_MIN. The importance weight of the
first n atoms of a chain estimates the integral over n(r_1)...n(r_n), so the
lower orders reuse prefixes of the same chain.

For every chain and every Raman routing the amplitude is evaluated in the
direct order (1 -> n) and in the reversed order (n -> 1); the ladder term is
the mean of both intensities and the interference term Re(A_d A_r*).
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import erfc

from src.models.channel_spec import ChannelSpec, DiagramSet
from src.models.cloud_config import CloudConfig
from src.models.errors import ConfigError, DegeneratePath
from src.models.level_scheme import LevelScheme
from src.models.scattering_path import ScatteringPath
from src.physics.medium import (
    atom_number,
    attenuation_from_column,
    calibrate_density,
    column_density,
    column_to_boundary,
    density,
    sample_position,
)
from src.physics.scatter import (
    SPHERICAL_BASIS,
    forward_amplitude,
    mean_forward_amplitude,
    q_index,
    scattering_tensor,
)
from src.services.full_routing import FullRouting
from src.services.routing_service import MAX_DM_PER_ATOM, Routing, RoutingStrategy
from src.services.sigma_only_routing import SigmaOnlyRouting
from src.utils.decorators import retry_on

R_MIN = 0.5
ENUMERATED_ORDERS = 3
Z_AXIS = np.array([0.0, 0.0, 1.0])

Propagator = Callable[[np.ndarray, np.ndarray], np.ndarray]

ROUTING_STRATEGIES: Dict[DiagramSet, RoutingStrategy] = {
    "SigmaOnly": SigmaOnlyRouting(),
    "Full": FullRouting(),
}


def routing_strategy_for(diagram_set: DiagramSet) -> RoutingStrategy:
    try:
        return ROUTING_STRATEGIES[diagram_set]
    except KeyError:
        raise ConfigError(f"unknown diagram set '{diagram_set}'") from None


def angular_factor_sigma(theta):
    """Weight of a circular intermediate photon at angle theta to the quantisation axis."""
    return 0.25 * (np.cos(theta) ** 2 + 1) ** 2


def angular_factor_pi(theta):
    """Weight of a pi intermediate photon at angle theta to the quantisation axis."""
    return np.sin(theta) ** 4


def transverse_propagator(start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Far-field dipole propagator (1 - u u) exp(i rho) / rho from start to end, shape (..., 3, 3)."""
    gap = end - start
    distance = np.linalg.norm(gap, axis=-1)
    unit = gap / distance[..., None]
    projector = np.eye(3) - unit[..., :, None] * unit[..., None, :]
    return projector * (np.exp(1j * distance) / distance)[..., None, None]


def check_distinct(positions: np.ndarray):
    """Raises DegeneratePath when two atoms of a chain are closer than R_MIN."""
    positions = np.asarray(positions, dtype=float)
    gaps = positions[:, None, :] - positions[None, :, :]
    distances = np.linalg.norm(gaps, axis=-1)
    upper = distances[np.triu_indices(len(positions), k=1)]
    if upper.size and upper.min() < R_MIN:
        raise DegeneratePath(f"atoms {upper.min():.3g}/k apart, below r_min={R_MIN}/k")


# ---------------------------------------------------------------- sampling


@dataclass(frozen=True)
class ChainBatch:
    positions: np.ndarray  # (S, n, 3)
    weights: np.ndarray  # (S, n): importance weight of the first j+1 atoms
    alive: np.ndarray  # (S, n): False once two non-adjacent atoms came too close
    redraws: int
    degenerate: int

    @property
    def size(self) -> int:
        return self.positions.shape[0]


def step_scale(cloud: CloudConfig) -> float:
    return np.sqrt(2) * cloud.sigma_max


def step_distance_pdf(distance: np.ndarray, scale: float) -> np.ndarray:
    """Half-normal density truncated below R_MIN."""
    kept = erfc(R_MIN / (np.sqrt(2) * scale))
    return np.sqrt(2 / np.pi) / scale * np.exp(-0.5 * (distance / scale) ** 2) / kept


def isotropic_directions(rng: np.random.Generator, size: int) -> np.ndarray:
    vectors = rng.normal(size=(size, 3))
    return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)


def sample_chains(
    cloud: CloudConfig, n0: float, n_samples: int, n_atoms: int, rng: np.random.Generator
) -> ChainBatch:
    positions = np.empty((n_samples, n_atoms, 3))
    weights = np.empty((n_samples, n_atoms))
    alive = np.ones((n_samples, n_atoms), dtype=bool)
    scale = step_scale(cloud)
    redraws = 0
    degenerate = 0

    positions[:, 0] = sample_position(cloud, rng, n_samples)
    weights[:, 0] = atom_number(cloud, n0)
    for j in range(1, n_atoms):
        directions = isotropic_directions(rng, n_samples)
        distances = np.abs(rng.normal(0.0, scale, n_samples))
        short = distances < R_MIN
        while short.any():
            redraws += int(short.sum())
            distances[short] = np.abs(rng.normal(0.0, scale, int(short.sum())))
            short = distances < R_MIN

        positions[:, j] = positions[:, j - 1] + distances[:, None] * directions
        step_weight = (
            density(cloud, n0, positions[:, j])
            * 4 * np.pi * distances**2
            / step_distance_pdf(distances, scale)
        )
        weights[:, j] = weights[:, j - 1] * step_weight

        if j >= 2:
            gaps = positions[:, : j - 1] - positions[:, j, None]
            clash = (np.linalg.norm(gaps, axis=-1) < R_MIN).any(axis=1)
        else:
            clash = np.zeros(n_samples, dtype=bool)
        degenerate += int((alive[:, j - 1] & clash).sum())
        alive[:, j] = alive[:, j - 1] & ~clash

    return ChainBatch(positions, weights, alive, redraws, degenerate)


# ---------------------------------------------------------------- amplitudes


@dataclass(frozen=True)
class ChainGeometry:
    incoming: np.ndarray  # (S, n) incident field at every atom
    outgoing: np.ndarray  # (S, n) detector-mode factor from every atom
    forward: List[np.ndarray]  # hop j -> j+1, (S, 3, 3)
    backward: List[np.ndarray]  # hop j+1 -> j


class ChainEvaluator:
    """Path amplitudes of one channel at one detuning, vectorised over sampled chains."""

    def __init__(
        self,
        scheme: LevelScheme,
        channel: ChannelSpec,
        cloud: CloudConfig,
        delta: float,
        n0: Optional[float] = None,
        strategy: Optional[RoutingStrategy] = None,
        propagator: Propagator = transverse_propagator,
    ):
        self.scheme = scheme
        self.channel = channel
        self.cloud = cloud
        self.delta = delta
        self.n0 = calibrate_density(cloud, scheme, delta, channel.q_in) if n0 is None else n0
        self.strategy = strategy or routing_strategy_for(channel.diagram_set)
        self.propagator = propagator

        F0 = scheme.populated_ground
        start = scheme.stretched_m()
        self._alpha = np.zeros((MAX_DM_PER_ATOM + 1, 3, 3), dtype=complex)
        for dm in range(MAX_DM_PER_ATOM + 1):
            if F0.admits(start + dm):
                self._alpha[dm] = scattering_tensor(scheme, start, start + dm, delta)

        self._e_in = SPHERICAL_BASIS[:, q_index(channel.q_in)]
        self._e_out_conj = SPHERICAL_BASIS[:, q_index(channel.q_out)].conj()
        self._f_in, self._f_out, self._f_hop = self._attenuation_amplitudes()

    def _attenuation_amplitudes(self) -> Tuple[complex, complex, complex]:
        model = self.cloud.attenuation
        if model == "none":
            return 0j, 0j, 0j
        mean = mean_forward_amplitude(self.scheme, self.delta)
        if model == "isotropic":
            return mean, mean, mean
        return (
            forward_amplitude(self.scheme, self.channel.q_in, self.delta),
            forward_amplitude(self.scheme, self.channel.q_out, self.delta),
            mean,
        )

    def routings(self, order: int) -> Tuple[Routing, ...]:
        return self.strategy.routings(self.scheme, self.channel, order)

    def external_factors(self, positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Incident field at each position and the factor carrying its emission to the detector.

        Both rays run along the z line through the atom between -infinity and z.
        """
        column = column_to_boundary(self.cloud, self.n0, positions, -Z_AXIS)
        phase = np.exp(1j * positions[..., 2])
        return (
            phase * attenuation_from_column(self._f_in, column),
            phase * attenuation_from_column(self._f_out, column),
        )

    def hop(self, start: np.ndarray, end: np.ndarray) -> np.ndarray:
        gap = end - start
        length = np.linalg.norm(gap, axis=-1)
        column = column_density(self.cloud, self.n0, start, gap / length[..., None], length)
        return self.propagator(start, end) * attenuation_from_column(self._f_hop, column)[..., None, None]

    def prepare(self, positions: np.ndarray) -> ChainGeometry:
        incoming, outgoing = self.external_factors(positions)
        n_atoms = positions.shape[1]
        forward = [self.hop(positions[:, j], positions[:, j + 1]) for j in range(n_atoms - 1)]
        backward = [self.hop(positions[:, j + 1], positions[:, j]) for j in range(n_atoms - 1)]
        return ChainGeometry(incoming, outgoing, forward, backward)

    def _propagate(self, geometry: ChainGeometry, dms: np.ndarray, sequence: List[int]) -> np.ndarray:
        first = sequence[0]
        field = geometry.incoming[:, first, None] * self._e_in
        field = np.einsum("sij,sj->si", self._alpha[dms[:, first]], field)
        for previous, current in zip(sequence[:-1], sequence[1:]):
            if current == previous + 1:
                hop = geometry.forward[previous]
            else:
                hop = geometry.backward[current]
            field = np.einsum("sij,sj->si", hop, field)
            field = np.einsum("sij,sj->si", self._alpha[dms[:, current]], field)
        return geometry.outgoing[:, sequence[-1]] * (field @ self._e_out_conj)

    def chain_amplitudes(
        self, geometry: ChainGeometry, order: int, dms: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Direct and reversed amplitudes of the first `order` atoms; dms has shape (S, order)."""
        sequence = list(range(order))
        direct = self._propagate(geometry, dms, sequence)
        if order == 1:
            return direct, direct
        return direct, self._propagate(geometry, dms, sequence[::-1])

    def single_term(self, geometry: ChainGeometry) -> np.ndarray:
        size = geometry.incoming.shape[0]
        total = np.zeros(size)
        for routing in self.routings(1):
            dms = np.broadcast_to(np.array(routing), (size, 1))
            direct, _ = self.chain_amplitudes(geometry, 1, dms)
            total += np.abs(direct) ** 2
        return total

    def order_terms(
        self, geometry: ChainGeometry, order: int, rng: Optional[np.random.Generator] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Unweighted ladder and interference terms of every chain at the given order.

        Routings are enumerated up to ENUMERATED_ORDERS (or when no rng is given);
        above it one routing per chain is drawn and scaled by the routing count.
        """
        size = geometry.incoming.shape[0]
        ladder = np.zeros(size)
        interf = np.zeros(size)
        routings = self.routings(order)
        if not routings:
            return ladder, interf

        if order <= ENUMERATED_ORDERS or rng is None:
            batches = [np.broadcast_to(np.array(routing), (size, order)) for routing in routings]
            multiplicity = 1.0
        else:
            choice = rng.integers(len(routings), size=size)
            batches = [np.array(routings)[choice]]
            multiplicity = float(len(routings))

        for dms in batches:
            direct, reciprocal = self.chain_amplitudes(geometry, order, dms)
            ladder += 0.5 * (np.abs(direct) ** 2 + np.abs(reciprocal) ** 2)
            interf += np.real(direct * np.conj(reciprocal))
        return multiplicity * ladder, multiplicity * interf


# ---------------------------------------------------------------- single paths


def _routing_of(path: ScatteringPath, scheme: LevelScheme, channel: ChannelSpec) -> np.ndarray:
    start = scheme.stretched_m()
    if any(m_in != start for m_in, _ in path.assignments):
        raise ConfigError("every atom of a path starts in the stretched sublevel")
    dms = path.sublevel_changes
    if sum(dms) != channel.total_dm(scheme):
        raise ConfigError(f"path assignments {dms} do not end in the detected channel")
    return np.array([dms])


def path_amplitude(
    path: ScatteringPath,
    channel: ChannelSpec,
    scheme: LevelScheme,
    cloud: CloudConfig,
    n0: float,
    delta: float,
    propagator: Propagator = transverse_propagator,
) -> complex:
    """Amplitude of one ordered path into the detected mode, attenuation included."""
    check_distinct(path.positions)
    dms = _routing_of(path, scheme, channel)
    evaluator = ChainEvaluator(scheme, channel, cloud, delta, n0=n0, propagator=propagator)
    geometry = evaluator.prepare(path.positions[None])
    direct, _ = evaluator.chain_amplitudes(geometry, path.order, dms)
    return complex(direct[0])


def pair_contribution(
    r1: np.ndarray,
    r2: np.ndarray,
    channel: ChannelSpec,
    scheme: LevelScheme,
    cloud: CloudConfig,
    n0: float,
    delta: float,
    propagator: Propagator = transverse_propagator,
) -> Tuple[float, float]:
    """(sum |A_d|^2 + |A_r|^2, sum 2 Re A_d A_r*) over the routings of a pair of atoms."""
    positions = np.array([r1, r2], dtype=float)
    check_distinct(positions)
    evaluator = ChainEvaluator(scheme, channel, cloud, delta, n0=n0, propagator=propagator)
    ladder, interf = evaluator.order_terms(evaluator.prepare(positions[None]), 2)
    return 2 * float(ladder[0]), 2 * float(interf[0])


@retry_on(DegeneratePath, max_attempts=20)
def sample_path(
    scheme: LevelScheme,
    channel: ChannelSpec,
    cloud: CloudConfig,
    n0: float,
    order: int,
    rng: np.random.Generator,
    strategy: Optional[RoutingStrategy] = None,
) -> ScatteringPath:
    """One chain of `order` atoms with a uniformly drawn routing of the channel."""
    strategy = strategy or routing_strategy_for(channel.diagram_set)
    routings = strategy.routings(scheme, channel, order)
    if not routings:
        raise ConfigError(f"channel has no routing at order {order}")

    batch = sample_chains(cloud, n0, 1, order, rng)
    if not batch.alive[0, -1]:
        raise DegeneratePath(f"sampled order-{order} chain revisits an atom neighbourhood")
    routing = routings[rng.integers(len(routings))]
    start = scheme.stretched_m()
    assignments = [(start, start + dm) for dm in routing]
    return ScatteringPath.from_positions(batch.positions[0], assignments)


def pair_geometry_sampler(
    evaluator: ChainEvaluator, rng: np.random.Generator, n_pairs: int
) -> Callable[[], Tuple[np.ndarray, np.ndarray]]:
    """Pair directions drawn with the double-scattering measure, weighted by their ladder term."""

    def sample() -> Tuple[np.ndarray, np.ndarray]:
        batch = sample_chains(evaluator.cloud, evaluator.n0, n_pairs, 2, rng)
        ladder, _ = evaluator.order_terms(evaluator.prepare(batch.positions), 2)
        gap = batch.positions[:, 1] - batch.positions[:, 0]
        directions = gap / np.linalg.norm(gap, axis=-1, keepdims=True)
        return directions, batch.weights[:, 1] * ladder

    return sample

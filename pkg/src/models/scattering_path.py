from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.models.errors import ConfigError
from src.models.half_int import HalfInt

Assignment = Tuple[HalfInt, HalfInt]


@dataclass(frozen=True)
class ScatteringPath:
    """Ordered chain of scatterers with the (m_in, m_out) of every atom."""

    atoms: Tuple[Tuple[float, float, float], ...]
    assignments: Tuple[Assignment, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ConfigError("a scattering path needs at least one atom")
        if len(self.atoms) != len(self.assignments):
            raise ConfigError("every atom of a path needs one (m_in, m_out) assignment")

    @classmethod
    def from_positions(cls, positions, assignments) -> "ScatteringPath":
        atoms = tuple(tuple(float(c) for c in position) for position in np.asarray(positions))
        return cls(atoms, tuple(assignments))

    @property
    def order(self) -> int:
        return len(self.atoms)

    @property
    def positions(self) -> np.ndarray:
        return np.array(self.atoms, dtype=float)

    @property
    def sublevel_changes(self) -> Tuple[int, ...]:
        return tuple((m_out - m_in).twice_value // 2 for m_in, m_out in self.assignments)

    def reversed(self) -> "ScatteringPath":
        return ScatteringPath(self.atoms[::-1], self.assignments[::-1])

    def min_distance(self) -> float:
        positions = self.positions
        if len(positions) < 2:
            return np.inf
        gaps = positions[:, None, :] - positions[None, :, :]
        distances = np.linalg.norm(gaps, axis=-1)
        return float(distances[np.triu_indices(len(positions), k=1)].min())

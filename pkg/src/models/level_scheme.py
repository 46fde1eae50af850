from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.models.errors import ConfigError, UnknownLevel
from src.models.half_int import HalfInt

LevelEntry = Tuple[HalfInt, float]


@dataclass(frozen=True)
class LevelScheme:
    """Hyperfine structure of the model atom.

    Energies are in units of the natural width gamma. Excited energies are
    measured from the reference line (F0=3 -> F=4 for 85Rb), so the laser
    detuning delta is the detuning from that line.
    """

    nuclear_spin: HalfInt
    Jg: HalfInt
    Je: HalfInt
    ground_levels: Tuple[LevelEntry, ...]
    excited_levels: Tuple[LevelEntry, ...]
    gamma: float = 1.0
    zeeman_ground_splitting: float = 0.1
    zeeman_quadratic: float = 0.0
    populated_ground: Optional[HalfInt] = None
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.gamma <= 0:
            raise ConfigError("gamma must be positive")
        if self.zeeman_ground_splitting < 0:
            raise ConfigError("zeeman_ground_splitting must be non-negative")
        if not self.ground_levels or not self.excited_levels:
            raise ConfigError("a level scheme needs ground and excited levels")
        self._check_manifold(self.ground_levels, self.Jg, "ground")
        self._check_manifold(self.excited_levels, self.Je, "excited")
        if self.populated_ground is None:
            object.__setattr__(
                self, "populated_ground", max(F for F, _ in self.ground_levels)
            )
        elif not self.has_ground(self.populated_ground):
            raise UnknownLevel(self.populated_ground, "ground")

    def _check_manifold(self, levels, J: HalfInt, manifold: str):
        I = self.nuclear_spin
        for F, _ in levels:
            lower = abs(J - I).twice_value
            upper = (J + I).twice_value
            if not lower <= F.twice_value <= upper or (F.twice_value - lower) % 2:
                raise ConfigError(f"{manifold} level F={F} cannot couple J={J}, I={I}")
        if len({F for F, _ in levels}) != len(levels):
            raise ConfigError(f"{manifold} manifold lists a level twice")
        energies = [energy for _, energy in levels]
        if len(set(energies)) != len(energies):
            raise ConfigError(f"{manifold} level energies must be strictly ordered")

    def has_ground(self, F0: HalfInt) -> bool:
        return any(F == HalfInt.of(F0) for F, _ in self.ground_levels)

    def has_excited(self, Fe: HalfInt) -> bool:
        return any(F == HalfInt.of(Fe) for F, _ in self.excited_levels)

    def ground_energy(self, F0) -> float:
        F0 = HalfInt.of(F0)
        for F, energy in self.ground_levels:
            if F == F0:
                return energy
        raise UnknownLevel(F0, "ground")

    def excited_energy(self, Fe) -> float:
        Fe = HalfInt.of(Fe)
        for F, energy in self.excited_levels:
            if F == Fe:
                return energy
        raise UnknownLevel(Fe, "excited")

    def excited_F(self) -> Tuple[HalfInt, ...]:
        return tuple(sorted(F for F, _ in self.excited_levels))

    def ground_F(self) -> Tuple[HalfInt, ...]:
        return tuple(sorted(F for F, _ in self.ground_levels))

    def stretched_m(self) -> HalfInt:
        """m = -F0 of the populated ground level."""
        return -self.populated_ground

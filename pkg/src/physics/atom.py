"""
Model atoms: the 85Rb D2 line in natural-width units and the classical
F0=0 -> Fe=1 dipole used by the reciprocity checks.
"""

from typing import List, Tuple

from src.models.errors import UnknownLevel
from src.models.half_int import HalfInt, HalfIntLike, half
from src.models.level_scheme import LevelScheme
from src.physics.angmom import dipole_allowed

# 85Rb D2 spectroscopy, MHz
RB85_GAMMA_MHZ = 6.066
RB85_EXCITED_SPLITTINGS_MHZ = {4: 0.0, 3: 120.640, 2: 63.401, 1: 29.372}
RB85_GROUND_SPLITTING_MHZ = 3035.732
RB85_MASS_AMU = 84.911789738
RB85_D2_WAVELENGTH = 780.241e-9


def _rb85_excited_energies() -> List[Tuple[HalfInt, float]]:
    energies = []
    energy = 0.0
    for F in (4, 3, 2, 1):
        energy -= RB85_EXCITED_SPLITTINGS_MHZ[F] / RB85_GAMMA_MHZ
        energies.append((half(F), energy))
    return energies


def rb85_default(
    zeeman_ground_splitting: float = 0.1, zeeman_quadratic: float = 0.0
) -> LevelScheme:
    """85Rb 5S1/2 -> 5P3/2 with energies in gamma, referenced to F0=3 -> F=4."""
    return LevelScheme(
        nuclear_spin=half(5 / 2),
        Jg=half(1 / 2),
        Je=half(3 / 2),
        ground_levels=(
            (half(2), -RB85_GROUND_SPLITTING_MHZ / RB85_GAMMA_MHZ),
            (half(3), 0.0),
        ),
        excited_levels=tuple(sorted(_rb85_excited_energies())),
        zeeman_ground_splitting=zeeman_ground_splitting,
        zeeman_quadratic=zeeman_quadratic,
        populated_ground=half(3),
        name="rb85",
    )


def oracle_scheme() -> LevelScheme:
    """Classical dipole scatterer: J=0 -> J=1, no nuclear spin, no Zeeman splitting."""
    return LevelScheme(
        nuclear_spin=half(0),
        Jg=half(0),
        Je=half(1),
        ground_levels=((half(0), 0.0),),
        excited_levels=((half(1), 0.0),),
        zeeman_ground_splitting=0.0,
        name="oracle",
    )


def detuning(scheme: LevelScheme, F0: HalfIntLike, Fe: HalfIntLike, delta: float) -> float:
    """Detuning of the laser from the F0 -> Fe line when it is `delta` from the reference line."""
    return delta - (scheme.excited_energy(Fe) - scheme.ground_energy(F0))


def zeeman_energy(scheme: LevelScheme, F0: HalfIntLike, m: HalfIntLike) -> float:
    """Ground sublevel energy measured from the stretched state m = -F0."""
    F0, m = HalfInt.of(F0), HalfInt.of(m)
    if not scheme.has_ground(F0):
        raise UnknownLevel(F0, "ground")
    if not F0.admits(m):
        raise ValueError(f"m={m} is not a sublevel of F0={F0}")
    steps = (m + F0).twice_value / 2
    return scheme.zeeman_ground_splitting * steps + scheme.zeeman_quadratic * steps**2


def resonance_positions(scheme: LevelScheme) -> List[Tuple[HalfInt, float]]:
    """Laser detunings of the dipole-allowed lines from the populated ground level."""
    F0 = scheme.populated_ground
    return [
        (Fe, scheme.excited_energy(Fe) - scheme.ground_energy(F0))
        for Fe in scheme.excited_F()
        if dipole_allowed(F0, Fe)
    ]

"""
Quasi-elastic Kramers-Heisenberg scattering by one atom of the ground level
F0, in the rotating-wave approximation.

Tensors are indexed [q_out, q_in] with q ascending (-1, 0, +1). The bare sum

    A[q_out, q_in] = sum_{Fe, me} <Fe me|d_qout|F0 m_out>* <Fe me|d_qin|F0 m_in>
                                   / (Delta_Fe + i gamma/2)

is turned into a physical amplitude f (units 1/k) by
f = -(3/4) (2Je+1) gamma A, which puts the peak cross section of an isolated
stretched transition at 6 pi / k^2.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.optimize import brentq

from src.models.half_int import HalfInt, HalfIntLike
from src.models.level_scheme import LevelScheme
from src.physics.angmom import Q_VALUES, dipole_allowed, dipole_table
from src.physics.atom import detuning

_INV_SQRT2 = 1 / np.sqrt(2)

# columns are e_{-1}, e_0, e_{+1} in Cartesian (x, y, z)
SPHERICAL_BASIS = np.array(
    [
        [_INV_SQRT2, 0.0, -_INV_SQRT2],
        [-1j * _INV_SQRT2, 0.0, -1j * _INV_SQRT2],
        [0.0, 1.0, 0.0],
    ],
    dtype=complex,
)


def q_index(q: int) -> int:
    if q not in Q_VALUES:
        raise ValueError(f"q={q} is not a spherical component")
    return q + 1


@dataclass(frozen=True)
class SphericalVector:
    """Complex vector by its spherical components c_q = e_q* . v, ordered q = -1, 0, +1."""

    components: np.ndarray

    def __post_init__(self):
        components = np.asarray(self.components, dtype=complex)
        if components.shape != (3,):
            raise ValueError("a spherical vector has three components")
        object.__setattr__(self, "components", components)

    @classmethod
    def helicity(cls, q: int) -> "SphericalVector":
        components = np.zeros(3, dtype=complex)
        components[q_index(q)] = 1.0
        return cls(components)

    @classmethod
    def from_cartesian(cls, vector) -> "SphericalVector":
        return cls(SPHERICAL_BASIS.conj().T @ np.asarray(vector, dtype=complex))

    def to_cartesian(self) -> np.ndarray:
        return SPHERICAL_BASIS @ self.components

    def __getitem__(self, q: int) -> complex:
        return self.components[q_index(q)]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def normalized(self) -> "SphericalVector":
        return SphericalVector(self.components / self.norm())

    def is_transverse_to(self, direction, tol: float = 1e-12) -> bool:
        return abs(np.dot(self.to_cartesian(), np.asarray(direction, dtype=float))) < tol


@dataclass(frozen=True)
class KHAmplitude:
    value: complex
    m_in: HalfInt
    m_out: HalfInt
    q_in: int
    q_out: int
    laser_detuning: float

    @classmethod
    def evaluate(cls, scheme: LevelScheme, m_in, m_out, q_in: int, q_out: int, delta: float) -> "KHAmplitude":
        value = kh_amplitude(scheme, m_in, m_out, q_in, q_out, delta)
        return cls(value, HalfInt.of(m_in), HalfInt.of(m_out), q_in, q_out, delta)


def amplitude_scale(scheme: LevelScheme) -> float:
    """Factor turning the bare Kramers-Heisenberg sum into f in units of 1/k."""
    return -0.75 * scheme.Je.multiplicity() * scheme.gamma


def kh_pole_contributions(
    scheme: LevelScheme, m_in: HalfIntLike, m_out: HalfIntLike, delta: float
) -> Dict[HalfInt, np.ndarray]:
    """Per excited level Fe, its term of the bare tensor A[q_out, q_in]."""
    F0 = scheme.populated_ground
    m_in, m_out = HalfInt.of(m_in), HalfInt.of(m_out)
    poles = {}
    for Fe in scheme.excited_F():
        block = np.zeros((3, 3), dtype=complex)
        if dipole_allowed(F0, Fe) and F0.admits(m_in) and F0.admits(m_out):
            table = dipole_table(scheme, F0, Fe)
            coupling = table[:, :, F0.index_of(m_out)].conj().T @ table[:, :, F0.index_of(m_in)]
            block = coupling / (detuning(scheme, F0, Fe, delta) + 0.5j * scheme.gamma)
        poles[Fe] = block
    return poles


def kh_tensor(scheme: LevelScheme, m_in: HalfIntLike, m_out: HalfIntLike, delta: float) -> np.ndarray:
    """Bare tensor A[q_out, q_in] for the transition m_in -> m_out of the populated level."""
    return sum(kh_pole_contributions(scheme, m_in, m_out, delta).values(), np.zeros((3, 3), dtype=complex))


def kh_amplitude(
    scheme: LevelScheme,
    m_in: HalfIntLike,
    m_out: HalfIntLike,
    q_in: int,
    q_out: int,
    delta: float,
) -> complex:
    m_in, m_out = HalfInt.of(m_in), HalfInt.of(m_out)
    if m_out != m_in + q_in - q_out:
        return 0j
    return complex(kh_tensor(scheme, m_in, m_out, delta)[q_index(q_out), q_index(q_in)])


def amplitude_lab_frame(
    scheme: LevelScheme,
    m_in: HalfIntLike,
    m_out: HalfIntLike,
    e_in: SphericalVector,
    e_out: SphericalVector,
    delta: float,
) -> complex:
    """Contraction e_out* . A . e_in of the bare tensor."""
    tensor = kh_tensor(scheme, m_in, m_out, delta)
    return complex(e_out.components.conj() @ tensor @ e_in.components)


def amplitude_between_states(
    scheme: LevelScheme,
    state_in: np.ndarray,
    state_out: np.ndarray,
    e_in: SphericalVector,
    e_out: SphericalVector,
    delta: float,
) -> complex:
    """Bare amplitude between superpositions of the populated level (basis m = -F0..F0)."""
    F0 = scheme.populated_ground
    state_in = np.asarray(state_in, dtype=complex)
    state_out = np.asarray(state_out, dtype=complex)
    total = 0j
    for m_in in F0.projections():
        for m_out in F0.projections():
            weight = state_out[F0.index_of(m_out)].conjugate() * state_in[F0.index_of(m_in)]
            if weight != 0:
                total += weight * amplitude_lab_frame(scheme, m_in, m_out, e_in, e_out, delta)
    return total


def scattering_tensor(scheme: LevelScheme, m_in: HalfIntLike, m_out: HalfIntLike, delta: float) -> np.ndarray:
    """Physical Cartesian amplitude alpha (units 1/k): f = e_out^dagger . alpha . e_in."""
    spherical = amplitude_scale(scheme) * kh_tensor(scheme, m_in, m_out, delta)
    return SPHERICAL_BASIS @ spherical @ SPHERICAL_BASIS.conj().T


def forward_amplitude(scheme: LevelScheme, q: int, delta: float) -> complex:
    """Forward elastic amplitude f_qq of the stretched state, units 1/k."""
    m = scheme.stretched_m()
    return amplitude_scale(scheme) * kh_amplitude(scheme, m, m, q, q, delta)


def mean_forward_amplitude(scheme: LevelScheme, delta: float) -> complex:
    """Polarisation-averaged forward amplitude (f_- + f_0 + f_+)/3."""
    return sum(forward_amplitude(scheme, q, delta) for q in Q_VALUES) / 3


def susceptibility(scheme: LevelScheme, q: int, delta: float, density: float) -> complex:
    return 4 * np.pi * density * forward_amplitude(scheme, q, delta)


def total_cross_section(scheme: LevelScheme, q: int, delta: float) -> float:
    """Optical theorem, units 1/k^2."""
    return float(4 * np.pi * forward_amplitude(scheme, q, delta).imag)


def dispersion_zero(scheme: LevelScheme, q: int, lower: float, upper: float, xtol: float = 1e-9) -> float:
    """Detuning in [lower, upper] where Re chi_q changes sign."""
    return brentq(lambda delta: forward_amplitude(scheme, q, delta).real, lower, upper, xtol=xtol)

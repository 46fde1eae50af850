"""
Angular momentum algebra: Wigner 3j/6j symbols, Wigner D matrices and the
hyperfine electric-dipole matrix elements of a LevelScheme.

The 3j and 6j values come from sympy's exact Racah sums (integer factorials,
no floating point cancellation) and are converted to float at the boundary.
Condon-Shortley phases throughout; the fine-structure reduced element
<Je||d||Jg> is 1.
"""

import functools
from typing import Tuple

import numpy as np
from scipy.linalg import expm
from sympy.physics.wigner import wigner_3j as sympy_wigner_3j
from sympy.physics.wigner import wigner_6j as sympy_wigner_6j

from src.models.errors import UnknownLevel
from src.models.half_int import HalfInt, HalfIntLike
from src.models.level_scheme import LevelScheme

Q_VALUES = (-1, 0, 1)


def _triangle(a: int, b: int, c: int) -> bool:
    """Triangle rule on doubled values, including integer perimeter."""
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _valid_projection(j: int, m: int) -> bool:
    return abs(m) <= j and (j - m) % 2 == 0


@functools.lru_cache(maxsize=None)
def _wigner3j_doubled(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    try:
        return float(
            sympy_wigner_3j(
                HalfInt(j1).as_rational(),
                HalfInt(j2).as_rational(),
                HalfInt(j3).as_rational(),
                HalfInt(m1).as_rational(),
                HalfInt(m2).as_rational(),
                HalfInt(m3).as_rational(),
            )
        )
    except ValueError:
        # sympy raises for couplings it cannot represent; those vanish
        return 0.0


@functools.lru_cache(maxsize=None)
def _wigner6j_doubled(j1: int, j2: int, j3: int, j4: int, j5: int, j6: int) -> float:
    try:
        return float(
            sympy_wigner_6j(*(HalfInt(j).as_rational() for j in (j1, j2, j3, j4, j5, j6)))
        )
    except ValueError:
        return 0.0


def wigner3j(
    j1: HalfIntLike,
    j2: HalfIntLike,
    j3: HalfIntLike,
    m1: HalfIntLike,
    m2: HalfIntLike,
    m3: HalfIntLike,
) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3); 0 for any forbidden coupling."""
    j1, j2, j3, m1, m2, m3 = (HalfInt.of(x).twice_value for x in (j1, j2, j3, m1, m2, m3))
    if min(j1, j2, j3) < 0 or m1 + m2 + m3 != 0 or not _triangle(j1, j2, j3):
        return 0.0
    if not all(_valid_projection(j, m) for j, m in ((j1, m1), (j2, m2), (j3, m3))):
        return 0.0
    return _wigner3j_doubled(j1, j2, j3, m1, m2, m3)


def wigner6j(
    j1: HalfIntLike,
    j2: HalfIntLike,
    j3: HalfIntLike,
    j4: HalfIntLike,
    j5: HalfIntLike,
    j6: HalfIntLike,
) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 when a triad is not a triangle."""
    doubled = tuple(HalfInt.of(x).twice_value for x in (j1, j2, j3, j4, j5, j6))
    d1, d2, d3, d4, d5, d6 = doubled
    if min(doubled) < 0:
        return 0.0
    triads = ((d1, d2, d3), (d1, d5, d6), (d4, d2, d6), (d4, d5, d3))
    if not all(_triangle(*triad) for triad in triads):
        return 0.0
    return _wigner6j_doubled(*doubled)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1; j2 m2 | J M> from the 3j symbol."""
    j1, m1, j2, m2, J, M = (HalfInt.of(x) for x in (j1, m1, j2, m2, J, M))
    phase_exponent = (j1 - j2 + M).twice_value // 2
    return (
        (-1) ** phase_exponent
        * np.sqrt(J.twice_value + 1)
        * wigner3j(j1, j2, J, m1, m2, -M)
    )


def angular_momentum_matrices(j: HalfIntLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jx, Jy, Jz in the ascending basis m = -j..j (Condon-Shortley: J+ real positive)."""
    j = HalfInt.of(j)
    m_values = np.array([m.value for m in j.projections()])
    size = j.multiplicity()
    raising = np.zeros((size, size))
    for index in range(size - 1):
        m = m_values[index]
        raising[index + 1, index] = np.sqrt(j.value * (j.value + 1) - m * (m + 1))
    jx = (raising + raising.T) / 2
    jy = (raising - raising.T) / 2j
    jz = np.diag(m_values)
    return jx, jy, jz


def rotation_matrix(j: HalfIntLike, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Wigner D matrix exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz), basis m = -j..j.

    For j = 1 the same matrix rotates spherical components of a vector.
    """
    _, jy, jz = angular_momentum_matrices(j)
    return expm(-1j * alpha * jz) @ expm(-1j * beta * jy) @ expm(-1j * gamma * jz)


def _require_levels(scheme: LevelScheme, F0: HalfInt, Fe: HalfInt):
    if not scheme.has_ground(F0):
        raise UnknownLevel(F0, "ground")
    if not scheme.has_excited(Fe):
        raise UnknownLevel(Fe, "excited")


def dipole_allowed(F0: HalfInt, Fe: HalfInt) -> bool:
    """Electric dipole: |Fe - F0| <= 1 and no 0 -> 0."""
    difference = abs(Fe.twice_value - F0.twice_value)
    return difference <= 2 and not (F0.twice_value == 0 and Fe.twice_value == 0)


@functools.lru_cache(maxsize=None)
def reduced_dipole(scheme: LevelScheme, F0: HalfInt, Fe: HalfInt) -> float:
    """<Fe||d||F0> in units of <Je||d||Jg>."""
    _require_levels(scheme, F0, Fe)
    if not dipole_allowed(F0, Fe):
        return 0.0
    Jg, Je, I = scheme.Jg, scheme.Je, scheme.nuclear_spin
    phase_exponent = (Je + I + F0 + 1).twice_value // 2
    return (
        (-1) ** phase_exponent
        * np.sqrt((Fe.twice_value + 1) * (F0.twice_value + 1))
        * wigner6j(Je, Fe, I, F0, Jg, 1)
    )


def dipole_element(
    F0: HalfIntLike,
    m0: HalfIntLike,
    q: int,
    Fe: HalfIntLike,
    me: HalfIntLike,
    scheme: LevelScheme,
) -> float:
    """<Fe me|d_q|F0 m0> (Wigner-Eckart with the hyperfine 6j reduction)."""
    F0, m0, Fe, me = (HalfInt.of(x) for x in (F0, m0, Fe, me))
    _require_levels(scheme, F0, Fe)
    if q not in Q_VALUES or me != m0 + q:
        return 0.0
    if not (F0.admits(m0) and Fe.admits(me)):
        return 0.0
    phase_exponent = (Fe - me).twice_value // 2
    return (
        (-1) ** phase_exponent
        * wigner3j(Fe, 1, F0, -me, q, m0)
        * reduced_dipole(scheme, F0, Fe)
    )


def emission_element(
    Fe: HalfIntLike,
    me: HalfIntLike,
    q: int,
    F0: HalfIntLike,
    m0: HalfIntLike,
    scheme: LevelScheme,
) -> float:
    """<F0 m0|d_q|Fe me>, the downward element, with <F0||d||Fe> = (-1)^(F0-Fe) <Fe||d||F0>."""
    F0, m0, Fe, me = (HalfInt.of(x) for x in (F0, m0, Fe, me))
    _require_levels(scheme, F0, Fe)
    if q not in Q_VALUES or m0 != me + q:
        return 0.0
    if not (F0.admits(m0) and Fe.admits(me)):
        return 0.0
    phase_exponent = (F0 - m0).twice_value // 2 + (F0 - Fe).twice_value // 2
    return (
        (-1) ** phase_exponent
        * wigner3j(F0, 1, Fe, -m0, q, me)
        * reduced_dipole(scheme, F0, Fe)
    )


@functools.lru_cache(maxsize=None)
def dipole_table(scheme: LevelScheme, F0: HalfInt, Fe: HalfInt) -> np.ndarray:
    """Array D[me, q, m0] = <Fe me|d_q|F0 m0>, indices ascending in me, q and m0."""
    table = np.zeros((Fe.multiplicity(), len(Q_VALUES), F0.multiplicity()))
    for m0 in F0.projections():
        for q_index, q in enumerate(Q_VALUES):
            me = m0 + q
            if Fe.admits(me):
                table[Fe.index_of(me), q_index, F0.index_of(m0)] = dipole_element(
                    F0, m0, q, Fe, me, scheme
                )
    table.setflags(write=False)
    return table

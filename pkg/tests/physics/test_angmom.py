import itertools

import numpy as np
import pytest

from src.models.errors import UnknownLevel
from src.models.half_int import half
from src.physics.angmom import (
    angular_momentum_matrices,
    clebsch_gordan,
    dipole_allowed,
    dipole_element,
    dipole_table,
    emission_element,
    rotation_matrix,
    wigner3j,
    wigner6j,
)


def test_wigner3j_matches_known_value():
    # Act
    value = wigner3j(1, 1, 0, 0, 0, 0)

    # Assert
    assert value == pytest.approx(-1 / np.sqrt(3), abs=1e-15)


def test_wigner3j_is_zero_when_projections_do_not_sum_to_zero():
    assert wigner3j(1, 1, 1, 1, 0, 0) == 0.0


def test_wigner3j_is_zero_when_triangle_is_violated():
    assert wigner3j(half(1 / 2), half(1 / 2), 2, half(1 / 2), half(-1 / 2), 0) == 0.0


def test_wigner3j_odd_permutation_picks_up_phase():
    # Arrange
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 20:
        j1, j2 = (half(value / 2) for value in rng.integers(0, 13, size=2))
        j3 = half(rng.integers(abs(j1.twice_value - j2.twice_value), j1.twice_value + j2.twice_value + 1) / 2)
        if (j1 + j2 + j3).twice_value % 2:
            continue
        m1 = list(j1.projections())[rng.integers(j1.multiplicity())]
        m2 = list(j2.projections())[rng.integers(j2.multiplicity())]
        m3 = -(m1 + m2)
        if not j3.admits(m3):
            continue

        # Act
        value = wigner3j(j1, j2, j3, m1, m2, m3)
        cyclic = wigner3j(j2, j3, j1, m2, m3, m1)
        swapped = wigner3j(j2, j1, j3, m2, m1, m3)

        # Assert
        phase = (-1) ** ((j1 + j2 + j3).twice_value // 2)
        assert cyclic == pytest.approx(value, abs=1e-14)
        assert swapped == pytest.approx(phase * value, abs=1e-14)
        checked += 1


def test_wigner3j_orthogonality_sums_to_one():
    # Arrange
    j1, j2, j3 = half(2), half(3 / 2), half(7 / 2)

    for m3 in j3.projections():
        # Act
        total = sum(
            j3.multiplicity() * wigner3j(j1, j2, j3, m1, m2, -m3) ** 2
            for m1, m2 in itertools.product(j1.projections(), j2.projections())
            if m1 + m2 == m3
        )

        # Assert
        assert total == pytest.approx(1.0, abs=1e-12)


def test_wigner6j_of_spin_halves_coupled_to_zero():
    # Act
    value = wigner6j(half(1 / 2), half(1 / 2), 0, half(1 / 2), half(1 / 2), 0)

    # Assert
    assert value == pytest.approx(-0.5, abs=1e-15)


def test_wigner6j_is_zero_for_broken_triad():
    assert wigner6j(1, 1, 3, 1, 1, 1) == 0.0


def test_clebsch_gordan_singlet_component():
    # Act
    up_down = clebsch_gordan(half(1 / 2), half(1 / 2), half(1 / 2), half(-1 / 2), 0, 0)
    down_up = clebsch_gordan(half(1 / 2), half(-1 / 2), half(1 / 2), half(1 / 2), 0, 0)

    # Assert
    assert up_down == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert down_up == pytest.approx(-1 / np.sqrt(2), abs=1e-14)


def test_angular_momentum_matrices_obey_commutator():
    # Arrange
    jx, jy, jz = angular_momentum_matrices(half(3 / 2))

    # Act
    commutator = jx @ jy - jy @ jx

    # Assert
    np.testing.assert_allclose(commutator, 1j * jz, atol=1e-14)


def test_rotation_matrix_about_z_is_diagonal_phase():
    # Act
    matrix = rotation_matrix(1, 0.7, 0.0, 0.0)

    # Assert
    np.testing.assert_allclose(matrix, np.diag(np.exp(-0.7j * np.array([-1, 0, 1]))), atol=1e-14)


def test_rotation_matrix_is_unitary():
    # Act
    matrix = rotation_matrix(half(5 / 2), 0.3, 1.1, -0.4)

    # Assert
    np.testing.assert_allclose(matrix @ matrix.conj().T, np.eye(6), atol=1e-12)


def test_dipole_allowed_excludes_zero_to_zero():
    assert not dipole_allowed(half(0), half(0))
    assert dipole_allowed(half(0), half(1))
    assert not dipole_allowed(half(3), half(1))


def test_dipole_element_line_strengths_from_stretched_state(rb85):
    # Arrange
    expected = {4: 0.008929, 3: 0.03472, 2: 0.03968}

    for Fe, strength in expected.items():
        # Act
        element = dipole_element(3, -3, 1, Fe, -2, rb85)

        # Assert
        assert element**2 == pytest.approx(strength, rel=1e-3)


def test_dipole_element_stretched_sigma_minus_is_one_quarter(rb85):
    assert dipole_element(3, -3, -1, 4, -4, rb85) ** 2 == pytest.approx(0.25, abs=1e-14)


def test_dipole_element_vanishes_off_selection_rule(rb85):
    assert dipole_element(3, -3, 1, 4, -3, rb85) == 0.0
    assert dipole_element(3, -3, -1, 3, -4, rb85) == 0.0


def test_dipole_element_raises_for_unknown_level(rb85):
    with pytest.raises(UnknownLevel):
        dipole_element(3, -3, 1, 5, -2, rb85)


def test_dipole_sum_rule_is_independent_of_ground_sublevel(rb85):
    # Act
    sums = [
        sum(
            dipole_element(3, m0, q, Fe, m0 + q, rb85) ** 2
            for Fe in rb85.excited_F()
            for q in (-1, 0, 1)
        )
        for m0 in half(3).projections()
    ]

    # Assert
    np.testing.assert_allclose(sums, sums[0], atol=1e-12)


def test_emission_element_is_hermitian_conjugate_of_absorption(rb85):
    for Fe in rb85.excited_F():
        for m0, q in itertools.product(half(3).projections(), (-1, 0, 1)):
            me = m0 + q
            if not Fe.admits(me):
                continue

            # Act
            absorption = dipole_element(3, m0, q, Fe, me, rb85)
            emission = emission_element(Fe, me, -q, 3, m0, rb85)

            # Assert
            assert emission == pytest.approx((-1) ** q * absorption, abs=1e-14)


def test_dipole_table_is_read_only(rb85):
    # Act
    table = dipole_table(rb85, half(3), half(4))

    # Assert
    assert table.shape == (9, 3, 7)
    with pytest.raises(ValueError):
        table[0, 0, 0] = 1.0

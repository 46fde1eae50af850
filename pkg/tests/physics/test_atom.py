import pytest

from src.models.errors import UnknownLevel
from src.models.half_int import half
from src.physics.atom import (
    detuning,
    oracle_scheme,
    rb85_default,
    resonance_positions,
    zeeman_energy,
)


def test_rb85_default_excited_energies_in_gamma(rb85):
    # Assert
    assert rb85.excited_energy(4) == 0.0
    assert rb85.excited_energy(3) == pytest.approx(-19.888, abs=1e-3)
    assert rb85.excited_energy(2) == pytest.approx(-30.340, abs=1e-3)
    assert rb85.excited_energy(1) == pytest.approx(-35.182, abs=1e-3)


def test_rb85_default_ground_splitting(rb85):
    assert rb85.ground_energy(3) - rb85.ground_energy(2) == pytest.approx(500.45, abs=1e-2)


def test_rb85_default_populates_upper_ground_level(rb85):
    assert rb85.populated_ground == half(3)
    assert rb85.stretched_m() == half(-3)


def test_resonance_positions_skip_forbidden_line(rb85):
    # Act
    lines = dict(resonance_positions(rb85))

    # Assert
    assert set(lines) == {half(2), half(3), half(4)}
    assert lines[half(4)] == 0.0
    assert lines[half(3)] == pytest.approx(-19.888, abs=1e-3)


def test_detuning_from_each_line(rb85):
    assert detuning(rb85, 3, 4, -5.0) == -5.0
    assert detuning(rb85, 3, 3, -5.0) == pytest.approx(-5.0 + 19.888, abs=1e-3)


def test_zeeman_energy_is_measured_from_stretched_state(rb85):
    assert zeeman_energy(rb85, 3, -3) == 0.0
    assert zeeman_energy(rb85, 3, -1) == pytest.approx(0.2)


def test_zeeman_energy_with_quadratic_term():
    # Arrange
    scheme = rb85_default(zeeman_quadratic=0.05)

    # Act
    energy = zeeman_energy(scheme, 3, -1)

    # Assert
    assert energy == pytest.approx(0.2 + 0.05 * 4)


def test_zeeman_energy_rejects_invalid_sublevel(rb85):
    with pytest.raises(ValueError):
        zeeman_energy(rb85, 3, -4)


def test_zeeman_energy_rejects_unknown_level(rb85):
    with pytest.raises(UnknownLevel):
        zeeman_energy(rb85, 1, 0)


def test_oracle_scheme_is_single_line():
    # Act
    scheme = oracle_scheme()

    # Assert
    assert scheme.stretched_m() == half(0)
    assert resonance_positions(scheme) == [(half(1), 0.0)]

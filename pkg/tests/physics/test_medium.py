import numpy as np
import pytest
from scipy.integrate import quad

from src.models.cloud_config import CloudConfig
from src.models.errors import ZeroCrossSection
from src.models.half_int import half
from src.physics import medium
from src.physics.atom import resonance_positions
from src.physics.medium import (
    MEAN_MODE,
    atom_number,
    attenuation_from_column,
    calibrate_density,
    column_density,
    column_to_boundary,
    density,
    mode_amplitude,
    on_axis_column,
    ray_attenuation,
    sample_position,
)
from src.physics.scatter import dispersion_zero, mean_forward_amplitude, total_cross_section


def _numeric_column(cloud, n0, start, direction, length):
    start = np.asarray(start, dtype=float)
    direction = np.asarray(direction, dtype=float)
    value, _ = quad(lambda t: density(cloud, n0, start + t * direction), 0.0, length, limit=500)
    return value


def test_column_density_through_centre_matches_closed_form(sphere):
    # Act
    column = column_density(sphere, 2.0, [0.0, 0.0, -300.0], [0.0, 0.0, 1.0])

    # Assert
    assert column == pytest.approx(on_axis_column(sphere, 2.0), rel=1e-12)


@pytest.mark.parametrize(
    "start, direction",
    [
        ([3.0, -2.0, 5.0], [0.6, 0.0, 0.8]),  # moving away from the centre
        ([3.0, -2.0, 5.0], [-0.6, 0.0, -0.8]),  # crossing the centre region
        ([-25.0, 4.0, 1.0], [1.0, 0.0, 0.0]),
    ],
)
def test_column_density_to_boundary_matches_quadrature(start, direction):
    # Arrange
    cloud = CloudConfig(6.0, 9.0, 14.0)

    # Act
    column = column_to_boundary(cloud, 1.5, np.array(start), np.array(direction))

    # Assert
    assert column == pytest.approx(_numeric_column(cloud, 1.5, start, direction, 400.0), rel=1e-7)


def test_column_density_of_finite_segment_matches_quadrature():
    # Arrange
    cloud = CloudConfig(6.0, 9.0, 14.0)
    start = np.array([2.0, 1.0, -8.0])
    direction = np.array([0.0, 0.6, 0.8])

    # Act
    column = column_density(cloud, 1.0, start, direction, 12.5)

    # Assert
    assert column == pytest.approx(_numeric_column(cloud, 1.0, start, direction, 12.5), rel=1e-7)


def test_column_density_is_vectorised(sphere):
    # Arrange
    starts = np.array([[0.0, 0.0, -50.0], [1.0, 2.0, 3.0]])
    directions = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])

    # Act
    columns = column_to_boundary(sphere, 1.0, starts, directions)

    # Assert
    assert columns.shape == (2,)
    assert columns[1] == pytest.approx(column_to_boundary(sphere, 1.0, starts[1], directions[1]), rel=1e-14)


def test_calibrate_density_reproduces_target_optical_depth(rb85):
    # Arrange
    cloud = CloudConfig.cigar(8.0, 20.0, target_b=3.0)

    # Act
    n0 = calibrate_density(cloud, rb85, -12.0, 1)

    # Assert
    line_integral, _ = quad(lambda z: density(cloud, n0, np.array([0.0, 0.0, z])), -np.inf, np.inf)
    assert line_integral * total_cross_section(rb85, 1, -12.0) == pytest.approx(3.0, rel=1e-6)


def test_calibrate_density_raises_when_cross_section_vanishes(rb85, sphere, monkeypatch):
    # Arrange
    monkeypatch.setattr(medium, "total_cross_section", lambda scheme, q, delta: 0.0)

    # Act & Assert
    with pytest.raises(ZeroCrossSection):
        calibrate_density(sphere, rb85, 0.0, 1)


def test_ray_attenuation_across_cloud_is_half_optical_depth(rb85, sphere):
    # Arrange
    n0 = calibrate_density(sphere, rb85, -10.0, 1)

    # Act
    transmission = ray_attenuation(sphere, rb85, n0, [0.0, 0.0, -200.0], 1, -10.0, end=[0.0, 0.0, 200.0])

    # Assert
    assert abs(transmission) == pytest.approx(np.exp(-0.5), rel=1e-9)


def test_ray_attenuation_modulus_below_one(rb85, sphere):
    # Arrange
    n0 = calibrate_density(sphere, rb85, -10.0, 1)
    starts = np.random.default_rng(1).normal(0.0, 10.0, (50, 3))

    # Act
    factors = ray_attenuation(sphere, rb85, n0, starts, MEAN_MODE, -10.0, direction=[0.0, 0.0, -1.0])

    # Assert
    assert np.all(np.abs(factors) < 1.0)


def test_ray_attenuation_needs_end_or_direction(rb85, sphere):
    with pytest.raises(ValueError):
        ray_attenuation(sphere, rb85, 1.0, [0.0, 0.0, 0.0], 1, 0.0)


def test_mode_amplitude_mean_mode(rb85):
    assert mode_amplitude(rb85, MEAN_MODE, -3.0) == mean_forward_amplitude(rb85, -3.0)


def test_attenuation_from_column_without_amplitude_is_one():
    np.testing.assert_array_equal(attenuation_from_column(0j, np.array([0.0, 5.0])), [1.0, 1.0])


def test_sample_position_follows_cloud_radii():
    # Arrange
    cloud = CloudConfig(3.0, 5.0, 9.0)
    rng = np.random.default_rng(11)

    # Act
    positions = sample_position(cloud, rng, 200000)

    # Assert
    np.testing.assert_allclose(positions.std(axis=0), cloud.radii, rtol=0.01)
    assert sample_position(cloud, rng).shape == (3,)


def test_atom_number_integrates_density():
    # Arrange
    cloud = CloudConfig(3.0, 5.0, 9.0)

    # Act
    number = atom_number(cloud, 0.2)

    # Assert
    assert number == pytest.approx(0.2 * (2 * np.pi) ** 1.5 * 135.0, rel=1e-14)


@pytest.mark.parametrize("mode", [1, -1, MEAN_MODE])
def test_ray_attenuation_multiplies_over_collinear_segments(rb85, sphere, mode):
    # Arrange
    n0 = calibrate_density(sphere, rb85, -10.0, 1)
    start = np.array([-3.0, 2.0, -15.0])
    unit = np.array([0.2, -0.1, 1.0]) / np.linalg.norm([0.2, -0.1, 1.0])
    middle = start + 12.0 * unit
    end = start + 30.0 * unit

    # Act
    first = ray_attenuation(sphere, rb85, n0, start, mode, -10.0, end=middle)
    second = ray_attenuation(sphere, rb85, n0, middle, mode, -10.0, end=end)
    whole = ray_attenuation(sphere, rb85, n0, start, mode, -10.0, end=end)

    # Assert
    assert first * second == pytest.approx(whole, rel=1e-10)


def test_ray_attenuation_is_symmetric_in_its_end_points(rb85, sphere):
    # Arrange
    n0 = calibrate_density(sphere, rb85, -10.0, 1)
    rng = np.random.default_rng(5)
    starts = rng.normal(0.0, 10.0, (20, 3))
    ends = rng.normal(0.0, 10.0, (20, 3))

    # Act
    forward = ray_attenuation(sphere, rb85, n0, starts, 1, -10.0, end=ends)
    backward = ray_attenuation(sphere, rb85, n0, ends, 1, -10.0, end=starts)

    # Assert
    np.testing.assert_allclose(forward, backward, rtol=1e-10)


def test_ray_attenuation_helicity_modes_shift_phase_oppositely_in_window(rb85, sphere):
    # Arrange
    lines = dict(resonance_positions(rb85))
    zero = dispersion_zero(rb85, 1, lines[half(3)] + 0.5, lines[half(4)] - 0.5)
    delta = 0.5 * (zero + lines[half(3)])
    n0 = calibrate_density(sphere, rb85, delta, 1)
    # short enough that neither phase wraps
    start, end = [0.0, 0.0, -0.5], [0.0, 0.0, 0.5]

    # Act
    plus = ray_attenuation(sphere, rb85, n0, start, 1, delta, end=end)
    minus = ray_attenuation(sphere, rb85, n0, start, -1, delta, end=end)

    # Assert
    assert np.angle(plus) < 0 < np.angle(minus)

import numpy as np
import pytest

from src.models.half_int import half
from src.physics.angmom import rotation_matrix
from src.physics.scatter import (
    SPHERICAL_BASIS,
    KHAmplitude,
    SphericalVector,
    amplitude_between_states,
    amplitude_lab_frame,
    dispersion_zero,
    forward_amplitude,
    kh_amplitude,
    kh_pole_contributions,
    mean_forward_amplitude,
    q_index,
    scattering_tensor,
    susceptibility,
    total_cross_section,
)

FE3_LINE = -19.888


def test_spherical_vector_helicity_has_expected_cartesian_form():
    # Act
    plus = SphericalVector.helicity(1).to_cartesian()

    # Assert
    np.testing.assert_allclose(plus, -np.array([1, 1j, 0]) / np.sqrt(2), atol=1e-15)
    assert SphericalVector.helicity(1).is_transverse_to([0, 0, 1])
    assert not SphericalVector.helicity(0).is_transverse_to([0, 0, 1])


def test_spherical_vector_from_cartesian_recovers_components():
    # Arrange
    vector = SphericalVector(np.array([0.3, -0.2j, 1.0]))

    # Act
    recovered = SphericalVector.from_cartesian(vector.to_cartesian())

    # Assert
    np.testing.assert_allclose(recovered.components, vector.components, atol=1e-15)


def test_q_index_rejects_non_spherical_component():
    with pytest.raises(ValueError):
        q_index(2)


def test_kh_pole_contributions_sigma_minus_only_through_fe4(rb85):
    # Act
    poles = kh_pole_contributions(rb85, -3, -3, delta=-10.0)

    # Assert
    index = q_index(-1)
    assert poles[half(4)][index, index] != 0
    for Fe in (half(1), half(2), half(3)):
        assert poles[Fe][index, index] == 0


def test_kh_amplitude_is_zero_when_angular_momentum_is_not_conserved(rb85):
    assert kh_amplitude(rb85, -3, -2, 1, 1, -5.0) == 0j
    assert kh_amplitude(rb85, -3, -1, 1, -1, -5.0) != 0j


def test_kh_amplitude_evaluate_wraps_value(rb85):
    # Act
    amplitude = KHAmplitude.evaluate(rb85, -3, -1, 1, -1, -5.0)

    # Assert
    assert amplitude.value == kh_amplitude(rb85, -3, -1, 1, -1, -5.0)
    assert amplitude.m_out == half(-1)


def test_total_cross_section_of_stretched_transition_on_resonance(rb85):
    assert total_cross_section(rb85, -1, 0.0) == pytest.approx(6 * np.pi, rel=1e-12)


@pytest.mark.parametrize("delta", [-35.0, -25.0, -10.0, 0.0, 5.0])
@pytest.mark.parametrize("q", [-1, 0, 1])
def test_susceptibility_imaginary_part_is_positive(rb85, q, delta):
    assert susceptibility(rb85, q, delta, 1.0).imag > 0


def test_dispersion_zero_lies_inside_hyperfine_window(rb85):
    # Act
    zero = dispersion_zero(rb85, 1, FE3_LINE + 0.5, -0.5)

    # Assert
    assert FE3_LINE < zero < 0.0
    assert abs(forward_amplitude(rb85, 1, zero).real) < 1e-8


def test_susceptibility_helicity_modes_have_opposite_dispersion_in_window(rb85):
    # Arrange
    zero = dispersion_zero(rb85, 1, FE3_LINE + 0.5, -0.5)
    midpoint = 0.5 * (zero + FE3_LINE)

    # Act
    chi_plus = susceptibility(rb85, 1, midpoint, 1.0)
    chi_minus = susceptibility(rb85, -1, midpoint, 1.0)

    # Assert
    assert chi_plus.real < 0 < chi_minus.real


def test_scattering_tensor_contracts_to_forward_amplitude(rb85):
    # Arrange
    tensor = scattering_tensor(rb85, -3, -3, -7.0)
    e_plus = SPHERICAL_BASIS[:, q_index(1)]

    # Act
    contracted = e_plus.conj() @ tensor @ e_plus

    # Assert
    assert contracted == pytest.approx(forward_amplitude(rb85, 1, -7.0), abs=1e-14)


def test_mean_forward_amplitude_averages_three_modes(rb85):
    # Act
    mean = mean_forward_amplitude(rb85, -4.0)

    # Assert
    expected = sum(forward_amplitude(rb85, q, -4.0) for q in (-1, 0, 1)) / 3
    assert mean == pytest.approx(expected, abs=1e-15)


def test_amplitude_between_states_reduces_to_sublevel_amplitude(rb85):
    # Arrange
    state_in = np.zeros(7)
    state_in[0] = 1.0
    state_out = np.zeros(7)
    state_out[2] = 1.0
    e_in = SphericalVector.helicity(1)
    e_out = SphericalVector.helicity(-1)

    # Act
    amplitude = amplitude_between_states(rb85, state_in, state_out, e_in, e_out, -3.0)

    # Assert
    assert amplitude == pytest.approx(amplitude_lab_frame(rb85, -3, -1, e_in, e_out, -3.0), abs=1e-15)
    assert amplitude == pytest.approx(kh_amplitude(rb85, -3, -1, 1, -1, -3.0), abs=1e-15)


def _random_polarisation(rng):
    return SphericalVector(rng.normal(size=3) + 1j * rng.normal(size=3))


def test_amplitude_lab_frame_is_linear_in_incoming_polarisation(rb85):
    # Arrange
    rng = np.random.default_rng(21)
    first, second, e_out = (_random_polarisation(rng) for _ in range(3))
    a, b = 0.7 - 1.2j, -0.4 + 0.3j
    combined = SphericalVector(a * first.components + b * second.components)

    # Act
    amplitude = amplitude_lab_frame(rb85, -3, -2, combined, e_out, -12.0)

    # Assert
    expected = a * amplitude_lab_frame(rb85, -3, -2, first, e_out, -12.0) + b * amplitude_lab_frame(
        rb85, -3, -2, second, e_out, -12.0
    )
    assert amplitude == pytest.approx(expected, rel=1e-12)


def test_amplitude_lab_frame_is_antilinear_in_outgoing_polarisation(rb85):
    # Arrange
    rng = np.random.default_rng(22)
    e_in, first, second = (_random_polarisation(rng) for _ in range(3))
    a, b = 1.5 + 0.5j, -0.2 - 0.9j
    combined = SphericalVector(a * first.components + b * second.components)

    # Act
    amplitude = amplitude_lab_frame(rb85, -3, -3, e_in, combined, -25.0)

    # Assert
    expected = np.conj(a) * amplitude_lab_frame(rb85, -3, -3, e_in, first, -25.0) + np.conj(
        b
    ) * amplitude_lab_frame(rb85, -3, -3, e_in, second, -25.0)
    assert amplitude == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("m_out", [-3, -2, -1])
@pytest.mark.parametrize("q_in", [-1, 0, 1])
@pytest.mark.parametrize("q_out", [-1, 0, 1])
def test_amplitude_lab_frame_in_helicity_basis_is_kh_amplitude(rb85, m_out, q_in, q_out):
    # Act
    amplitude = amplitude_lab_frame(
        rb85, -3, m_out, SphericalVector.helicity(q_in), SphericalVector.helicity(q_out), -8.0
    )

    # Assert
    assert amplitude == pytest.approx(kh_amplitude(rb85, -3, m_out, q_in, q_out, -8.0), abs=1e-15)


@pytest.mark.parametrize("angles", [(0.4, 1.1, -0.7), (2.0, np.pi / 2, 0.3), (-1.3, 2.6, 1.9)])
def test_amplitude_between_states_is_invariant_under_joint_rotation(rb85, angles):
    # Arrange
    rng = np.random.default_rng(23)
    state_in = rng.normal(size=7) + 1j * rng.normal(size=7)
    state_out = rng.normal(size=7) + 1j * rng.normal(size=7)
    e_in, e_out = _random_polarisation(rng), _random_polarisation(rng)
    atom_rotation = rotation_matrix(half(3), *angles)
    field_rotation = rotation_matrix(1, *angles)

    # Act
    before = amplitude_between_states(rb85, state_in, state_out, e_in, e_out, -12.0)
    after = amplitude_between_states(
        rb85,
        atom_rotation @ state_in,
        atom_rotation @ state_out,
        SphericalVector(field_rotation @ e_in.components),
        SphericalVector(field_rotation @ e_out.components),
        -12.0,
    )

    # Assert
    assert after == pytest.approx(before, rel=1e-10)

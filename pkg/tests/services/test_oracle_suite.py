import pytest

from src.services.oracle_suite import (
    check_angular_factors,
    check_beat_widths,
    check_calibration,
    check_dipole_rules,
    check_kramers_kronig,
    check_quadrature,
    check_reciprocity,
    check_selection_rule,
    check_susceptibility_window,
    check_wigner_identities,
    kramers_kronig_real_part,
    run_oracles,
)


@pytest.mark.parametrize(
    "oracle",
    [
        check_wigner_identities,
        check_dipole_rules,
        check_selection_rule,
        check_susceptibility_window,
        check_kramers_kronig,
        check_calibration,
        check_angular_factors,
        check_beat_widths,
    ],
)
def test_fast_oracles_pass(oracle):
    # Act
    result = oracle()

    # Assert
    assert result.passed, result.detail


@pytest.mark.parametrize("x", [-3.0, 0.0, 1.0, 2.5])
def test_kramers_kronig_real_part_of_lorentzian(x):
    # Act
    estimate = kramers_kronig_real_part(lambda t: 1 / (1 + t**2), x, poles=[])

    # Assert
    assert estimate == pytest.approx(-x / (1 + x**2), abs=1e-4)


@pytest.mark.slow
def test_check_reciprocity_passes_with_transverse_propagator():
    # Act
    result = check_reciprocity()

    # Assert
    assert result.passed, result.detail


@pytest.mark.slow
def test_check_reciprocity_fails_with_corrupted_propagator(corrupted_propagator):
    # Act
    result = check_reciprocity(corrupted_propagator)

    # Assert
    assert not result.passed


@pytest.mark.slow
def test_check_quadrature_passes():
    # Act
    result = check_quadrature()

    # Assert
    assert result.passed, result.detail


@pytest.mark.slow
def test_run_oracles_reports_every_check():
    # Act
    results = run_oracles()

    # Assert
    assert len(results) == 10
    assert all(result.passed for result in results), [r.name for r in results if not r.passed]

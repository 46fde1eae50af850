"""
Fast self-checks of the simulator: angular momentum identities, selection
rules, dispersion signs, medium calibration, path reciprocity of the classical
dipole, angular factors, Monte-Carlo vs quadrature and beat widths.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.integrate import quad

from src.models.beat_spectrum import VelocityModel
from src.models.channel_spec import ChannelSpec
from src.models.cloud_config import CloudConfig
from src.models.half_int import half
from src.physics.angmom import dipole_element, emission_element, wigner3j, wigner6j
from src.physics.atom import oracle_scheme, rb85_default, resonance_positions
from src.physics.beatspec import (
    beat_spectrum_rms,
    brute_force_loop_rms,
    brute_force_single_rms,
    double_profile,
    fixed_direction_sampler,
    single_profile,
)
from src.physics.medium import calibrate_density, density, ray_attenuation
from src.physics.scatter import (
    dispersion_zero,
    kh_pole_contributions,
    q_index,
    susceptibility,
    total_cross_section,
)
from src.services.cbs_service import (
    ChainEvaluator,
    Propagator,
    angular_factor_pi,
    angular_factor_sigma,
    pair_contribution,
    sample_path,
    transverse_propagator,
)
from src.services.quadrature_service import QuadratureNodes, pair_integral
from src.services.spectrum_orchestrator import SpectrumOrchestrator, mc_spectrum
from src.utils.logger import log

# helicity-preserving channel: e_out* = -e_in, so a J=0 -> J=1 dipole is reciprocal at every order
ORACLE_CHANNEL = ChannelSpec(pol_in=1, pol_out=1)


@dataclass(frozen=True)
class OracleResult:
    name: str
    passed: bool
    detail: str


def kramers_kronig_real_part(imaginary: Callable[[float], float], x: float, poles, span: float = 200.0) -> float:
    """(1/pi) P int_{-span}^{span} imaginary(x') / (x' - x) dx', by subtracting the singular part."""

    def regular(t: float) -> float:
        if t == x:
            return 0.0
        return (imaginary(t) - imaginary(x)) / (t - x)

    points = sorted({p for p in poles if -span < p < span} | {x})
    smooth, _ = quad(regular, -span, span, points=points, limit=2000)
    singular = imaginary(x) * np.log((span - x) / (span + x))
    return (smooth + singular) / np.pi


def check_wigner_identities() -> OracleResult:
    j1, j2, j3 = half(2), half(3 / 2), half(7 / 2)
    worst = 0.0
    for m3 in j3.projections():
        total = sum(
            j3.multiplicity() * wigner3j(j1, j2, j3, m1, m2, -(m1 + m2)) ** 2
            for m1 in j1.projections()
            for m2 in j2.projections()
            if (m1 + m2) == -m3
        )
        worst = max(worst, abs(total - 1))
    six_j = wigner6j(half(1 / 2), half(1 / 2), 0, half(1 / 2), half(1 / 2), 0)
    passed = worst < 1e-12 and abs(six_j + 0.5) < 1e-14
    return OracleResult("wigner identities", passed, f"3j orthogonality residual {worst:.1e}, 6j={six_j:+.3f}")


def check_dipole_rules() -> OracleResult:
    scheme = rb85_default()
    F0 = half(3)
    sums = []
    hermiticity = 0.0
    for m0 in F0.projections():
        total = 0.0
        for Fe in scheme.excited_F():
            for q in (-1, 0, 1):
                me = m0 + q
                element = dipole_element(F0, m0, q, Fe, me, scheme)
                total += element**2
                hermiticity = max(
                    hermiticity, abs(emission_element(Fe, me, -q, F0, m0, scheme) - (-1) ** q * element)
                )
        sums.append(total)
    spread = max(sums) - min(sums)
    passed = spread < 1e-12 and hermiticity < 1e-12
    return OracleResult("dipole sum rule", passed, f"spread {spread:.1e}, hermiticity {hermiticity:.1e}")


def check_selection_rule() -> OracleResult:
    scheme = rb85_default()
    m = scheme.stretched_m()
    poles = kh_pole_contributions(scheme, m, m, delta=-19.89)
    index = q_index(-1)
    leaks = {Fe: abs(block[index, index]) for Fe, block in poles.items() if Fe != half(4)}
    passed = all(value == 0.0 for value in leaks.values()) and abs(poles[half(4)][index, index]) > 0
    return OracleResult("sigma- selection rule", passed, f"Fe!=4 contributions {list(leaks.values())}")


def check_susceptibility_window() -> OracleResult:
    scheme = rb85_default()
    lines = dict(resonance_positions(scheme))
    lower, upper = lines[half(3)] + 0.5, lines[half(4)] - 0.5
    zero = dispersion_zero(scheme, 1, lower, upper, xtol=1e-9)
    midpoint = 0.5 * (zero + lines[half(3)] + 0.5)
    chi_plus = susceptibility(scheme, 1, midpoint, 1.0)
    chi_minus = susceptibility(scheme, -1, midpoint, 1.0)
    passed = chi_plus.real < 0 < chi_minus.real
    return OracleResult(
        "susceptibility sign window",
        passed,
        f"Re chi+ zero at {zero:.6f}, at {midpoint:.2f}: Re chi+={chi_plus.real:.3g} Re chi-={chi_minus.real:.3g}",
    )


def check_kramers_kronig() -> OracleResult:
    scheme = rb85_default()
    poles = [position for _, position in resonance_positions(scheme)]
    worst = 0.0
    for q, delta in itertools.product((-1, 1), (-10.0, -40.0, 5.0)):
        exact = susceptibility(scheme, q, delta, 1.0).real
        estimate = kramers_kronig_real_part(lambda x: susceptibility(scheme, q, x, 1.0).imag, delta, poles)
        worst = max(worst, abs(estimate - exact) / abs(exact))
    return OracleResult("Kramers-Kronig", worst < 0.01, f"worst relative error {worst:.2e}")


def check_calibration() -> OracleResult:
    scheme = rb85_default()
    cloud = CloudConfig.sphere(10.0)
    n0 = calibrate_density(cloud, scheme, -10.0, 1)
    column, _ = quad(lambda z: density(cloud, n0, np.array([0.0, 0.0, z])), -np.inf, np.inf)
    optical_depth = column * total_cross_section(scheme, 1, -10.0)
    through = abs(ray_attenuation(cloud, scheme, n0, [0.0, 0.0, -200.0], 1, -10.0, end=[0.0, 0.0, 200.0]))
    passed = abs(optical_depth - 1.0) < 1e-6 and abs(through - np.exp(-0.5)) < 1e-9
    return OracleResult("optical depth calibration", passed, f"b={optical_depth:.8f}, |t|={through:.8f}")


def check_reciprocity(propagator: Propagator = transverse_propagator, seed: int = 7) -> OracleResult:
    """Direct and reversed amplitudes of a scalar-isotropic dipole must coincide path by path."""
    scheme = oracle_scheme()
    cloud = CloudConfig.sphere(5.0, attenuation="isotropic")
    n0 = calibrate_density(cloud, scheme, 0.0, ORACLE_CHANNEL.q_in)
    evaluator = ChainEvaluator(scheme, ORACLE_CHANNEL, cloud, 0.0, n0=n0, propagator=propagator)
    rng = np.random.default_rng(seed)

    worst = 0.0
    for order in (2, 3, 4):
        for _ in range(20):
            path = sample_path(scheme, ORACLE_CHANNEL, cloud, n0, order, rng)
            geometry = evaluator.prepare(path.positions[None])
            direct, reciprocal = evaluator.chain_amplitudes(geometry, order, np.array([path.sublevel_changes]))
            scale = max(abs(direct[0]), abs(reciprocal[0]), 1e-300)
            worst = max(worst, abs(direct[0] - reciprocal[0]) / scale)

    orchestrator = SpectrumOrchestrator(scheme, cloud, ORACLE_CHANNEL, threads=1, propagator=propagator)
    record = orchestrator.run([0.0], 20000, 2, seed)[0]
    ratio = (record.sigma_ladder + record.sigma_interf) / record.sigma_ladder
    passed = worst < 1e-12 and abs(ratio - 2.0) < 1e-9
    return OracleResult(
        "classical reciprocity", passed, f"max |A_d-A_r|/|A| {worst:.1e}, order-2 (L+I)/L={ratio:.12f}"
    )


def check_angular_factors() -> OracleResult:
    angles = np.linspace(0.0, np.pi, 10)
    closed_sigma = np.array([0.25 * (np.cos(t) ** 2 + 1) ** 2 for t in angles])
    closed_pi = np.array([np.sin(t) ** 4 for t in angles])
    formula_ok = np.allclose(angular_factor_sigma(angles), closed_sigma, atol=1e-14, rtol=0) and np.allclose(
        angular_factor_pi(angles), closed_pi, atol=1e-14, rtol=0
    )

    scheme = rb85_default()
    cloud = CloudConfig.sphere(10.0, attenuation="none")
    delta = -10.0
    n0 = calibrate_density(cloud, scheme, delta, 1)

    def ladders(theta: float):
        offset = 2.5 * np.array([np.sin(theta), 0.0, np.cos(theta)])
        sigma_only, _ = pair_contribution(-offset, offset, ChannelSpec(), scheme, cloud, n0, delta)
        full, _ = pair_contribution(-offset, offset, ChannelSpec(diagram_set="Full"), scheme, cloud, n0, delta)
        return sigma_only, full - sigma_only

    sigma_axis, pi_axis = ladders(0.0)
    sigma_side, pi_side = ladders(np.pi / 2)
    selection_ok = pi_axis <= 1e-12 * sigma_axis and sigma_axis > sigma_side and pi_side > pi_axis
    return OracleResult(
        "angular factors",
        bool(formula_ok and selection_ok),
        f"on axis sigma={sigma_axis:.3g} pi={pi_axis:.1e}; orthogonal sigma={sigma_side:.3g} pi={pi_side:.3g}",
    )


def check_quadrature(seed: int = 11) -> OracleResult:
    scheme = oracle_scheme()
    cloud = CloudConfig.sphere(4.0, attenuation="none")
    record = mc_spectrum(ORACLE_CHANNEL, scheme, cloud, [0.0], 40000, 2, seed, threads=1)[0]
    nodes = QuadratureNodes(n_hermite=(4, 4, 4), n_distance=24, n_polar=12, n_azimuth=8)
    quad_ladder, _ = pair_integral(ORACLE_CHANNEL, scheme, cloud, 0.0, record.peak_density, nodes)
    error = abs(record.sigma_ladder - quad_ladder)
    passed = error <= max(0.02 * quad_ladder, 3 * record.stderr_ladder)
    return OracleResult("order-2 quadrature", passed, f"mc={record.sigma_ladder:.6g} quad={quad_ladder:.6g}")


def check_beat_widths(seed: int = 5) -> OracleResult:
    vmodel = VelocityModel(0.03)
    grid = np.linspace(-0.6, 0.6, 1201)
    spectrum = single_profile(vmodel, 1.0, 0.2, grid)
    brute_single = brute_force_single_rms(vmodel, 1.0)
    single_error = abs(spectrum.rms_width - brute_single) / brute_single

    collinear = double_profile(vmodel, 1.0, 0.2, fixed_direction_sampler([0.0, 0.0, 1.0]), grid)
    brute_loop = brute_force_loop_rms(vmodel, 1.0, [0.0, 0.0, 1.0], np.random.default_rng(seed))
    loop_error = abs(collinear.rms_width - brute_loop) / brute_loop
    reduction_error = abs(collinear.rms_width - spectrum.rms_width) / spectrum.rms_width
    grid_error = abs(beat_spectrum_rms(spectrum) - spectrum.rms_width) / spectrum.rms_width

    passed = single_error < 1e-3 and loop_error < 1e-2 and reduction_error < 1e-2 and grid_error < 1e-2
    return OracleResult(
        "beat widths",
        passed,
        f"single {single_error:.1e}, loop {loop_error:.1e}, collinear reduction {reduction_error:.1e}",
    )


ORACLES: List[Callable[[], OracleResult]] = [
    check_wigner_identities,
    check_dipole_rules,
    check_selection_rule,
    check_susceptibility_window,
    check_kramers_kronig,
    check_calibration,
    check_reciprocity,
    check_angular_factors,
    check_quadrature,
    check_beat_widths,
]


def run_oracles(propagator: Propagator = transverse_propagator) -> List[OracleResult]:
    results = []
    for oracle in ORACLES:
        if oracle is check_reciprocity:
            result = oracle(propagator)
        else:
            result = oracle()
        log("oracles", f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
        results.append(result)
    return results

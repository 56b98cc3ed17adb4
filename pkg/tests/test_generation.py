"""
Tests for state generation: generators, decoupling, thermal inputs and the
closed-form covariance elements.
"""

import math

import numpy as np
import pytest
import scipy.linalg
import structlog

from bisqueeze.core.errors import InvalidModeError, InvalidParameterError, ValidationError
from bisqueeze.generation import (
    ZERO_PATTERN,
    CovarianceElements,
    PumpParameters,
    ThermalSpec,
    beam_splitter,
    beam_splitter_ac,
    bisqueezed_state,
    bisqueezing_transform,
    combined_generator,
    commutator,
    covariance_elements,
    decouple,
    dimensionless_frequencies,
    elements_from_state,
    generators,
    reduced_purities,
    resolve_pair,
    state_from_decoupled,
    thermal_covariance,
    thermal_occupations,
    thermal_state,
    two_mode_squeezer,
    zero_temperature_occupations,
)
from bisqueeze.measures import number_expectation
from bisqueeze.symplectic import CovarianceMatrix, apply_transform, partial_trace, purity

logger = structlog.get_logger(__name__)

PUMPS = [(0.5, 0.5), (0.2, 0.9), (-0.4, 0.3), (1.1, -0.6), (0.7, 0.0), (0.0, 0.8)]


def test_generator_algebra_closes():
    K_ab, K_bc, J_ac = generators()
    assert np.array_equal(commutator(K_ab, K_bc), J_ac)
    assert np.array_equal(commutator(J_ac, K_ab), -K_bc)
    assert np.array_equal(commutator(J_ac, K_bc), K_ab)


def test_generator_entries():
    K_ab, K_bc, J_ac = generators()
    assert {tuple(idx) for idx in np.argwhere(K_ab)} == {(0, 4), (4, 0), (1, 3), (3, 1)}
    assert {tuple(idx) for idx in np.argwhere(K_bc)} == {(1, 5), (5, 1), (2, 4), (4, 2)}
    assert J_ac[0, 2] == 1 and J_ac[3, 5] == 1
    assert J_ac[2, 0] == -1 and J_ac[5, 3] == -1


def test_decouple_reference_values(equal_pumps):
    d = decouple(equal_pumps)
    assert d.rho == pytest.approx(math.sqrt(0.5))
    assert d.phi == pytest.approx(math.pi / 4)
    assert d.r_ab == pytest.approx(0.51909, abs=1e-4)
    assert d.r_bc == pytest.approx(0.46056, abs=1e-4)
    assert d.theta_ac == pytest.approx(-0.1148, abs=1e-4)


@pytest.mark.parametrize("R_ab,R_bc", PUMPS)
def test_factorisation_matches_matrix_exponential(R_ab, R_bc):
    p = PumpParameters(R_ab=R_ab, R_bc=R_bc)
    expected = scipy.linalg.expm(combined_generator(p))
    assert np.allclose(bisqueezing_transform(decouple(p)).data, expected, atol=1e-10)


@pytest.mark.slow
def test_factorisation_on_grid():
    values = np.linspace(-2.0, 2.0, 21)
    for R_ab in values:
        for R_bc in values:
            p = PumpParameters(R_ab=float(R_ab), R_bc=float(R_bc))
            expected = scipy.linalg.expm(combined_generator(p))
            actual = bisqueezing_transform(decouple(p)).data
            scale = max(1.0, float(np.max(np.abs(expected))))
            assert np.max(np.abs(actual - expected)) < 1e-10 * scale, (R_ab, R_bc)


def test_single_pump_has_no_beam_splitter():
    d = decouple(PumpParameters(R_ab=0.0, R_bc=0.8))
    assert (d.r_ab, d.r_bc, d.theta_ac) == (0.0, 0.8, 0.0)

    d = decouple(PumpParameters(R_ab=0.0, R_bc=0.0))
    assert (d.r_ab, d.r_bc, d.theta_ac, d.rho, d.phi) == (0.0, 0.0, 0.0, 0.0, 0.0)


def test_parameters_reject_non_finite():
    with pytest.raises(InvalidParameterError):
        PumpParameters(R_ab=float("nan"), R_bc=0.1)
    with pytest.raises(InvalidParameterError):
        ThermalSpec(omega_a=1.0, omega_b=1.0, omega_c=1.0, temperature=-1.0)


@pytest.mark.parametrize("pair", ["ad", "aa", (0, 3), "abc"])
def test_resolve_pair_rejects(pair):
    with pytest.raises(InvalidModeError):
        resolve_pair(pair)


def test_reference_frequency():
    spec = ThermalSpec.from_hertz(5e9, 5e9, 5e9, 0.015)
    omega_a, _, _ = dimensionless_frequencies(spec)
    assert omega_a == pytest.approx(15.997, abs=1e-3)

    nu = thermal_occupations(spec)[0]
    assert nu == pytest.approx(1.0 / math.tanh(omega_a / 2), rel=1e-14)


def test_zero_temperature_is_vacuum():
    spec = ThermalSpec.from_hertz(4.99e9, 5e9, 5.01e9, 0.0)
    assert thermal_occupations(spec) == (1.0, 1.0, 1.0)


def test_thermal_state_at_zero_temperature_is_vacuum():
    sigma = thermal_state(ThermalSpec.from_hertz(4.99e9, 5e9, 5.01e9, 0.0))
    assert np.array_equal(sigma.data, np.eye(6))


def test_optical_frequency_at_room_temperature():
    spec = ThermalSpec.from_hertz(5.64e14, 5.64e14, 5.64e14, 300.0)
    omega_a, _, _ = dimensionless_frequencies(spec)
    assert omega_a == pytest.approx(90.0, abs=0.5)
    assert np.allclose(thermal_state(spec).data, np.eye(6), atol=1e-30)


def test_bisqueezed_state_without_pumps_is_thermal():
    spec = ThermalSpec.from_hertz(4.99e9, 5e9, 5.01e9, 0.1)
    sigma = bisqueezed_state(PumpParameters(R_ab=0.0, R_bc=0.0), spec)
    assert np.allclose(sigma.data, thermal_state(spec).data, rtol=0, atol=1e-15)
    assert np.allclose(sigma.data, thermal_covariance(thermal_occupations(spec)).data)


def test_single_pump_squeezes_a_and_b_only():
    r = 0.7
    spec = ThermalSpec.from_hertz(4.99e9, 5e9, 5.01e9, 0.0)
    sigma = bisqueezed_state(PumpParameters(R_ab=r, R_bc=0.0), spec)

    expected_ab = apply_transform(CovarianceMatrix.vacuum(2), two_mode_squeezer((0, 1), r, n_modes=2))
    assert np.allclose(partial_trace(sigma, (0, 1)).data, expected_ab.data, atol=1e-12)
    assert np.allclose(partial_trace(sigma, 2).data, np.eye(2), atol=1e-12)
    assert purity(sigma) == pytest.approx(1.0, abs=1e-10)


def test_beam_splitter_angles_add():
    combined = beam_splitter_ac(0.3).compose(beam_splitter_ac(-1.1))
    assert np.allclose(combined.data, beam_splitter_ac(-0.8).data, atol=1e-14)


@pytest.mark.parametrize("pair", ["ab", "bc"])
def test_opposite_squeezers_cancel(pair):
    product = two_mode_squeezer(pair, 1.3).compose(two_mode_squeezer(pair, -1.3))
    assert np.allclose(product.data, np.eye(6), atol=1e-12)


@pytest.mark.parametrize("R_ab,R_bc", PUMPS)
def test_closed_form_elements_match_matrix_product(R_ab, R_bc, unequal_occupations):
    d = decouple(PumpParameters(R_ab=R_ab, R_bc=R_bc))
    sigma = state_from_decoupled(d, unequal_occupations)

    numeric = elements_from_state(sigma)
    analytic = covariance_elements(d, unequal_occupations)
    for name in CovarianceElements.model_fields:
        assert getattr(numeric, name) == pytest.approx(getattr(analytic, name), rel=1e-10, abs=1e-10), name

    assert np.allclose(analytic.to_covariance().data, sigma.data, atol=1e-10)


def test_zero_pattern(vacuum_bisqueezed):
    for i, j in ZERO_PATTERN:
        assert abs(vacuum_bisqueezed.data[i, j]) < 1e-12


def test_elements_from_state_requires_pattern():
    thermal = state_from_decoupled(decouple(PumpParameters(R_ab=0.0, R_bc=0.0)), (1.0, 2.0, 1.0))
    mixed = apply_transform(thermal, beam_splitter("ab", 0.3))
    with pytest.raises(ValidationError):
        elements_from_state(mixed)


def test_vacuum_occupations(vacuum_bisqueezed, equal_pumps):
    expected = zero_temperature_occupations(decouple(equal_pumps))
    for mode, n in enumerate(expected):
        assert number_expectation(vacuum_bisqueezed, mode) == pytest.approx(n, rel=1e-12)


def test_reduced_purities(unequal_occupations):
    d = decouple(PumpParameters(R_ab=0.6, R_bc=0.4))
    sigma = state_from_decoupled(d, unequal_occupations)
    closed = reduced_purities(covariance_elements(d, unequal_occupations))

    modes = {"ab": (0, 1), "bc": (1, 2), "ac": (0, 2), "a": 0, "b": 1, "c": 2}
    for key, keep in modes.items():
        assert closed[key] == pytest.approx(purity(partial_trace(sigma, keep)), rel=1e-9), key


def test_sin_squared_in_gamma_disagrees(unequal_occupations):
    """The sin^2(theta) variant of the gamma cross term misses the matrix product."""
    d = decouple(PumpParameters(R_ab=0.9, R_bc=0.7))
    nu_a, _, nu_c = unequal_occupations
    analytic = covariance_elements(d, unequal_occupations)

    correction = 0.5 * (nu_c - nu_a) * math.sinh(d.r_ab) * math.sinh(2 * d.r_bc)
    variant = analytic.gamma + correction * (math.sin(2 * d.theta_ac) - math.sin(d.theta_ac) ** 2)
    numeric = elements_from_state(state_from_decoupled(d, unequal_occupations)).gamma

    assert numeric == pytest.approx(analytic.gamma, rel=1e-10)
    assert abs(variant - numeric) > 1e-6
    logger.warning("sin^2 variant of gamma disagrees with the matrix product", deviation=abs(variant - numeric))

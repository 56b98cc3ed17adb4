"""
Tests for entanglement and coherence measures.
"""

import math

import numpy as np
import pytest

from bisqueeze.core.errors import DimensionError, InvalidModeError, NonPhysicalStateError
from bisqueeze.generation import (
    PumpParameters,
    covariance_elements,
    decouple,
    state_from_decoupled,
    thermal_covariance,
    two_mode_squeezer,
)
from bisqueeze.measures import (
    bipartition_negativities,
    coherence_matrix,
    describe_entanglement,
    entanglement_of_formation_from_nu,
    first_order_coherence,
    negativity,
    negativity_from_nu,
    nu_minus_ac_lower_bound,
    reduced_nu_minus_analytic,
    relative_entropy_of_coherence,
    smallest_ppt_eigenvalue,
    tripartite_negativity,
    von_neumann_entropy,
)
from bisqueeze.regimes import g1_limits
from bisqueeze.symplectic import CovarianceMatrix, apply_transform, partial_trace


def two_mode_squeezed(r: float, nus=(1.0, 1.0)) -> CovarianceMatrix:
    return apply_transform(thermal_covariance(nus), two_mode_squeezer((0, 1), r, n_modes=2))


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
def test_two_mode_squeezed_vacuum_entanglement(r):
    report = negativity(two_mode_squeezed(r))

    assert report.entangled
    assert report.symmetric
    assert report.nu_tilde_minus == pytest.approx(math.exp(-2 * r), rel=1e-10)
    assert report.negativity == pytest.approx((math.exp(2 * r) - 1) / 2, rel=1e-10)
    assert report.log_negativity == pytest.approx(2 * r, rel=1e-10)
    assert coherence_matrix(two_mode_squeezed(r))[0, 1] == pytest.approx(0.0, abs=1e-12)

    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    assert report.entanglement_of_formation == pytest.approx(ch2 * math.log(ch2) - sh2 * math.log(sh2), rel=1e-9)


def test_thermal_product_is_separable():
    report = negativity(thermal_covariance((1.4, 2.0)))
    assert not report.entangled
    assert report.negativity == 0.0
    assert report.log_negativity == 0.0
    assert report.entanglement_of_formation == 0.0


def test_formation_vanishes_without_entanglement():
    assert entanglement_of_formation_from_nu(1.0) == 0.0
    assert entanglement_of_formation_from_nu(3.0) == 0.0
    assert negativity_from_nu(1.5) == 0.0


def test_asymmetric_state_is_flagged():
    report = negativity(two_mode_squeezed(0.5, nus=(1.0, 1.6)))
    assert not report.symmetric


def test_negativity_rejects_bad_input(vacuum_bisqueezed):
    with pytest.raises(DimensionError):
        negativity(vacuum_bisqueezed)
    with pytest.raises(NonPhysicalStateError):
        negativity(0.5 * np.eye(4))


@pytest.mark.parametrize("pair,modes", [("ab", (0, 1)), ("bc", (1, 2)), ("ac", (0, 2))])
def test_analytic_reduced_eigenvalue(pair, modes, unequal_occupations):
    d = decouple(PumpParameters(R_ab=0.7, R_bc=0.45))
    sigma = state_from_decoupled(d, unequal_occupations)
    numeric = smallest_ppt_eigenvalue(partial_trace(sigma, modes), 1)
    analytic = reduced_nu_minus_analytic(covariance_elements(d, unequal_occupations), pair)
    assert analytic == pytest.approx(numeric, rel=1e-9)


def test_ac_reduction_is_separable_from_vacuum(vacuum_bisqueezed):
    report = negativity(partial_trace(vacuum_bisqueezed, (0, 2)))
    assert not report.entangled


def test_ac_lower_bound_is_reported_only():
    elements = covariance_elements(decouple(PumpParameters(R_ab=0.0, R_bc=0.0)), (1.0, 1.0, 1.0))
    assert nu_minus_ac_lower_bound(elements) == pytest.approx(2.0)
    assert reduced_nu_minus_analytic(elements, "ac") == pytest.approx(1.0)


def test_tripartite_negativity(vacuum_bisqueezed):
    splits = bipartition_negativities(vacuum_bisqueezed)
    assert set(splits) == {"a", "b", "c"}
    assert all(value > 0 for value in splits.values())

    expected = (splits["a"] * splits["b"] * splits["c"]) ** (1 / 3)
    assert tripartite_negativity(vacuum_bisqueezed) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("r,positive", [(0.0, False), (1e-3, True), (0.3, True)])
def test_tripartite_threshold(r, positive):
    sigma = state_from_decoupled(decouple(PumpParameters(R_ab=r, R_bc=r)), (1.0, 1.0, 1.0))
    assert (tripartite_negativity(sigma) > 0) is positive


def test_von_neumann_entropy():
    assert von_neumann_entropy(CovarianceMatrix.vacuum(2)) == pytest.approx(0.0, abs=1e-12)

    n_bar = 0.75
    sigma = thermal_covariance((2 * n_bar + 1,))
    expected = (n_bar + 1) * math.log(n_bar + 1) - n_bar * math.log(n_bar)
    assert von_neumann_entropy(sigma) == pytest.approx(expected, rel=1e-12)
    assert von_neumann_entropy(sigma, base=2) == pytest.approx(expected / math.log(2), rel=1e-12)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
def test_coherence_of_two_mode_squeezed_vacuum(r):
    ch, sh = math.cosh(r), math.sinh(r)
    expected = 4 * (ch ** 2 * math.log2(ch) - sh ** 2 * math.log2(sh))
    assert relative_entropy_of_coherence(two_mode_squeezed(r)) == pytest.approx(expected, rel=1e-8)


def test_thermal_state_has_no_coherence():
    assert relative_entropy_of_coherence(thermal_covariance((1.3, 2.2))) == pytest.approx(0.0, abs=1e-12)


def test_pair_coherence_from_delta(vacuum_bisqueezed, equal_pumps):
    d = decouple(equal_pumps)
    elements = covariance_elements(d, (1.0, 1.0, 1.0))

    assert coherence_matrix(vacuum_bisqueezed)[0, 2] == pytest.approx(elements.delta / 2)

    report = first_order_coherence(vacuum_bisqueezed, 0, 2)
    assert report.pair_coherence == pytest.approx(elements.delta / 2)
    assert report.g1 == pytest.approx(1.0, rel=1e-10)
    assert report.spdm.shape == (2, 2)
    assert report.relative_entropy_coherence > 0


@pytest.mark.parametrize("nu", [1.0, 1.2, 2.5])
def test_g1_matches_equal_frequency_form(nu):
    d = decouple(PumpParameters(R_ab=0.6, R_bc=0.35))
    sigma = state_from_decoupled(d, (nu, nu, nu))
    report = first_order_coherence(sigma, 0, 2)
    assert report.g1.real == pytest.approx(g1_limits(nu, d.r_ab, d.r_bc), rel=1e-9)
    assert abs(report.g1.imag) < 1e-12


def test_first_order_coherence_rejects_same_mode(vacuum_bisqueezed):
    with pytest.raises(InvalidModeError):
        first_order_coherence(vacuum_bisqueezed, 1, 1)
    with pytest.raises(InvalidModeError):
        first_order_coherence(vacuum_bisqueezed, 0, 3)


def test_describe_entanglement_prefix():
    flat = describe_entanglement(negativity(two_mode_squeezed(0.2)), prefix="ab")
    assert set(flat) == {
        "ab_nu_tilde_minus",
        "ab_negativity",
        "ab_log_negativity",
        "ab_entanglement_of_formation",
        "ab_symmetric",
    }

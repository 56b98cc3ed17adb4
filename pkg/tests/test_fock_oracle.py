"""
Tests for the truncated Fock-space oracle.
"""

import math

import numpy as np
import pytest

from bisqueeze.core.errors import DimensionError, TruncationError
from bisqueeze.fock_oracle import (
    TruncatedSpace,
    build_unitary,
    compare_with_gaussian,
    evolve_vacuum,
    ladder_operators,
    oracle_expectations,
    pump_hamiltonian,
    two_mode_amplitudes,
    vacuum,
)
from bisqueeze.generation import PumpParameters


def test_space_dimensions():
    space = TruncatedSpace(n_max=4)
    assert space.local_dimension == 5
    assert space.dimension == 125
    assert TruncatedSpace().n_max == 12


def test_ladder_operators_commute_below_cutoff():
    space = TruncatedSpace(n_max=3)
    a, b, _ = ladder_operators(space)
    assert np.allclose((a @ b - b @ a).toarray(), 0.0)

    # [a, a^dagger] = 1 except on the top level of mode a
    commutator = (a @ a.T - a.T @ a).toarray()
    top = [k for k in range(space.dimension) if k // 16 == 3]
    diagonal = np.diag(commutator)
    assert np.allclose(np.delete(diagonal, top), 1.0)


def test_hamiltonian_is_hermitian():
    H = pump_hamiltonian(PumpParameters(R_ab=0.3, R_bc=0.2), TruncatedSpace(n_max=3)).toarray()
    assert np.allclose(H, H.conj().T)


def test_dense_unitary():
    p = PumpParameters(R_ab=0.1, R_bc=0.1)
    space = TruncatedSpace(n_max=4)
    U = build_unitary(p, space)
    assert np.allclose(U @ U.conj().T, np.eye(space.dimension), atol=1e-10)
    assert np.allclose(U @ vacuum(space), evolve_vacuum(p, space), atol=1e-10)


def test_dense_unitary_dimension_limit():
    with pytest.raises(DimensionError):
        build_unitary(PumpParameters(R_ab=0.1, R_bc=0.1), TruncatedSpace(n_max=13))


def test_cutoff_guard():
    with pytest.raises(TruncationError):
        evolve_vacuum(PumpParameters(R_ab=0.5, R_bc=0.5), TruncatedSpace(n_max=12))


def test_boundary_population_bound():
    space = TruncatedSpace(n_max=4, norm_loss_bound=1e-12)
    with pytest.raises(TruncationError):
        evolve_vacuum(PumpParameters(R_ab=0.3, R_bc=0.1), space)


def test_two_mode_squeezed_amplitudes():
    r = 0.1
    space = TruncatedSpace(n_max=12)
    state = evolve_vacuum(PumpParameters(R_ab=r, R_bc=0.0), space)
    amplitudes = two_mode_amplitudes(state, space)
    expected = np.tanh(r) ** np.arange(space.local_dimension) / np.cosh(r)
    assert np.allclose(amplitudes, expected, atol=1e-10)


def test_expectations_reject_foreign_state():
    with pytest.raises(DimensionError):
        oracle_expectations(np.zeros(8), TruncatedSpace(n_max=4))


@pytest.mark.parametrize("r", [0.1, 0.3])
def test_gaussian_agrees_with_fock(r):
    rows = compare_with_gaussian(PumpParameters(R_ab=r, R_bc=r), TruncatedSpace(n_max=12))
    assert {row.quantity for row in rows} == {
        "n_a", "n_b", "n_c", "abs_adag_c", "entropy_a", "entropy_b", "entropy_c"
    }
    for row in rows:
        assert row.delta < 1e-7, row


@pytest.mark.slow
def test_gaussian_agrees_with_fock_large_cutoff():
    rows = compare_with_gaussian(PumpParameters(R_ab=0.5, R_bc=0.5), TruncatedSpace(n_max=20))
    for row in rows:
        assert row.delta < 1e-6, row


def test_vacuum_occupation_of_idler():
    p = PumpParameters(R_ab=0.2, R_bc=0.0)
    space = TruncatedSpace(n_max=10)
    fock = oracle_expectations(evolve_vacuum(p, space), space)
    assert fock.n_a == pytest.approx(math.sinh(0.2) ** 2, abs=1e-10)
    assert fock.n_b == pytest.approx(math.sinh(0.2) ** 2, abs=1e-10)
    assert fock.n_c == pytest.approx(0.0, abs=1e-14)
    assert fock.boundary_population < 1e-10

"""
Brute-force truncated Fock-space simulation of the double pump acting on vacuum.

Used only to cross-check the Gaussian pipeline: occupations, <a^dagger c>,
single-mode entropies and the two-mode squeezed amplitude profile.
"""

import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import structlog
from pydantic import Field
from scipy.sparse.linalg import expm_multiply

from .core.config import config
from .core.errors import DimensionError, TruncationError
from .generation import ParameterModel, PumpParameters, decouple, state_from_decoupled
from .measures import coherence_matrix, number_expectation, von_neumann_entropy
from .symplectic import partial_trace

logger = structlog.get_logger(__name__)


class TruncatedSpace(ParameterModel):
    """Product of per-mode Fock spaces {|0>, ..., |n_max>}."""
    n_modes: int = Field(default=3, ge=1)
    n_max: int = Field(default_factory=lambda: config.oracle.n_max, ge=1)
    norm_loss_bound: float = Field(default_factory=lambda: config.oracle.norm_loss_bound, gt=0)

    @property
    def local_dimension(self) -> int:
        return self.n_max + 1

    @property
    def dimension(self) -> int:
        return self.local_dimension ** self.n_modes


@dataclass(frozen=True)
class OracleExpectations:
    n_a: float
    n_b: float
    n_c: float
    adag_c: complex
    entropies: Tuple[float, ...]
    boundary_population: float


@dataclass(frozen=True)
class OracleComparison:
    quantity: str
    gaussian: float
    fock: float

    @property
    def delta(self) -> float:
        return abs(self.gaussian - self.fock)


def ladder_operators(space: TruncatedSpace) -> Tuple[sp.csr_matrix, ...]:
    """Annihilation operators of every mode, mode 0 being the most significant factor."""
    d = space.local_dimension
    single = sp.diags(np.sqrt(np.arange(1, d, dtype=float)), offsets=1, format="csr")
    identity = sp.identity(d, format="csr")

    operators = []
    for mode in range(space.n_modes):
        factors = [single if k == mode else identity for k in range(space.n_modes)]
        operators.append(reduce(lambda x, y: sp.kron(x, y, format="csr"), factors))
    return tuple(operators)


def vacuum(space: TruncatedSpace) -> np.ndarray:
    state = np.zeros(space.dimension, dtype=complex)
    state[0] = 1.0
    return state


def _require_three_modes(space: TruncatedSpace) -> None:
    if space.n_modes != 3:
        raise DimensionError(f"The double pump acts on three modes, space has {space.n_modes}")


def _check_truncation(p: PumpParameters, space: TruncatedSpace) -> None:
    rho = math.hypot(p.R_ab, p.R_bc)
    load = math.sinh(2 * rho) ** 2
    if load >= space.n_max / 4:
        logger.warning("Fock cutoff too small for the requested squeezing",
                       rho=rho, sinh2_2rho=load, n_max=space.n_max)
        raise TruncationError(
            f"Cutoff n_max={space.n_max} too small: sinh^2(2 rho) = {load:.3f} must stay below {space.n_max / 4:.3f}"
        )


def pump_hamiltonian(p: PumpParameters, space: TruncatedSpace) -> sp.csr_matrix:
    """R_ab (a^dagger b^dagger + a b) + R_bc (b^dagger c^dagger + b c)."""
    _require_three_modes(space)
    a, b, c = ladder_operators(space)
    G_ab = a.T @ b.T + a @ b
    G_bc = b.T @ c.T + b @ c
    return (p.R_ab * G_ab + p.R_bc * G_bc).tocsr()


def build_unitary(p: PumpParameters, space: TruncatedSpace) -> np.ndarray:
    """
    Dense exp(i H) on the truncated space.

    Raises:
        TruncationError: if the cutoff is too small for the squeezing
        DimensionError: if the space exceeds the dense exponentiation limit
    """
    _require_three_modes(space)
    _check_truncation(p, space)
    limit = config.oracle.max_dense_dimension
    if space.dimension > limit:
        raise DimensionError(
            f"Dense exponentiation limited to dimension {limit}, space has {space.dimension}; use evolve_vacuum"
        )

    H = pump_hamiltonian(p, space).toarray()
    logger.debug("Exponentiating dense generator", dimension=space.dimension)
    return scipy.linalg.expm(1j * H)


def _reduced_density_matrices(state: np.ndarray, space: TruncatedSpace) -> List[np.ndarray]:
    d = space.local_dimension
    tensor = state.reshape((d,) * space.n_modes)
    reduced = []
    for mode in range(space.n_modes):
        moved = np.moveaxis(tensor, mode, 0).reshape(d, -1)
        reduced.append(moved @ moved.conj().T)
    return reduced


def _entropy(rho: np.ndarray) -> float:
    probabilities = np.linalg.eigvalsh(rho)
    probabilities = probabilities[probabilities > 1e-15]
    return float(-np.sum(probabilities * np.log(probabilities)))


def boundary_population(state: np.ndarray, space: TruncatedSpace) -> float:
    """Largest population any mode holds on its top Fock level."""
    return max(float(rho[-1, -1].real) for rho in _reduced_density_matrices(state, space))


def evolve_vacuum(p: PumpParameters, space: TruncatedSpace) -> np.ndarray:
    """
    exp(i H)|0> from the action of the sparse exponential, without forming exp(i H).

    Raises:
        TruncationError: if the cutoff guard fails or too much population
            reaches the cutoff
    """
    _require_three_modes(space)
    _check_truncation(p, space)

    H = pump_hamiltonian(p, space)
    state = expm_multiply(1j * H.astype(complex), vacuum(space))

    population = boundary_population(state, space)
    if population > space.norm_loss_bound:
        logger.warning("Population on the Fock cutoff exceeds bound",
                       population=population, bound=space.norm_loss_bound, n_max=space.n_max)
        raise TruncationError(
            f"Population {population:.3e} on the cutoff exceeds the bound {space.norm_loss_bound:.1e}"
        )
    logger.debug("Evolved vacuum", dimension=space.dimension, boundary_population=population)
    return state


def oracle_expectations(state: np.ndarray, space: TruncatedSpace) -> OracleExpectations:
    """Occupations, <a^dagger c> and single-mode entropies (natural log) of a pure state."""
    _require_three_modes(space)
    if state.shape != (space.dimension,):
        raise DimensionError(f"State of shape {state.shape} does not live in a space of dimension {space.dimension}")

    a, b, c = ladder_operators(space)
    a_psi, b_psi, c_psi = a @ state, b @ state, c @ state
    reduced = _reduced_density_matrices(state, space)

    return OracleExpectations(
        n_a=float(np.vdot(a_psi, a_psi).real),
        n_b=float(np.vdot(b_psi, b_psi).real),
        n_c=float(np.vdot(c_psi, c_psi).real),
        adag_c=complex(np.vdot(a_psi, c_psi)),
        entropies=tuple(_entropy(rho) for rho in reduced),
        boundary_population=max(float(rho[-1, -1].real) for rho in reduced),
    )


def two_mode_amplitudes(state: np.ndarray, space: TruncatedSpace) -> np.ndarray:
    """|<n, n, 0|psi>| for n = 0 ... n_max."""
    d = space.local_dimension
    indices = np.arange(d) * d * d + np.arange(d) * d
    return np.abs(state[indices])


def compare_with_gaussian(p: PumpParameters, space: TruncatedSpace) -> List[OracleComparison]:
    """Side-by-side Gaussian and Fock values of the phase-insensitive quantities."""
    sigma = state_from_decoupled(decouple(p), (1.0, 1.0, 1.0))
    fock = oracle_expectations(evolve_vacuum(p, space), space)

    rows = [
        OracleComparison("n_a", number_expectation(sigma, 0), fock.n_a),
        OracleComparison("n_b", number_expectation(sigma, 1), fock.n_b),
        OracleComparison("n_c", number_expectation(sigma, 2), fock.n_c),
        OracleComparison("abs_adag_c", abs(complex(coherence_matrix(sigma)[0, 2])), abs(fock.adag_c)),
    ]
    for mode, name in enumerate("abc"):
        rows.append(OracleComparison(f"entropy_{name}", von_neumann_entropy(partial_trace(sigma, mode)),
                                     fock.entropies[mode]))
    return rows

"""
Entanglement and coherence figures of merit of Gaussian states.

Entanglement measures are functions of the smallest symplectic eigenvalue of the
partially transposed covariance matrix; coherence measures read the normally
ordered correlations <a_m^dagger a_n> off the W block.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Union

import numpy as np
import structlog

from .core.errors import DimensionError, InvalidModeError
from .generation import CovarianceElements, resolve_pair
from .symplectic import (
    CovarianceMatrix,
    partial_trace,
    partial_transpose,
    require_physical,
    symplectic_eigenvalues,
)

logger = structlog.get_logger(__name__)

# x ln x is evaluated as 0 below this
_LOG_FLOOR = 1e-14

# Determinant mismatch above which a two-mode state is not treated as symmetric
SYMMETRY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class EntanglementReport:
    nu_tilde_minus: float
    negativity: float
    log_negativity: float
    entanglement_of_formation: float
    symmetric: bool = True

    @property
    def entangled(self) -> bool:
        return self.nu_tilde_minus < 1.0


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    """
    First-order coherence between two modes.

    pair_coherence and g1 are complex in general; they are real for the
    bi-squeezed family.
    """

    pair_coherence: complex
    g1: complex
    spdm: np.ndarray
    relative_entropy_coherence: float


def _xlogx(x: float) -> float:
    return 0.0 if x < _LOG_FLOOR else x * math.log(x)


def _h_plus(x: float) -> float:
    return _xlogx((x + 1.0) / 2.0)


def _h_minus(x: float) -> float:
    return _xlogx((x - 1.0) / 2.0)


def _f(x: float, sign: float) -> float:
    value = (x + sign) ** 2 / (4.0 * x)
    return _xlogx(value)


def negativity_from_nu(nu_tilde: float) -> float:
    """max[0, (1 - nu) / (2 nu)]."""
    return max(0.0, (1.0 - nu_tilde) / (2.0 * nu_tilde))


def log_negativity_from_nu(nu_tilde: float) -> float:
    return max(0.0, -math.log(nu_tilde))


def entanglement_of_formation_from_nu(nu_tilde: float) -> float:
    """f_+ - f_- for nu < 1 (natural log); zero otherwise."""
    if nu_tilde >= 1.0:
        return 0.0
    return max(0.0, _f(nu_tilde, 1.0) - _f(nu_tilde, -1.0))


def smallest_ppt_eigenvalue(sigma, modes: Union[int, Sequence[int]]) -> float:
    """Smallest symplectic eigenvalue after transposing the given mode(s)."""
    transposed = partial_transpose(sigma, modes)
    return float(np.min(symplectic_eigenvalues(transposed)))


def _require_modes(sigma: CovarianceMatrix, n_modes: int) -> None:
    if sigma.n_modes != n_modes:
        raise DimensionError(f"Expected a {n_modes}-mode state, got {sigma.n_modes} modes")


def negativity(sigma) -> EntanglementReport:
    """
    Negativity, logarithmic negativity and entanglement of formation of a two-mode state.

    Entanglement of formation is exact only for symmetric states (equal
    single-mode determinants); the report flags other inputs.

    Raises:
        DimensionError: if sigma is not a two-mode state
        NonPhysicalStateError: if sigma + i*Omega is not positive semidefinite
    """
    state = require_physical(sigma, "two-mode state")
    _require_modes(state, 2)

    nu_tilde = smallest_ppt_eigenvalue(state, 1)

    det_a = float(np.linalg.det(partial_trace(state, 0).data).real)
    det_b = float(np.linalg.det(partial_trace(state, 1).data).real)
    symmetric = abs(det_a - det_b) <= SYMMETRY_TOLERANCE * max(1.0, abs(det_a), abs(det_b))

    eof = entanglement_of_formation_from_nu(nu_tilde)
    if not symmetric and eof > 0:
        logger.warning("Entanglement of formation evaluated on a non-symmetric state",
                       det_a=det_a, det_b=det_b, nu_tilde_minus=nu_tilde)

    return EntanglementReport(
        nu_tilde_minus=nu_tilde,
        negativity=negativity_from_nu(nu_tilde),
        log_negativity=log_negativity_from_nu(nu_tilde),
        entanglement_of_formation=eof,
        symmetric=symmetric,
    )


def reduced_nu_minus_analytic(e: CovarianceElements, pair: str) -> float:
    """Closed-form smallest PPT eigenvalue of a two-mode reduction."""
    i, j = resolve_pair(pair)
    key = "abc"[min(i, j)] + "abc"[max(i, j)]
    a, b, g = e.alpha, e.beta, e.gamma

    if key == "ab":
        return 0.5 * (a + b - math.sqrt((a - b) ** 2 + 4 * e.epsilon ** 2))
    if key == "bc":
        return 0.5 * (b + g - math.sqrt((b - g) ** 2 + 4 * e.zeta ** 2))
    return 0.5 * (math.sqrt((a + g) ** 2 - 4 * e.delta ** 2) - abs(a - g))


def nu_minus_ac_lower_bound(e: CovarianceElements) -> float:
    """
    2 sqrt(P^(ac)) with P the product of squared symplectic eigenvalues.

    Reported for comparison only: a thermal product already has
    nu_minus^(ac) = min(nu_a, nu_c), which can sit below this value.
    """
    return 2.0 * abs(e.alpha * e.gamma - e.delta ** 2)


def bipartition_negativities(sigma) -> Dict[str, float]:
    """Negativities of the three 1-vs-2 splits, keyed by the single mode."""
    state = require_physical(sigma, "three-mode state")
    _require_modes(state, 3)
    return {name: negativity_from_nu(smallest_ppt_eigenvalue(state, m)) for m, name in enumerate("abc")}


def tripartite_negativity(sigma) -> float:
    """Geometric mean of the three 1-vs-2 negativities."""
    factors = bipartition_negativities(sigma)
    product = factors["a"] * factors["b"] * factors["c"]
    return float(np.cbrt(product))


def number_expectation(sigma, mode: int) -> float:
    """<a_m^dagger a_m> = (sigma_mm - 1) / 2 for zero first moments."""
    state = sigma if isinstance(sigma, CovarianceMatrix) else CovarianceMatrix.from_array(sigma)
    if not 0 <= mode < state.n_modes:
        raise InvalidModeError(f"Mode index {mode} out of range for {state.n_modes} modes")
    return (float(state.data[mode, mode].real) - 1.0) / 2.0


def von_neumann_entropy(sigma, base: float = math.e) -> float:
    """Sum over symplectic eigenvalues of h_+(nu) - h_-(nu)."""
    state = require_physical(sigma)
    nus = symplectic_eigenvalues(state)
    entropy = sum(_h_plus(nu) - _h_minus(nu) for nu in nus)
    return max(0.0, entropy) / math.log(base)


def relative_entropy_of_coherence(sigma, base: float = 2.0) -> float:
    """
    Relative entropy to the product of the single-mode thermal reductions.

    The mean occupation of each mode is (sigma_kk - 1) / 2.
    """
    state = require_physical(sigma)
    reference = 0.0
    for k in range(state.n_modes):
        n_bar = max(0.0, number_expectation(state, k))
        reference += _xlogx(n_bar + 1.0) - _xlogx(n_bar)

    coherence = reference - von_neumann_entropy(state)
    return max(0.0, coherence) / math.log(base)


def coherence_matrix(sigma) -> np.ndarray:
    """G[m, n] = <a_m^dagger a_n> = (sigma_nm - delta_nm) / 2."""
    state = sigma if isinstance(sigma, CovarianceMatrix) else CovarianceMatrix.from_array(sigma)
    return 0.5 * (state.W.T - np.eye(state.n_modes))


def single_particle_density_matrix(sigma, m: int, n: int) -> np.ndarray:
    G = coherence_matrix(sigma)
    idx = np.array([m, n])
    return G[np.ix_(idx, idx)]


def first_order_coherence(sigma, m: int, n: int, base: float = 2.0) -> CoherenceReport:
    """
    <a_m^dagger a_n>, its normalised g1, the single-particle density matrix and
    the relative entropy of coherence of the (m, n) reduction.

    Raises:
        InvalidModeError: if m == n or either index is out of range
    """
    state = sigma if isinstance(sigma, CovarianceMatrix) else CovarianceMatrix.from_array(sigma)
    for mode in (m, n):
        if not 0 <= mode < state.n_modes:
            raise InvalidModeError(f"Mode index {mode} out of range for {state.n_modes} modes")
    if m == n:
        raise InvalidModeError("First-order coherence needs two distinct modes")

    spdm = single_particle_density_matrix(state, m, n)
    pair = complex(spdm[0, 1])
    n_m, n_n = float(spdm[0, 0].real), float(spdm[1, 1].real)
    g1 = pair / math.sqrt(n_m * n_n) if n_m > 0 and n_n > 0 else 0j

    reduced = partial_trace(state, (m, n))
    return CoherenceReport(
        pair_coherence=pair,
        g1=g1,
        spdm=spdm,
        relative_entropy_coherence=relative_entropy_of_coherence(reduced, base=base),
    )


def describe_entanglement(report: EntanglementReport, prefix: Optional[str] = None) -> Dict[str, float]:
    """Flatten a report into key/value pairs for CLI output."""
    tag = f"{prefix}_" if prefix else ""
    return {
        f"{tag}nu_tilde_minus": report.nu_tilde_minus,
        f"{tag}negativity": report.negativity,
        f"{tag}log_negativity": report.log_negativity,
        f"{tag}entanglement_of_formation": report.entanglement_of_formation,
        f"{tag}symmetric": report.symmetric,
    }

"""
Perfect homodyne detection of one mode of a Gaussian state.

Conditioning happens in the quadrature basis, where the measured mode is last
and the state splits as [[A, C], [C^T, B]]; the outcome value never enters the
conditional covariance.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import structlog
from pydantic import Field

from .core.config import config
from .core.errors import DimensionError, InvalidModeError, NumericalError
from .generation import CovarianceElements, ParameterModel
from .measures import SYMMETRY_TOLERANCE, number_expectation
from .symplectic import (
    CovarianceMatrix,
    QuadratureCovariance,
    from_quadrature,
    partial_trace,
    require_physical,
    to_quadrature_basis,
)

logger = structlog.get_logger(__name__)


class HomodyneAngle(ParameterModel):
    """Measured quadrature x_theta = cos(theta) q + sin(theta) p."""
    theta: float = Field(default=0.0, description="Quadrature angle in radians")


@dataclass(frozen=True, eq=False)
class ConditionalState:
    sigma_out: CovarianceMatrix
    theta: float
    measured: int


@dataclass(frozen=True)
class LocalInvariants:
    a2: float
    b2: float
    c_plus_c_minus: float
    nu_tilde_minus: float
    symmetric: bool
    entangled_condition: Optional[bool] = None


def homodyne_projector(theta: float) -> np.ndarray:
    """Rank-one projector onto (cos theta, sin theta)."""
    direction = np.array([math.cos(theta), math.sin(theta)])
    return np.outer(direction, direction)


def _pseudoinverse(matrix: np.ndarray, rcond: float) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric matrix by eigendecomposition."""
    values, vectors = np.linalg.eigh(matrix)
    cutoff = rcond * max(float(np.max(np.abs(values))), 0.0)
    keep = np.abs(values) > cutoff
    if not np.any(keep):
        return np.zeros_like(matrix)
    return (vectors[:, keep] / values[keep]) @ vectors[:, keep].T


def schur_complement(
    A: np.ndarray,
    B: np.ndarray,
    C: np.ndarray,
    projector: np.ndarray,
    rcond: Optional[float] = None,
) -> np.ndarray:
    """A - C (pi B pi)^+ C^T."""
    if B.shape != projector.shape or C.shape != (A.shape[0], B.shape[0]):
        raise DimensionError(f"Incompatible blocks A{A.shape}, B{B.shape}, C{C.shape}, pi{projector.shape}")
    if rcond is None:
        rcond = config.numerics.pinv_rcond
    inverse = _pseudoinverse(projector @ B @ projector, rcond)
    result = A - C @ inverse @ C.T
    return 0.5 * (result + result.T)


def homodyne_condition(
    sigma,
    measured: int = 1,
    theta: Union[float, HomodyneAngle] = 0.0,
) -> ConditionalState:
    """
    Condition the remaining modes on a perfect homodyne measurement of one mode.

    Args:
        sigma: Physical covariance matrix with at least two modes
        measured: Index of the measured mode (the idler b by default)
        theta: Quadrature angle

    Returns:
        ConditionalState on the unmeasured modes, in their original order

    Raises:
        NonPhysicalStateError: if the input state is not physical
        InvalidModeError: if the measured index is out of range
    """
    state = require_physical(sigma, "state before homodyne detection")
    if state.n_modes < 2:
        raise DimensionError("Homodyne conditioning needs at least two modes")
    if not 0 <= measured < state.n_modes:
        raise InvalidModeError(f"Measured mode {measured} out of range for {state.n_modes} modes")

    angle = theta.theta if isinstance(theta, HomodyneAngle) else float(theta)
    quadrature = to_quadrature_basis(state, measured=measured)

    data = quadrature.data
    A, B, C = data[:-2, :-2], data[-2:, -2:], data[:-2, -2:]
    out = schur_complement(A, B, C, homodyne_projector(angle))

    remaining = state.n_modes - 1
    sigma_out = from_quadrature(QuadratureCovariance(remaining, out, tuple(range(remaining))))
    if not np.all(np.isfinite(sigma_out.data)):
        raise NumericalError("Conditional state has non-finite entries")

    logger.debug("Homodyne conditioning", measured=measured, theta=angle,
                 trace_before=float(np.trace(A)), trace_after=float(np.trace(out)))
    return ConditionalState(sigma_out=sigma_out, theta=angle, measured=measured)


def conditional_elements(e: CovarianceElements, theta: float = 0.0) -> CovarianceMatrix:
    """
    Closed-form conditional state of (a, c) after measuring x_theta on b.

    With q = a + a^dagger the V block carries exp(-2i theta) above the diagonal.
    """
    a, b, g = e.alpha, e.beta, e.gamma
    d, eps, z = e.delta, e.epsilon, e.zeta

    W = np.array(
        [
            [a - eps ** 2 / (2 * b), d - eps * z / (2 * b)],
            [d - eps * z / (2 * b), g - z ** 2 / (2 * b)],
        ],
        dtype=complex,
    )
    V = -cmath.exp(-2j * theta) / (2 * b) * np.array([[eps ** 2, eps * z], [eps * z, z ** 2]], dtype=complex)
    return CovarianceMatrix(2, np.block([[W, V], [V.conj(), W.conj()]]))


def nu_minus_after_homodyne(e: CovarianceElements) -> float:
    """Smallest PPT eigenvalue of the conditional (a, c) state, in closed form."""
    a, b, g = e.alpha, e.beta, e.gamma
    d, eps, z = e.delta, e.epsilon, e.zeta

    det_ac = a * g - d ** 2
    radicand = (
        -4 * b * det_ac * (a * b * g - b * d ** 2 - g * eps ** 2 + 2 * d * eps * z - a * z ** 2)
        + (a ** 2 * b + b * (g ** 2 - 2 * d ** 2) - a * eps ** 2 + z * (2 * d * eps - g * z)) ** 2
    )
    nu_sq = (
        0.5 * (a ** 2 + g ** 2 - 2 * d ** 2)
        - (a * eps ** 2 - 2 * d * eps * z + g * z ** 2) / (2 * b)
        - math.sqrt(max(radicand, 0.0)) / (2 * b)
    )
    return math.sqrt(max(nu_sq, 0.0))


def _x_y(r_ab: float, r_bc: float) -> Tuple[float, float]:
    return math.sinh(r_ab) ** 2, math.sinh(r_bc) ** 2


def homodyne_condition_equal_frequency(nu: float, r_ab: float, r_bc: float) -> bool:
    """(1 + x) x y / D > ((nu^2 - 1) / (4 nu))^2 with x = sh_ab^2, y = sh_bc^2."""
    x, y = _x_y(r_ab, r_bc)
    D = 1 + 2 * x + 2 * y + 2 * x * y
    return (1 + x) * x * y / D > ((nu ** 2 - 1) / (4 * nu)) ** 2


def nu_minus_after_homodyne_equal_frequency(nu: float, r_ab: float, r_bc: float) -> float:
    """Closed form for nu_a = nu_b = nu_c = nu."""
    x, y = _x_y(r_ab, r_bc)
    D = 1 + 2 * x + 2 * y + 2 * x * y
    Q = 1 + 3 * x + 2 * y + 8 * x * y + 2 * x ** 2 + 10 * x ** 2 * y + 4 * x ** 3 * y
    numerator = 1 + 2 * x + 2 * y + 10 * x * y + 8 * x ** 2 * y - 4 * math.sqrt(x * y) * math.sqrt(Q)
    return nu * math.sqrt(max(numerator / D, 0.0))


def local_invariants(
    cs: ConditionalState,
    nu: Optional[float] = None,
    r_ab: Optional[float] = None,
    r_bc: Optional[float] = None,
) -> LocalInvariants:
    """
    Local symplectic invariants of a two-mode conditional state.

    a^2 and b^2 are the single-mode determinants and c_+ c_- the determinant of
    the correlation block; the smallest PPT eigenvalue follows from
    2 nu^2 = D - sqrt(D^2 - 4 det sigma) with D = a^2 + b^2 - 2 c_+ c_-.
    """
    sigma = cs.sigma_out
    if sigma.n_modes != 2:
        raise DimensionError(f"Local invariants need a two-mode state, got {sigma.n_modes} modes")

    a2 = float(np.linalg.det(partial_trace(sigma, 0).data).real)
    b2 = float(np.linalg.det(partial_trace(sigma, 1).data).real)
    correlation = sigma.data[np.ix_([0, 2], [1, 3])]
    c_plus_c_minus = float(np.linalg.det(correlation).real)
    det_sigma = float(np.linalg.det(sigma.data).real)

    delta_tilde = a2 + b2 - 2 * c_plus_c_minus
    nu_sq = 0.5 * (delta_tilde - math.sqrt(max(delta_tilde ** 2 - 4 * det_sigma, 0.0)))
    symmetric = abs(a2 - b2) < SYMMETRY_TOLERANCE * max(1.0, abs(a2), abs(b2))

    condition = None
    if nu is not None and r_ab is not None and r_bc is not None:
        condition = homodyne_condition_equal_frequency(nu, r_ab, r_bc)

    return LocalInvariants(
        a2=a2,
        b2=b2,
        c_plus_c_minus=c_plus_c_minus,
        nu_tilde_minus=math.sqrt(max(nu_sq, 0.0)),
        symmetric=symmetric,
        entangled_condition=condition,
    )


def conditional_photon_numbers(cs: ConditionalState) -> Tuple[float, ...]:
    """Mean occupations of the unmeasured modes."""
    return tuple(number_expectation(cs.sigma_out, m) for m in range(cs.sigma_out.n_modes))

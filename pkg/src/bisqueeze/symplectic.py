"""
Covariance-matrix machinery for N-mode Gaussian states.

Mode operators are ordered as (a_1 ... a_N, a_1^dagger ... a_N^dagger) and the
covariance matrix sigma_nm = <{X_n, X_m^dagger}> is normalised so that the
vacuum is the identity. Symplectic transforms act as sigma -> S^dagger sigma S.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .core.config import config
from .core.errors import (
    DimensionError,
    EigenvalueError,
    InvalidModeError,
    NonPhysicalStateError,
    ValidationError,
)

logger = structlog.get_logger(__name__)

ModeSelection = Union[int, Iterable[int]]


def _readonly(array: np.ndarray, dtype=complex) -> np.ndarray:
    data = np.array(array, dtype=dtype, copy=True)
    data.setflags(write=False)
    return data


def _modes_from_shape(data: np.ndarray) -> int:
    if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
        raise DimensionError(f"Expected a square 2N x 2N matrix, got shape {data.shape}")
    return data.shape[0] // 2


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Hermitian 2N x 2N second-moment matrix in the complex basis."""

    n_modes: int
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if self.n_modes < 1 or data.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise DimensionError(
                f"Covariance matrix for {self.n_modes} modes must be {2 * self.n_modes}x{2 * self.n_modes}, "
                f"got {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise ValidationError("Covariance matrix contains non-finite entries")

        scale = max(1.0, float(np.max(np.abs(data))))
        deviation = float(np.max(np.abs(data - data.conj().T)))
        if deviation > config.numerics.hermitian_tolerance * scale:
            raise ValidationError(f"Covariance matrix is not Hermitian (deviation {deviation:.3e})")

        object.__setattr__(self, "data", _readonly(data))

    @classmethod
    def from_array(cls, array) -> "CovarianceMatrix":
        data = np.asarray(array, dtype=complex)
        return cls(_modes_from_shape(data), data)

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceMatrix":
        return cls(n_modes, np.eye(2 * n_modes))

    @property
    def W(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, :n]

    @property
    def V(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, n:]

    def has_block_structure(self, tolerance: Optional[float] = None) -> bool:
        """True when sigma = [[W, V], [V*, W*]] with W Hermitian and V symmetric."""
        n = self.n_modes
        tol = tolerance
        if tol is None:
            tol = config.numerics.hermitian_tolerance * max(1.0, float(np.max(np.abs(self.data))))
        W, V = self.W, self.V
        lower_left = self.data[n:, :n]
        lower_right = self.data[n:, n:]
        return bool(
            np.allclose(W, W.conj().T, atol=tol, rtol=0)
            and np.allclose(V, V.T, atol=tol, rtol=0)
            and np.allclose(lower_left, V.conj(), atol=tol, rtol=0)
            and np.allclose(lower_right, W.conj(), atol=tol, rtol=0)
        )


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """2N x 2N matrix [[alpha, beta], [beta*, alpha*]] preserving Omega."""

    n_modes: int
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if self.n_modes < 1 or data.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise DimensionError(f"Symplectic transform for {self.n_modes} modes has shape {data.shape}")
        object.__setattr__(self, "data", _readonly(data))

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticTransform":
        return cls(n_modes, np.eye(2 * n_modes))

    @classmethod
    def from_array(cls, array) -> "SymplecticTransform":
        data = np.asarray(array, dtype=complex)
        return cls(_modes_from_shape(data), data)

    @property
    def alpha(self) -> np.ndarray:
        return self.data[: self.n_modes, : self.n_modes]

    @property
    def beta(self) -> np.ndarray:
        return self.data[: self.n_modes, self.n_modes :]

    def compose(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Matrix product self . other."""
        if other.n_modes != self.n_modes:
            raise DimensionError(f"Cannot compose {self.n_modes}-mode and {other.n_modes}-mode transforms")
        return SymplecticTransform(self.n_modes, self.data @ other.data)

    def inverse(self) -> "SymplecticTransform":
        # S^-1 = -Omega S^dagger Omega for symplectic S
        omega = symplectic_form(self.n_modes)
        return SymplecticTransform(self.n_modes, -omega @ self.data.conj().T @ omega)

    def check(self, tolerance: Optional[float] = None) -> None:
        """Raise ValidationError unless every symplectic invariant holds."""
        tol = config.numerics.symplectic_tolerance if tolerance is None else tolerance
        if not is_symplectic(self, tol):
            raise ValidationError("Transform does not preserve the symplectic form")

        det = np.linalg.det(self.data)
        if abs(det - 1.0) > tol:
            raise ValidationError(f"Symplectic transform has determinant {det:.12g}, expected 1")

        alpha, beta = self.alpha, self.beta
        identity = np.eye(self.n_modes)
        if np.max(np.abs(alpha @ alpha.conj().T - beta @ beta.conj().T - identity)) > tol:
            raise ValidationError("Bogoliubov identity alpha alpha^dagger - beta beta^dagger = 1 violated")
        if np.max(np.abs(alpha @ beta.T - beta @ alpha.T)) > tol:
            raise ValidationError("Bogoliubov identity alpha beta^T - beta alpha^T = 0 violated")


@dataclass(frozen=True, eq=False)
class QuadratureCovariance:
    """Real symmetric covariance K sigma K^dagger in interleaved (q, p) ordering."""

    n_modes: int
    data: np.ndarray
    order: Tuple[int, ...]

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise DimensionError(f"Quadrature covariance for {self.n_modes} modes has shape {data.shape}")
        if sorted(self.order) != list(range(self.n_modes)):
            raise InvalidModeError(f"Mode order {self.order} is not a permutation of {self.n_modes} modes")
        object.__setattr__(self, "data", _readonly(data, dtype=float))
        object.__setattr__(self, "order", tuple(int(m) for m in self.order))


@dataclass(frozen=True)
class PhysicalityReport:
    """Outcome of the sigma + i*Omega >= 0 test."""

    is_physical: bool
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.is_physical


def _as_matrix(value) -> np.ndarray:
    if isinstance(value, (CovarianceMatrix, SymplecticTransform, QuadratureCovariance)):
        return value.data
    return np.asarray(value, dtype=complex)


def _as_covariance(value) -> CovarianceMatrix:
    if isinstance(value, CovarianceMatrix):
        return value
    return CovarianceMatrix.from_array(value)


def _normalise_modes(modes: ModeSelection, n_modes: int, allow_empty: bool = False) -> Tuple[int, ...]:
    selection = (modes,) if isinstance(modes, (int, np.integer)) else tuple(modes)
    if not selection and not allow_empty:
        raise InvalidModeError("Mode selection is empty")
    if len(set(selection)) != len(selection):
        raise InvalidModeError(f"Mode selection {selection} contains duplicates")
    for mode in selection:
        if not 0 <= int(mode) < n_modes:
            raise InvalidModeError(f"Mode index {mode} out of range for {n_modes} modes")
    return tuple(int(m) for m in selection)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Omega such that i*Omega = diag(1_N, -1_N)."""
    if n_modes < 1:
        raise DimensionError(f"Number of modes must be positive, got {n_modes}")
    return -1j * np.diag(np.concatenate([np.ones(n_modes), -np.ones(n_modes)]))


def _sign_matrix(n_modes: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(n_modes), -np.ones(n_modes)]))


def is_symplectic(transform, tolerance: Optional[float] = None) -> bool:
    """True when S Omega S^dagger = Omega entrywise within tolerance."""
    S = _as_matrix(transform)
    n = _modes_from_shape(S)
    omega = symplectic_form(n)
    tol = config.numerics.symplectic_tolerance if tolerance is None else tolerance
    return bool(np.max(np.abs(S @ omega @ S.conj().T - omega)) < tol)


def apply_transform(sigma, transform) -> CovarianceMatrix:
    """Heisenberg-picture update sigma_f = S^dagger sigma S."""
    data = _as_matrix(sigma)
    S = _as_matrix(transform)
    if data.shape != S.shape:
        raise DimensionError(f"State shape {data.shape} does not match transform shape {S.shape}")

    result = S.conj().T @ data @ S
    # Symmetrise away matmul roundoff so the Hermiticity check stays entrywise tight
    result = 0.5 * (result + result.conj().T)
    return CovarianceMatrix(data.shape[0] // 2, result)


def symplectic_eigenvalues(sigma, pairing_tolerance: Optional[float] = None) -> np.ndarray:
    """
    Symplectic spectrum of sigma, in descending order.

    The eigenvalues of i*Omega*sigma come in +/- pairs; both members are matched
    and averaged. For positive-definite sigma the spectrum is taken from the
    Hermitian matrix L^dagger (i*Omega) L with sigma = L L^dagger.

    Raises:
        EigenvalueError: if the solver fails or a pair does not match
    """
    data = _as_matrix(sigma)
    n = _modes_from_shape(data)
    signs = _sign_matrix(n)

    try:
        lower = np.linalg.cholesky(data)
        spectrum = np.linalg.eigvalsh(lower.conj().T @ signs @ lower)
        negative = -spectrum[:n]
        positive = spectrum[n:][::-1]
    except np.linalg.LinAlgError:
        logger.debug("Covariance not positive definite, using general eigen-solver", n_modes=n)
        try:
            values = np.linalg.eigvals(signs @ data)
        except np.linalg.LinAlgError as e:
            raise EigenvalueError(f"Eigen-solver failed: {e}") from e
        magnitudes = np.sort(np.abs(values))[::-1]
        negative = magnitudes[0::2]
        positive = magnitudes[1::2]

    tol = config.numerics.pairing_tolerance if pairing_tolerance is None else pairing_tolerance
    mismatch = np.abs(positive - negative)
    scale = np.maximum(1.0, np.abs(positive))
    if np.any(mismatch > tol * scale):
        raise EigenvalueError(f"Symplectic eigenvalues are not paired (mismatch {float(np.max(mismatch)):.3e})")

    return 0.5 * (positive + negative)


def is_physical(sigma, tolerance: Optional[float] = None) -> PhysicalityReport:
    """Check sigma + i*Omega >= 0 and report the smallest eigenvalue."""
    data = _as_matrix(sigma)
    n = _modes_from_shape(data)

    tol = config.numerics.physicality_tolerance if tolerance is None else tolerance
    norm = float(np.max(np.sum(np.abs(data), axis=1)))
    if norm > np.cosh(2.0 * config.numerics.large_squeezing):
        tol *= norm

    hermitian = 0.5 * (data + data.conj().T)
    min_eigenvalue = float(np.linalg.eigvalsh(hermitian + _sign_matrix(n))[0])
    return PhysicalityReport(min_eigenvalue >= -tol, min_eigenvalue)


def require_physical(sigma, what: str = "state") -> CovarianceMatrix:
    """Return sigma as a CovarianceMatrix or raise NonPhysicalStateError."""
    state = _as_covariance(sigma)
    report = is_physical(state)
    if not report:
        raise NonPhysicalStateError(
            f"Non-physical {what}: min eigenvalue of sigma + i*Omega is {report.min_eigenvalue:.3e}",
            min_eigenvalue=report.min_eigenvalue,
        )
    return state


def mode_indices(modes: Sequence[int], n_modes: int) -> np.ndarray:
    """Row/column indices of the annihilation then creation operators of the modes."""
    return np.array(list(modes) + [m + n_modes for m in modes], dtype=int)


def partial_trace(sigma, keep: ModeSelection) -> CovarianceMatrix:
    """Reduced state on the kept modes, in the order given."""
    state = _as_covariance(sigma)
    kept = _normalise_modes(keep, state.n_modes)
    idx = mode_indices(kept, state.n_modes)
    return CovarianceMatrix(len(kept), state.data[np.ix_(idx, idx)])


def partial_transpose(sigma, transposed_mode: ModeSelection) -> CovarianceMatrix:
    """Swap the annihilation and creation rows/columns of the transposed mode(s)."""
    state = _as_covariance(sigma)
    n = state.n_modes
    modes = _normalise_modes(transposed_mode, n)

    perm = np.arange(2 * n)
    for m in modes:
        perm[m], perm[m + n] = m + n, m
    return CovarianceMatrix(n, state.data[np.ix_(perm, perm)])


def quadrature_order(n_modes: int, measured: Optional[int] = None) -> Tuple[int, ...]:
    if measured is None:
        return tuple(range(n_modes))
    (measured,) = _normalise_modes(measured, n_modes)
    return tuple(m for m in range(n_modes) if m != measured) + (measured,)


def quadrature_matrix(n_modes: int, order: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Basis change K from (a..., a^dagger...) to interleaved (q_m, p_m) in the given mode order.

    q = a + a^dagger and p = -i (a - a^dagger), so K K^dagger = 2 * identity.
    """
    order = tuple(range(n_modes)) if order is None else tuple(order)
    if sorted(order) != list(range(n_modes)):
        raise InvalidModeError(f"Mode order {order} is not a permutation of {n_modes} modes")

    K = np.zeros((2 * n_modes, 2 * n_modes), dtype=complex)
    for slot, mode in enumerate(order):
        K[2 * slot, mode] = 1.0
        K[2 * slot, mode + n_modes] = 1.0
        K[2 * slot + 1, mode] = -1j
        K[2 * slot + 1, mode + n_modes] = 1j
    return K


def to_quadrature_basis(sigma, measured: Optional[int] = None) -> QuadratureCovariance:
    """K sigma K^dagger with the measured mode (if any) placed last."""
    state = _as_covariance(sigma)
    order = quadrature_order(state.n_modes, measured)
    K = quadrature_matrix(state.n_modes, order)
    transformed = K @ state.data @ K.conj().T

    scale = max(1.0, float(np.max(np.abs(transformed))))
    if np.max(np.abs(transformed.imag)) > config.numerics.hermitian_tolerance * scale * 10:
        raise ValidationError("Quadrature covariance is not real; input lacks the [[W, V], [V*, W*]] structure")

    real = transformed.real
    return QuadratureCovariance(state.n_modes, 0.5 * (real + real.T), order)


def from_quadrature(quadrature: QuadratureCovariance) -> CovarianceMatrix:
    """Inverse of to_quadrature_basis using K^-1 = K^dagger / 2."""
    K = quadrature_matrix(quadrature.n_modes, quadrature.order)
    return CovarianceMatrix(quadrature.n_modes, K.conj().T @ quadrature.data @ K / 4.0)


def purity(sigma) -> float:
    """
    Product of squared symplectic eigenvalues.

    Equals 1 for pure states and grows with mixedness (the inverse square of the
    trace-of-rho-squared convention).
    """
    state = require_physical(sigma)
    nus = symplectic_eigenvalues(state)
    return float(np.prod(nus ** 2))


_HEADER = re.compile(r"^n_modes=(\d+)\s+basis=(complex|quadrature)(?:\s+order=([\d,]+))?\s*$")


def _format_entry(value: complex) -> str:
    return f"{value.real:.12g}{value.imag:+.12g}j"


def save_covariance(path: Union[str, Path], sigma: Union[CovarianceMatrix, QuadratureCovariance]) -> None:
    """
    Write a state file: a header line, then 2N rows of 2N 're+imj' entries.

    Quadrature covariances record their mode order when it is not the identity.
    """
    if isinstance(sigma, QuadratureCovariance):
        header = f"n_modes={sigma.n_modes} basis=quadrature"
        if sigma.order != tuple(range(sigma.n_modes)):
            header += " order=" + ",".join(str(m) for m in sigma.order)
    else:
        sigma = _as_covariance(sigma)
        header = f"n_modes={sigma.n_modes} basis=complex"

    rows = [" ".join(_format_entry(complex(v)) for v in row) for row in sigma.data]
    Path(path).write_text("\n".join([header] + rows) + "\n")
    logger.debug("Saved covariance matrix", path=str(path), n_modes=sigma.n_modes)


def load_covariance(path: Union[str, Path]) -> Union[CovarianceMatrix, QuadratureCovariance]:
    """
    Read a state file written by save_covariance.

    Raises:
        ValidationError: naming the offending line on any format error
    """
    try:
        lines = [line for line in Path(path).read_text().splitlines()]
    except OSError as e:
        raise ValidationError(f"Cannot read state file {path}: {e}") from e
    if not lines:
        raise ValidationError(f"{path}: empty state file")

    match = _HEADER.match(lines[0].strip())
    if not match:
        raise ValidationError(f"{path}, line 1: expected 'n_modes=<N> basis=<complex|quadrature>'")
    n_modes, basis, order = int(match.group(1)), match.group(2), match.group(3)
    size = 2 * n_modes

    body = [(number, line) for number, line in enumerate(lines[1:], start=2) if line.strip()]
    if len(body) != size:
        raise ValidationError(f"{path}: expected {size} matrix rows, found {len(body)}")

    data = np.zeros((size, size), dtype=complex)
    for row, (number, line) in enumerate(body):
        tokens = line.split()
        if len(tokens) != size:
            raise ValidationError(f"{path}, line {number}: expected {size} entries, found {len(tokens)}")
        try:
            data[row] = [complex(token) for token in tokens]
        except ValueError as e:
            raise ValidationError(f"{path}, line {number}: {e}") from e

    if basis == "complex":
        return CovarianceMatrix(n_modes, data)

    if np.max(np.abs(data.imag)) > 0:
        raise ValidationError(f"{path}: quadrature covariance must be real")
    mode_order = tuple(int(m) for m in order.split(",")) if order else tuple(range(n_modes))
    return QuadratureCovariance(n_modes, data.real, mode_order)

"""
Bi-squeezed tripartite states: thermal inputs, decoupling of the two
simultaneous squeezers, the symplectic factors and the resulting covariance
matrix, both as a matrix product and in closed form.

Mode indices: 0 = a (signal), 1 = b (shared idler), 2 = c (signal).
"""

import math
from typing import Dict, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError

from .core.cache import computation_cache
from .core.errors import InvalidModeError, InvalidParameterError, ValidationError
from .symplectic import CovarianceMatrix, SymplecticTransform, apply_transform

logger = structlog.get_logger(__name__)

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

MODE_NAMES = "abc"

Pair = Union[str, Tuple[int, int]]

# Entries of the 6x6 bi-squeezed state that vanish identically
ZERO_PATTERN = ((0, 1), (0, 3), (0, 5), (1, 2), (2, 3), (2, 5))


class ParameterModel(BaseModel):
    """Frozen pydantic model whose validation failures surface as InvalidParameterError."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    def __init__(self, **data):
        try:
            super().__init__(**data)
        except PydanticValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first.get("loc", ()))
            raise InvalidParameterError(f"{type(self).__name__}.{field}: {first.get('msg', 'invalid value')}") from e


class PumpParameters(ParameterModel):
    """Dimensionless squeezing strengths of the two pumps."""
    R_ab: float = Field(description="Pump strength coupling modes a and b")
    R_bc: float = Field(description="Pump strength coupling modes b and c")


class DecoupledParameters(ParameterModel):
    """Factorised form exp(M) = S_ac(theta_ac) S_ab(r_ab) S_bc(r_bc)."""
    r_ab: float
    r_bc: float
    theta_ac: float
    rho: float = Field(ge=0)
    phi: float = Field(ge=-math.pi, le=math.pi)


class ThermalSpec(ParameterModel):
    """Angular frequencies (rad/s) and temperature (K) of the thermal input."""
    omega_a: float = Field(gt=0)
    omega_b: float = Field(gt=0)
    omega_c: float = Field(gt=0)
    temperature: float = Field(default=0.0, ge=0)

    @classmethod
    def from_hertz(cls, f_a: float, f_b: float, f_c: float, temperature: float) -> "ThermalSpec":
        return cls(
            omega_a=2 * math.pi * f_a,
            omega_b=2 * math.pi * f_b,
            omega_c=2 * math.pi * f_c,
            temperature=temperature,
        )

    @property
    def omegas(self) -> Tuple[float, float, float]:
        return (self.omega_a, self.omega_b, self.omega_c)


class CovarianceElements(ParameterModel):
    """The six independent entries of a bi-squeezed state."""
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float
    zeta: float

    def to_covariance(self) -> CovarianceMatrix:
        a, b, g = self.alpha, self.beta, self.gamma
        d, e, z = self.delta, self.epsilon, self.zeta
        data = np.array(
            [
                [a, 0, d, 0, e, 0],
                [0, b, 0, e, 0, z],
                [d, 0, g, 0, z, 0],
                [0, e, 0, a, 0, d],
                [e, 0, z, 0, b, 0],
                [0, z, 0, d, 0, g],
            ],
            dtype=float,
        )
        return CovarianceMatrix(3, data)


def resolve_pair(pair: Pair, n_modes: int = 3) -> Tuple[int, int]:
    """Map 'ab', 'bc', 'ac' (or an index tuple) to distinct mode indices."""
    if isinstance(pair, str):
        if len(pair) != 2 or any(ch not in MODE_NAMES for ch in pair):
            raise InvalidModeError(f"Unknown mode pair '{pair}'")
        i, j = MODE_NAMES.index(pair[0]), MODE_NAMES.index(pair[1])
    else:
        try:
            i, j = (int(m) for m in pair)
        except (TypeError, ValueError) as e:
            raise InvalidModeError(f"Mode pair must have two indices, got {pair!r}") from e

    if i == j:
        raise InvalidModeError(f"Mode pair {pair!r} must name two distinct modes")
    for m in (i, j):
        if not 0 <= m < n_modes:
            raise InvalidModeError(f"Mode index {m} out of range for {n_modes} modes")
    return i, j


def squeezing_generator(pair: Pair, n_modes: int = 3) -> np.ndarray:
    """d/dr of two_mode_squeezer(pair, r) at r = 0."""
    i, j = resolve_pair(pair, n_modes)
    K = np.zeros((2 * n_modes, 2 * n_modes))
    for row, col in ((i, j + n_modes), (j + n_modes, i), (j, i + n_modes), (i + n_modes, j)):
        K[row, col] = 1.0
    return K


def beam_splitter_generator(pair: Pair, n_modes: int = 3) -> np.ndarray:
    """d/dtheta of beam_splitter(pair, theta) at theta = 0."""
    i, j = resolve_pair(pair, n_modes)
    J = np.zeros((2 * n_modes, 2 * n_modes))
    for offset in (0, n_modes):
        J[i + offset, j + offset] = 1.0
        J[j + offset, i + offset] = -1.0
    return J


def two_mode_squeezer(pair: Pair, r: float, n_modes: int = 3) -> SymplecticTransform:
    """
    Two-mode squeezer: cosh r on the pair's diagonal, sinh r coupling each mode
    to its partner's conjugate. K^3 = K, so exp(rK) = 1 + sinh(r) K + (cosh(r) - 1) K^2.
    """
    K = squeezing_generator(pair, n_modes)
    S = np.eye(2 * n_modes) + math.sinh(r) * K + (math.cosh(r) - 1.0) * (K @ K)
    return SymplecticTransform(n_modes, S)


def beam_splitter(pair: Pair, theta: float, n_modes: int = 3) -> SymplecticTransform:
    """Rotation by theta mixing the pair identically in both operator blocks."""
    J = beam_splitter_generator(pair, n_modes)
    S = np.eye(2 * n_modes) + math.sin(theta) * J + (1.0 - math.cos(theta)) * (J @ J)
    return SymplecticTransform(n_modes, S)


def beam_splitter_ac(theta: float) -> SymplecticTransform:
    return beam_splitter("ac", theta)


def generators() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(K_ab, K_bc, J_ac); they close as [K_ab, K_bc] = J_ac."""
    return squeezing_generator("ab"), squeezing_generator("bc"), beam_splitter_generator("ac")


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def combined_generator(p: PumpParameters) -> np.ndarray:
    """M = R_ab K_ab + R_bc K_bc; expm(M) represents the double-pump evolution."""
    K_ab, K_bc, _ = generators()
    return p.R_ab * K_ab + p.R_bc * K_bc


@computation_cache.cached("decouple")
def decouple(p: PumpParameters) -> DecoupledParameters:
    """
    Closed-form factorisation of the double pump into a beam splitter and two squeezers.

    phi uses the two-argument arctangent (phi = 0 at the origin), so negative
    pumps stay on a continuous branch.
    """
    rho = math.hypot(p.R_ab, p.R_bc)
    phi = math.atan2(p.R_bc, p.R_ab)

    # Single pump: the factorisation is trivial
    if p.R_bc == 0:
        return DecoupledParameters(r_ab=p.R_ab, r_bc=0.0, theta_ac=0.0, rho=rho, phi=phi)
    if p.R_ab == 0:
        return DecoupledParameters(r_ab=0.0, r_bc=p.R_bc, theta_ac=0.0, rho=rho, phi=phi)

    r_ab = math.asinh(math.cos(phi) * math.sinh(rho))
    # Equivalent to atanh(sin(phi) tanh(rho)), without the singularity at tanh -> 1
    r_bc = math.asinh(math.sin(phi) * math.sinh(rho) / math.cosh(r_ab))
    theta_ac = math.atan2(math.sin(phi), math.cos(phi) * math.cosh(rho)) - phi

    logger.debug("Decoupled pumps", R_ab=p.R_ab, R_bc=p.R_bc, r_ab=r_ab, r_bc=r_bc, theta_ac=theta_ac)
    return DecoupledParameters(r_ab=r_ab, r_bc=r_bc, theta_ac=theta_ac, rho=rho, phi=phi)


def bisqueezing_transform(d: DecoupledParameters) -> SymplecticTransform:
    """S = S_ac(theta_ac) S_ab(r_ab) S_bc(r_bc)."""
    return beam_splitter_ac(d.theta_ac).compose(two_mode_squeezer("ab", d.r_ab)).compose(
        two_mode_squeezer("bc", d.r_bc)
    )


def dimensionless_frequencies(spec: ThermalSpec) -> Tuple[float, float, float]:
    """Omega_m = hbar omega_m / (k_B T); infinite at T = 0."""
    if spec.temperature == 0:
        return (math.inf, math.inf, math.inf)
    return tuple(HBAR * omega / (K_B * spec.temperature) for omega in spec.omegas)


def occupation_from_omega(omega: float) -> float:
    """coth(Omega / 2), written to stay finite for large Omega."""
    if omega <= 0:
        raise InvalidParameterError(f"Dimensionless frequency must be positive, got {omega}")
    if math.isinf(omega):
        return 1.0
    return 1.0 + 2.0 * math.exp(-omega) / -math.expm1(-omega)


def thermal_occupations(spec: ThermalSpec) -> Tuple[float, float, float]:
    return tuple(occupation_from_omega(omega) for omega in dimensionless_frequencies(spec))


def thermal_covariance(nus) -> CovarianceMatrix:
    nus = tuple(float(nu) for nu in nus)
    if any(not math.isfinite(nu) or nu < 1.0 for nu in nus):
        raise InvalidParameterError(f"Thermal symplectic eigenvalues must be finite and >= 1, got {nus}")
    return CovarianceMatrix(len(nus), np.diag(nus + nus))


def thermal_state(spec: ThermalSpec) -> CovarianceMatrix:
    """diag(nu_a, nu_b, nu_c, nu_a, nu_b, nu_c)."""
    return thermal_covariance(thermal_occupations(spec))


def state_from_decoupled(d: DecoupledParameters, nus) -> CovarianceMatrix:
    return apply_transform(thermal_covariance(nus), bisqueezing_transform(d))


def bisqueezed_state(p: PumpParameters, spec: ThermalSpec) -> CovarianceMatrix:
    """S^dagger sigma_th S for the decoupled double pump."""
    return state_from_decoupled(decouple(p), thermal_occupations(spec))


def covariance_elements(d: DecoupledParameters, nus) -> CovarianceElements:
    """
    Closed forms of (alpha ... zeta) for arbitrary thermal inputs.

    The beam splitter mixes the a and c occupations first; every term carrying
    (nu_c - nu_a) vanishes for equal occupations.
    """
    nu_a, nu_b, nu_c = (float(nu) for nu in nus)
    if min(nu_a, nu_b, nu_c) < 1.0:
        raise InvalidParameterError(f"Thermal symplectic eigenvalues must be >= 1, got {(nu_a, nu_b, nu_c)}")

    ch_ab, sh_ab = math.cosh(d.r_ab), math.sinh(d.r_ab)
    ch_bc, sh_bc = math.cosh(d.r_bc), math.sinh(d.r_bc)
    diff = nu_c - nu_a
    s2 = math.sin(d.theta_ac) ** 2
    sin2 = math.sin(2 * d.theta_ac)
    cos2 = math.cos(2 * d.theta_ac)
    sinh2_ab = math.sinh(2 * d.r_ab)
    sinh2_bc = math.sinh(2 * d.r_bc)

    # a and c occupations after the beam splitter
    mixed_a = nu_a + diff * s2
    mixed_c = nu_c - diff * s2

    alpha = mixed_a * ch_ab ** 2 + nu_b * sh_ab ** 2
    beta = (
        nu_b * ch_ab ** 2 * ch_bc ** 2
        + mixed_a * sh_ab ** 2 * ch_bc ** 2
        - 0.5 * diff * sin2 * sh_ab * sinh2_bc
        + mixed_c * sh_bc ** 2
    )
    gamma = (
        mixed_c * ch_bc ** 2
        - 0.5 * diff * sin2 * sh_ab * sinh2_bc
        + nu_b * ch_ab ** 2 * sh_bc ** 2
        + mixed_a * sh_ab ** 2 * sh_bc ** 2
    )
    delta = -0.5 * diff * sin2 * ch_bc * ch_ab + 0.5 * (nu_b + mixed_a) * sinh2_ab * sh_bc
    epsilon = 0.5 * sinh2_ab * ch_bc * (nu_b + mixed_a) - 0.5 * diff * sin2 * sh_bc * ch_ab
    zeta = 0.25 * (
        -2 * diff * math.cosh(2 * d.r_bc) * sin2 * sh_ab
        + (nu_a + 2 * nu_b + nu_c) * ch_ab ** 2 * sinh2_bc
        - diff * cos2 * (sh_ab ** 2 - 1) * sinh2_bc
    )
    return CovarianceElements(alpha=alpha, beta=beta, gamma=gamma, delta=delta, epsilon=epsilon, zeta=zeta)


def elements_from_state(sigma: CovarianceMatrix, tolerance: float = 1e-9) -> CovarianceElements:
    """Read (alpha ... zeta) off a 3-mode state with the bi-squeezed zero pattern."""
    if sigma.n_modes != 3:
        raise ValidationError(f"Expected a 3-mode state, got {sigma.n_modes} modes")

    data = sigma.data
    scale = max(1.0, float(np.max(np.abs(data))))
    for i, j in ZERO_PATTERN:
        if abs(data[i, j]) > tolerance * scale:
            raise ValidationError(f"State lacks the bi-squeezed structure: entry ({i}, {j}) = {data[i, j]:.3e}")
    if float(np.max(np.abs(data.imag))) > tolerance * scale:
        raise ValidationError("State lacks the bi-squeezed structure: entries are not real")

    real = data.real
    return CovarianceElements(
        alpha=real[0, 0],
        beta=real[1, 1],
        gamma=real[2, 2],
        delta=real[0, 2],
        epsilon=real[0, 4],
        zeta=real[1, 5],
    )


def zero_temperature_occupations(d: DecoupledParameters) -> Tuple[float, float, float]:
    """<n_a>, <n_b>, <n_c> for vacuum input."""
    x = math.sinh(d.r_ab) ** 2
    y = math.sinh(d.r_bc) ** 2
    return (x, x + y + x * y, y * (1 + x))


def reduced_purities(e: CovarianceElements) -> Dict[str, float]:
    """Purities (product of squared symplectic eigenvalues) of every reduction."""
    a, b, g = e.alpha, e.beta, e.gamma
    return {
        "ab": (a * b - e.epsilon ** 2) ** 2,
        "bc": (b * g - e.zeta ** 2) ** 2,
        "ac": (a * g - e.delta ** 2) ** 2,
        "a": a ** 2,
        "b": b ** 2,
        "c": g ** 2,
    }


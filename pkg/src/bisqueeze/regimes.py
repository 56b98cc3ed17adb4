"""
Equal-frequency and low-temperature approximations.

These closed forms reproduce the exact pipeline when the three thermal
occupations coincide; they are cross-checks, never a replacement for it.
Throughout, x = sinh(r_ab)^2 and y = sinh(r_bc)^2.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import structlog
from pydantic import Field

from .core.errors import InvalidParameterError
from .generation import (
    HBAR,
    K_B,
    CovarianceElements,
    ParameterModel,
    ThermalSpec,
    dimensionless_frequencies,
    occupation_from_omega,
    resolve_pair,
)
from .homodyne import homodyne_condition_equal_frequency

logger = structlog.get_logger(__name__)


class RegimeSpec(ParameterModel):
    """Dimensionless reference frequency, half-splitting and common occupation."""
    Omega: float = Field(gt=0, description="hbar omega_b / (k_B T)")
    delta_Omega: float = Field(default=0.0, description="(Omega_c - Omega_a) / 2")
    nu: float = Field(ge=1.0, description="Common thermal occupation coth(Omega / 2)")


@dataclass(frozen=True)
class EntanglementConditions:
    ab: bool
    bc: bool
    ac: bool
    ac_after_homodyne: bool


def regime_spec(spec: ThermalSpec) -> RegimeSpec:
    """
    Raises:
        InvalidParameterError: at zero temperature or when the splitting exceeds Omega
    """
    if spec.temperature == 0:
        raise InvalidParameterError("Regime parameters need a positive temperature")
    omega_a, omega_b, omega_c = dimensionless_frequencies(spec)
    delta = 0.5 * (omega_c - omega_a)
    if abs(delta) > omega_b:
        raise InvalidParameterError(f"Frequency splitting {delta:.3g} exceeds the reference frequency {omega_b:.3g}")
    return RegimeSpec(Omega=omega_b, delta_Omega=delta, nu=occupation_from_omega(omega_b))


def _check_nu(nu: float) -> None:
    if not math.isfinite(nu) or nu < 1.0:
        raise InvalidParameterError(f"Thermal occupation nu must be finite and >= 1, got {nu}")


def _x_y(r_ab: float, r_bc: float) -> Tuple[float, float]:
    return math.sinh(r_ab) ** 2, math.sinh(r_bc) ** 2


def equal_frequency_elements(nu: float, r_ab: float, r_bc: float) -> CovarianceElements:
    _check_nu(nu)
    cosh2_ab = math.cosh(2 * r_ab)
    sinh2_ab = math.sinh(2 * r_ab)
    ch_bc, sh_bc = math.cosh(r_bc), math.sinh(r_bc)
    return CovarianceElements(
        alpha=nu * cosh2_ab,
        beta=nu * (cosh2_ab * ch_bc ** 2 + sh_bc ** 2),
        gamma=nu * (cosh2_ab * sh_bc ** 2 + ch_bc ** 2),
        delta=nu * sinh2_ab * sh_bc,
        epsilon=nu * sinh2_ab * ch_bc,
        zeta=nu * math.cosh(r_ab) ** 2 * math.sinh(2 * r_bc),
    )


def equal_frequency_nu_minus(nu: float, r_ab: float, r_bc: float, pair: str) -> float:
    """Smallest PPT eigenvalue of a two-mode reduction for equal occupations."""
    _check_nu(nu)
    i, j = resolve_pair(pair)
    key = "abc"[min(i, j)] + "abc"[max(i, j)]
    x, y = _x_y(r_ab, r_bc)

    if key == "ab":
        root = 4 * x + 4 * x ** 2 + y ** 2 + 4 * x * y + 2 * x * y ** 2 + 4 * x ** 2 * y + x ** 2 * y ** 2
        return nu * (1 + 2 * x + y + x * y - math.sqrt(root))
    if key == "bc":
        root = x ** 2 + 4 * (1 + x) ** 2 * y * (1 + y)
        return nu * (1 + x + 2 * y + 2 * x * y - math.sqrt(root))
    root = 1 + 2 * x + 2 * y + x ** 2 + y ** 2 - 2 * x ** 2 * y + 2 * x * y ** 2 + x ** 2 * y ** 2
    return nu * (math.sqrt(root) - abs(x - y - x * y))


def entanglement_conditions(nu: float, r_ab: float, r_bc: float) -> EntanglementConditions:
    """
    Onset conditions nu_minus < 1 for equal occupations, with k = (nu - 1) / (2 nu).

    The (a, c) reduction is never entangled; after measuring b it is whenever
    (1 + x) x y / D exceeds ((nu^2 - 1) / (4 nu))^2.
    """
    _check_nu(nu)
    x, y = _x_y(r_ab, r_bc)
    k = (nu - 1) / (2 * nu)
    return EntanglementConditions(
        ab=x > k ** 2 + k * (2 * x + y + x * y),
        bc=y * (1 + x) > k ** 2 + k * (x + 2 * y + 2 * x * y),
        ac=False,
        ac_after_homodyne=homodyne_condition_equal_frequency(nu, r_ab, r_bc),
    )


def zero_temperature_conditions(r_ab: float, r_bc: float) -> EntanglementConditions:
    return entanglement_conditions(1.0, r_ab, r_bc)


def equal_frequency_local_invariants(nu: float, r_ab: float, r_bc: float) -> Tuple[float, float]:
    """(a^2 = b^2, c_+ c_-) of the conditional (a, c) state for equal occupations."""
    _check_nu(nu)
    x, y = _x_y(r_ab, r_bc)
    D = 1 + 2 * x + 2 * y + 2 * x * y
    a2 = nu ** 2 * (1 + 2 * y + 2 * x * y) * (1 + 2 * x) / D
    c_plus_c_minus = -4 * nu ** 2 * (1 + x) * x * y / D
    return a2, c_plus_c_minus


def local_temperature_b(omega: float, r_ab: float, r_bc: float) -> float:
    """
    Temperature of the thermal state that mode b looks like for vacuum input.

    Solves coth(hbar omega / 2 k_B T_b) = 2 <n_b> + 1.
    """
    if omega <= 0:
        raise InvalidParameterError(f"Angular frequency must be positive, got {omega}")
    x, y = _x_y(r_ab, r_bc)
    occupation = x + y + x * y
    if occupation == 0:
        return 0.0
    return (HBAR * omega / K_B) / math.log1p(1.0 / occupation)


def g1_limits(nu: float, r_ab: float, r_bc: float, Omega: float = math.inf) -> float:
    """
    First-order coherence g1 between a and c in the two approximations.

    With Omega infinite the equal-frequency closed form in nu is returned;
    otherwise the low-temperature expansion to first order in exp(-Omega),
    which does not hold once either squeezing falls below exp(-Omega).

    Raises:
        InvalidParameterError: for the low-temperature branch outside its validity range
    """
    _check_nu(nu)
    x, y = _x_y(r_ab, r_bc)
    ch_ab, sh_ab = math.cosh(r_ab), math.sinh(r_ab)

    if math.isinf(Omega):
        denominator = math.sqrt((nu - 1 + 2 * nu * x) * (nu - 1 + 2 * nu * y * ch_ab ** 2))
        if denominator == 0:
            return 0.0
        return 2 * nu * sh_ab * ch_ab * math.sinh(r_bc) / denominator

    floor = math.exp(-Omega)
    if abs(r_ab) < floor or abs(r_bc) < floor:
        raise InvalidParameterError(
            f"Low-temperature expansion needs squeezing above exp(-Omega) = {floor:.3e}, "
            f"got r_ab={r_ab}, r_bc={r_bc}"
        )
    return 1.0 - 0.5 * (1.0 / x + 1.0 / (y * ch_ab ** 2)) * floor


def symplectic_eigenvalue_expansion(Omega: float, delta_Omega: float) -> Tuple[float, float, float]:
    """
    (nu_a, nu_b, nu_c) for modes at Omega - dOmega, Omega, Omega + dOmega,
    to first order in the splitting.
    """
    if Omega <= 0:
        raise InvalidParameterError(f"Omega must be positive, got {Omega}")
    nu = occupation_from_omega(Omega)
    # sinh overflows far beyond any physical Omega; the shift is then negligible
    shift = 0.0 if Omega > 700 else delta_Omega / math.sinh(Omega)
    return (nu * (1 + shift), nu, nu * (1 - shift))

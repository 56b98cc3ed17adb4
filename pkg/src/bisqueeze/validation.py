"""
Consistency checks of a generated bi-squeezed state against independent paths.

Each rule compares two ways of obtaining the same quantity (matrix product vs
closed form, numerical PPT vs analytic eigenvalue, ...) and grades the worst
deviation.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Tuple

import numpy as np
import structlog

from .core.errors import BisqueezeError
from .generation import (
    ZERO_PATTERN,
    DecoupledParameters,
    covariance_elements,
    elements_from_state,
)
from .measures import reduced_nu_minus_analytic, smallest_ppt_eigenvalue
from .symplectic import CovarianceMatrix, is_physical, partial_trace, purity

logger = structlog.get_logger(__name__)


class CheckStatus(Enum):
    """Outcome of a single consistency rule."""
    PASS = "pass"        # deviation within tolerance
    WARN = "warn"        # within 100x tolerance
    FAIL = "fail"        # beyond that, or the check could not run


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    deviation: float
    tolerance: float
    issues: List[str] = field(default_factory=list)


@dataclass
class ConsistencyReport:
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(result.status is CheckStatus.PASS for result in self.results)

    def as_dict(self) -> Dict[str, str]:
        return {f"check_{result.name}": result.status.value for result in self.results}


def _grade(deviation: float, tolerance: float) -> CheckStatus:
    if deviation <= tolerance:
        return CheckStatus.PASS
    if deviation <= 100 * tolerance:
        return CheckStatus.WARN
    return CheckStatus.FAIL


class StateValidator:
    """Runs every consistency rule on a bi-squeezed state."""

    def __init__(self, tolerance: float = 1e-9):
        self.tolerance = tolerance
        self.validation_rules: Dict[str, Callable[..., float]] = {
            "physical": self._validate_physicality,
            "zero_pattern": self._validate_zero_pattern,
            "elements": self._validate_elements,
            "purity": self._validate_purity,
            "nu_minus": self._validate_nu_minus,
        }

    def validate_state(
        self,
        sigma: CovarianceMatrix,
        decoupled: DecoupledParameters,
        nus: Tuple[float, float, float],
    ) -> ConsistencyReport:
        results = []
        for name, rule in self.validation_rules.items():
            try:
                deviation = rule(sigma, decoupled, nus)
                status = _grade(deviation, self._tolerance_for(name))
                issues = [] if status is CheckStatus.PASS else [f"deviation {deviation:.3e}"]
            except BisqueezeError as e:
                deviation, status, issues = float("inf"), CheckStatus.FAIL, [str(e)]

            if status is not CheckStatus.PASS:
                logger.warning("Consistency check did not pass", check=name, status=status.value,
                               deviation=deviation)
            results.append(CheckResult(name, status, deviation, self._tolerance_for(name), issues))
        return ConsistencyReport(results)

    def _tolerance_for(self, name: str) -> float:
        # Purity is a product of six squared eigenvalues
        return 1e-8 if name == "purity" else self.tolerance

    def _validate_physicality(self, sigma, decoupled, nus) -> float:
        report = is_physical(sigma)
        return 0.0 if report else abs(report.min_eigenvalue)

    def _validate_zero_pattern(self, sigma, decoupled, nus) -> float:
        return max(abs(sigma.data[i, j]) for i, j in ZERO_PATTERN)

    def _validate_elements(self, sigma, decoupled, nus) -> float:
        numeric = elements_from_state(sigma)
        analytic = covariance_elements(decoupled, nus)
        return max(abs(getattr(numeric, name) - getattr(analytic, name)) for name in type(numeric).model_fields)

    def _validate_purity(self, sigma, decoupled, nus) -> float:
        expected = float(np.prod(np.asarray(nus) ** 2))
        return abs(purity(sigma) - expected) / expected

    def _validate_nu_minus(self, sigma, decoupled, nus) -> float:
        elements = elements_from_state(sigma)
        deviations = []
        for pair, modes in (("ab", (0, 1)), ("bc", (1, 2)), ("ac", (0, 2))):
            numeric = smallest_ppt_eigenvalue(partial_trace(sigma, modes), 1)
            deviations.append(abs(numeric - reduced_nu_minus_analytic(elements, pair)))
        return max(deviations)

"""
Parameter sweeps over equal pump strengths r = R_ab = R_bc.

Every row holds the entanglement and coherence figures of the state, of its
reductions and of the (a, c) state conditioned on a homodyne measurement of b.
"""

import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import repeat
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError
from pydantic import field_validator, model_validator

from .core.config import config, config_error_from_pydantic, load_yaml_mapping
from .core.errors import ConfigError
from .generation import PumpParameters, ThermalSpec, decouple, state_from_decoupled, thermal_occupations
from .homodyne import homodyne_condition
from .measures import (
    bipartition_negativities,
    coherence_matrix,
    negativity_from_nu,
    relative_entropy_of_coherence,
    smallest_ppt_eigenvalue,
)
from .symplectic import partial_trace

logger = structlog.get_logger(__name__)

COLUMNS = (
    "r",
    "N_abc",
    "N_a_bc",
    "N_b_ac",
    "N_c_ab",
    "N_ab",
    "N_bc",
    "N_ac",
    "adag_c",
    "C_ac",
    "N_out",
    "adag_c_out",
    "C_out",
    "out_11",
    "out_22",
    "out_12",
    "out_13",
    "out_14",
    "out_24",
)

# 1-based (row, column) of the conditional-state entries reported per row
_OUT_ENTRIES = {
    "out_11": (1, 1),
    "out_22": (2, 2),
    "out_12": (1, 2),
    "out_13": (1, 3),
    "out_14": (1, 4),
    "out_24": (2, 4),
}


class SweepConfig(BaseModel):
    """Sweep settings; frequencies in Hz, temperature in K."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    omega_a: float = Field(default=4.99e9, gt=0, description="Frequency of mode a (Hz)")
    omega_b: float = Field(default=5.00e9, gt=0, description="Frequency of the idler b (Hz)")
    omega_c: float = Field(default=5.01e9, gt=0, description="Frequency of mode c (Hz)")
    temperature: float = Field(default=0.015, ge=0, description="Temperature of the thermal input (K)")
    r_min: float = Field(default=0.0, description="First pump strength")
    r_max: float = Field(default=2.0, description="Last pump strength")
    r_steps: int = Field(default=101, ge=2, description="Number of grid points, endpoints included")
    theta: float = Field(default=0.0, description="Homodyne quadrature angle (rad)")
    outputs: Optional[List[str]] = Field(default=None, description="Columns to keep (default: all)")

    @field_validator("outputs")
    @classmethod
    def _known_columns(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return value
        unknown = [name for name in value if name not in COLUMNS]
        if unknown:
            raise ValueError(f"unknown output columns {unknown}")
        return value

    @model_validator(mode="after")
    def _ordered_range(self) -> "SweepConfig":
        if self.r_max < self.r_min:
            raise ValueError("r_max must not be smaller than r_min")
        return self

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, **overrides: Any) -> "SweepConfig":
        """
        Read a flat YAML mapping and apply overrides (None values are ignored).

        Raises:
            ConfigError: naming the offending field, or the line of a YAML syntax error
        """
        data: Dict[str, Any] = {}
        if path is not None:
            file_path = Path(path)
            if not file_path.exists():
                raise ConfigError(f"Sweep configuration not found: {path}")
            data = load_yaml_mapping(file_path)
            nested = [key for key, value in data.items() if isinstance(value, dict)]
            if nested:
                raise ConfigError("Sweep configuration must be a flat mapping", field=nested[0])

        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return cls(**data)
        except PydanticValidationError as e:
            raise config_error_from_pydantic(e) from e

    def thermal_spec(self) -> ThermalSpec:
        return ThermalSpec.from_hertz(self.omega_a, self.omega_b, self.omega_c, self.temperature)

    def grid(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.r_steps)

    def columns(self) -> List[str]:
        if not self.outputs:
            return list(COLUMNS)
        wanted = set(self.outputs) | {"r"}
        return [name for name in COLUMNS if name in wanted]


def _pair_negativity(sigma, pair: Tuple[int, int]) -> float:
    return negativity_from_nu(smallest_ppt_eigenvalue(partial_trace(sigma, pair), 1))


def evaluate_point(r: float, nus: Tuple[float, float, float], theta: float = 0.0) -> Dict[str, float]:
    """All sweep columns at one pump strength."""
    sigma = state_from_decoupled(decouple(PumpParameters(R_ab=float(r), R_bc=float(r))), nus)

    splits = bipartition_negativities(sigma)
    reduced_ac = partial_trace(sigma, (0, 2))
    conditional = homodyne_condition(sigma, measured=1, theta=theta).sigma_out

    row = {
        "r": float(r),
        "N_abc": float(np.cbrt(splits["a"] * splits["b"] * splits["c"])),
        "N_a_bc": splits["a"],
        "N_b_ac": splits["b"],
        "N_c_ab": splits["c"],
        "N_ab": _pair_negativity(sigma, (0, 1)),
        "N_bc": _pair_negativity(sigma, (1, 2)),
        "N_ac": _pair_negativity(sigma, (0, 2)),
        "adag_c": float(coherence_matrix(sigma)[0, 2].real),
        "C_ac": relative_entropy_of_coherence(reduced_ac),
        "N_out": negativity_from_nu(smallest_ppt_eigenvalue(conditional, 1)),
        "adag_c_out": float(coherence_matrix(conditional)[0, 1].real),
        "C_out": relative_entropy_of_coherence(conditional),
    }
    for name, (i, j) in _OUT_ENTRIES.items():
        row[name] = float(conditional.data[i - 1, j - 1].real)
    return row


def run_sweep(sweep: SweepConfig, threads: Optional[int] = None) -> pd.DataFrame:
    """
    Evaluate the grid in a thread pool; rows come back in grid order whatever
    the worker count.
    """
    nus = thermal_occupations(sweep.thermal_spec())
    grid = sweep.grid()
    if threads is not None and threads < 1:
        raise ConfigError("Thread count must be at least 1", field="threads")
    workers = config.runtime.worker_count() if threads is None else threads

    logger.info("Sweep started", points=len(grid), workers=workers, nus=nus, theta=sweep.theta)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(evaluate_point, grid, repeat(nus), repeat(sweep.theta)))
    logger.info("Sweep finished", points=len(rows))

    frame = pd.DataFrame(rows, columns=list(COLUMNS))
    return frame[sweep.columns()]


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    """Write with 12 significant digits; '-' writes to stdout."""
    if str(path) == "-":
        frame.to_csv(sys.stdout, index=False, float_format="%.12g")
        return
    frame.to_csv(path, index=False, float_format="%.12g")
    logger.info("Sweep written", path=str(path), rows=len(frame))

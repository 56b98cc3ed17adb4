# Bi-squeezed tripartite Gaussian states

__version__ = "1.0.0"
__description__ = "Generation, entanglement, coherence and homodyne conditioning of bi-squeezed three-mode Gaussian states"

from .generation import (
    CovarianceElements,
    DecoupledParameters,
    PumpParameters,
    ThermalSpec,
    bisqueezed_state,
    covariance_elements,
    decouple,
    state_from_decoupled,
    thermal_occupations,
)
from .homodyne import ConditionalState, homodyne_condition
from .measures import EntanglementReport, first_order_coherence, negativity, tripartite_negativity
from .symplectic import CovarianceMatrix, SymplecticTransform, symplectic_eigenvalues

__all__ = [
    "__version__",
    "CovarianceElements",
    "DecoupledParameters",
    "PumpParameters",
    "ThermalSpec",
    "bisqueezed_state",
    "covariance_elements",
    "decouple",
    "state_from_decoupled",
    "thermal_occupations",
    "ConditionalState",
    "homodyne_condition",
    "EntanglementReport",
    "first_order_coherence",
    "negativity",
    "tripartite_negativity",
    "CovarianceMatrix",
    "SymplecticTransform",
    "symplectic_eigenvalues",
]

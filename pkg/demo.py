#!/usr/bin/env python3
"""
Demo script walking through a bi-squeezed state: generation, entanglement of
every split, coherence between the signals, homodyne conditioning of the idler
and a cross-check against the truncated Fock-space simulation.
"""

import os
import sys

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))

from bisqueeze.core.config import configure_logging
from bisqueeze.core.errors import BisqueezeError
from bisqueeze.fock_oracle import TruncatedSpace, compare_with_gaussian
from bisqueeze.generation import (
    PumpParameters,
    ThermalSpec,
    covariance_elements,
    decouple,
    state_from_decoupled,
    thermal_occupations,
)
from bisqueeze.homodyne import homodyne_condition, local_invariants
from bisqueeze.measures import bipartition_negativities, first_order_coherence, negativity, tripartite_negativity
from bisqueeze.regimes import entanglement_conditions, regime_spec
from bisqueeze.symplectic import partial_trace


def section(title: str) -> None:
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def demo_generation(pumps: PumpParameters, spec: ThermalSpec):
    section("STATE GENERATION")
    d = decouple(pumps)
    nus = thermal_occupations(spec)
    print(f"   Pumps: R_ab={pumps.R_ab}, R_bc={pumps.R_bc}")
    print(f"   Decoupled: r_ab={d.r_ab:.6f}, r_bc={d.r_bc:.6f}, theta_ac={d.theta_ac:.6f}")
    print("   Thermal occupations: " + ", ".join(f"{nu:.9f}" for nu in nus))

    elements = covariance_elements(d, nus)
    for name, value in elements.model_dump().items():
        print(f"   {name:>8} = {value:.9f}")
    return d, nus, state_from_decoupled(d, nus)


def demo_entanglement(sigma) -> None:
    section("ENTANGLEMENT")
    for name, value in bipartition_negativities(sigma).items():
        print(f"   N({name} | rest) = {value:.6f}")
    print(f"   N_abc = {tripartite_negativity(sigma):.6f}")

    for pair, modes in (("ab", (0, 1)), ("bc", (1, 2)), ("ac", (0, 2))):
        report = negativity(partial_trace(sigma, modes))
        print(f"   {pair}: nu_minus={report.nu_tilde_minus:.6f}  N={report.negativity:.6f}  "
              f"E_F={report.entanglement_of_formation:.6f}")


def demo_homodyne(sigma, d, spec: ThermalSpec) -> None:
    section("HOMODYNE DETECTION OF THE IDLER")
    conditional = homodyne_condition(sigma, measured=1, theta=0.0)
    report = negativity(conditional.sigma_out)
    coherence = first_order_coherence(conditional.sigma_out, 0, 1)
    print(f"   Conditional (a, c): N={report.negativity:.6f}, <a^dagger c>={coherence.pair_coherence.real:.6f}")

    regime = regime_spec(spec)
    invariants = local_invariants(conditional, nu=regime.nu, r_ab=d.r_ab, r_bc=d.r_bc)
    print(f"   Local invariants: a^2={invariants.a2:.6f}, b^2={invariants.b2:.6f}, "
          f"c+c-={invariants.c_plus_c_minus:.6f}")

    conditions = entanglement_conditions(regime.nu, d.r_ab, d.r_bc)
    print(f"   Equal-frequency conditions: {conditions}")


def demo_oracle(pumps: PumpParameters) -> None:
    section("FOCK-SPACE CROSS-CHECK")
    for row in compare_with_gaussian(pumps, TruncatedSpace(n_max=20)):
        print(f"   {row.quantity:>12}: gaussian={row.gaussian:.9f}  fock={row.fock:.9f}  delta={row.delta:.2e}")


def main() -> int:
    configure_logging("WARNING")
    pumps = PumpParameters(R_ab=0.5, R_bc=0.5)
    spec = ThermalSpec.from_hertz(4.99e9, 5.00e9, 5.01e9, 0.015)

    try:
        d, nus, sigma = demo_generation(pumps, spec)
        demo_entanglement(sigma)
        demo_homodyne(sigma, d, spec)
        demo_oracle(pumps)
    except BisqueezeError as e:
        print(f"\nDemo failed: {e}")
        return e.exit_code

    print("\nDemo completed.")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Stability laboratory for planar viscous shocks in a finite-width duct."""

from .profiles import (ShockProfile, load_profile_csv, save_profile_csv,
                       solve_profile, transversality_diagnostic)
from .systems import (FluxSystem, HypothesisReport, axial_jacobians,
                      built_in_systems, check_hypotheses, coupled_family,
                      gas_family, scalar_family)

__all__ = [
    "FluxSystem", "HypothesisReport", "ShockProfile", "axial_jacobians",
    "built_in_systems", "check_hypotheses", "coupled_family", "gas_family",
    "load_profile_csv", "save_profile_csv", "scalar_family", "solve_profile",
    "transversality_diagnostic",
]

"""Exact localization checks and unimodality certificates for Hamiltonian
circle actions with isolated fixed points."""

from .certify import Certificate, certify
from .eqcalc import CohomologyModel, EquivariantClass, integrate, validate_model, vanishing_class
from .fixdata import FixedPoint, FixedPointData, betti_profile, localization_consistency
from .generators import gen_cpn, gen_product, synthetic_n5

__all__ = [
    "Certificate",
    "CohomologyModel",
    "EquivariantClass",
    "FixedPoint",
    "FixedPointData",
    "betti_profile",
    "certify",
    "gen_cpn",
    "gen_product",
    "integrate",
    "localization_consistency",
    "synthetic_n5",
    "validate_model",
    "vanishing_class",
]

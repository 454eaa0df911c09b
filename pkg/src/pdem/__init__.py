"""su(1,1) coherent states for position-dependent-mass shifted harmonic
oscillators: deformed operators, closed-form eigenfunctions,
Barut-Girardello states, their observables and time evolution."""

from .deformation import (DeformationProfile, OrderingParams, constant_profile,
                          exponential_profile, make_profile, quadratic_profile)
from .oscillator import Eigenstate, PhysicalParams, eigenstate, energy, superpotential
from .coherent import (CoherentState, EvolvedState, build_cs, density,
                       distribution, energy_moments, evolve, xp_uncertainty)
from .operators import Grid, GridOperator, number_basis

__all__ = [
    "CoherentState", "DeformationProfile", "Eigenstate", "EvolvedState",
    "Grid", "GridOperator", "OrderingParams", "PhysicalParams",
    "build_cs", "constant_profile", "density", "distribution", "eigenstate",
    "energy", "energy_moments", "evolve", "exponential_profile",
    "make_profile", "number_basis", "quadratic_profile", "superpotential",
    "xp_uncertainty",
]

__version__ = "0.1.0"

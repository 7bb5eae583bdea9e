"""Thermal Casimir effect for a metallic sphere facing a plane mirror.

Multipole scattering computation of the free energy, force, force ratio and
entropy at finite temperature, with plane-plane (PFA) reference values and
closed-form large-distance asymptotics.
"""

from .materials import MaterialModel, drude, perfect_reflector, plasma
from .thermodynamics import (
    Geometry,
    ThermalState,
    entropy,
    force,
    free_energy,
    theta_ratio,
    zero_temperature_energy,
)

__all__ = [
    "MaterialModel",
    "perfect_reflector",
    "plasma",
    "drude",
    "Geometry",
    "ThermalState",
    "free_energy",
    "zero_temperature_energy",
    "force",
    "theta_ratio",
    "entropy",
]

__version__ = "0.1.0"

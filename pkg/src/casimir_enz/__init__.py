"""Casimir pressure between PEC/PMC mirrors with Drude (epsilon-near-zero) coatings."""

from .analytic import IdealCavityKind, ideal_pressure
from .config import EquilibriaRequest, RunConfig, SweepAxis, SweepSpec, parse_config
from .equilibria import (
    EquilibriumPoint,
    EquilibriumScan,
    Stability,
    equilibrium_scan,
    pressure_slope,
    scan_equilibria,
)
from .lifshitz import (
    CavityConfig,
    NonConvergence,
    NumericalError,
    PressureResult,
    QuadratureSettings,
    integrand,
    pressure,
    pressure_fixed_grid,
)
from .materials import BoundaryKind, ConstantEps, Drude, MaterialModel, Vacuum, eps_imag_axis
from .reflection import (
    Layer,
    MirrorStack,
    ReflectionPair,
    boundary_reflection,
    fresnel_interface,
    s_param,
    stack_reflection,
)

__all__ = [
    "BoundaryKind", "CavityConfig", "ConstantEps", "Drude", "EquilibriaRequest",
    "EquilibriumPoint", "EquilibriumScan", "IdealCavityKind", "Layer", "MaterialModel",
    "MirrorStack", "NonConvergence", "NumericalError", "PressureResult", "QuadratureSettings",
    "ReflectionPair", "RunConfig", "Stability", "SweepAxis", "SweepSpec", "Vacuum",
    "boundary_reflection", "eps_imag_axis", "equilibrium_scan", "fresnel_interface",
    "ideal_pressure", "integrand", "parse_config", "pressure", "pressure_fixed_grid",
    "pressure_slope", "s_param", "scan_equilibria", "stack_reflection",
]

"""Closed-form pressures of ideal (uncoated) cavities."""

from __future__ import annotations

import enum

import numpy as np

from .constants import C, HBAR


class IdealCavityKind(enum.Enum):
    PEC_PEC = "pec-pec"
    PMC_PMC = "pmc-pmc"
    PEC_PMC = "pec-pmc"


def ideal_pressure(kind: IdealCavityKind, gap: float) -> float:
    """Pressure (Pa) between ideal walls a distance `gap` (m) apart.

    Like walls attract with ``-pi^2 hbar c / (240 gap^4)``; mixed PEC/PMC
    walls repel with 7/8 of that magnitude.
    """
    if not gap > 0:
        raise ValueError(f"gap must be > 0, got {gap!r}")
    casimir = np.pi**2 * HBAR * C / (240.0 * gap**4)
    if kind is IdealCavityKind.PEC_PMC:
        return 7.0 / 8.0 * casimir
    if kind in (IdealCavityKind.PEC_PEC, IdealCavityKind.PMC_PMC):
        return -casimir
    raise TypeError(f"unknown cavity kind {kind!r}")

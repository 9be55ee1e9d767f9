"""Zero-pressure separations and their mechanical stability."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from .lifshitz import CavityConfig, PressureResult, QuadratureSettings, pressure

log = logging.getLogger(__name__)

ROOT_REL_RESOLUTION = 1e-4
SLOPE_REL_STEP = 1e-3
# differencing noise allowed in a slope, as a fraction of the slope itself
_SLOPE_NOISE = 1e-3


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class EquilibriumPoint:
    """A zero of the pressure as a function of gap.

    ``pressure_slope`` is dP/dgap in Pa/m. A negative slope (repulsive below,
    attractive above) pushes the plate back, hence ``Stability.STABLE``.
    """

    gap: float
    stability: Stability
    pressure_slope: float
    bracket: tuple[float, float]


@dataclass
class EquilibriumScan:
    gaps: np.ndarray
    results: list[PressureResult]
    points: list[EquilibriumPoint]
    warnings: list[str] = field(default_factory=list)


def _tighter(q: QuadratureSettings, factor: float) -> QuadratureSettings:
    return replace(q, rel_tol=max(q.rel_tol / factor, 1e-13), abs_tol=q.abs_tol / factor)


def pressure_slope(
    cfg: CavityConfig,
    q: QuadratureSettings = QuadratureSettings(),
    rel_step: float = SLOPE_REL_STEP,
) -> float:
    """Central-difference dP/dgap (Pa/m) at ``cfg.gap``.

    The quadrature tolerance is tightened until the error bounds of the two
    pressures account for less than 0.1 % of the difference.
    """
    if not 0 < rel_step < 0.1:
        raise ValueError(f"rel_step must lie in (0, 0.1), got {rel_step!r}")
    gap = cfg.gap
    span = 2.0 * gap * rel_step
    q_eff = replace(q, rel_tol=min(q.rel_tol, 0.1 * rel_step))
    slope = 0.0
    for _ in range(8):
        hi = pressure(cfg.with_gap(gap * (1.0 + rel_step)), q_eff)
        lo = pressure(cfg.with_gap(gap * (1.0 - rel_step)), q_eff)
        slope = (hi.total - lo.total) / span
        noise = (hi.error_estimate + lo.error_estimate) / span
        if noise <= _SLOPE_NOISE * abs(slope):
            return slope
        q_eff = _tighter(q_eff, 10.0)
    log.warning("slope at gap %.6g m limited by quadrature noise", gap)
    return slope


def _reliable_pressure(cfg: CavityConfig, q: QuadratureSettings) -> PressureResult:
    # near a root |P| is small; tighten abs_tol until the sign is trustworthy
    res = pressure(cfg, q)
    for _ in range(6):
        if abs(res.total) > res.error_estimate:
            break
        q = replace(q, abs_tol=max(abs(res.total), res.error_estimate) * 1e-2)
        res = pressure(cfg, q)
    return res


def _refine_root(cfg, lo, hi, p_lo, q):
    while hi / lo - 1.0 > ROOT_REL_RESOLUTION:
        mid = np.sqrt(lo * hi)
        p_mid = _reliable_pressure(cfg.with_gap(mid), q).total
        if p_mid == 0.0:
            return mid, mid
        if np.sign(p_mid) == np.sign(p_lo):
            lo, p_lo = mid, p_mid
        else:
            hi = mid
    return lo, hi


def equilibrium_scan(
    cfg_template: CavityConfig,
    gap_min: float,
    gap_max: float,
    n_scan: int = 64,
    q: QuadratureSettings = QuadratureSettings(),
    map_fn: Callable[..., Iterable] = map,
) -> EquilibriumScan:
    """Pressure on a log-spaced gap grid plus every refined sign change.

    `map_fn` evaluates the scan grid and may be a parallel, order-preserving
    map such as ``Executor.map``.
    """
    if not 0 < gap_min < gap_max:
        raise ValueError(f"need 0 < gap_min < gap_max, got {gap_min!r}, {gap_max!r}")
    if n_scan < 8:
        raise ValueError(f"n_scan must be >= 8, got {n_scan!r}")
    gaps = np.geomspace(gap_min, gap_max, n_scan)
    results = list(map_fn(pressure, [cfg_template.with_gap(g) for g in gaps], [q] * n_scan))
    totals = np.array([r.total for r in results])

    points = []
    for i in range(n_scan - 1):
        if totals[i] == 0.0 or np.sign(totals[i]) == np.sign(totals[i + 1]):
            continue
        lo, hi = _refine_root(cfg_template, gaps[i], gaps[i + 1], totals[i], q)
        root = float(np.sqrt(lo * hi))
        slope = pressure_slope(cfg_template.with_gap(root), q)
        stability = Stability.STABLE if slope < 0 else Stability.UNSTABLE
        points.append(EquilibriumPoint(root, stability, slope, (float(gaps[i]), float(gaps[i + 1]))))

    warnings = []
    if len(points) % 2:
        warnings.append(
            f"odd number of equilibria ({len(points)}) in [{gap_min:.6g}, {gap_max:.6g}] m: "
            "a companion root may lie outside the scanned range"
        )
    for w in warnings:
        log.warning(w)
    return EquilibriumScan(gaps, results, points, warnings)


def scan_equilibria(
    cfg_template: CavityConfig,
    gap_min: float,
    gap_max: float,
    n_scan: int = 64,
    q: QuadratureSettings = QuadratureSettings(),
) -> list[EquilibriumPoint]:
    """Zero-pressure gaps in ``[gap_min, gap_max]``, sorted ascending."""
    return equilibrium_scan(cfg_template, gap_min, gap_max, n_scan, q).points

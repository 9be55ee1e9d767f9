"""Zero-temperature Casimir pressure between two planar mirror stacks.

The Lifshitz double integral over imaginary frequency ``xi`` and ``p >= 1``
is evaluated in the dimensionless variables

    x = xi / xi_c,   xi_c = c / (2 l),     t = x p  (the exponent r_n p),

in which ``xi**3 p**2 dxi dp = xi_c**4 t**2 dx dt`` and the pressure reads

    P = -hbar c / (32 pi**2 l**4) * sum_pol  int_0^inf dx int_x^inf dt
            t**2 D / (exp(t) - D),

with ``D`` the product of the two gap-facing reflection coefficients.
The outer range is mapped by ``x = X w / (1 - w)``, the inner one by
``t = x + L v / (1 - v)``; both land on [0, 1] with integrands that vanish
smoothly at the far end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .constants import C, HBAR
from .quadrature import gauss_legendre_unit, integrate_unit_batch
from .reflection import MirrorStack, stack_reflection

OUTER_SCALE = 2.0  # X
INNER_SCALE = 2.0  # L
# exp(t) overflows past ~709; the integrand is dropped well before that
_T_CUTOFF = 700.0
_POLE_GUARD = 1e-15
# inner integrals evaluated per vectorised batch (bounds peak memory)
_INNER_CHUNK = 1024


class NumericalError(ArithmeticError):
    """The Lifshitz denominator came too close to its pole."""


class NonConvergence(RuntimeError):
    """Quadrature budget exhausted; ``.result`` holds the best estimate."""

    def __init__(self, message: str, result: "PressureResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class CavityConfig:
    left: MirrorStack
    right: MirrorStack
    gap: float

    def __post_init__(self):
        if not self.gap > 0:
            raise ValueError(f"CavityConfig.gap must be > 0, got {self.gap!r}")

    def with_gap(self, gap: float) -> "CavityConfig":
        return CavityConfig(self.left, self.right, gap)

    def swapped(self) -> "CavityConfig":
        return CavityConfig(self.right, self.left, self.gap)


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-6
    abs_tol: float = 1e-12  # Pa
    max_evals: int = 10_000_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"QuadratureSettings.rel_tol must be > 0, got {self.rel_tol!r}")
        if not self.abs_tol >= 0:
            raise ValueError(f"QuadratureSettings.abs_tol must be >= 0, got {self.abs_tol!r}")
        if not self.max_evals > 0:
            raise ValueError(f"QuadratureSettings.max_evals must be > 0, got {self.max_evals!r}")


@dataclass(frozen=True)
class PressureResult:
    """Pressure in Pa; negative is attractive."""

    total: float
    te: float
    tm: float
    error_estimate: float
    evals: int
    converged: bool = True


def pressure_scale(gap: float) -> float:
    """``hbar c / (32 pi^2 l^4)``, the prefactor of the dimensionless integral."""
    return HBAR * C / (32.0 * np.pi**2 * gap**4)


def _reflection_products(cfg: CavityConfig, xi, p):
    left = stack_reflection(cfg.left, xi, p)
    right = stack_reflection(cfg.right, xi, p)
    return left.te * right.te, left.tm * right.tm


def _dimensionless_densities(cfg: CavityConfig, x, t):
    """``t^2 D / (e^t - D)`` per polarization at dimensionless (x, t); shape (n, 2)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    live = t < _T_CUTOFF
    out = np.zeros(x.shape + (2,))
    if not live.any():
        return out
    xl, tl = x[live], t[live]
    xi = xl * (C / (2.0 * cfg.gap))
    p = np.maximum(tl / xl, 1.0)
    em1 = np.expm1(tl)
    for k, d in enumerate(_reflection_products(cfg, xi, p)):
        denom = em1 + (1.0 - d)
        # denom * exp(-t) is the Lifshitz denominator 1 - D exp(-t)
        if np.any(denom * np.exp(-tl) < _POLE_GUARD):
            raise NumericalError("Lifshitz denominator 1 - D exp(-r_n p) below 1e-15")
        out[live, k] = tl * tl * d / denom
    return out


def integrand(cfg: CavityConfig, xi: ArrayLike, p: ArrayLike):
    """TE and TM pressure densities per unit xi per unit p (Pa s/rad).

    ``-(hbar / (2 pi^2 c^3)) xi^3 p^2 D e^{-r_n p} / (1 - D e^{-r_n p})``
    with ``r_n = 2 l xi / c``. Negative values are attractive contributions.
    """
    xi = np.asarray(xi, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(~(xi > 0)):
        raise ValueError("imaginary frequency xi must be > 0")
    if np.any(~(p >= 1)):
        raise ValueError("wavevector variable p must be >= 1")
    xi, p = np.broadcast_arrays(xi, p)
    rp = 2.0 * cfg.gap * xi / C * p
    pref = -HBAR / (2.0 * np.pi**2 * C**3) * xi**3 * p**2
    live = rp < _T_CUTOFF
    em1 = np.expm1(np.where(live, rp, 0.0))
    out = []
    for d in _reflection_products(cfg, xi, p):
        denom = em1 + (1.0 - d)
        if np.any(live & (denom * np.exp(-np.where(live, rp, 0.0)) < _POLE_GUARD)):
            raise NumericalError("Lifshitz denominator 1 - D exp(-r_n p) below 1e-15")
        val = np.where(live, pref * d / np.where(live, denom, 1.0), 0.0)
        out.append(val[()] if val.ndim == 0 else val)
    return tuple(out)


def _outer_map(w):
    x = OUTER_SCALE * w / (1.0 - w)
    return x, OUTER_SCALE / (1.0 - w) ** 2


def _inner_map(x, v):
    return x + INNER_SCALE * v / (1.0 - v), INNER_SCALE / (1.0 - v) ** 2


def _adaptive(cfg: CavityConfig, rel_tol, abs_tol_dimless, inner_rel, inner_abs, max_evals):
    evals = 0

    budget_hit = False

    def inner_batch(x_nodes):
        nonlocal evals, budget_hit

        def f(owner, v):
            xo = x_nodes[owner]
            t, jac = _inner_map(xo, v)
            return _dimensionless_densities(cfg, xo, t) * jac[:, None], None

        res = integrate_unit_batch(
            f, len(x_nodes), inner_rel, inner_abs,
            combine="components", max_evals=max(max_evals - evals, 1),
        )
        evals += res.evals
        if not res.converged.all():
            budget_hit = budget_hit or evals >= max_evals
            # an unconverged inner value carries at least its own magnitude as error
            bad = ~res.converged
            res.errors[bad] = np.maximum(res.errors[bad], np.abs(res.values[bad]))
        return res

    def outer(owner, w):
        x, jac = _outer_map(w)
        vals = np.empty((len(x), 2))
        errs = np.empty((len(x), 2))
        for s in range(0, len(x), _INNER_CHUNK):
            res = inner_batch(x[s:s + _INNER_CHUNK])
            vals[s:s + _INNER_CHUNK] = res.values
            errs[s:s + _INNER_CHUNK] = res.errors
        return vals * jac[:, None], errs * jac[:, None]

    res = integrate_unit_batch(
        outer, 1, rel_tol, abs_tol_dimless, combine="sum",
        max_evals=max_evals, spent=lambda: evals,
    )
    budget_hit = budget_hit or evals >= max_evals
    shortfall = res.errors[0].sum() / max(res.tolerance[0], np.finfo(float).tiny)
    return res.values[0], res.errors[0], evals, bool(res.converged[0]), budget_hit, shortfall


def pressure(cfg: CavityConfig, q: QuadratureSettings = QuadratureSettings()) -> PressureResult:
    """Casimir pressure of `cfg` by nested adaptive quadrature.

    TE and TM are carried as separate components with their own error
    bounds. Convergence means the summed error bound is below
    ``max(q.rel_tol * |total|, q.abs_tol)``.

    Raises
    ------
    NonConvergence
        If ``q.max_evals`` integrand evaluations do not reach the tolerance.
    """
    scale = pressure_scale(cfg.gap)
    abs_dimless = q.abs_tol / scale
    inner_rel = max(q.rel_tol * 1e-3, 1e-14)
    inner_abs = abs_dimless * 1e-3
    total_evals = 0
    for _ in range(4):
        vals, errs, evals, ok, budget_hit, shortfall = _adaptive(
            cfg, q.rel_tol, abs_dimless, inner_rel, inner_abs, q.max_evals - total_evals
        )
        total_evals += evals
        if ok or budget_hit or total_evals >= q.max_evals:
            break
        # outer refinement stopped at the inner error bound: tighten the inner
        # integrals by the shortfall and start over
        factor = min(max(10.0 * shortfall, 10.0), 1e6)
        inner_rel = max(inner_rel / factor, 1e-15)
        inner_abs /= factor

    te, tm = -scale * vals
    result = PressureResult(
        total=float(te + tm),
        te=float(te),
        tm=float(tm),
        error_estimate=float(scale * errs.sum()),
        evals=int(total_evals),
        converged=ok,
    )
    if not ok:
        raise NonConvergence(
            f"pressure did not converge within {q.max_evals} evaluations "
            f"(estimate {result.total:.6g} Pa, error {result.error_estimate:.3g} Pa)",
            result,
        )
    return result


def _grid_sum(cfg: CavityConfig, n_xi: int, n_p: int):
    w, ww = gauss_legendre_unit(n_xi)
    v, wv = gauss_legendre_unit(n_p)
    x, jx = _outer_map(w)
    xx = np.repeat(x, n_p)
    t, jt = _inner_map(xx, np.tile(v, n_xi))
    dens = _dimensionless_densities(cfg, xx, t) * jt[:, None]
    inner = np.einsum("j,ijk->ik", wv, dens.reshape(n_xi, n_p, 2))
    return -pressure_scale(cfg.gap) * np.einsum("i,ik->k", ww * jx, inner)


def pressure_fixed_grid(cfg: CavityConfig, n_xi: int = 512, n_p: int = 512) -> PressureResult:
    """Tensor-product Gauss-Legendre evaluation on the same mapped domain.

    A non-adaptive cross-check for :func:`pressure`. The error estimate is
    the change from the half-resolution grid.
    """
    if n_xi < 16 or n_p < 16:
        raise ValueError("pressure_fixed_grid needs n_xi, n_p >= 16")
    te, tm = _grid_sum(cfg, n_xi, n_p)
    te_h, tm_h = _grid_sum(cfg, n_xi // 2, n_p // 2)
    return PressureResult(
        total=float(te + tm),
        te=float(te),
        tm=float(tm),
        error_estimate=float(abs(te - te_h) + abs(tm - tm_h)),
        evals=(n_xi * n_p + (n_xi // 2) * (n_p // 2)),
    )

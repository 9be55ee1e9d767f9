"""Batched, vectorised adaptive Gauss-Legendre quadrature on the unit interval.

Many independent integrals over ``[0, 1]`` are refined together so every
integrand call receives one large numpy array instead of a handful of
points. The error of an interval is estimated by comparing its Gauss value
with the sum over its two halves; the refined (two-half) value is kept and
the comparison is used as a pessimistic bound for it.

Integrands may themselves carry an error bound per point (nested
integrals). That bound is integrated with the quadrature weights and added
to the interval error, so refinement never hides inner inaccuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

Integrand = Callable[[np.ndarray, np.ndarray], "tuple[np.ndarray, Optional[np.ndarray]]"]

# Intervals narrower than this are accepted regardless of their error.
MIN_WIDTH = 2.0**-48
# Tolerances are never tighter than this fraction of sum_c |I_c|; below it the
# error estimate measures cancellation roundoff, not truncation.
ROUNDOFF_FLOOR = 1e-14


@lru_cache(maxsize=None)
def gauss_legendre_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass
class BatchResult:
    values: np.ndarray  # (n_problems, n_comp)
    errors: np.ndarray  # (n_problems, n_comp)
    evals: int
    converged: np.ndarray  # (n_problems,) bool
    n_intervals: int
    tolerance: np.ndarray  # final absolute tolerance per problem (or per component)


def _apply_rule(f, owner, a, b, order):
    """Gauss rule on each interval [a_i, b_i] of problem owner_i."""
    x, w = gauss_legendre_unit(order)
    h = b - a
    pts = a[:, None] + h[:, None] * x[None, :]
    own = np.repeat(owner, order)
    vals, errs = f(own, pts.ravel())
    n_comp = vals.shape[-1]
    vals = vals.reshape(len(a), order, n_comp)
    hw = h[:, None] * w[None, :]
    val = np.einsum("ij,ijk->ik", hw, vals)
    if errs is None:
        perr = np.zeros_like(val)
    else:
        perr = np.einsum("ij,ijk->ik", hw, np.abs(errs.reshape(len(a), order, n_comp)))
    return val, perr


def _tolerance(totals, mags, rel_tol, abs_tol, combine):
    if combine == "sum":
        return np.maximum.reduce([
            rel_tol * np.abs(totals.sum(axis=1)),
            np.full(len(totals), abs_tol),
            ROUNDOFF_FLOOR * mags.sum(axis=1),
        ])
    return np.maximum.reduce([rel_tol * np.abs(totals), np.full(totals.shape, abs_tol), ROUNDOFF_FLOOR * mags])


def integrate_unit_batch(
    f: Integrand,
    n_problems: int,
    rel_tol: float,
    abs_tol: float,
    *,
    combine: str = "components",
    order: int = 10,
    n_initial: int = 4,
    max_evals: int = 10_000_000,
    spent: Optional[Callable[[], int]] = None,
) -> BatchResult:
    """Adaptively integrate ``n_problems`` vector-valued integrands over [0, 1].

    Intervals whose error is mostly inherited from the integrand's own error
    bound are not split further; such problems end unconverged and the caller
    has to tighten the integrand instead.

    Parameters
    ----------
    f : callable
        ``f(owner, v) -> (values, errors)``. `owner` (int array) says which
        problem each node `v` belongs to; `values` has shape ``(len(v), n_comp)``;
        `errors` is an absolute error bound of the same shape, or None.
    rel_tol, abs_tol : float
        Problem k is converged when its error is below
        ``max(rel_tol * |I_k|, abs_tol)``.
    combine : {"components", "sum"}
        ``"components"`` applies the criterion to each component separately;
        ``"sum"`` applies it to the sum of components and their summed errors.
    max_evals : int
        Budget of integrand points; when exhausted the current estimates are
        returned with ``converged`` False.
    spent : callable, optional
        Returns the evaluations used so far, for integrands whose cost is not
        one evaluation per node (nested integrals). Replaces the internal count
        in the budget check.
    """
    if combine not in ("components", "sum"):
        raise ValueError(f"combine must be 'components' or 'sum', got {combine!r}")
    if not rel_tol > 0 or not abs_tol >= 0:
        raise ValueError("need rel_tol > 0 and abs_tol >= 0")

    edges = np.linspace(0.0, 1.0, n_initial + 1)
    owner = np.repeat(np.arange(n_problems), n_initial)
    a = np.tile(edges[:-1], n_problems)
    b = np.tile(edges[1:], n_problems)
    val, perr = _apply_rule(f, owner, a, b, order)
    evals = len(a) * order

    # Partition of [0, 1] per problem. "Tested" intervals know their two-half
    # refinement and an error bound; untested ones only a single Gauss value.
    t_owner = np.empty(0, dtype=int)
    t_a = t_b = np.empty(0)
    t_val = t_err = t_gerr = np.empty((0, val.shape[1]))
    t_halves = np.empty((0, 2, val.shape[1]))
    t_hperr = np.empty((0, 2, val.shape[1]))
    u_owner, u_a, u_b, u_val, u_perr = owner, a, b, val, perr
    exhausted = False

    while True:
        if len(u_a):
            used = spent() if spent is not None else evals
            if used + 2 * order * len(u_a) > max_evals:
                exhausted = True
                break
            mid = 0.5 * (u_a + u_b)
            lv, lp = _apply_rule(f, u_owner, u_a, mid, order)
            rv, rp = _apply_rule(f, u_owner, mid, u_b, order)
            evals += 2 * order * len(u_a)
            refined = lv + rv
            gerr = np.abs(refined - u_val)
            err = gerr + lp + rp
            t_owner = np.concatenate([t_owner, u_owner])
            t_a = np.concatenate([t_a, u_a])
            t_b = np.concatenate([t_b, u_b])
            t_val = np.concatenate([t_val, refined])
            t_err = np.concatenate([t_err, err])
            t_gerr = np.concatenate([t_gerr, gerr])
            t_halves = np.concatenate([t_halves, np.stack([lv, rv], axis=1)])
            t_hperr = np.concatenate([t_hperr, np.stack([lp, rp], axis=1)])

        totals = np.zeros((n_problems, t_val.shape[1]))
        np.add.at(totals, t_owner, t_val)
        mags = np.zeros_like(totals)
        np.add.at(mags, t_owner, np.abs(t_val))
        width = t_b - t_a
        tol = _tolerance(totals, mags, rel_tol, abs_tol, combine)
        if combine == "sum":
            bad = t_err.sum(axis=1) > tol[t_owner] * width
        else:
            bad = np.any(t_err > tol[t_owner] * width[:, None], axis=1)
        # splitting cannot reduce error that was inherited from the integrand
        bad &= t_gerr.sum(axis=1) * 2.0 >= t_err.sum(axis=1)
        bad &= width > MIN_WIDTH
        if not bad.any():
            break

        mid = 0.5 * (t_a[bad] + t_b[bad])
        u_owner = np.repeat(t_owner[bad], 2)
        u_a = np.column_stack([t_a[bad], mid]).ravel()
        u_b = np.column_stack([mid, t_b[bad]]).ravel()
        u_val = t_halves[bad].reshape(-1, t_val.shape[1])
        u_perr = t_hperr[bad].reshape(-1, t_val.shape[1])
        keep = ~bad
        t_owner, t_a, t_b = t_owner[keep], t_a[keep], t_b[keep]
        t_val, t_err, t_gerr = t_val[keep], t_err[keep], t_gerr[keep]
        t_halves, t_hperr = t_halves[keep], t_hperr[keep]

    values = np.zeros((n_problems, val.shape[1]))
    errors = np.zeros_like(values)
    np.add.at(values, t_owner, t_val)
    np.add.at(errors, t_owner, t_err)
    if exhausted and len(u_a):
        # untested intervals contribute their Gauss value and no usable bound
        np.add.at(values, u_owner, u_val)
        np.add.at(errors, u_owner, np.abs(u_val) + u_perr)

    mags = np.zeros_like(values)
    np.add.at(mags, t_owner, np.abs(t_val))
    tol = _tolerance(values, mags, rel_tol, abs_tol, combine)
    if combine == "sum":
        ok = errors.sum(axis=1) <= tol
    else:
        ok = np.all(errors <= tol, axis=1)
    ok &= not exhausted
    return BatchResult(values, errors, evals, ok, len(t_a) + (len(u_a) if exhausted else 0), tol)

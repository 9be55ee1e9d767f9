"""Permittivity models evaluated on the positive imaginary frequency axis.

Only the values ``eps(i xi)`` enter the Lifshitz integral, and for a causal
Drude medium these are real and >= 1, so no complex permittivity is exposed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike


class BoundaryKind(enum.Enum):
    """Ideal, nondispersive substrate boundary."""

    PEC = "pec"
    PMC = "pmc"


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class ConstantEps:
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"ConstantEps.eps must be > 0, got {self.eps!r}")


@dataclass(frozen=True)
class Drude:
    """Drude medium, ``eps(w) = 1 - omega_p**2 / (w (w - i omega_c))``.

    Frequencies are angular, in rad/s.
    """

    omega_p: float
    omega_c: float = 0.0

    def __post_init__(self):
        if not self.omega_p >= 0:
            raise ValueError(f"Drude.omega_p must be >= 0, got {self.omega_p!r}")
        if not self.omega_c >= 0:
            raise ValueError(f"Drude.omega_c must be >= 0, got {self.omega_c!r}")


MaterialModel = Union[Vacuum, ConstantEps, Drude]


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise ValueError("imaginary frequency xi must be > 0")
    return xi


def eps_imag_axis(m: MaterialModel, xi: ArrayLike):
    """Permittivity ``eps(i xi)`` of `m`; accepts scalars or arrays of xi > 0.

    For a Drude medium this is ``1 + omega_p**2 / (xi (xi + omega_c))``.
    """
    xi = _check_xi(xi)
    if isinstance(m, Vacuum):
        out = np.ones_like(xi)
    elif isinstance(m, ConstantEps):
        out = np.full_like(xi, m.eps)
    elif isinstance(m, Drude):
        ratio = m.omega_p / xi
        with np.errstate(over="ignore"):
            out = 1.0 + ratio * ratio * (xi / (xi + m.omega_c))
    else:
        raise TypeError(f"unknown material model {m!r}")
    return out[()] if out.ndim == 0 else out


def inv_eps_imag_axis(m: MaterialModel, xi: ArrayLike):
    """``1 / eps(i xi)``, finite for every xi > 0.

    The reciprocal stays bounded in (0, 1] for a Drude medium even where
    ``eps`` itself would overflow, which the interface formulas rely on.
    """
    xi = _check_xi(xi)
    if isinstance(m, Vacuum):
        out = np.ones_like(xi)
    elif isinstance(m, ConstantEps):
        out = np.full_like(xi, 1.0 / m.eps)
    elif isinstance(m, Drude):
        denom = xi * (xi + m.omega_c)
        out = denom / (denom + m.omega_p**2)
    else:
        raise TypeError(f"unknown material model {m!r}")
    return out[()] if out.ndim == 0 else out

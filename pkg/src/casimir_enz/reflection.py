"""TE/TM reflection coefficients of coated PEC/PMC mirrors on the imaginary axis.

All functions take the Lifshitz variables ``xi`` (rad/s) and ``p >= 1`` and
broadcast over numpy arrays. Sign convention: a perfect electric conductor
reflects ``(te, tm) = (-1, +1)``, a perfect magnetic conductor ``(+1, -1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .constants import C
from .materials import BoundaryKind, MaterialModel, eps_imag_axis, inv_eps_imag_axis

# exp(-700) is ~1e-304; below that the substrate term is dropped outright
_MAX_DECAY_EXPONENT = 700.0


@dataclass(frozen=True)
class Layer:
    material: MaterialModel
    thickness: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"Layer.thickness must be > 0, got {self.thickness!r}")


@dataclass(frozen=True)
class MirrorStack:
    """Ideal substrate plus coatings listed from the substrate outward."""

    substrate: BoundaryKind
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))

    @classmethod
    def bare(cls, substrate: BoundaryKind) -> "MirrorStack":
        return cls(substrate)

    @classmethod
    def coated(cls, substrate: BoundaryKind, layers: Sequence[Layer]) -> "MirrorStack":
        return cls(substrate, tuple(layers))


class ReflectionPair(NamedTuple):
    te: float | np.ndarray
    tm: float | np.ndarray


def _check_p(p):
    p = np.asarray(p, dtype=float)
    if np.any(~(p >= 1)):
        raise ValueError("wavevector variable p must be >= 1")
    return p


def _scalar(a):
    return a[()] if isinstance(a, np.ndarray) and a.ndim == 0 else a


def s_param(p: ArrayLike, eps: ArrayLike):
    """``sqrt(p**2 - 1 + eps)``."""
    p = _check_p(p)
    eps = np.asarray(eps, dtype=float)
    if np.any(~(eps > 0)):
        raise ValueError("permittivity must be > 0")
    return _scalar(np.sqrt((p - 1.0) * (p + 1.0) + eps))


def _interface(q, eps_a, inv_a, eps_b, inv_b):
    # Rationalised forms of (s_a - s_b)/(s_a + s_b) and
    # (eps_b s_a - eps_a s_b)/(eps_b s_a + eps_a s_b): no cancellation when
    # s_a ~ s_b ~ p is large, and no overflow in eps_a * eps_b.
    s_a = np.sqrt(q + eps_a)
    s_b = np.sqrt(q + eps_b)
    te = (eps_a - eps_b) / (s_a + s_b) ** 2
    tm = (inv_a - inv_b) * (q * (inv_a + inv_b) + 1.0) / (s_a * inv_a + s_b * inv_b) ** 2
    return te, tm


def fresnel_interface(p: ArrayLike, eps_from: ArrayLike, eps_to: ArrayLike) -> ReflectionPair:
    """Reflection pair of a wave in medium `eps_from` hitting medium `eps_to`."""
    p = _check_p(p)
    eps_a = np.asarray(eps_from, dtype=float)
    eps_b = np.asarray(eps_to, dtype=float)
    if np.any(~(eps_a > 0)) or np.any(~(eps_b > 0)):
        raise ValueError("permittivities must be > 0")
    te, tm = _interface((p - 1.0) * (p + 1.0), eps_a, 1.0 / eps_a, eps_b, 1.0 / eps_b)
    return ReflectionPair(_scalar(te), _scalar(tm))


def boundary_reflection(b: BoundaryKind) -> ReflectionPair:
    if b is BoundaryKind.PEC:
        return ReflectionPair(-1.0, 1.0)
    if b is BoundaryKind.PMC:
        return ReflectionPair(1.0, -1.0)
    raise TypeError(f"unknown boundary kind {b!r}")


def stack_reflection(stack: MirrorStack, xi: ArrayLike, p: ArrayLike) -> ReflectionPair:
    """Gap-facing reflection pair of `stack` at imaginary frequency `xi`.

    Layers are folded in from the substrate outward with the two-interface
    (Airy) composition ``r <- (r_if + r phi) / (1 + r_if r phi)``, where
    ``phi = exp(-2 (xi/c) s d)`` is the round-trip decay through the layer.
    """
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise ValueError("imaginary frequency xi must be > 0")
    p = _check_p(p)
    xi, p = np.broadcast_arrays(xi, p)
    te0, tm0 = boundary_reflection(stack.substrate)
    if not stack.layers:
        return ReflectionPair(_scalar(np.full(xi.shape, te0)), _scalar(np.full(xi.shape, tm0)))

    q = (p - 1.0) * (p + 1.0)
    k0 = xi / C
    te = np.full(xi.shape, te0)
    tm = np.full(xi.shape, tm0)
    n = len(stack.layers)
    for j, layer in enumerate(stack.layers):
        eps_j = eps_imag_axis(layer.material, xi)
        inv_j = inv_eps_imag_axis(layer.material, xi)
        if j + 1 < n:
            outer = stack.layers[j + 1].material
            eps_o = eps_imag_axis(outer, xi)
            inv_o = inv_eps_imag_axis(outer, xi)
        else:
            eps_o = np.ones_like(xi)
            inv_o = eps_o
        r_te, r_tm = _interface(q, eps_o, inv_o, eps_j, inv_j)
        expo = 2.0 * k0 * np.sqrt(q + eps_j) * layer.thickness
        phi = np.where(expo > _MAX_DECAY_EXPONENT, 0.0, np.exp(-np.minimum(expo, _MAX_DECAY_EXPONENT)))
        te_phi = te * phi
        tm_phi = tm * phi
        te = (r_te + te_phi) / (1.0 + r_te * te_phi)
        tm = (r_tm + tm_phi) / (1.0 + r_tm * tm_phi)
    return ReflectionPair(_scalar(te), _scalar(tm))

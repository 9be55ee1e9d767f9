"""Independent reference computations used only by the tests."""

import numpy as np
from scipy import integrate

from casimir_enz.constants import C, HBAR
from casimir_enz.materials import BoundaryKind, eps_imag_axis


def transfer_matrix_reflection(stack, xi, p):
    """Gap-side (te, tm) reflection from a direct 2x2 field propagation.

    Tracks (psi, psi'/q) from the substrate outward, with psi = E_y, q = 1
    (TE) or psi = H_y, q = eps (TM). In the gap psi = e^{kz} + r e^{-kz}.
    """
    k0 = xi / C
    out = []
    for pol in ("te", "tm"):
        pec = stack.substrate is BoundaryKind.PEC
        dirichlet = pec if pol == "te" else not pec
        vec = np.array([0.0, 1.0]) if dirichlet else np.array([1.0, 0.0])
        for layer in stack.layers:
            eps = float(eps_imag_axis(layer.material, xi))
            kap = k0 * np.sqrt(p * p - 1.0 + eps)
            q = 1.0 if pol == "te" else eps
            ch, sh = np.cosh(kap * layer.thickness), np.sinh(kap * layer.thickness)
            vec = np.array([[ch, q / kap * sh], [kap / q * sh, ch]]) @ vec
        kv = k0 * p
        a, b = vec
        out.append((kv * a - b) / (kv * a + b))
    return tuple(out)


def ideal_pressure_by_series(gap, product):
    """Pressure of a cavity whose reflection products are the constant `product`.

    Expands D e^{-t}/(1 - D e^{-t}) = sum_n D^n e^{-n t}, integrates each term
    in closed form and sums the series numerically.
    """
    n = np.arange(1, 200_000, dtype=float)
    series = np.sum(product**n / n**4)
    # two polarizations, int_1^inf p^2 (6 / (n p)^4) dp = 2 / n^4 per unit x^3 etc.
    return -HBAR * C / (32 * np.pi**2 * gap**4) * 2 * 6 * series


def thermal_integral():
    """int_0^inf t^3 / (e^t - 1) dt by adaptive quadrature."""
    val, _ = integrate.quad(lambda t: t**3 / np.expm1(t) if t < 700 else 0.0, 0, np.inf, epsabs=0, epsrel=1e-13)
    return val

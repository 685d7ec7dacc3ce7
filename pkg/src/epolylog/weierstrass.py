"""Weierstrass functions on the lattice Z + Z*tau via q-series.

Conventions: eta1 is the quasi-period with eta1(i) = +pi and
zeta(z+1) - zeta(z) = eta1; eta2 = eta1*tau - 2*pi*i (Legendre relation with
the period pair (1, tau)). theta_normalized is the odd Jacobi theta scaled so
that theta(z) = z + O(z^3) at the origin; sigma(z) = exp(eta1 z^2/2) theta(z).

All evaluators reduce z into the fundamental cell around 0 and apply exact
quasi-period laws, so accuracy is uniform over the plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import DiffConfig, finite_diff


class PoleProximityError(ValueError):
    """Evaluation point is too close to a pole (within 1e-8 of the lattice)."""


class ConvergenceError(ArithmeticError):
    """Series truncation cannot reach the requested accuracy."""


@dataclass(frozen=True)
class ModuliPoint:
    """A point tau of the upper half plane."""

    tau: complex

    def __post_init__(self) -> None:
        if not (self.tau.imag > 0.0):
            raise ValueError(f"Im tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class QuasiPeriods:
    eta1: complex
    eta2: complex


def _tau_of(tau) -> complex:
    t = complex(tau.tau) if isinstance(tau, ModuliPoint) else complex(tau)
    if not (t.imag > 0.0):
        raise ValueError(f"Im tau must be positive, got {t}")
    return t


def _nterms(im_tau: float) -> int:
    # |q|^n below 1e-19 after the reduced-z factor e^{+-pi Im tau}
    n = int(math.ceil(45.0 / (2.0 * math.pi * im_tau))) + 6
    if n > 5000:
        raise ConvergenceError(f"Im tau = {im_tau} too small for the q-series")
    return n


def reduce_to_cell(z, tau) -> tuple:
    """Write z = z0 + m + n*tau with m = round(alpha), n = round(beta) for the
    real coordinates z = alpha + beta*tau. Works elementwise on arrays."""
    t = _tau_of(tau)
    z = np.asarray(z, dtype=complex)
    beta = z.imag / t.imag
    alpha = z.real - beta * t.real
    m = np.round(alpha)
    n = np.round(beta)
    z0 = z - m - n * t
    return z0, m.astype(int), n.astype(int)


def lattice_dist(z, tau) -> float:
    """Distance from z to the lattice point m + n*tau it reduces to."""
    z0, _, _ = reduce_to_cell(z, tau)
    return float(np.min(np.abs(z0))) if z0.shape else float(abs(z0))


def _theta_raw(z0: np.ndarray, t: complex) -> np.ndarray:
    # z0 must already lie in the fundamental cell
    q = cmath.exp(2j * cmath.pi * t)
    e = np.exp(2j * np.pi * z0)
    prod = np.ones_like(e)
    qn = 1.0 + 0.0j
    for _ in range(_nterms(t.imag)):
        qn *= q
        prod *= (1.0 - qn * e) * (1.0 - qn / e) / (1.0 - qn) ** 2
    return np.sin(np.pi * z0) / np.pi * prod


def _theta_logderiv_raw(z0: np.ndarray, t: complex) -> np.ndarray:
    q = cmath.exp(2j * cmath.pi * t)
    e = np.exp(2j * np.pi * z0)
    acc = np.zeros_like(e)
    qn = 1.0 + 0.0j
    for _ in range(_nterms(t.imag)):
        qn *= q
        u = qn / e
        v = qn * e
        acc += u / (1.0 - u) - v / (1.0 - v)
    return np.pi / np.tan(np.pi * z0) + 2j * np.pi * acc


def _theta_logderiv2_raw(z0: np.ndarray, t: complex) -> np.ndarray:
    q = cmath.exp(2j * cmath.pi * t)
    e = np.exp(2j * np.pi * z0)
    acc = np.zeros_like(e)
    qn = 1.0 + 0.0j
    for _ in range(_nterms(t.imag)):
        qn *= q
        u = qn / e
        v = qn * e
        acc += u / (1.0 - u) ** 2 + v / (1.0 - v) ** 2
    return -np.pi**2 / np.sin(np.pi * z0) ** 2 + 4.0 * np.pi**2 * acc


def _theta_logderiv3_raw(z0: np.ndarray, t: complex) -> np.ndarray:
    q = cmath.exp(2j * cmath.pi * t)
    e = np.exp(2j * np.pi * z0)
    acc = np.zeros_like(e)
    qn = 1.0 + 0.0j
    for _ in range(_nterms(t.imag)):
        qn *= q
        u = qn / e
        v = qn * e
        acc += v * (1.0 + v) / (1.0 - v) ** 3 - u * (1.0 + u) / (1.0 - u) ** 3
    s = np.sin(np.pi * z0)
    return 2.0 * np.pi**3 * np.cos(np.pi * z0) / s**3 + 8j * np.pi**3 * acc


def theta_normalized(z, tau):
    """Normalized odd theta: simple zeros exactly on the lattice, slope 1 at 0.

    Satisfies theta(z+1) = -theta(z) and
    theta(z+tau) = -exp(-2*pi*i*(z + tau/2)) * theta(z); the general law for
    z + n*tau + m carries the sign (-1)^(m+n+mn).
    """
    t = _tau_of(tau)
    z0, m, n = reduce_to_cell(z, t)
    omega = n * t + m
    sign = np.where((m + n + m * n) % 2 == 0, 1.0, -1.0)
    fac = sign * np.exp(-2j * np.pi * n * (z0 + omega / 2.0))
    out = fac * _theta_raw(z0, t)
    return out if out.shape else complex(out)


def theta_logderiv(z, tau):
    """d/dz log theta_normalized, with the exact -2*pi*i*n translation shift."""
    t = _tau_of(tau)
    z0, _, n = reduce_to_cell(z, t)
    out = _theta_logderiv_raw(z0, t) - 2j * np.pi * n
    return out if out.shape else complex(out)


@lru_cache(maxsize=4096)
def _eisenstein_weights(t: complex) -> tuple:
    # Lambert series for E2, E4, E6; absolutely convergent for |q| < 1
    q = cmath.exp(2j * cmath.pi * t)
    e2 = 1.0 + 0.0j
    e4 = 1.0 + 0.0j
    e6 = 1.0 + 0.0j
    qn = 1.0 + 0.0j
    for k in range(1, _nterms(t.imag) + 2):
        qn *= q
        lam = qn / (1.0 - qn)
        e2 -= 24.0 * k * lam
        e4 += 240.0 * k**3 * lam
        e6 -= 504.0 * k**5 * lam
    return e2, e4, e6


def eta_periods(tau) -> QuasiPeriods:
    """Quasi-periods of zeta for the period pair (1, tau).

    eta1 = (pi^2/3) E2(q); eta2 = eta1*tau - 2*pi*i, which is the Legendre
    relation eta1*tau - eta2*1 = 2*pi*i.
    """
    t = _tau_of(tau)
    e2, _, _ = _eisenstein_weights(t)
    eta1 = (cmath.pi**2 / 3.0) * e2
    return QuasiPeriods(eta1=eta1, eta2=eta1 * t - 2j * cmath.pi)


def sigma(z: complex, tau) -> complex:
    """Weierstrass sigma: odd entire function, sigma(z) = z + O(z^5),
    sigma(z+1) = -sigma(z) exp(eta1 (z + 1/2))."""
    t = _tau_of(tau)
    eta1 = eta_periods(t).eta1
    return cmath.exp(eta1 * z * z / 2.0) * theta_normalized(z, t)


def zeta_fn(z: complex, tau) -> complex:
    """Weierstrass zeta: zeta(z) = 1/z + O(z^3), zeta(z+1) - zeta(z) = eta1."""
    t = _tau_of(tau)
    if lattice_dist(z, t) < 1e-8:
        raise PoleProximityError(f"z = {z} within 1e-8 of the lattice")
    eta1 = eta_periods(t).eta1
    return complex(theta_logderiv(z, t)) + eta1 * z


def wp(z: complex, tau) -> tuple[complex, complex]:
    """Weierstrass p-function and its derivative, (p(z), p'(z)).

    p = -(log theta)'' - eta1; both values are computed from the reduced
    point since p and p' are fully periodic.
    """
    t = _tau_of(tau)
    if lattice_dist(z, t) < 1e-8:
        raise PoleProximityError(f"z = {z} within 1e-8 of the lattice")
    z0, _, _ = reduce_to_cell(z, t)
    eta1 = eta_periods(t).eta1
    p = -complex(_theta_logderiv2_raw(z0, t)) - eta1
    pprime = -complex(_theta_logderiv3_raw(z0, t))
    return p, pprime


def g_invariants(tau) -> tuple[complex, complex]:
    """Modular invariants (g2, g3): p'^2 = 4 p^3 - g2 p - g3."""
    t = _tau_of(tau)
    _, e4, e6 = _eisenstein_weights(t)
    g2 = (4.0 * cmath.pi**4 / 3.0) * e4
    g3 = (8.0 * cmath.pi**6 / 27.0) * e6
    return g2, g3


def eta1_prime(tau, method: str = "finite_diff", cfg: DiffConfig | None = None) -> complex:
    """d(eta1)/dtau. Default backend differentiates the q-series numerically;
    method="qseries" uses the exact weight-4 identity
    eta1' = (pi^3 i / 18)(E2^2 - E4)."""
    t = _tau_of(tau)
    if method == "qseries":
        e2, e4, _ = _eisenstein_weights(t)
        return (cmath.pi**3 * 1j / 18.0) * (e2 * e2 - e4)
    if method == "finite_diff":
        cfg = cfg or DiffConfig(step=1e-5, richardson_levels=2)
        return finite_diff(lambda s: eta_periods(s).eta1, t, cfg)
    raise ValueError(f"unknown method {method!r}")

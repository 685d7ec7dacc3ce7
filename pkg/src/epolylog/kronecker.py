"""The Kronecker theta kernel J(z, w, tau) and its isogeny variants.

J(z, w) = theta(z + w) / (theta(z) theta(w)) has a simple pole along w = 0
with residue 1, satisfies the mixed heat equation
2*pi*i dJ/dtau = d^2 J / dz dw, and transforms by the z-independent factor
exp(-2*pi*i*c*w) under z -> z + c*tau + d. The degree-D variant
D^2 J(z, w) - D J(Dz, w/D) is analytic at w = 0; its Taylor coefficients
s_k feed the polylogarithm forms, and s_0 is the logarithmic derivative of
the Kato-Siegel theta function.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .numerics import CauchyConfig, DiffConfig, cauchy_coeffs, finite_diff
from .weierstrass import (
    ModuliPoint,
    PoleProximityError,
    _tau_of,
    lattice_dist,
    theta_normalized,
)

MAX_COEFF_ORDER = 16


class StencilMarginError(ValueError):
    """A finite-difference stencil would come too close to the polar locus."""


@dataclass(frozen=True)
class KroneckerPoint:
    """Arguments (z, w) for the kernel at a fixed tau; z and w must keep a
    distance of 1e-8 from the lattice."""

    z: complex
    w: complex
    tau: ModuliPoint

    def __post_init__(self) -> None:
        t = _tau_of(self.tau)
        for name, x in (("z", self.z), ("w", self.w)):
            if lattice_dist(x, t) < 1e-8:
                raise PoleProximityError(f"{name} = {x} within 1e-8 of the lattice")


def theta(z, tau):
    """Normalized odd theta (zeros exactly on the lattice, slope 1 at 0)."""
    return theta_normalized(z, tau)


def _J(z, w, t: complex):
    # vectorized over either argument
    return theta_normalized(np.asarray(z) + np.asarray(w), t) / (
        theta_normalized(z, t) * theta_normalized(w, t)
    )


def jacobi_J(p: KroneckerPoint) -> complex:
    """Kernel value J(z, w, tau). Symmetric in (z, w); w*J -> 1 as w -> 0."""
    return complex(_J(p.z, p.w, _tau_of(p.tau)))


def quasi_period_factor(c: int, d: int, p: KroneckerPoint) -> complex:
    """Multiplier chi with J(z + c*tau + d, w) = chi * J(z, w): closed form
    exp(-2*pi*i*c*w). Independent of z and of d."""
    return cmath.exp(-2j * cmath.pi * c * p.w)


def heat_residual(p: KroneckerPoint, cfg: DiffConfig | None = None) -> float:
    """|2*pi*i dJ/dtau - d^2 J/dz dw| / max(1, |J|) by nested central
    differences. The default step 1e-3 balances roundoff amplification of
    the nested stencil against truncation."""
    cfg = cfg or DiffConfig(step=1e-3, richardson_levels=2)
    t = _tau_of(p.tau)
    margin = 10.0 * cfg.step
    for name, x in (("z", p.z), ("w", p.w), ("z+w", p.z + p.w)):
        if lattice_dist(x, t) < margin:
            raise StencilMarginError(f"{name} within {margin} of the polar locus")

    d_tau = finite_diff(lambda s: complex(_J(p.z, p.w, s)), t, cfg)

    def dw_at(zz: complex) -> complex:
        return finite_diff(lambda ww: complex(_J(zz, ww, t)), p.w, cfg)

    d_zw = finite_diff(dw_at, p.z, cfg)
    val = complex(_J(p.z, p.w, t))
    return abs(2j * cmath.pi * d_tau - d_zw) / max(1.0, abs(val))


@dataclass(frozen=True)
class DVariantCoeffs:
    """Taylor coefficients s_0..s_n of w -> D^2 J(z, w) - D J(Dz, w/D)."""

    D: int
    z: complex
    tau: complex
    coeffs: tuple


def default_cauchy_config(tau, D: int) -> CauchyConfig:
    # contour must stay inside the disc punctured by the nearest D-torsion
    # offset (c*tau + d)/D; min(1, |tau|)/D bounds its distance from 0
    t = _tau_of(tau)
    torsion_min = min(1.0, abs(t)) / D
    return CauchyConfig(radius=min(0.1, torsion_min / 2.0), samples=256)


def s_coeffs(z: complex, tau, D: int, n: int, cfg: CauchyConfig | None = None) -> DVariantCoeffs:
    """Coefficients s_k, k = 0..n, of the pole-free degree-D kernel variant.

    s_0 = D^2 zeta(z) - D zeta(Dz); rescaling w -> Dw multiplies s_k by D^k.
    Contour extraction with the aliasing self-check from CauchyConfig.
    """
    if n < 0 or n > MAX_COEFF_ORDER:
        raise ValueError(f"coefficient order must be in 0..{MAX_COEFF_ORDER}, got {n}")
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    t = _tau_of(tau)
    for name, x in (("z", z), ("Dz", D * z)):
        if lattice_dist(x, t) < 1e-8:
            raise PoleProximityError(f"{name} within 1e-8 of the lattice")
    cfg = cfg or default_cauchy_config(t, D)

    def f(w):
        return D * D * _J(z, w, t) - D * _J(D * z, w / D, t)

    coeffs = cauchy_coeffs(f, n, cfg)
    return DVariantCoeffs(D=D, z=z, tau=t, coeffs=tuple(coeffs))


def dlog_kato_siegel(z: complex, tau, D: int, cfg: CauchyConfig | None = None) -> complex:
    """Logarithmic derivative of the Kato-Siegel theta function: the constant
    term s_0 = D^2 zeta(z) - D zeta(Dz), computed by contour extraction.

    Meromorphic with residue D^2 - 1 at lattice points and residue -1 at the
    nonzero D-torsion points; z must stay 1e-8 away from all of these.
    """
    t = _tau_of(tau)
    if lattice_dist(D * z, t) / D < 1e-8:
        raise PoleProximityError(f"z = {z} within 1e-8 of the D-torsion locus")
    return s_coeffs(z, t, D, 0, cfg).coeffs[0]


def distribution_residual(p: KroneckerPoint, D: int) -> float:
    """Residual of the degree-D distribution law

      D * sum_{(c,d) mod D, != (0,0)} e^{2 pi i c z} J(Dz, w + (c tau + d)/D)
        = D^2 J(z, Dw) - D J(Dz, w),

    normalized by max(1, |J(z, w)|). Zero sum for D = 1 (residual of
    0 = D^2 J - D J collapses to 0 exactly)."""
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    if D == 1:
        return 0.0
    t = _tau_of(p.tau)
    z, w = p.z, p.w
    if lattice_dist(D * w, t) / D < 1e-6:
        raise PoleProximityError("w within 1e-6 of the D-torsion locus")
    if lattice_dist(D * z, t) < 1e-6:
        raise PoleProximityError("Dz within 1e-6 of the lattice")
    lhs = 0.0 + 0.0j
    for c in range(D):
        for d in range(D):
            if c == 0 and d == 0:
                continue
            lhs += cmath.exp(2j * cmath.pi * c * z) * complex(
                _J(D * z, w + (c * t + d) / D, t)
            )
    lhs *= D
    rhs = D * D * complex(_J(z, D * w, t)) - D * complex(_J(D * z, w, t))
    return abs(lhs - rhs) / max(1.0, abs(complex(_J(z, w, t))))

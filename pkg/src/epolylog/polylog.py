"""Polylogarithm 1-forms with values in the logarithm fibers, and their
specialization at torsion points to level-N Eisenstein series.

The relative form at level n is

  l_n = sum_{k<=n} k! s_k w^[k,0] dz,

built from the degree-D kernel coefficients s_k; the absolute form adds

  L_n = l_n + sum_{k<=n} (k+1)! s_{k+1} / (2 pi i) w^[k,0] dtau

and is closed for the absolute connection. Evaluating the coefficient tower
at an N-torsion point collapses, for each k, to the smoothed weight-(k+1)
Eisenstein series D^2 F^(k+1)_(a,b) - D^(1-k) F^(k+1)_(Da,Db); the sum
computed here is

  (-1)^k k! D^(1-k) sum_{(c,d) mod D != (0,0)} sum_{(m,n) in Z^2}
      zeta_N^((Dm+c) b - (Dn+d) a) / ((m + c/D) tau + (n + d/D))^(k+1),

with the character on the actual lattice coordinates and the inner origin
included (only the global coset (0,0) is removed).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eisenstein import ConvergenceModeError, _q_eff, _row_count, _row_real, _T_rows, _zN
from .kronecker import s_coeffs
from .logsheaf import LogFiber, LogValuedForm, abs_connection, _fd_fiber, basis_indices
from .numerics import CauchyConfig, DiffConfig, kahan_sum
from .weierstrass import ModuliPoint, PoleProximityError, _tau_of, lattice_dist

TWO_PI_I = 2j * cmath.pi


@dataclass(frozen=True)
class TorsionLabel:
    """N-torsion label (a/N, b/N) with isogeny degree D.

    (a, b) must be nonzero mod N. D = 1 is allowed as the degenerate case
    (empty coset sum)."""

    a: int
    b: int
    N: int
    D: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.a % self.N == 0 and self.b % self.N == 0:
            raise ValueError(f"(a, b) = {(self.a, self.b)} is (0,0) mod {self.N}")
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")


def l_form(z: complex, tau, D: int, n: int, cfg: CauchyConfig | None = None) -> LogValuedForm:
    """Relative polylogarithm form at level n: dz coefficients k! s_k on the
    rows w^[k,0], no dtau part."""
    t = _tau_of(tau)
    sc = s_coeffs(z, t, D, n, cfg)
    dz = {(k, 0): math.factorial(k) * sc.coeffs[k] for k in range(n + 1)}
    return LogValuedForm(n=n, dz=LogFiber(n, dz), dtau=LogFiber.zero(n))


def L_form(z: complex, tau, D: int, n: int, cfg: CauchyConfig | None = None) -> LogValuedForm:
    """Absolute polylogarithm form at level n: the relative coefficients plus
    the dtau tower (k+1)! s_(k+1) / (2 pi i) on w^[k,0]. Identical floats to
    ks_lift of the level-(n+1) relative form."""
    t = _tau_of(tau)
    sc = s_coeffs(z, t, D, n + 1, cfg)
    dz = {(k, 0): math.factorial(k) * sc.coeffs[k] for k in range(n + 1)}
    dtau = {(k, 0): math.factorial(k + 1) * sc.coeffs[k + 1] / TWO_PI_I for k in range(n + 1)}
    return LogValuedForm(n=n, dz=LogFiber(n, dz), dtau=LogFiber(n, dtau))


def closedness_residual(
    z: complex,
    tau,
    D: int,
    n: int,
    cfg: DiffConfig | None = None,
    cauchy: CauchyConfig | None = None,
    eta1_prime_method: str = "finite_diff",
) -> float:
    """Max coefficient of d(L_n) + nabla ^ L_n, over the level-n basis,
    normalized by the largest input coefficient.

    With L = P dz + Q dtau the dz^dtau component is
    -dP/dtau - nabla_tau(P) + dQ/dz + nabla_z(Q); closedness of the absolute
    form makes every basis coefficient cancel. P and Q depend on (z, tau)
    through the kernel coefficients, differentiated here by central stencils.
    """
    cfg = cfg or DiffConfig(step=1e-4, richardson_levels=2)
    t = _tau_of(tau)
    margin = 10.0 * cfg.step
    if lattice_dist(z, t) < margin or lattice_dist(D * z, t) < D * margin:
        raise PoleProximityError(f"z = {z} too close to the polar locus for the stencil")
    order = basis_indices(n)
    form = L_form(z, t, D, n, cauchy)
    P, Q = form.dz, form.dtau
    dP = _fd_fiber(lambda s: L_form(z, s, D, n, cauchy).dz, t, cfg, n, order)
    dQ = _fd_fiber(lambda x: L_form(x, t, D, n, cauchy).dtau, z, cfg, n, order)
    nab_tau_P = abs_connection(P, t, eta1_prime_method).dtau
    nab_z_Q = abs_connection(Q, t, eta1_prime_method).dz
    resid = dP.scale(-1.0).add(nab_tau_P.scale(-1.0)).add(dQ).add(nab_z_Q)
    scale = max(form.max_abs(), 1e-300)
    return resid.max_abs() / scale


def _coset_sum_lipschitz(label: TorsionLabel, t: complex, k: int) -> complex:
    a, b, N, D = label.a, label.b, label.N, label.D
    s = k + 1
    xi = Fraction(-D * a, N)
    xi_neg = Fraction(D * a, N)
    total = 0.0 + 0.0j
    M = _row_count(t.imag, _q_eff(xi, xi_neg), extra=4)
    for c in range(D):
        for d in range(D):
            if c == 0 and d == 0:
                continue
            const = _zN(N, c * b - d * a)
            m = np.arange(-M, M + 1)
            x = (m + c / D) * t + d / D
            mchar = np.array([_zN(N, D * b * mm) for mm in m])
            if c == 0:
                real_row = _row_real(d / D, xi, s)
                keep = m != 0
                rows = _T_rows(x[keep], xi, s)
                coset = real_row + complex(np.sum(mchar[keep] * rows))
            else:
                coset = complex(np.sum(mchar * _T_rows(x, xi, s)))
            total += const * coset
    return total


def _coset_sum_naive(label: TorsionLabel, t: complex, k: int, trunc) -> complex:
    a, b, N, D = label.a, label.b, label.N, label.D
    s = k + 1
    if trunc.ordering == "box" and s < 3:
        raise ConvergenceModeError(
            f"inner weight {s} is conditionally convergent; box ordering is not a sum"
        )
    R = trunc.shell_radius
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    total = 0.0 + 0.0j
    for c in range(D):
        for d in range(D):
            if c == 0 and d == 0:
                continue
            if trunc.ordering == "box":
                n = np.arange(-R, R + 1)
                nchar = roots[(-(D * n + d) * a) % N]
                rows = []
                for m in range(-R, R + 1):
                    den = ((m + c / D) * t + n + d / D) ** s
                    rows.append(
                        roots[((D * m + c) * b) % N] * complex(np.sum(nchar / den))
                    )
                coset = kahan_sum(rows) if trunc.compensated else complex(np.sum(np.array(rows)))
            else:
                coset = _coset_rows_eisenstein(a, b, N, D, c, d, t, s, R, trunc.compensated)
            total += coset
    return total


def _coset_rows_eisenstein(a, b, N, D, c, d, t, s, R, compensated) -> complex:
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    n = np.arange(1, R + 1)
    char_pos = roots[(-(D * n + d) * a) % N]
    char_neg = roots[(-(-D * n + d) * a) % N]
    char_0 = roots[(-d * a) % N]

    def row(m: int) -> complex:
        base = (m + c / D) * t + d / D
        inner = char_0 / base**s + complex(
            np.sum(char_pos / (base + n) ** s + char_neg / (base - n) ** s)
        )
        return roots[((D * m + c) * b) % N] * inner

    gen = (row(0) if m == 0 else row(m) + row(-m) for m in range(R + 1))
    return kahan_sum(gen) if compensated else sum(gen)


def specialize_eisenstein(
    label: TorsionLabel, tau, k: int, mode: str = "lipschitz", trunc=None
) -> complex:
    """Torsion specialization of the level-k polylogarithm coefficient: the
    coset lattice sum described in the module docstring, equal to the
    smoothed Eisenstein series D^2 F^(k+1)_(a,b) - D^(1-k) F^(k+1)_(Da,Db).

    k >= 2 gives absolutely convergent inner sums (any mode). k = 1 is
    conditionally convergent: lipschitz rows or the naive eisenstein
    ordering. k = 0 only converges in the naive eisenstein ordering.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    t = _tau_of(tau)
    D = label.D
    if D == 1:
        return 0.0 + 0.0j
    prefac = (-1) ** k * math.factorial(k) * float(D) ** (1 - k)
    if mode == "lipschitz":
        if k < 1:
            raise ConvergenceModeError(
                "weight-1 inner rows are principal values; use the naive "
                "eisenstein ordering for k = 0"
            )
        return prefac * _coset_sum_lipschitz(label, t, k)
    if mode == "naive":
        if trunc is None:
            raise ValueError("naive mode requires an explicit LatticeTruncation")
        return prefac * _coset_sum_naive(label, t, k, trunc)
    raise ValueError(f"unknown mode {mode!r}")

"""Level-N Eisenstein series of weight k with character parameters (a, b):

  F_(a,b)^(k)(tau) = (-1)^(k+1) (k-1)! * sum'_{(m,n)} zeta_N^(mb - na) / (m tau + n)^k

(primed sum: origin excluded). Two evaluators: "naive" truncated lattice sums
in the ordering fixed by LatticeTruncation, and "lipschitz" row summation,
which converts each row m to an exponential sum

  T(x, xi, s) = sum_n e^(2 pi i xi n)/(x+n)^s
             = (-2 pi i)^s/(s-1)! sum_{l>=1} (l-xi)^(s-1) e^(2 pi i (l-xi) x)

for Im x > 0 (minus pi*i extra when s = 1, xi = 0; Im x < 0 by the reflection
T(x,xi,s) = (-1)^s T(-x, -xi mod 1, s)). Rows with real x and the m = 0
polylogarithm row are summed exactly through Hurwitz zeta values at rational
arguments. The row decomposition realizes the eisenstein summation order, so
it is also valid at the conditionally convergent weights k <= 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .numerics import LatticeTruncation, kahan_sum
from .weierstrass import ModuliPoint, _tau_of


class ConvergenceModeError(ValueError):
    """Requested summation mode cannot converge at this weight."""


class DegenerateLabelError(ValueError):
    """Character label congruent to (0, 0) mod N."""


@dataclass(frozen=True)
class EisensteinQuery:
    """Weight-k level-N query with character (a, b) != (0,0) mod N."""

    a: int
    b: int
    N: int
    k: int
    tau: complex
    mode: str = "lipschitz"
    trunc: LatticeTruncation | None = None

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.a % self.N == 0 and self.b % self.N == 0:
            raise DegenerateLabelError(f"(a, b) = {(self.a, self.b)} is (0,0) mod {self.N}")
        if self.mode not in ("naive", "lipschitz"):
            raise ValueError(f"unknown mode {self.mode!r}")
        _tau_of(self.tau)


def _roots_of_unity(N: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(N) / N)


def _zN(N: int, e: int) -> complex:
    return complex(cmath.exp(2j * cmath.pi * (e % N) / N))


def _polylog_root(s: int, xi: Fraction) -> complex:
    """Li_s(e^{2 pi i xi}) for rational xi, s >= 1 (s >= 2 when xi = 0)."""
    p, q = xi.numerator % xi.denominator, xi.denominator
    if p == 0:
        if s < 2:
            raise ValueError("Li_1(1) diverges")
        return complex(hurwitz_zeta(s, 1.0))
    if s == 1:
        return -cmath.log(1.0 - cmath.exp(2j * cmath.pi * p / q))
    r = np.arange(1, q + 1)
    um = np.exp(2j * np.pi * p * r / q)
    return complex(np.sum(um * hurwitz_zeta(s, r / q)) / q**s)


def _row_real(x: float, xi: Fraction, s: int) -> complex:
    """sum_n e^{2 pi i xi n}/(x+n)^s for real 0 < x < 1, rational xi, s >= 2.

    Split n mod q and reduce to Hurwitz zeta values; exact up to roundoff.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"need 0 < x < 1, got {x}")
    if s < 2:
        raise ConvergenceModeError("real row needs absolute convergence (s >= 2)")
    p, q = xi.numerator % xi.denominator, xi.denominator
    r = np.arange(q)
    w = np.exp(2j * np.pi * p * r / q)
    pos = np.sum(w * hurwitz_zeta(s, (r + x) / q)) / q**s
    neg = (-1) ** s * np.sum(np.conj(w) * np.exp(-2j * np.pi * p / q)
                             * hurwitz_zeta(s, (r + 1.0 - x) / q)) / q**s
    return complex(pos + neg)


def _T_batch(x: np.ndarray, xi: float, s: int) -> np.ndarray:
    """T(x, xi, s) for an array of x with Im x > 0, xi in [0, 1)."""
    x = np.asarray(x, dtype=complex)
    if x.size == 0:
        return x
    im_min = float(np.min(x.imag))
    if im_min <= 0.0:
        raise ValueError("batch rows need Im x > 0")
    L = int(math.ceil(48.0 / (2.0 * math.pi * im_min))) + s + 6
    freq = np.arange(1, L + 1) - xi
    phase = np.exp(2j * np.pi * np.outer(x, freq))
    out = phase @ (freq ** (s - 1)) * (-2j * np.pi) ** s / math.factorial(s - 1)
    if s == 1 and xi == 0.0:
        out = out - 1j * np.pi
    return out


def _T_rows(x: np.ndarray, xi: Fraction, s: int) -> np.ndarray:
    """T over rows with arbitrary nonzero Im x, via reflection where needed."""
    x = np.asarray(x, dtype=complex)
    out = np.empty(x.shape, dtype=complex)
    up = x.imag > 0
    xi_up = float(xi % 1)
    xi_dn = float((-xi) % 1)
    if np.any(up):
        out[up] = _T_batch(x[up], xi_up, s)
    if np.any(~up):
        out[~up] = (-1) ** s * _T_batch(-x[~up], xi_dn, s)
    return out


def _row_count(im_tau: float, q_eff: float, extra: int = 3) -> int:
    return int(math.ceil(45.0 / (2.0 * math.pi * im_tau * q_eff))) + extra


def _q_eff(*xis: Fraction) -> float:
    # slowest decaying exponential frequency across the row forms used
    vals = []
    for xi in xis:
        f = float(xi % 1)
        vals.append(f if f > 0.0 else 1.0)
    return min(vals)


def _F_lipschitz(a: int, b: int, N: int, k: int, t: complex) -> complex:
    xi_a = Fraction(-a, N)
    xi_a2 = Fraction(a, N)
    prefac = (-1) ** (k + 1) * math.factorial(k - 1)
    # m = 0 row: polylogarithms at the two conjugate roots of unity
    if a % N == 0:
        row0 = 0.0 + 0.0j if k == 1 else (1.0 + (-1) ** k) * complex(hurwitz_zeta(k, 1.0))
    else:
        row0 = _polylog_root(k, xi_a) + (-1) ** k * _polylog_root(k, xi_a2)
    M = _row_count(t.imag, _q_eff(xi_a, xi_a2))
    m = np.arange(1, M + 1)
    cb = _roots_of_unity(N)[(m * b) % N]
    rows = cb * _T_batch(m * t, float(xi_a % 1), k) \
        + (-1) ** k * np.conj(cb) * _T_batch(m * t, float(xi_a2 % 1), k)
    return prefac * (row0 + complex(np.sum(rows)))


def _term_rows_naive(a: int, b: int, N: int, k: int, t: complex, R: int):
    # row generator honoring the eisenstein order: m = 0, then paired +-m
    roots = _roots_of_unity(N)
    n = np.arange(1, R + 1)
    char_pos = roots[(-a * n) % N]
    char_neg = roots[(a * n) % N]

    def row(m: int) -> complex:
        cm = roots[(m * b) % N]
        base = m * t
        paired = char_pos / (base + n) ** k + char_neg / (base - n) ** k
        inner = complex(np.sum(paired))
        if m != 0:
            inner += 1.0 / base**k
        return cm * inner

    yield row(0)
    for m in range(1, R + 1):
        yield row(m) + row(-m)


def _F_naive(a: int, b: int, N: int, k: int, t: complex, trunc: LatticeTruncation) -> complex:
    prefac = (-1) ** (k + 1) * math.factorial(k - 1)
    R = trunc.shell_radius
    if trunc.ordering == "box":
        if k <= 2:
            raise ConvergenceModeError(
                f"weight {k} is conditionally convergent; box ordering is not a sum"
            )
        roots = _roots_of_unity(N)
        n = np.arange(-R, R + 1)
        char_n = roots[(-a * n) % N]
        rows = []
        for m in range(-R, R + 1):
            den = (m * t + n) ** k
            if m == 0:
                den[R] = 1.0  # origin excluded below
            terms = char_n / den
            if m == 0:
                terms[R] = 0.0
            rows.append(roots[(m * b) % N] * complex(np.sum(terms)))
        total = kahan_sum(rows) if trunc.compensated else complex(np.sum(np.array(rows)))
        return prefac * total
    rows = _term_rows_naive(a, b, N, k, t, R)
    total = kahan_sum(rows) if trunc.compensated else sum(rows)
    return prefac * total


def F(query: EisensteinQuery) -> complex:
    """Evaluate the weight-k level-N Eisenstein series for the query.

    mode "naive" requires trunc; weights k <= 2 are conditionally convergent
    and demand the eisenstein ordering (box raises ConvergenceModeError).
    mode "lipschitz" sums rows in closed form and works for all k >= 1.
    """
    t = _tau_of(query.tau)
    if query.mode == "lipschitz":
        return _F_lipschitz(query.a, query.b, query.N, query.k, t)
    if query.trunc is None:
        raise ValueError("naive mode requires an explicit LatticeTruncation")
    return _F_naive(query.a, query.b, query.N, query.k, t, query.trunc)


def _F_trivial(k: int, t: complex) -> complex:
    """Weight-k sum with trivial character, sum'_{(m,n)} (m tau + n)^{-k},
    times the (-1)^(k+1) (k-1)! normalization. Zero for odd k."""
    if k < 2:
        raise ConvergenceModeError("trivial-character extension needs k >= 2")
    if k % 2 == 1:
        return 0.0 + 0.0j
    prefac = (-1) ** (k + 1) * math.factorial(k - 1)
    M = _row_count(t.imag, 1.0)
    rows = _T_batch(np.arange(1, M + 1) * t, 0.0, k)
    return prefac * (2.0 * complex(hurwitz_zeta(k, 1.0)) + 2.0 * complex(np.sum(rows)))


def F_tilde(query: EisensteinQuery, D: int, allow_degenerate: bool = False) -> complex:
    """Smoothed series D^2 F_(a,b) - D^(2-k) F_(Da,Db) at weight k.

    When (Da, Db) = (0,0) mod N the second label degenerates; by default this
    raises DegenerateLabelError. allow_degenerate extends F to the zero label
    by the trivial-character sum (zero at odd weight), under which the
    torsion-specialization identity continues to hold.
    """
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    t = _tau_of(query.tau)
    first = F(query)
    a2, b2 = (D * query.a) % query.N, (D * query.b) % query.N
    if a2 == 0 and b2 == 0:
        if not allow_degenerate:
            raise DegenerateLabelError(
                f"(Da, Db) = {(D * query.a, D * query.b)} is (0,0) mod {query.N}"
            )
        second = _F_trivial(query.k, t)
    else:
        q2 = EisensteinQuery(a=a2, b=b2, N=query.N, k=query.k, tau=query.tau,
                             mode=query.mode, trunc=query.trunc)
        second = F(q2)
    return D**2 * first - D ** (2 - query.k) * second


def eisenstein_sum_k2(a: int, b: int, N: int, tau, trunc: LatticeTruncation) -> complex:
    """Weight-2 series in the eisenstein order (inner n, then m, both paired
    symmetrically). The value depends on this order; box truncation raises."""
    if trunc.ordering != "eisenstein":
        raise ConvergenceModeError("weight 2 requires the eisenstein ordering")
    q = EisensteinQuery(a=a, b=b, N=N, k=2, tau=tau, mode="naive", trunc=trunc)
    return F(q)

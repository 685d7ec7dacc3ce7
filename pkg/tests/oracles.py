"""Independent reference implementations used by the test suite.

Everything here goes through mpmath (arbitrary precision, external codebase)
or through raw numpy lattice sums; nothing imports from epolylog. Frozen
constants in the test files were generated with these at dps >= 30.
"""
import math

import numpy as np
from mpmath import mp, mpc, jtheta, pi as mppi, exp as mpexp, sin as mpsin

mp.dps = 30


def _q(tau):
    return mpexp(1j * mppi * mpc(tau))


def theta_ref(z, tau):
    """Normalized odd theta: jtheta_1(pi z, q) / (pi jtheta_1'(0, q)), q = e^{i pi tau}.

    The extra pi makes d/dz theta(0) = 1 (jtheta derivatives are in u = pi z).
    """
    q = _q(tau)
    return jtheta(1, mppi * mpc(z), q) / (mppi * jtheta(1, 0, q, 1))


def theta_logderiv_ref(z, tau):
    q = _q(tau)
    u = mppi * mpc(z)
    return mppi * jtheta(1, u, q, 1) / jtheta(1, u, q)


def eta1_ref(tau):
    """-(pi^2/3) jtheta_1'''(0)/jtheta_1'(0); theta(z) = z - (eta1/2) z^3 + O(z^5)."""
    q = _q(tau)
    return -(mppi**2 / 3) * jtheta(1, 0, q, 3) / jtheta(1, 0, q, 1)


def eta1_lattice_ref(tau, terms=60):
    """eta1 as the weight-2 lattice sum in inner-then-outer order; the inner
    row over n has the closed form pi^2/sin^2(pi m tau), so only the outer
    geometrically convergent sum remains."""
    acc = mppi**2 / 3
    for m in range(1, terms + 1):
        acc += 2 * mppi**2 / mpsin(mppi * m * mpc(tau)) ** 2
    return acc


def zeta_ref(z, tau):
    return theta_logderiv_ref(z, tau) + eta1_ref(tau) * mpc(z)


def sigma_ref(z, tau):
    return mpexp(eta1_ref(tau) * mpc(z) ** 2 / 2) * theta_ref(z, tau)


def wp_ref(z, tau):
    """-(log theta)'' - eta1 via jtheta derivatives."""
    q = _q(tau)
    u = mppi * mpc(z)
    t0 = jtheta(1, u, q)
    t1 = jtheta(1, u, q, 1)
    t2 = jtheta(1, u, q, 2)
    return -(mppi**2) * (t2 / t0 - (t1 / t0) ** 2) - eta1_ref(tau)


def wpprime_ref(z, tau):
    """-(log theta)''' via jtheta derivatives."""
    q = _q(tau)
    u = mppi * mpc(z)
    t0 = jtheta(1, u, q)
    t1 = jtheta(1, u, q, 1)
    t2 = jtheta(1, u, q, 2)
    t3 = jtheta(1, u, q, 3)
    return -(mppi**3) * (t3 / t0 - 3 * t1 * t2 / t0**2 + 2 * (t1 / t0) ** 3)


def J_ref(z, w, tau):
    return theta_ref(mpc(z) + mpc(w), tau) / (theta_ref(z, tau) * theta_ref(w, tau))


def wp_brute(z, tau, R=150):
    """Plain lattice sum 1/z^2 + sum' [1/(z-w)^2 - 1/w^2] over the box |m|,|n| <= R.

    Symmetric box makes the odd 2z/w^3 terms cancel in pairs, leaving an
    O(1/R^2) tail; good to ~1e-3, no theta functions involved.
    """
    m, n = np.meshgrid(np.arange(-R, R + 1), np.arange(-R, R + 1), indexing="ij")
    w = m * complex(tau) + n
    mask = (m != 0) | (n != 0)
    w = w[mask]
    return 1.0 / complex(z) ** 2 + np.sum(1.0 / (complex(z) - w) ** 2 - 1.0 / w**2)


def F_brute(a, b, N, k, tau, R=400):
    """Box-truncated level-N weight-k sum, k >= 3 only (absolute convergence).

    (-1)^{k+1} (k-1)! sum'_{m,n} zeta_N^{mb-na} / (m tau + n)^k, one-shot
    numpy meshgrid; structured independently of the package evaluators.
    """
    if k < 3:
        raise ValueError("absolute convergence needs k >= 3")
    m, n = np.meshgrid(np.arange(-R, R + 1), np.arange(-R, R + 1), indexing="ij")
    mask = (m != 0) | (n != 0)
    m, n = m[mask], n[mask]
    char = np.exp(2j * np.pi * ((m * b - n * a) % N) / N)
    den = (m * complex(tau) + n) ** k
    sign = 1.0 if k % 2 == 1 else -1.0
    return sign * float(math.factorial(k - 1)) * np.sum(char / den)

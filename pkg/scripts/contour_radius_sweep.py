"""Contour radius sweep for the kernel coefficient extraction.

The order-k Taylor coefficients of the pole-free kernel combination are
read off a circle of radius r. Rounding noise on the contour nodes is
amplified by (D/r)^k, while the geometric truncation error grows as the
circle approaches the nearest pole at distance min(1, |tau|)/D. This sweep
prints the rescaling-identity residual (coefficients of the w -> Dw
substitution against D^k scaling) across radius fractions; the suite's
0.35 default clears its 1e-9 bar by two decades while keeping the contour
well off the pole.
"""

import argparse

import numpy as np

from epolylog.kronecker import _J, s_coeffs
from epolylog.numerics import CauchyConfig, cauchy_coeffs


def rescale_residual(z: complex, t: complex, D: int, frac: float, order: int) -> float:
    base = CauchyConfig(radius=frac * min(1.0, abs(t)), samples=256)
    scaled = CauchyConfig(radius=base.radius / D, samples=256)
    full = s_coeffs(z, t, D, order, base)
    sub = cauchy_coeffs(
        lambda u: D * D * _J(z, D * np.asarray(u), t) - D * _J(D * z, u, t),
        order, scaled,
    )
    worst = 0.0
    for k in range(order + 1):
        ref = float(D) ** k * full.coeffs[k]
        worst = max(worst, abs(sub[k] - ref) / max(1.0, abs(ref)))
    return worst


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--order", type=int, default=8)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pts = []
    for _ in range(args.points):
        t = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0))
        z = complex(rng.uniform(0.17, 0.4), rng.uniform(0.1, 0.3))
        pts.append((z, t))

    fracs = (0.10, 0.20, 0.30, 0.35, 0.40, 0.45)
    print(f"order {args.order}, worst over {args.points} points, D in {{2, 3}}")
    print("radius/pole-dist   residual")
    for frac in fracs:
        worst = max(
            rescale_residual(z, t, D, frac, args.order)
            for z, t in pts
            for D in (2, 3)
        )
        print(f"{frac:16.2f}   {worst:9.2e}")


if __name__ == "__main__":
    main()

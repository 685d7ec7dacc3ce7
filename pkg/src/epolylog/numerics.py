"""Shared numerical kernels: lattice enumeration, finite differences,
Cauchy coefficient extraction and compensated summation.

Everything here is deterministic: fixed enumeration orders, fixed stencils,
fixed sample counts. No randomness, no environment-dependent branching.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np


class NonFiniteError(ArithmeticError):
    """A stencil or quadrature evaluation produced inf or nan."""


class AliasingError(ArithmeticError):
    """Cauchy coefficients disagree between two sample counts."""


@dataclass(frozen=True)
class LatticeTruncation:
    """Truncation recipe for double sums over the period lattice.

    ordering "eisenstein" runs the inner index n symmetrically about 0 for
    each fixed m, and m symmetrically about 0; this order is part of the
    value for conditionally convergent sums. ordering "box" enumerates all
    |m|, |n| <= shell_radius row by row and is only legal for absolutely
    convergent sums.
    """

    shell_radius: int
    ordering: str = "eisenstein"
    compensated: bool = True

    def __post_init__(self) -> None:
        if self.shell_radius < 1:
            raise ValueError(f"shell_radius must be >= 1, got {self.shell_radius}")
        if self.ordering not in ("eisenstein", "box"):
            raise ValueError(f"unknown ordering {self.ordering!r}")


@dataclass(frozen=True)
class DiffConfig:
    """Central difference stencil with Richardson extrapolation."""

    step: float = 1e-4
    richardson_levels: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.step < 1.0:
            raise ValueError(f"step must be in (0, 1), got {self.step}")
        if not 0 <= self.richardson_levels <= 4:
            raise ValueError("richardson_levels must be in 0..4")


@dataclass(frozen=True)
class CauchyConfig:
    """Contour sampling for Taylor coefficient extraction.

    self_check re-evaluates with doubled sample count and signals aliasing
    when the top coefficient moves by more than a factor of 10.
    """

    radius: float
    samples: int = 256
    self_check: bool = True

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.samples < 16:
            raise ValueError(f"samples must be >= 16, got {self.samples}")


def enumerate_lattice(trunc: LatticeTruncation) -> Iterator[tuple[int, int]]:
    """Yield integer pairs (m, n), origin excluded, in the order fixed by
    trunc.ordering. The sequence is the summation order."""
    R = trunc.shell_radius
    if trunc.ordering == "box":
        for m in range(-R, R + 1):
            for n in range(-R, R + 1):
                if m == 0 and n == 0:
                    continue
                yield (m, n)
        return
    # eisenstein: m = 0, +1, -1, +2, -2, ...; inside each row n = 0, +1, -1, ...
    for m in _symmetric(R):
        for n in _symmetric(R):
            if m == 0 and n == 0:
                continue
            yield (m, n)


def _symmetric(R: int) -> Iterator[int]:
    yield 0
    for a in range(1, R + 1):
        yield a
        yield -a


def finite_diff(f: Callable[[complex], complex], at: complex, cfg: DiffConfig) -> complex:
    """Derivative of f at `at` by central differences, Richardson-extrapolated.

    Evaluates f at 2*(richardson_levels+1) stencil points. Raises
    NonFiniteError if any evaluation is not finite.
    """
    L = cfg.richardson_levels
    table = []
    for i in range(L + 1):
        h = cfg.step / (2.0**i)
        hi = f(at + h)
        lo = f(at - h)
        if not (np.isfinite(hi) and np.isfinite(lo)):
            raise NonFiniteError(f"non-finite stencil value at step {h}")
        table.append((hi - lo) / (2.0 * h))
    for j in range(1, L + 1):
        fac = 4.0**j
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0) for i in range(len(table) - 1)]
    return complex(table[0])


def _circle_values(
    f: Callable[[complex], complex], center: complex, radius: float, samples: int
) -> np.ndarray:
    nodes = center + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    try:
        vals = np.asarray(f(nodes), dtype=complex)
        if vals.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([f(w) for w in nodes], dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("non-finite value on sampling circle")
    return vals


def cauchy_coeffs(
    f: Callable[[complex], complex], order: int, cfg: CauchyConfig, center: complex = 0.0
) -> list[complex]:
    """Taylor coefficients c_0..c_order of f about `center`.

    Trapezoid rule on the circle |w - center| = cfg.radius, evaluated through
    the FFT; exponentially accurate for f analytic on a neighbourhood of the
    closed disc. f may be vectorized over numpy arrays (used if available).
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    if cfg.samples <= 2 * (order + 1):
        raise ValueError(f"samples={cfg.samples} too small for order {order}")

    def coeffs_at(samples: int) -> np.ndarray:
        vals = _circle_values(f, center, cfg.radius, samples)
        hat = np.fft.fft(vals) / samples
        k = np.arange(order + 1)
        return hat[: order + 1] / cfg.radius**k

    out = coeffs_at(cfg.samples)
    if cfg.self_check:
        fine = coeffs_at(2 * cfg.samples)
        scale = max(np.max(np.abs(out)), np.max(np.abs(fine)), 1e-300)
        a, b = abs(out[order]), abs(fine[order])
        floor = 1e-12 * scale
        if max(a, b) > floor and max(a, b) > 10.0 * max(min(a, b), floor):
            raise AliasingError(
                f"top coefficient moved {a:.3e} -> {b:.3e} when doubling samples"
            )
        out = fine
    return [complex(c) for c in out]


def contour_integral(
    f: Callable[[complex], complex], center: complex, radius: float, samples: int = 256
) -> complex:
    """Integral of f over the positively oriented circle of given center and
    radius, by the trapezoid rule (exponentially accurate for f analytic on
    an annulus around the contour)."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    nodes = np.exp(2j * np.pi * np.arange(samples) / samples)
    vals = _circle_values(f, center, radius, samples)
    return complex(2j * np.pi * radius / samples * np.sum(vals * nodes))


def kahan_sum(terms: Iterable[complex]) -> complex:
    """Compensated (Kahan) sum in the order the iterable yields terms."""
    s = 0.0 + 0.0j
    c = 0.0 + 0.0j
    for t in terms:
        y = complex(t) - c
        tmp = s + y
        c = (tmp - s) - y
        s = tmp
    return s


def pairwise_sum(values: np.ndarray) -> complex:
    # numpy's pairwise reduction: deterministic for a fixed array layout
    return complex(np.sum(values))


def ordered_map(
    fn: Callable, items: Sequence, parallelism: int = 1, chunk: int = 1
) -> list:
    """Map fn over items, preserving order. parallelism > 1 uses threads;
    results are identical to the serial order (pure fn required)."""
    if parallelism <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items, chunksize=max(chunk, 1)))

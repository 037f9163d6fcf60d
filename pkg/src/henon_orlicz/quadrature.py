"""Composite Gauss-Legendre quadrature on geometrically graded panels.

All one-dimensional integrals in the toolkit run through this module.  Two
regimes are supported:

* explicit breakpoints (used for piecewise-linear radial profiles, where the
  integrand is smooth inside every grid panel but kinked at the nodes), and
* geometric grading toward the left endpoint (used for integrands with a
  power-type singularity or steep growth at the lower limit, such as
  ``s**(1-n)`` near the origin).

Divergence of an improper integral cannot be proven from samples; the
adaptive driver reports divergence when the graded partial sums keep growing
without stabilising, and leaves the borderline calls to the caller.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np


class DivergentIntegralError(ArithmeticError):
    """Graded partial sums grew without stabilising; integral looks divergent."""

    def __init__(self, message: str, partial_sums=None):
        super().__init__(message)
        self.partial_sums = list(partial_sums) if partial_sums is not None else []


@lru_cache(maxsize=None)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def graded_breakpoints(a: float, b: float, n_panels: int, ratio: float = 0.5) -> np.ndarray:
    """Panel breakpoints on [a, b] accumulating geometrically toward ``a``.

    The widths shrink by ``ratio`` per level, so the innermost panel has
    width ``(b - a) * ratio**(n_panels - 1)``; its interior Gauss nodes never
    touch the (possibly singular) endpoint ``a``.
    """
    if not b > a:
        raise ValueError(f"empty interval ({a}, {b})")
    offsets = (b - a) * ratio ** np.arange(n_panels - 1, -1, -1, dtype=float)
    pts = np.empty(n_panels + 1)
    pts[0] = a
    pts[1:] = a + offsets
    pts[-1] = b
    return pts


def panel_rule(breakpoints: np.ndarray, order: int = 16):
    """Gauss-Legendre nodes and weights for the composite rule on ``breakpoints``."""
    x, w = _leggauss(order)
    lo = np.asarray(breakpoints[:-1], dtype=float)
    hi = np.asarray(breakpoints[1:], dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_fixed(fn: Callable[[np.ndarray], np.ndarray], breakpoints: np.ndarray,
                    order: int = 16) -> float:
    nodes, weights = panel_rule(breakpoints, order)
    return float(np.dot(weights, fn(nodes)))


def integrate_graded(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, *,
                     abs_tol: float = 1e-9, order: int = 16, n_panels: int = 24,
                     max_panels: int = 384, ratio: float = 0.5) -> float:
    """Adaptive graded quadrature of ``fn`` on (a, b), graded toward ``a``.

    Refines by increasing the panel count (which extends the geometric ladder
    closer to ``a`` and subdivides everywhere) until two successive values
    agree to ``abs_tol * (1 + |value|)``.  Raises
    :class:`DivergentIntegralError` when three successive refinements each
    grow the value by more than 50 percent.
    """
    values = []
    panels = n_panels
    prev = integrate_fixed(fn, graded_breakpoints(a, b, panels, ratio), order)
    values.append(prev)
    growth_streak = 0
    while panels < max_panels:
        panels = min(2 * panels, max_panels)
        cur = integrate_fixed(fn, graded_breakpoints(a, b, panels, ratio), order)
        values.append(cur)
        if not np.isfinite(cur):
            raise DivergentIntegralError(
                "integral overflowed under grading refinement", values)
        gap = abs(cur - prev)
        if gap <= abs_tol * (1.0 + abs(cur)):
            return cur
        if abs(cur) > 0 and gap > 0.5 * abs(cur):
            growth_streak += 1
            if growth_streak >= 3:
                raise DivergentIntegralError(
                    "graded partial sums grow without stabilising "
                    f"(last values {values[-3:]})", values)
        else:
            growth_streak = 0
        prev = cur
    if len(values) >= 2 and abs(values[-1] - values[-2]) > 0.5 * abs(values[-1]):
        raise DivergentIntegralError(
            "graded partial sums still growing at the panel cap "
            f"(last values {values[-2:]})", values)
    return prev

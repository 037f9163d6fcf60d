"""Existence / nonexistence classification of Henon problem data.

A problem is the Dirichlet g-Laplacian equation on the unit ball,

    -div( g(|grad u|) grad u / |grad u| ) = |x|^alpha h(u),   u > 0 in B,

with gradient growth G (G' = g), nonlinearity growth H (H' = h) and an
optional comparison function R.  The classifier evaluates:

* superlinearity          p_plus(G) < q_minus(H);
* H << R at infinity      (the comparison is required strictly for the
                           existence theory; when R is omitted it defaults to
                           H and the report carries a caveat);
* the admissibility integral

      int_0^1 r^{alpha+n-1} R( E(G, n, r) ) dr < inf,

  where E is the radial decay envelope.  Convergence of an improper integral
  is undecidable from samples, so the integrand's log-log slope beta near
  r -> 0 is fitted and compared against -1 with a +-0.05 dead band; slopes
  inside the band yield an honest Indeterminate;
* the supercritical nonexistence test q_minus(H) >= n(alpha+p_plus)/(n-p_plus).

The existence and nonexistence ranges are not complementary in general; the
Indeterminate verdict encodes exactly that gap and no sharper boundary is
guessed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .nfunction import (ComparisonVerdict, IndexPair, NFunction,
                        compare_at_infinity, critical_exponent,
                        simonenko_indices)
from .luxemburg import envelope_table

__all__ = [
    "ProblemSpec", "ClassificationReport", "Verdict", "IntegralVerdict",
    "CheckResult", "check_superlinearity", "check_admissibility_integral",
    "check_nonexistence", "check_boundedness_hypothesis",
    "critical_alpha_threshold", "classify",
]


class Verdict(Enum):
    EXISTENCE = "ExistenceGuaranteed"
    NONEXISTENCE = "NonexistenceGuaranteed"
    INDETERMINATE = "Indeterminate"


class IntegralVerdict(Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"
    INDETERMINATE = "Indeterminate"


_STRICT_MARGIN = 1e-9
_SLOPE_DEAD_BAND = 0.05


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Problem data: dimension, Henon exponent and the three growth functions.

    The gradient growth G must have indices inside (1, n); the nonlinearity H
    only needs an admissible pair (its upper range legitimately exceeds n in
    the supercritical regime).  Whether the classifier formulas that need
    p_plus < n apply is checked per operation, not at construction.
    """

    n: int
    alpha: float
    G: NFunction
    H: NFunction
    R: Optional[NFunction] = None

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"dimension n must be >= 3, got {self.n}")
        if self.alpha < 0:
            raise ValueError(f"Henon exponent alpha must be >= 0, got {self.alpha}")
        simonenko_indices(self.G)
        simonenko_indices(self.H)
        if self.R is not None:
            simonenko_indices(self.R)

    @property
    def g_indices(self) -> IndexPair:
        return simonenko_indices(self.G)

    @property
    def h_indices(self) -> IndexPair:
        return simonenko_indices(self.H)

    @property
    def r_indices(self) -> Optional[IndexPair]:
        return None if self.R is None else simonenko_indices(self.R)

    def comparison_function(self) -> tuple[NFunction, bool]:
        """(R, defaulted) where R falls back to H when absent."""
        if self.R is None:
            return self.H, True
        return self.R, False

    def describe(self) -> dict:
        d = {"n": self.n, "alpha": self.alpha, "G": self.G.label,
             "H": self.H.label}
        if self.R is not None:
            d["R"] = self.R.label
        return d


@dataclass
class CheckResult:
    name: str
    passed: Optional[bool]
    evidence: dict = field(default_factory=dict)


@dataclass
class ClassificationReport:
    verdict: Verdict
    checks: list
    integral_estimate: Optional[tuple] = None  # ("value"|"slope", float)
    conflict: bool = False

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "checks": [{"name": c.name, "passed": c.passed,
                        "evidence": c.evidence} for c in self.checks],
        }
        if self.integral_estimate is not None:
            kind, val = self.integral_estimate
            out["integral"] = {kind: val}
        if self.conflict:
            out["conflict"] = True
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)


# ---------------------------------------------------------------------------
# individual hypothesis checks
# ---------------------------------------------------------------------------

def check_superlinearity(spec: ProblemSpec) -> bool:
    """Strict superlinearity of the nonlinearity: p_plus(G) < q_minus(H)."""
    return spec.g_indices.p_plus + _STRICT_MARGIN <= spec.h_indices.p_minus


def check_admissibility_integral(spec: ProblemSpec):
    """Numeric convergence test for the admissibility integral.

    Evaluates ``I(r) = r^{alpha+n-1} R(E(G, n, r))`` on a geometric r-grid
    toward 0 and fits the local log-log slope beta.  Returns

    * ``(IntegralVerdict.CONVERGENT, value)`` when beta > -1 + 0.05, with the
      quadrature value of the integral (tail extrapolated with the fitted
      slope);
    * ``(IntegralVerdict.DIVERGENT, slope)`` when beta <= -1 - 0.05;
    * ``(IntegralVerdict.INDETERMINATE, slope)`` inside the dead band or when
      the slope is unstable (non-power-like integrand).
    """
    R, _ = spec.comparison_function()
    table = envelope_table(spec.G, spec.n)
    w = spec.alpha + spec.n - 1

    r = 0.5 ** (np.arange(8, 45, dtype=float))
    with np.errstate(over="ignore"):
        I = r ** w * np.asarray(R.G(table(r)), dtype=float)
    ok = np.isfinite(I) & (I > 0)
    r, I = r[ok], I[ok]
    if r.size < 10:
        return IntegralVerdict.INDETERMINATE, math.nan

    logs_r, logs_I = np.log(r), np.log(I)
    slope_tail = np.polyfit(logs_r[-8:], logs_I[-8:], 1)[0]
    slope_prev = np.polyfit(logs_r[-16:-8], logs_I[-16:-8], 1)[0]
    if abs(slope_tail - slope_prev) > 0.02:
        return IntegralVerdict.INDETERMINATE, float(slope_tail)

    beta = float(slope_tail)
    if beta > -1.0 + _SLOPE_DEAD_BAND:
        value = _integral_value(spec, R, table, w, r[-1], beta, I[-1])
        return IntegralVerdict.CONVERGENT, value
    if beta <= -1.0 - _SLOPE_DEAD_BAND:
        return IntegralVerdict.DIVERGENT, beta
    return IntegralVerdict.INDETERMINATE, beta


def _integral_value(spec, R, table, w, r_min, beta, I_min) -> float:
    """Quadrature of I over (r_min, 1) plus the power-law tail below r_min."""
    from .quadrature import graded_breakpoints, panel_rule

    nodes, wts = panel_rule(graded_breakpoints(r_min, 1.0, 36), order=12)
    vals = nodes ** w * np.asarray(R.G(table(nodes)), dtype=float)
    body = float(np.dot(wts, vals))
    tail = I_min * r_min / (beta + 1.0)  # int_0^{r_min} C r^beta dr
    return body + tail


def check_nonexistence(spec: ProblemSpec) -> bool:
    """Supercritical range test q_minus(H) >= n(alpha+p_plus)/(n-p_plus).

    Requires p_plus(G) < n (raises otherwise); the threshold is
    :func:`~henon_orlicz.nfunction.critical_exponent` of the upper gradient
    index.
    """
    p_plus = spec.g_indices.p_plus
    if p_plus >= spec.n:
        raise ValueError(
            f"nonexistence test needs p_plus < n, got p_plus = {p_plus:g}, "
            f"n = {spec.n}")
    threshold = critical_exponent(p_plus, spec.n, spec.alpha)
    return spec.h_indices.p_minus >= threshold - _STRICT_MARGIN


def check_boundedness_hypothesis(spec: ProblemSpec) -> bool:
    """Boundedness hypothesis q_plus(H) < r_minus(R); requires R present."""
    rp = spec.r_indices
    if rp is None:
        raise ValueError("boundedness hypothesis needs the comparison function R")
    return spec.h_indices.p_plus + _STRICT_MARGIN <= rp.p_minus


def critical_alpha_threshold(G: NFunction, n: int) -> float:
    """Weight threshold n((n-p_minus) p_plus / ((n-p_plus) p_minus) - 1).

    Above this alpha the critical-growth comparison function passes the
    admissibility integral; it vanishes exactly for pure powers
    (p_minus = p_plus).
    """
    pair = simonenko_indices(G)
    if pair.p_plus >= n:
        raise ValueError(
            f"critical_alpha_threshold needs p_plus < n, got {pair.p_plus:g}")
    return n * ((n - pair.p_minus) * pair.p_plus
                / ((n - pair.p_plus) * pair.p_minus) - 1.0)


# ---------------------------------------------------------------------------
# classifier
# ---------------------------------------------------------------------------

def classify(spec: ProblemSpec) -> ClassificationReport:
    """Run all hypothesis checks and combine them into a verdict.

    ExistenceGuaranteed requires superlinearity, H << R strictly and a
    convergent admissibility integral; NonexistenceGuaranteed requires the
    supercritical test.  Both passing is numerically possible only through
    estimation error and is reported as Indeterminate with a conflict flag.
    Check failures never raise; they become evidence entries.
    """
    checks = []

    sl = check_superlinearity(spec)
    gi, hi = spec.g_indices, spec.h_indices
    checks.append(CheckResult(
        "superlinearity", sl,
        {"p_plus": gi.p_plus, "q_minus": hi.p_minus}))

    R, defaulted = spec.comparison_function()
    cmp_verdict, ratios = compare_at_infinity(spec.H, R, detail=True)
    cmp_evidence = {"verdict": cmp_verdict.value,
                    "tail_ratios": {str(k): v for k, v in ratios.items()}}
    if defaulted:
        cmp_evidence["caveat"] = (
            "comparison function R omitted; defaulted to H, but the existence "
            "theory additionally requires H << R strictly at infinity")
    checks.append(CheckResult(
        "h_much_smaller_than_r",
        cmp_verdict is ComparisonVerdict.MUCH_SMALLER, cmp_evidence))

    integral_estimate = None
    try:
        int_verdict, metric = check_admissibility_integral(spec)
        kind = "value" if int_verdict is IntegralVerdict.CONVERGENT else "slope"
        integral_estimate = (kind, metric)
        checks.append(CheckResult(
            "admissibility_integral",
            int_verdict is IntegralVerdict.CONVERGENT,
            {"verdict": int_verdict.value, kind: metric}))
        integral_ok = int_verdict is IntegralVerdict.CONVERGENT
    except Exception as exc:  # envelope/quadrature failure becomes evidence
        checks.append(CheckResult("admissibility_integral", None,
                                  {"error": str(exc)}))
        integral_ok = False

    try:
        nonex = check_nonexistence(spec)
        checks.append(CheckResult(
            "supercritical_nonexistence", nonex,
            {"q_minus": hi.p_minus,
             "threshold": critical_exponent(gi.p_plus, spec.n, spec.alpha)}))
    except ValueError as exc:
        nonex = False
        checks.append(CheckResult("supercritical_nonexistence", None,
                                  {"error": str(exc)}))

    existence = sl and (cmp_verdict is ComparisonVerdict.MUCH_SMALLER) and integral_ok
    if existence and nonex:
        verdict, conflict = Verdict.INDETERMINATE, True
    elif existence:
        verdict, conflict = Verdict.EXISTENCE, False
    elif nonex:
        verdict, conflict = Verdict.NONEXISTENCE, False
    else:
        verdict, conflict = Verdict.INDETERMINATE, False
    return ClassificationReport(verdict, checks, integral_estimate, conflict)

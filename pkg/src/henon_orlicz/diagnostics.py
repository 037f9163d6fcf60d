"""Certificate-style checks on computed or supplied radial profiles.

None of these prove anything; they evaluate integral identities that genuine
solutions must satisfy and report the numerical evidence:

* the Pohozaev-type identity relating interior energy terms to the boundary
  flux (its residual is a consistency certificate for a claimed solution);
* the supercritical contradiction factor (n+alpha)/q_minus + 1 - n/p_plus,
  whose sign reproduces the nonexistence argument numerically;
* the empirical radial decay constant |u(r)| / (||grad u|| * E(G, n, r));
* level-set truncation energies e_k for levels 1 - 2^{-k} (non-increasing in
  k; their vanishing tail is the boundedness evidence);
* a plain boundedness report (sup norm plus hypothesis flag).

The identity convention: the paper-style coefficient a(t) = g(t)/t satisfies
a(t) t^2 = g(t) t, so the boundary and bulk terms are written uniformly with
g(|u'|)|u'|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .luxemburg import SampledFunction, WeightedMeasure, luxemburg_norm, envelope_table
from .nfunction import critical_exponent, simonenko_indices
from .quadrature import _leggauss, graded_breakpoints, panel_rule
from .radial import (HenonSource, RadialProfile, gradient_norm, sphere_area,
                     _panel_quadrature)
from .admissibility import check_boundedness_hypothesis

__all__ = [
    "PohozaevReport", "NonexistenceAudit", "StraussReport",
    "pohozaev_residual", "nonexistence_audit", "nonexistence_factor",
    "strauss_check", "degiorgi_levels", "boundedness_report",
]


@dataclass
class PohozaevReport:
    """Both sides of the identity, their residual and the named parts.

    ``lhs`` and ``rhs`` are recombined from ``parts`` exactly, and
    ``residual = |lhs - rhs| / (1 + |rhs|)``.
    """

    lhs: float
    rhs: float
    residual: float
    parts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
                "parts": dict(self.parts)}


def _profile_quadrature(u: RadialProfile, exact: bool):
    """Quadrature nodes/weights on (0,1): panel-aligned for PL profiles,
    graded for exact evaluators."""
    if exact:
        nodes, w = panel_rule(graded_breakpoints(0.0, 1.0, 32), order=16)
    else:
        nodes2, w2, _ = _panel_quadrature(u.grid, order=10)
        nodes, w = nodes2.ravel(), w2.ravel()
    return nodes, w


def pohozaev_residual(spec, u: RadialProfile, source=None) -> PohozaevReport:
    """Pohozaev-type identity residual for a claimed solution profile.

    In radial form on the unit ball (x . nu = 1 on the boundary):

        lhs = omega * [ n*int F r^{n-1} dr + int (x.grad_x F) r^{n-1} dr
                        + int (g(|u'|)|u'| - n G(|u'|)) r^{n-1} dr ]
        rhs = omega * ( g(|u'(1)|)|u'(1)| - G(|u'(1)|) )

    For the Henon right-hand side F = r^alpha H(u_+) and x.grad_x F =
    alpha r^alpha H(u_+); general forcings supply both through ``source``.
    The boundary derivative uses the exact evaluator when present, otherwise
    the stored nodal derivative at r = 1 (a one-sided second-order value for
    reconstructed profiles).
    """
    n = spec.n
    omega = sphere_area(n)
    src = source if source is not None else HenonSource(spec)
    exact = u.u_fn is not None and u.du_fn is not None
    nodes, w = _profile_quadrature(u, exact)
    rn = nodes ** (n - 1)

    uu = u.u_at(nodes)
    du = np.abs(u.du_at(nodes))
    part_F = omega * n * float(np.dot(w, np.asarray(src.potential(nodes, uu)) * rn))
    part_xF = omega * float(np.dot(w, np.asarray(src.x_grad_potential(nodes, uu)) * rn))
    part_bulk = omega * float(np.dot(w, (spec.G.g(du) * du - n * spec.G.G(du)) * rn))

    du1 = abs(float(u.du_at(1.0)) if u.du_fn is not None else float(u.derivatives[-1]))
    rhs = omega * float(spec.G.g(np.array(du1)) * du1 - spec.G.G(np.array(du1)))

    lhs = part_F + part_xF + part_bulk
    residual = abs(lhs - rhs) / (1.0 + abs(rhs))
    return PohozaevReport(lhs, rhs, residual, {
        "n_times_potential": part_F,
        "x_grad_potential": part_xF,
        "bulk_flux_minus_energy": part_bulk,
        "boundary_flux": rhs,
    })


def nonexistence_factor(n: int, alpha: float, q_minus: float, p_plus: float) -> float:
    """Supercritical contradiction factor (n+alpha)/q_minus + 1 - n/p_plus.

    Positive in the existence range; its zero in q_minus marks the onset of
    the Pohozaev contradiction for bounded solutions.
    """
    return (n + alpha) / q_minus + 1.0 - n / p_plus


@dataclass
class NonexistenceAudit:
    factor: float
    integral: float          # omega * int r^{alpha+n-1} h(u_+) u dr
    product: float           # factor * integral
    boundary_term: float     # omega * (g(|u'(1)|)|u'(1)| - G(|u'(1)|)), >= 0
    contradiction: bool      # product <= 0 with positive boundary term

    def to_dict(self) -> dict:
        return {"factor": self.factor, "integral": self.integral,
                "product": self.product, "boundary_term": self.boundary_term,
                "contradiction": self.contradiction}


def nonexistence_audit(spec, u: RadialProfile) -> NonexistenceAudit:
    """Numerical replay of the supercritical contradiction for a profile.

    A claimed bounded solution with nonpositive ``factor * integral`` and
    strictly positive boundary flux reproduces the contradiction: the
    identity forces a positive quantity below a nonpositive bound.
    """
    n, alpha = spec.n, spec.alpha
    omega = sphere_area(n)
    hi = spec.h_indices
    gi = spec.g_indices
    factor = nonexistence_factor(n, alpha, hi.p_minus, gi.p_plus)

    exact = u.u_fn is not None
    nodes, w = _profile_quadrature(u, exact)
    uu = u.u_at(nodes)
    up = np.maximum(uu, 0.0)
    integrand = nodes ** (alpha + n - 1) * np.asarray(spec.H.g(up)) * uu
    integral = omega * float(np.dot(w, integrand))

    du1 = abs(float(u.du_at(1.0)) if u.du_fn is not None else float(u.derivatives[-1]))
    boundary = omega * float(spec.G.g(np.array(du1)) * du1 - spec.G.G(np.array(du1)))
    product = factor * integral
    return NonexistenceAudit(factor, integral, product, boundary,
                             bool(product <= 0.0 and boundary > 0.0))


@dataclass
class StraussReport:
    c_emp: float
    radii: np.ndarray
    ratios: np.ndarray

    def to_dict(self) -> dict:
        return {"c_emp": self.c_emp,
                "radii": [float(x) for x in self.radii],
                "ratios": [float(x) for x in self.ratios]}


def strauss_check(spec, u: RadialProfile) -> StraussReport:
    """Empirical radial decay constant over the interior nodes.

    c_emp = max_i |u(r_i)| / (||grad u||_{L^G(B)} * E(G, n, r_i)) over nodes
    strictly inside (0, 1).  Scale-invariant for pure-power G; zero for the
    zero profile.
    """
    r = u.grid.nodes[1:-1]
    vals = np.abs(u.values[1:-1])
    gn = gradient_norm(spec, u)
    if gn == 0.0:
        return StraussReport(0.0, r, np.zeros_like(r))
    table = envelope_table(spec.G, spec.n)
    env = table(r)
    ratios = vals / (gn * env)
    return StraussReport(float(np.max(ratios)), r, ratios)


def degiorgi_levels(spec, u: RadialProfile, K: int) -> np.ndarray:
    """Level-set truncation energies e_k for the levels 1 - 2^{-k}, k = 0..K.

        e_k = omega * int_0^1 r^{alpha+n-1} H( (u - (1 - 2^{-k}))_+ ) dr

    Evaluated on one fixed quadrature rule, so the pointwise ordering of the
    truncations makes the sequence exactly non-increasing; levels above
    sup u give exact zeros.
    """
    if np.any(u.values < -1e-12):
        raise ValueError("level-set energies need a nonnegative profile")
    n, alpha = spec.n, spec.alpha
    omega = sphere_area(n)
    nodes, w = _profile_quadrature(u, exact=u.u_fn is not None)
    uu = u.u_at(nodes)
    wr = w * nodes ** (alpha + n - 1)
    out = np.empty(K + 1)
    for k in range(K + 1):
        trunc = np.maximum(uu - (1.0 - 2.0 ** -k), 0.0)
        out[k] = omega * float(np.dot(wr, spec.H.G(trunc)))
    return out


def boundedness_report(spec, u: RadialProfile) -> tuple:
    """(sup of the node values, boundedness-hypothesis flag).

    The flag is ``None`` when the comparison function R is absent (the
    hypothesis q_plus < r_minus cannot be evaluated).  Informational
    certificate, not a proof.
    """
    sup = float(np.max(np.abs(u.values)))
    if spec.R is None:
        return sup, None
    return sup, bool(check_boundedness_hypothesis(spec))

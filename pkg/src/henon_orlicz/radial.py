"""Radial grids, profiles, the energy functional and its solvers.

Everything lives on the unit interval in the radial variable r; an
n-dimensional integral over the unit ball is ``omega * int_0^1 (...) r^{n-1}
dr`` with ``omega`` the surface measure of the unit sphere.  A candidate
solution is a :class:`RadialProfile`: node values plus derivative values,
interpreted piecewise-linearly between nodes.

The energy of a profile u with Dirichlet value u(1) = 0 is

    J(u) = omega * [ int_0^1 G(|u'|) r^{n-1} dr
                     - int_0^1 r^{alpha+n-1} H(u_+) dr ],

and critical points of J are weak solutions of the Henon g-Laplacian
problem.  Two solvers are provided:

* ODE shooting on the radial flux form  (r^{n-1} g(|u'|) sign(u'))'
  = -r^{alpha+n-1} h(u_+), bisected on the center value u(0); and
* a numerical mountain pass: a discrete path of profiles from 0 to a
  low-energy endpoint is relaxed by preconditioned descent on its energy
  maximizer until the maximizer's weak residual is small.

Discrete consistency contract: ``energy`` and ``energy_gradient`` are exact
companions.  The gradient part of the energy is evaluated per grid panel on
the panel slope s_i = (u_{i+1}-u_i)/h_i through the regularised integrand
G(sqrt(eps^2 + s^2)) - G(eps), whose derivative is exactly the regularised
coefficient g(sqrt(eps^2+s^2)) * s / sqrt(eps^2+s^2) used by the gradient
(for eps = 0 both reduce to the plain G(|s|), g(|s|) sign(s)).  The H part
uses fixed Gauss nodes per grid panel.  Central finite differences of
``energy`` therefore reproduce ``energy_gradient`` to quadrature-free
accuracy, which is what the gradient check exercises.
"""

from __future__ import annotations

import csv
import io
import json
import math
import threading
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded

from .nfunction import NFunction, simonenko_indices
from .luxemburg import SampledFunction, WeightedMeasure, luxemburg_norm
from .quadrature import _leggauss

__all__ = [
    "RadialGrid", "RadialProfile", "SolverConfig",
    "HenonSource", "ConstantSource", "sphere_area",
    "energy", "energy_gradient", "weak_residual", "gradient_norm",
    "shoot", "solve_shooting", "find_e", "mountain_pass_solve",
    "geometry_check", "ShotResult", "ShootingSolution", "MountainPassResult",
    "NoBracketError", "PositivityViolationError", "NonConvergenceError",
    "PathCollapseError", "NotSuperlinearError", "RefusedByClassificationError",
    "BlowUpError",
]


class NoBracketError(RuntimeError):
    """No sign change of the terminal shot value in the scanned range."""

    def __init__(self, message, scan_table=None):
        super().__init__(message)
        self.scan_table = scan_table or []


class PositivityViolationError(RuntimeError):
    """The bisected shooting profile dips below zero in the interior."""


class NonConvergenceError(RuntimeError):
    """Mountain-pass residual stagnated above the tolerance."""

    def __init__(self, message, telemetry=None):
        super().__init__(message)
        self.telemetry = telemetry or []


class PathCollapseError(RuntimeError):
    """The path maximum drifted to an endpoint (no mountain geometry)."""

    def __init__(self, message, telemetry=None):
        super().__init__(message)
        self.telemetry = telemetry or []


class NotSuperlinearError(RuntimeError):
    """Energy along the ray t*u0 never became nonpositive."""


class RefusedByClassificationError(RuntimeError):
    """Solve refused because the classifier did not guarantee existence."""


class BlowUpError(RuntimeError):
    """State exceeded the overflow guard during ODE integration."""


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (4*pi for n = 3)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


# ---------------------------------------------------------------------------
# grids and profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing nodes 0 = r_0 < ... < r_M = 1, M >= 16."""

    nodes: np.ndarray
    grading: str = "uniform"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.size < 17:
            raise ValueError("grid needs at least M = 16 panels")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("grid must span [0, 1]")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")

    @staticmethod
    def uniform(m: int) -> "RadialGrid":
        return RadialGrid(np.linspace(0.0, 1.0, m + 1), "uniform")

    @staticmethod
    def graded_origin(m: int, exponent: float = 1.5) -> "RadialGrid":
        """Nodes (i/M)^exponent, clustered toward the origin."""
        return RadialGrid((np.arange(m + 1) / m) ** exponent, "graded_origin")

    @property
    def m(self) -> int:
        return self.nodes.size - 1

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.nodes)


@dataclass(eq=False)
class RadialProfile:
    """Radial candidate function: node values and derivative values.

    Between nodes the profile is the piecewise-linear interpolant of
    ``values``; ``derivatives`` stores nodal derivative values used by the
    diagnostics (for value-only data they are reconstructed with the
    second-order differences of ``numpy.gradient``).  Profiles built from
    callables keep the exact evaluators, which the quadratures prefer.
    """

    grid: RadialGrid
    values: np.ndarray
    derivatives: np.ndarray
    u_fn: Optional[Callable] = None
    du_fn: Optional[Callable] = None

    @staticmethod
    def from_callable(grid: RadialGrid, u: Callable, du: Optional[Callable] = None
                      ) -> "RadialProfile":
        r = grid.nodes
        vals = np.asarray(u(r), dtype=float)
        if du is not None:
            ders = np.asarray(du(r), dtype=float)
        else:
            ders = np.gradient(vals, r, edge_order=2)
        return RadialProfile(grid, vals, ders, u_fn=u, du_fn=du)

    @staticmethod
    def from_values(grid: RadialGrid, values, derivatives=None) -> "RadialProfile":
        vals = np.asarray(values, dtype=float)
        if vals.shape != grid.nodes.shape:
            raise ValueError("values shape does not match grid")
        if derivatives is None:
            ders = np.gradient(vals, grid.nodes, edge_order=2)
        else:
            ders = np.asarray(derivatives, dtype=float)
        return RadialProfile(grid, vals, ders)

    @staticmethod
    def zero(grid: RadialGrid) -> "RadialProfile":
        z = np.zeros_like(grid.nodes)
        return RadialProfile(grid, z, z.copy())

    def u_at(self, s):
        if self.u_fn is not None:
            return np.asarray(self.u_fn(np.asarray(s, float)), dtype=float)
        return np.interp(np.asarray(s, float), self.grid.nodes, self.values)

    def du_at(self, s):
        if self.du_fn is not None:
            return np.asarray(self.du_fn(np.asarray(s, float)), dtype=float)
        return np.interp(np.asarray(s, float), self.grid.nodes, self.derivatives)

    def panel_slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.grid.h

    def scaled(self, c: float) -> "RadialProfile":
        return RadialProfile(self.grid, c * self.values, c * self.derivatives,
                             u_fn=None if self.u_fn is None else
                             (lambda s, f=self.u_fn: c * np.asarray(f(s))),
                             du_fn=None if self.du_fn is None else
                             (lambda s, f=self.du_fn: c * np.asarray(f(s))))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def validate(self, dirichlet_tol: float = 1e-9) -> None:
        """Dirichlet condition and value/derivative consistency.

        The nodal derivatives must match the piecewise-linear reconstruction
        within grid truncation error (second differences of the values).
        """
        if abs(self.values[-1]) > dirichlet_tol:
            raise ValueError(f"profile violates u(1) = 0: u_M = {self.values[-1]:g}")
        recon = np.gradient(self.values, self.grid.nodes, edge_order=2)
        scale = np.max(np.abs(self.derivatives)) + 1.0
        hmax = float(np.max(self.grid.h))
        curv = np.max(np.abs(np.diff(self.derivatives))) + 1.0
        tol = 4.0 * hmax * curv + 1e-9 * scale
        if np.max(np.abs(recon - self.derivatives)) > tol:
            raise ValueError("nodal derivatives inconsistent with the "
                             "piecewise-linear reconstruction of the values")

    # -- serialization ------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "u", "du"])
        for r, u, du in zip(self.grid.nodes, self.values, self.derivatives):
            w.writerow([f"{r:.17g}", f"{u:.17g}", f"{du:.17g}"])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "RadialProfile":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["r", "u", "du"]:
            raise ValueError("profile CSV must start with header 'r,u,du'")
        r, u, du = [], [], []
        for i, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"profile CSV line {i}: expected 3 columns, "
                                 f"got {len(row)}")
            try:
                r.append(float(row[0])); u.append(float(row[1])); du.append(float(row[2]))
            except ValueError as exc:
                raise ValueError(f"profile CSV line {i}: {exc}") from None
        grid = RadialGrid(np.asarray(r), "uniform")
        return RadialProfile(grid, np.asarray(u), np.asarray(du))

    def to_json_dict(self, meta: Optional[dict] = None) -> dict:
        out = {"grid": [float(x) for x in self.grid.nodes],
               "values": [float(x) for x in self.values],
               "derivatives": [float(x) for x in self.derivatives]}
        if meta:
            out["meta"] = meta
        return out


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs; all positive, path_points >= 8."""

    epsilon_reg: float = 1e-8
    descent_step: float = 0.05
    path_points: int = 13
    max_iters: int = 6000
    residual_tol: float = 5e-5
    seed: int = 0

    def __post_init__(self):
        if self.epsilon_reg <= 0 or self.descent_step <= 0 or self.max_iters <= 0 \
                or self.residual_tol <= 0:
            raise ValueError("solver parameters must be positive")
        if self.path_points < 8:
            raise ValueError("path_points must be at least 8")


# ---------------------------------------------------------------------------
# source terms
# ---------------------------------------------------------------------------

class HenonSource:
    """Right-hand side |x|^alpha h(u_+), with potential |x|^alpha H(u_+)."""

    def __init__(self, spec):
        self.alpha = float(spec.alpha)
        self.H = spec.H

    def f(self, r, u):
        up = np.maximum(u, 0.0)
        return np.power(r, self.alpha) * self.H.g(up)

    def potential(self, r, u):
        up = np.maximum(u, 0.0)
        return np.power(r, self.alpha) * self.H.G(up)

    def x_grad_potential(self, r, u):
        up = np.maximum(u, 0.0)
        return self.alpha * np.power(r, self.alpha) * self.H.G(up)


class ConstantSource:
    """Constant forcing f(r, u) = c; potential F = c*u (manufactured tests)."""

    def __init__(self, c: float):
        self.c = float(c)

    def f(self, r, u):
        return np.full_like(np.asarray(r, float), self.c)

    def potential(self, r, u):
        return self.c * np.asarray(u, dtype=float)

    def x_grad_potential(self, r, u):
        return np.zeros_like(np.asarray(r, float))


# ---------------------------------------------------------------------------
# discrete energy, gradient, residual
# ---------------------------------------------------------------------------

_H_ORDER = 8


def _panel_quadrature(grid: RadialGrid, order: int = _H_ORDER):
    """Gauss nodes/weights per grid panel, plus hat-function values."""
    x, w = _leggauss(order)
    lo, hi = grid.nodes[:-1], grid.nodes[1:]
    half = 0.5 * (hi - lo)
    nodes = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
    weights = half[:, None] * w[None, :]
    # barycentric coordinate of each node inside its panel
    lam = (nodes - lo[:, None]) / (hi - lo)[:, None]
    return nodes, weights, lam


def _panel_masses(grid: RadialGrid, n: int) -> np.ndarray:
    r = grid.nodes
    return (r[1:] ** n - r[:-1] ** n) / n


def _reg_G(G: NFunction, s: np.ndarray, eps: float) -> np.ndarray:
    if eps == 0.0:
        return G.G(np.abs(s))
    root = np.sqrt(eps * eps + s * s)
    return G.G(root) - G.G(np.array(eps))


def _reg_coeff(G: NFunction, s: np.ndarray, eps: float) -> np.ndarray:
    """Regularised flux coefficient g(sqrt(eps^2+s^2)) * s / sqrt(eps^2+s^2)."""
    if eps == 0.0:
        return np.sign(s) * G.g(np.abs(s))
    root = np.sqrt(eps * eps + s * s)
    return G.g(root) * s / root


def energy(spec, u: RadialProfile, source=None, *, eps_reg: float = 0.0) -> float:
    """Energy J(u) of a profile (see module docstring for the discretisation).

    ``eps_reg > 0`` evaluates the regularised gradient integrand so that the
    energy is the exact antiderivative of :func:`energy_gradient`; the
    difference from the plain energy is O(G(eps)).
    """
    n = spec.n
    omega = sphere_area(n)
    grid = u.grid
    masses = _panel_masses(grid, n)
    src = source if source is not None else HenonSource(spec)

    if u.u_fn is None or u.du_fn is None:
        s = u.panel_slopes()
        grad_term = float(np.dot(_reg_G(spec.G, s, eps_reg), masses))
        nodes, weights, _ = _panel_quadrature(grid)
        uu = np.interp(nodes.ravel(), grid.nodes, u.values).reshape(nodes.shape)
    else:
        nodes, weights, _ = _panel_quadrature(grid, order=12)
        du = u.du_at(nodes.ravel()).reshape(nodes.shape)
        grad_term = float(np.sum(
            weights * _reg_G(spec.G, du, eps_reg) * nodes ** (n - 1)))
        uu = u.u_at(nodes.ravel()).reshape(nodes.shape)
    pot = src.potential(nodes, uu) * nodes ** (n - 1)
    h_term = float(np.sum(weights * pot))
    return omega * (grad_term - h_term)


def energy_gradient(spec, u: RadialProfile, source=None, *,
                    eps_reg: float = 1e-8) -> np.ndarray:
    """Discrete Frechet derivative <J'(u), phi_i> over the free nodes 0..M-1.

    phi_i is the hat function at node i (the Dirichlet node M is fixed).  The
    flux coefficient is evaluated per panel on the slope through the
    regularisation g(sqrt(eps^2+s^2)) s / sqrt(eps^2+s^2), which the paper's
    regularised auxiliary operator uses and which keeps the coefficient
    defined at degenerate gradients when p_minus < 2.
    """
    n = spec.n
    omega = sphere_area(n)
    grid = u.grid
    m = grid.m
    src = source if source is not None else HenonSource(spec)

    masses = _panel_masses(grid, n)
    s = u.panel_slopes()
    coeff = _reg_coeff(spec.G, s, eps_reg) * masses / grid.h  # per panel

    grad = np.zeros(m)
    grad[0] = -coeff[0]
    if m > 1:
        grad[1:] = coeff[:m - 1] - coeff[1:]

    nodes, weights, lam = _panel_quadrature(grid)
    uu = np.interp(nodes.ravel(), grid.nodes, u.values).reshape(nodes.shape)
    fv = src.f(nodes, uu) * nodes ** (n - 1) * weights
    left = np.sum(fv * (1.0 - lam), axis=1)   # phi_i on panel i
    right = np.sum(fv * lam, axis=1)          # phi_i on panel i-1
    grad[0] -= left[0]
    if m > 1:
        grad[1:] -= right[:m - 1] + left[1:]
    return omega * grad


_hat_norm_cache: dict = {}
_hat_norm_lock = threading.Lock()


def _hat_norms(grid: RadialGrid, G: NFunction, n: int) -> np.ndarray:
    """W^{1,G}(B) Luxemburg norms of the hat functions at the free nodes.

    Cached per (grid, G, n): the norms do not depend on the profile.  Both the
    function and the gradient part are solved by a vectorised bisection across
    all hats at once on panel-aligned Gauss samples.
    """
    key = (id(grid), id(G), int(n))
    out = _hat_norm_cache.get(key)
    if out is not None:
        return out[0]

    omega = sphere_area(n)
    m = grid.m
    nodes, weights, lam = _panel_quadrature(grid, order=10)
    meas = weights * nodes ** (n - 1) * omega
    k = nodes.shape[1]

    # hat i is supported on panels i-1 (rising lam) and i (falling 1-lam)
    vals = np.zeros((m, 2 * k))
    dvals = np.zeros((m, 2 * k))
    wts = np.zeros((m, 2 * k))
    h = grid.h
    vals[0, k:] = 1.0 - lam[0]
    dvals[0, k:] = 1.0 / h[0]
    wts[0, k:] = meas[0]
    for i in range(1, m):
        vals[i, :k] = lam[i - 1]
        dvals[i, :k] = 1.0 / h[i - 1]
        wts[i, :k] = meas[i - 1]
        vals[i, k:] = 1.0 - lam[i]
        dvals[i, k:] = 1.0 / h[i]
        wts[i, k:] = meas[i]

    norm_u = _batch_luxemburg(G, vals, wts)
    norm_du = _batch_luxemburg(G, dvals, wts)
    norms = norm_u + norm_du
    with _hat_norm_lock:
        _hat_norm_cache[key] = (norms, grid, G)
    return norms


def _batch_luxemburg(G: NFunction, fv: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise Luxemburg norms of sample matrix fv with weights w."""
    rows = fv.shape[0]
    lam = np.ones(rows)

    def mod(l):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sum(w * G.G(np.abs(fv) / l[:, None]), axis=1)

    mval = mod(lam)
    lo = np.where(mval > 1.0, lam, lam)
    hi = lam.copy()
    for _ in range(200):
        mval = mod(hi)
        need = mval > 1.0
        if not np.any(need):
            break
        hi = np.where(need, hi * 2.0, hi)
    lo = hi / 2.0
    for _ in range(200):
        mval = mod(lo)
        need = mval < 1.0
        if not np.any(need & (lo > 2.0 ** -60)):
            break
        lo = np.where(need, lo / 2.0, lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        above = mod(mid) > 1.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out = 0.5 * (lo + hi)
    zero = ~np.any(fv != 0, axis=1)
    out[zero] = 0.0
    return out


def weak_residual(spec, u: RadialProfile, source=None, *,
                  eps_reg: float = 1e-8, gradient: Optional[np.ndarray] = None
                  ) -> float:
    """max_i |<J'(u), phi_i>| / ||phi_i||_{W^{1,G}(B)} over the free nodes.

    A profile is a discrete solution certificate when this is below the
    configured residual tolerance.
    """
    if gradient is None:
        gradient = energy_gradient(spec, u, source, eps_reg=eps_reg)
    norms = _hat_norms(u.grid, spec.G, spec.n)
    return float(np.max(np.abs(gradient) / norms))


def gradient_norm(spec, u: RadialProfile) -> float:
    """Luxemburg norm of |u'| over the ball, ||grad u||_{L^G(B)}."""
    omega = sphere_area(spec.n)
    f = SampledFunction(lambda s: np.abs(u.du_at(s)),
                        breakpoints=u.grid.nodes)
    mu = WeightedMeasure(0.0, 1.0, spec.n - 1, scale=omega)
    return luxemburg_norm(spec.G, f, mu)


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------

@dataclass
class ShotResult:
    profile: RadialProfile
    terminal: float              # u(1) of the (possibly continued) shot
    crossing_r: Optional[float]  # first interior zero, if any
    d0: float


@dataclass
class ShootingSolution:
    profile: RadialProfile
    d0: float
    terminal: float
    brackets: list
    scan_table: list


def _signed_flux_inverse(G: NFunction, y):
    """Inverse of s -> g(|s|) sign(s): sign(y) g^{-1}(|y|)."""
    y = np.asarray(y, dtype=float)
    return np.sign(y) * G.inv_g(np.abs(y))


def shoot(spec, d0: float, *, grid: Optional[RadialGrid] = None, source=None,
          r_start: float = 1e-6, rtol: float = 1e-10, atol: float = 1e-12,
          guard: float = 1e8) -> ShotResult:
    """Integrate the radial flux ODE outward from u(0) = d0.

    Near the origin the flux behaves like w(r) ~ -f(0+, d0) r^{alpha+n} /
    (alpha+n), i.e. g(|u'|) ~ r^{alpha+1} h(d0)/(n+alpha) for the Henon source,
    so the integration starts at ``r_start`` from that series.  The source is
    cut off at u <= 0 (h(u_+)), which makes the terminal value u(1) continuous
    in d0; the shot is continued past a zero crossing rather than stopped, and
    the first crossing radius is reported.
    """
    if d0 <= 0:
        raise ValueError("shoot requires d0 > 0")
    n = spec.n
    grid = grid or RadialGrid.graded_origin(256)
    src = source if source is not None else HenonSource(spec)

    # series start: u' = -ginv(int_0^r f s^{n-1} ds / r^{n-1}) with u ~ d0
    x, wq = _leggauss(12)
    sn = 0.5 * r_start * (x + 1.0)
    swt = 0.5 * r_start * wq
    w0 = -float(np.dot(swt, np.asarray(src.f(sn, np.full_like(sn, d0)))
                       * sn ** (n - 1)))
    du0 = float(_signed_flux_inverse(spec.G, w0 / r_start ** (n - 1)))
    u0 = d0 + 0.5 * r_start * du0  # trapezoid with u'(0) = 0

    def rhs(r, y):
        u, w = y
        du = _signed_flux_inverse(spec.G, w / r ** (n - 1))
        dw = -float(src.f(np.array(r), np.array(u))) * r ** (n - 1)
        return [float(du), dw]

    def blow_up(r, y):
        return guard - abs(y[0])
    blow_up.terminal = True

    sol = solve_ivp(rhs, (r_start, 1.0), [u0, w0], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True, events=blow_up)
    if sol.status == 1:
        raise BlowUpError(f"shot from d0 = {d0:g} exceeded the overflow guard")
    if not sol.success:
        raise BlowUpError(f"integrator failed for d0 = {d0:g}: {sol.message}")

    r_nodes = grid.nodes
    inner = r_nodes < r_start
    y = sol.sol(np.clip(r_nodes, r_start, 1.0))
    values = y[0].copy()
    flux = y[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ders = _signed_flux_inverse(
            spec.G, np.where(r_nodes > 0, flux / np.maximum(r_nodes, r_start) ** (n - 1), 0.0))
    values[inner] = d0
    ders[r_nodes == 0.0] = 0.0

    uu = sol.y[0]
    crossing = None
    neg = np.where(uu <= 0.0)[0]
    if neg.size:
        j = int(neg[0])
        if j > 0:
            a, b = sol.t[j - 1], sol.t[j]
            ua, ub = uu[j - 1], uu[j]
            crossing = float(a + (b - a) * ua / (ua - ub))
        else:
            crossing = float(sol.t[0])

    prof = RadialProfile(grid, values, ders)
    return ShotResult(prof, float(sol.y[0, -1]), crossing, d0)


def solve_shooting(spec, d_range: tuple, *, grid: Optional[RadialGrid] = None,
                   source=None, scan_points: int = 24, terminal_tol: float = 1e-8,
                   max_bisect: int = 200) -> ShootingSolution:
    """Root-find the center value d0 so the shot lands at u(1) = 0.

    Scans ``d_range`` for sign changes of the terminal value; every bracket
    found is reported, and the first one is bisected to |u(1)| <= tol.  The
    final profile has u(1) snapped to 0 and must stay positive in the
    interior.  Raises :class:`NoBracketError` (with the scan table attached)
    or :class:`PositivityViolationError`.
    """
    d_lo, d_hi = d_range
    if not (0 < d_lo < d_hi):
        raise ValueError("d_range must satisfy 0 < d_lo < d_hi")
    grid = grid or RadialGrid.graded_origin(256)

    ds = np.geomspace(d_lo, d_hi, scan_points)
    terms = []
    for d in ds:
        terms.append(shoot(spec, float(d), grid=grid, source=source).terminal)
    scan_table = [(float(d), float(t)) for d, t in zip(ds, terms)]
    brackets = [(float(ds[i]), float(ds[i + 1]))
                for i in range(len(ds) - 1)
                if np.sign(terms[i]) * np.sign(terms[i + 1]) < 0]
    if not brackets:
        raise NoBracketError(
            f"no sign change of u(1) for d0 in [{d_lo:g}, {d_hi:g}]",
            scan_table)

    a, b = brackets[0]
    ta = shoot(spec, a, grid=grid, source=source).terminal
    best = None
    for _ in range(max_bisect):
        mid = 0.5 * (a + b)
        res = shoot(spec, mid, grid=grid, source=source)
        best = res
        if abs(res.terminal) <= terminal_tol:
            break
        if np.sign(res.terminal) == np.sign(ta):
            a, ta = mid, res.terminal
        else:
            b = mid
    if best is None or abs(best.terminal) > terminal_tol:
        raise NoBracketError(
            f"bisection stalled: |u(1)| = {abs(best.terminal):g} > {terminal_tol:g}",
            scan_table)

    prof = best.profile
    interior = prof.values[:-1]
    if np.any(interior[prof.grid.nodes[:-1] < 1.0] <= 0.0):
        raise PositivityViolationError(
            f"bisected profile dips below zero in the interior (d0 = {best.d0:g})")
    prof.values[-1] = 0.0
    return ShootingSolution(prof, best.d0, best.terminal, brackets, scan_table)


# ---------------------------------------------------------------------------
# mountain pass
# ---------------------------------------------------------------------------

def default_seed_profile(grid: RadialGrid) -> RadialProfile:
    """Positive bump 1 - r^2 as a mountain-pass seed direction."""
    return RadialProfile.from_values(grid, 1.0 - grid.nodes ** 2)


def find_e(spec, u0: RadialProfile, *, max_doublings: int = 60) -> RadialProfile:
    """Scale the seed until the energy is nonpositive: e = t*u0, J(e) <= 0.

    ``u0`` should be nonnegative, nonzero, with unit gradient norm; t doubles
    from 1.  Raises :class:`NotSuperlinearError` after 60 doublings (the
    low-energy endpoint required by the mountain geometry does not appear).
    """
    if not np.any(u0.values > 0):
        raise ValueError("find_e needs a nonnegative, nonzero seed")
    t = 1.0
    for _ in range(max_doublings):
        cand = u0.scaled(t)
        if energy(spec, cand) <= 0.0:
            return cand
        t *= 2.0
    raise NotSuperlinearError(
        "energy along the ray stayed positive for 60 doublings; the problem "
        "does not behave superlinearly in practice")


def _riesz_matrix(grid: RadialGrid, n: int):
    """Banded stiffness of -(r^{n-1} z')' on the free nodes (Dirichlet at 1)."""
    m = grid.m
    masses = _panel_masses(grid, n)
    k = masses / grid.h ** 2
    diag = np.empty(m)
    diag[0] = k[0]
    diag[1:] = k[:m - 1] + k[1:]
    ab = np.zeros((2, m))
    ab[0, 1:] = -k[:m - 1]   # superdiagonal A[i, i+1] = -mass_i / h_i^2
    ab[1, :] = diag
    return ab


def _riesz_solve(ab, rhs):
    a = np.zeros((3, rhs.size))
    a[0] = ab[0]
    a[1] = ab[1]
    a[2, :-1] = ab[0, 1:]
    return solve_banded((1, 1), a, rhs)


@dataclass
class MountainPassResult:
    profile: RadialProfile
    critical_value: float
    residual: float
    iterations: int
    telemetry: list = field(default_factory=list)  # (iter, max_energy, residual, j_max, step)
    path: list = field(default_factory=list)


def _path_profile(grid, vec) -> RadialProfile:
    vals = np.concatenate((vec, [0.0]))
    return RadialProfile.from_values(grid, vals)


def mountain_pass_solve(spec, cfg: SolverConfig = SolverConfig(), *,
                        grid: Optional[RadialGrid] = None,
                        u0: Optional[RadialProfile] = None,
                        source=None, force: bool = False) -> MountainPassResult:
    """Numerical mountain pass on the discretised energy.

    A discrete path of ``cfg.path_points`` profiles joins 0 to the low-energy
    endpoint from :func:`find_e` by linear interpolation in function space.
    Each iteration locates the path maximizer (ties broken toward the lowest
    index), takes a backtracking preconditioned steepest-descent step on it
    (direction: the Riesz representative of the energy gradient in the
    discrete H^1 inner product; a step is accepted only when the path maximum
    decreases, otherwise it is halved), relaxes the two neighbouring path
    points, and every 10 iterations re-parametrizes the path by arc length in
    the discrete W^{1,G} metric.  Terminates when the maximizer's weak
    residual drops below ``cfg.residual_tol``.

    Raises :class:`PathCollapseError` when the maximum drifts to an endpoint
    and :class:`NonConvergenceError` (telemetry attached) on stagnation.
    Unless ``force`` is set, the solve refuses to start when the classifier
    does not guarantee existence.
    """
    from .admissibility import Verdict, classify

    if not force:
        verdict = classify(spec).verdict
        if verdict is not Verdict.EXISTENCE:
            raise RefusedByClassificationError(
                f"classification verdict is {verdict.value}; pass force=True "
                "to attempt the solve anyway")

    grid = grid or RadialGrid.graded_origin(256)
    n_pts = cfg.path_points
    src = source if source is not None else HenonSource(spec)

    seed = u0 if u0 is not None else default_seed_profile(grid)
    gn = gradient_norm(spec, seed)
    if gn <= 0:
        raise ValueError("seed profile has zero gradient norm")
    seed = seed.scaled(1.0 / gn)
    e_prof = find_e(spec, seed)

    e_vec = e_prof.values[:-1]
    path = [t * e_vec for t in np.linspace(0.0, 1.0, n_pts)]
    ab = _riesz_matrix(grid, spec.n)
    norms = _hat_norms(grid, spec.G, spec.n)

    def J(vec):
        return energy(spec, _path_profile(grid, vec), src, eps_reg=cfg.epsilon_reg)

    def grad(vec):
        return energy_gradient(spec, _path_profile(grid, vec), src,
                               eps_reg=cfg.epsilon_reg)

    def descend(vec, e_val, step):
        """One backtracked preconditioned descent step; accepted only when the
        point's own energy decreases (keeps the path max non-increasing)."""
        g = grad(vec)
        z = _riesz_solve(ab, g)
        cap = 0.5 * (1.0 + float(np.max(np.abs(vec))))
        zmax = float(np.max(np.abs(z)))
        if zmax > cap:
            z = z * (cap / zmax)
        slope = float(np.dot(g, z))
        if slope <= 0:
            return vec, e_val, False, step
        for _ in range(40):
            cand = vec - step * z
            val = J(cand)
            if val <= e_val - 1e-4 * step * slope:
                return cand, val, True, step
            step *= 0.5
        return vec, e_val, False, step

    energies = np.array([J(v) for v in path])
    telemetry = []
    stagnant = 0
    res = math.inf

    for it in range(1, cfg.max_iters + 1):
        # ties within 1e-12 of the maximum break toward the lowest index
        j_max = int(np.flatnonzero(energies >= np.max(energies) - 1e-12)[0])
        if j_max in (0, n_pts - 1):
            raise PathCollapseError(
                "path maximum drifted to an endpoint: no mountain geometry",
                telemetry)

        g = grad(path[j_max])
        res = float(np.max(np.abs(g) / norms))
        cur_max = float(np.max(energies))
        if res <= cfg.residual_tol:
            prof = _path_profile(grid, path[j_max])
            telemetry.append((it, cur_max, res, j_max, 0.0))
            return MountainPassResult(prof, cur_max, res, it, telemetry,
                                      [_path_profile(grid, v) for v in path])

        # steepest-descent step on the maximizer, then relax the others
        # (neighbours of the maximizer first, at half its step)
        path[j_max], energies[j_max], accepted, used = descend(
            path[j_max], energies[j_max], cfg.descent_step)
        order = [j for d in range(1, n_pts) for j in (j_max - d, j_max + d)
                 if 0 < j < n_pts - 1]
        for j in order:
            path[j], energies[j], _, _ = descend(
                path[j], energies[j], 0.5 * cfg.descent_step)

        stagnant = stagnant + 1 if not accepted else 0

        # re-parametrize by arc length: cheap preconditioner metric every
        # iteration, the W^{1,G} metric every 10th; guarded so the recorded
        # path maximum stays non-increasing
        w1g = (it % 10 == 0)
        new_path = _reparametrize(spec, grid, path, ab=None if w1g else ab)
        new_energies = np.array([J(v) for v in new_path])
        if float(np.max(new_energies)) <= cur_max + 1e-12:
            path, energies = new_path, new_energies

        telemetry.append((it, float(np.max(energies)), res, j_max, used))

        # once the string slows, polish the maximizer with safeguarded Newton
        # iterations on the regularised critical-point equation J'(u) = 0;
        # the saddle is a nondegenerate critical point, so Newton converges
        # from the string's maximizer once it is close enough
        if it % 25 == 0 or stagnant >= 10:
            j_now = int(np.flatnonzero(energies >= np.max(energies) - 1e-12)[0])
            if 0 < j_now < n_pts - 1:
                vec, res2 = _newton_polish(spec, grid, path[j_now], src, cfg,
                                           norms)
                prof = _path_profile(grid, vec)
                c = energy(spec, prof, src, eps_reg=cfg.epsilon_reg)
                # accept only a genuine mountain-pass point: positive
                # critical value and a non-trivial nonnegative profile
                if (res2 <= cfg.residual_tol and c > 0
                        and prof.sup_norm() > 1e-6
                        and np.min(prof.values[:-1]) > -1e-8):
                    telemetry.append((it, float(np.max(energies)), res2,
                                      j_now, 0.0))
                    return MountainPassResult(prof, c, res2, it, telemetry,
                                              [_path_profile(grid, v)
                                               for v in path])
            if stagnant >= 50:
                raise NonConvergenceError(
                    f"residual stagnated at {res:.3g} above tol "
                    f"{cfg.residual_tol:g}", telemetry)

    raise NonConvergenceError(
        f"no convergence within {cfg.max_iters} iterations "
        f"(last residual {res:.3g})", telemetry)


def _newton_polish(spec, grid, vec, src, cfg, norms, max_iter: int = 30):
    """Safeguarded Newton iteration on the critical-point equation J'(u) = 0.

    The tridiagonal Jacobian of the discrete gradient combines the derivative
    of the regularised flux coefficient per panel with the per-panel Gauss
    rule on h'(u_+) (requires g_prime/h_prime; falls back to returning the
    input unchanged when either is missing).  Steps are accepted only while
    the residual decreases.
    """
    eps = cfg.epsilon_reg
    G, H = spec.G, getattr(src, "H", None)
    if G.g_prime is None or (isinstance(src, HenonSource) and H.g_prime is None):
        return vec, math.inf
    n = spec.n
    omega = sphere_area(n)
    masses = _panel_masses(grid, n)
    h = grid.h
    m = grid.m
    nodes, weights, lam = _panel_quadrature(grid)

    def gradient(v):
        return energy_gradient(spec, _path_profile(grid, v), src, eps_reg=eps)

    def residual(gvec):
        return float(np.max(np.abs(gvec) / norms))

    cur = np.asarray(vec, dtype=float).copy()
    g = gradient(cur)
    best_res = residual(g)
    for _ in range(max_iter):
        if best_res <= cfg.residual_tol:
            break
        vals = np.concatenate((cur, [0.0]))
        s = np.diff(vals) / h
        root = np.sqrt(eps * eps + s * s)
        # d/ds of the regularised coefficient g(root) * s / root
        aprime = G.g_prime(root) * (s / root) ** 2 + G.g(root) * eps * eps / root ** 3
        k = omega * aprime * masses / h ** 2
        diag = np.empty(m)
        diag[0] = k[0]
        diag[1:] = k[:m - 1] + k[1:]
        sup = -k[:m - 1]
        # reaction part: - omega * int r^{alpha+n-1} h'(u_+) phi_i phi_j
        uu = np.interp(nodes.ravel(), grid.nodes, vals).reshape(nodes.shape)
        up = np.maximum(uu, 0.0)
        if isinstance(src, HenonSource):
            hp = np.power(nodes, src.alpha) * H.g_prime(up) * (uu > 0)
        else:
            hp = np.zeros_like(uu)
        wgt = weights * nodes ** (n - 1) * omega * hp
        phi_l, phi_r = 1.0 - lam, lam
        d_same = np.sum(wgt * phi_l * phi_l, axis=1)
        d_next = np.sum(wgt * phi_r * phi_r, axis=1)
        d_mix = np.sum(wgt * phi_l * phi_r, axis=1)
        diag[0] -= d_same[0]
        if m > 1:
            diag[1:] -= d_next[:m - 1] + d_same[1:]
            sup -= d_mix[:m - 1]
        a = np.zeros((3, m))
        a[0, 1:] = sup
        a[1] = diag
        a[2, :-1] = sup
        try:
            delta = solve_banded((1, 1), a, g)
        except Exception:
            break
        step = 1.0
        improved = False
        for _ in range(12):
            cand = cur - step * delta
            gc = gradient(cand)
            rc = residual(gc)
            if rc < best_res:
                cur, g, best_res = cand, gc, rc
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return cur, best_res


def _reparametrize(spec, grid, path, ab=None):
    """Redistribute path points by arc length.

    With ``ab`` given, segment lengths use the cheap preconditioner metric
    sqrt(v^T A v); otherwise the discrete W^{1,G} Luxemburg metric.
    """
    n_pts = len(path)
    seg = np.zeros(n_pts - 1)
    if ab is not None:
        for i in range(n_pts - 1):
            d = path[i + 1] - path[i]
            Ad = ab[1] * d
            Ad[:-1] += ab[0, 1:] * d[1:]
            Ad[1:] += ab[0, 1:] * d[:-1]
            seg[i] = math.sqrt(max(float(np.dot(d, Ad)), 0.0))
    else:
        omega = sphere_area(spec.n)
        mu = WeightedMeasure(0.0, 1.0, spec.n - 1, scale=omega)
        for i in range(n_pts - 1):
            dvec = path[i + 1] - path[i]
            prof = _path_profile(grid, dvec)
            fu = SampledFunction(lambda s, p=prof: np.abs(p.u_at(s)),
                                 breakpoints=grid.nodes)
            fdu = SampledFunction(lambda s, p=prof: np.abs(p.du_at(s)),
                                  breakpoints=grid.nodes)
            seg[i] = luxemburg_norm(spec.G, fu, mu) + luxemburg_norm(spec.G, fdu, mu)
    total = np.concatenate(([0.0], np.cumsum(seg)))
    if total[-1] <= 0:
        return path
    targets = np.linspace(0.0, total[-1], n_pts)
    new_path = [path[0]]
    for t in targets[1:-1]:
        k = int(np.searchsorted(total, t) - 1)
        k = min(max(k, 0), n_pts - 2)
        w = (t - total[k]) / max(total[k + 1] - total[k], 1e-300)
        new_path.append((1.0 - w) * path[k] + w * path[k + 1])
    new_path.append(path[-1])
    return new_path


def geometry_check(spec, radius: float, *, samples: int = 64, seed: int = 0,
                   grid: Optional[RadialGrid] = None) -> tuple:
    """Sampled mountain geometry: (sigma, passed) on the gradient-norm sphere.

    Draws ``samples`` (>= 50) random nonnegative profiles, scales each to
    gradient norm ``radius`` and returns the minimum sampled energy as sigma
    with ``passed = sigma > 0``.  Radii above 1 are allowed so the low-energy
    endpoint can be probed.  Deterministic for a fixed seed.
    """
    if radius <= 0:
        raise ValueError("geometry_check needs radius > 0")
    samples = max(int(samples), 50)
    grid = grid or RadialGrid.graded_origin(128)
    rng = np.random.default_rng(seed)
    r = grid.nodes
    # smooth nonnegative bumps: random mixtures of (1-r^2) r^k shapes
    basis = np.stack([(1.0 - r ** 2) * r ** k for k in range(6)])
    sigma = math.inf
    for _ in range(samples):
        coeffs = rng.uniform(0.0, 1.0, basis.shape[0])
        y = coeffs @ basis
        if not np.any(y > 0):
            continue
        prof = RadialProfile.from_values(grid, y)
        gn = gradient_norm(spec, prof)
        if gn <= 0:
            continue
        prof = prof.scaled(radius / gn)
        sigma = min(sigma, energy(spec, prof))
    return float(sigma), bool(sigma > 0)

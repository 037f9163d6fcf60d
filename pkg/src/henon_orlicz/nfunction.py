"""N-function calculus: growth functions, indices, conjugates, comparisons.

An N-function is a convex ``G : [0, inf) -> [0, inf)`` with
``G(t) = int_0^t g``, where the right derivative ``g`` is non-decreasing,
vanishes only at 0 and tends to infinity; ``G`` is superlinear both at 0 and
at infinity.  The whole toolkit is organised around the index pair

    1 < p_minus <= t g(t) / G(t) <= p_plus < inf,

which controls Delta_2 behaviour, conjugate duality and every growth
comparison used by the existence/nonexistence classifier.

The catalog provides the standard families

* ``power``          : G(t) = t**p                                   (p, p)
* ``power_sum``      : G(t) = t**p / p + t**q / q,  1 < p < q        (p, q)
* ``log_perturbed``  : G(t) = t**p * ln(e - 1 + t**q)**r             (p, p + q*r)
* ``loglog``         : G(t) = t**p * ln(ln(e**e - 1 + t))**s         (p, p + s)

with closed-form derivatives and the index pairs quoted above attached as
exact.  For the logarithmic families these attached pairs are valid bounding
pairs for the ratio ``t g / G`` (the ratio stays inside them for every t)
but are not the tight infimum/supremum, which for those families is only
reachable by the numerical estimator; see :func:`simonenko_indices`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "NFunction", "IndexPair", "NotAdmissibleError", "ComparisonVerdict",
    "make_catalog", "scaled_power", "simonenko_indices", "complementary",
    "young_gap", "check_delta2", "compare_at_infinity", "xi_bounds",
    "compose_inverse", "critical_exponent", "psi_growth", "psi_functions",
    "monotone_inverse",
]


class NotAdmissibleError(ValueError):
    """The growth ratio t*g(t)/G(t) leaves (1, inf): not admissible here."""


@dataclass(frozen=True)
class IndexPair:
    """Growth index pair (p_minus, p_plus) with 1 < p_minus <= p_plus < inf.

    ``exact`` records whether the pair came from a closed form (catalog or
    conjugate duality) or from grid estimation.
    """

    p_minus: float
    p_plus: float
    exact: bool = False

    def __post_init__(self):
        if not (1.0 < self.p_minus <= self.p_plus < math.inf):
            raise NotAdmissibleError(
                f"index pair must satisfy 1 < p_minus <= p_plus < inf, "
                f"got ({self.p_minus}, {self.p_plus})")

    def conjugate(self) -> "IndexPair":
        """Holder-conjugate pair ((p_plus)', (p_minus)')."""
        return IndexPair(self.p_plus / (self.p_plus - 1.0),
                         self.p_minus / (self.p_minus - 1.0), exact=self.exact)

    def as_tuple(self):
        return (self.p_minus, self.p_plus)


@dataclass(frozen=True, eq=False)
class NFunction:
    """Evaluable convex growth function G with derivative g.

    All callables are vectorised over numpy arrays.  Instances are immutable
    after construction and therefore safe to share across threads; the cached
    index pair is attached at construction and never mutated.

    ``g_inverse``/``G_inverse`` are optional closed-form inverses; when absent
    the toolkit falls back to monotone bisection.
    """

    G: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    g_prime: Optional[Callable[[np.ndarray], np.ndarray]] = None
    index_pair: Optional[IndexPair] = None
    g_inverse: Optional[Callable[[np.ndarray], np.ndarray]] = None
    G_inverse: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = "custom"

    def __repr__(self):
        idx = "" if self.index_pair is None else (
            f", indices=({self.index_pair.p_minus:g}, {self.index_pair.p_plus:g})")
        return f"NFunction({self.label}{idx})"

    def inv_g(self, s):
        """g^{-1}(s), closed form when available, else monotone bisection."""
        if self.g_inverse is not None:
            return self.g_inverse(np.asarray(s, dtype=float))
        return monotone_inverse(self.g, s)

    def validate(self, t_min: float = 1e-8, t_max: float = 1e8,
                 points: int = 200) -> None:
        """Check the N-function invariants on a log grid; raise on violation.

        Checks G(0) = 0, g(0) = 0, positivity and monotonicity of g, convexity
        of G at sampled midpoints, consistency of the numeric derivative of G
        with g (relative 1e-6), and admissibility / superlinearity through the
        index estimate.
        """
        if abs(float(self.G(np.array(0.0)))) > 1e-300:
            raise NotAdmissibleError("G(0) must be 0")
        if abs(float(self.g(np.array(0.0)))) > 1e-300:
            raise NotAdmissibleError("g(0) must be 0")
        t = np.logspace(math.log10(t_min), math.log10(t_max), points)
        gt = np.asarray(self.g(t), dtype=float)
        if np.any(gt <= 0):
            raise NotAdmissibleError("g must be positive on (0, inf)")
        if np.any(np.diff(gt) < -1e-12 * gt[1:]):
            raise NotAdmissibleError("g must be non-decreasing")
        Gt = np.asarray(self.G(t), dtype=float)
        if np.any(np.diff(Gt) <= 0):
            raise NotAdmissibleError("G must be strictly increasing")
        a, b = t[:-1], t[1:]
        mid = 0.5 * (a + b)
        if np.any(self.G(mid) > 0.5 * (self.G(a) + self.G(b)) * (1 + 1e-12)):
            raise NotAdmissibleError("G failed the midpoint convexity check")
        h = 1e-5
        fd = (self.G(t * (1 + h)) - self.G(t * (1 - h))) / (2 * t * h)
        rel = np.abs(fd - gt) / np.maximum(np.abs(gt), 1e-300)
        if np.max(rel) > 1e-6:
            raise NotAdmissibleError(
                f"numeric derivative of G deviates from g by {np.max(rel):.2e}")
        # superlinearity at 0/inf is equivalent to the ratio staying in (1, inf)
        simonenko_indices(self, force_estimate=True, t_min=t_min, t_max=t_max,
                          points_per_decade=40)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _power(p: float) -> NFunction:
    if not p > 1:
        raise ValueError(f"power: requires exponent p > 1, got p = {p}")
    return NFunction(
        G=lambda t: np.power(t, p),
        g=lambda t: p * np.power(t, p - 1.0),
        g_prime=lambda t: p * (p - 1.0) * np.power(t, p - 2.0),
        index_pair=IndexPair(p, p, exact=True),
        g_inverse=lambda s: np.power(np.asarray(s) / p, 1.0 / (p - 1.0)),
        G_inverse=lambda v: np.power(v, 1.0 / p),
        label=f"power(p={p:g})",
    )


def scaled_power(p: float, coefficient: float = 1.0) -> NFunction:
    """G(t) = coefficient * t**p; e.g. ``scaled_power(2, 0.5)`` is t^2/2.

    Not a catalog family; convenience constructor for normalised powers whose
    derivative is ``h(t) = t**(p-1)`` when ``coefficient = 1/p``.
    """
    if not (p > 1 and coefficient > 0):
        raise ValueError("scaled_power requires p > 1 and coefficient > 0")
    c = float(coefficient)
    return NFunction(
        G=lambda t: c * np.power(t, p),
        g=lambda t: c * p * np.power(t, p - 1.0),
        g_prime=lambda t: c * p * (p - 1.0) * np.power(t, p - 2.0),
        index_pair=IndexPair(p, p, exact=True),
        g_inverse=lambda s: np.power(np.asarray(s) / (c * p), 1.0 / (p - 1.0)),
        G_inverse=lambda v: np.power(np.asarray(v) / c, 1.0 / p),
        label=f"scaled_power(p={p:g}, c={c:g})",
    )


def _power_sum(p: float, q: float) -> NFunction:
    if not (1 < p < q):
        raise ValueError(f"power_sum: requires 1 < p < q, got p = {p}, q = {q}")
    return NFunction(
        G=lambda t: np.power(t, p) / p + np.power(t, q) / q,
        g=lambda t: np.power(t, p - 1.0) + np.power(t, q - 1.0),
        g_prime=lambda t: (p - 1.0) * np.power(t, p - 2.0)
                          + (q - 1.0) * np.power(t, q - 2.0),
        index_pair=IndexPair(p, q, exact=True),
        label=f"power_sum(p={p:g}, q={q:g})",
    )


def _log_perturbed(p: float, q: float, r: float) -> NFunction:
    # the paper-style constraint is p, q, r > 0 with p + q*r > 1; the lower
    # index equals p, so p > 1 is additionally required for admissibility
    if not (q > 0 and r > 0):
        raise ValueError(f"log_perturbed: requires q > 0 and r > 0, got q={q}, r={r}")
    if not p + q * r > 1:
        raise ValueError(
            f"log_perturbed: requires p + q*r > 1, got {p + q * r}")
    if not p > 1:
        raise ValueError(
            f"log_perturbed: requires p > 1 for an admissible lower index, got p = {p}")
    e1 = math.e - 1.0

    def L(t):
        return np.log(e1 + np.power(t, q))

    def Lp(t):
        tq = np.power(t, q)
        return q * np.power(t, q - 1.0) / (e1 + tq)

    def Lpp(t):
        tq = np.power(t, q)
        d = e1 + tq
        return q * (q - 1.0) * np.power(t, q - 2.0) / d \
            - (q * np.power(t, q - 1.0) / d) ** 2

    def G(t):
        return np.power(t, p) * np.power(L(t), r)

    def g(t):
        t = np.asarray(t, dtype=float)
        return p * np.power(t, p - 1.0) * np.power(L(t), r) \
            + r * np.power(t, p) * np.power(L(t), r - 1.0) * Lp(t)

    def g_prime(t):
        t = np.asarray(t, dtype=float)
        l, lp, lpp = L(t), Lp(t), Lpp(t)
        return (p * (p - 1.0) * np.power(t, p - 2.0) * np.power(l, r)
                + 2.0 * p * r * np.power(t, p - 1.0) * np.power(l, r - 1.0) * lp
                + r * (r - 1.0) * np.power(t, p) * np.power(l, r - 2.0) * lp ** 2
                + r * np.power(t, p) * np.power(l, r - 1.0) * lpp)

    return NFunction(G=G, g=g, g_prime=g_prime,
                     index_pair=IndexPair(p, p + q * r, exact=True),
                     label=f"log_perturbed(p={p:g}, q={q:g}, r={r:g})")


def _loglog(p: float, s: float) -> NFunction:
    if not (p > 1 and s > 0):
        raise ValueError(f"loglog: requires p > 1 and s > 0, got p = {p}, s = {s}")
    a = math.e ** math.e - 1.0

    def S(t):
        return np.log(np.log(a + t))

    def Sp(t):
        at = a + t
        return 1.0 / (at * np.log(at))

    def Spp(t):
        at = a + t
        l = np.log(at)
        return -(l + 1.0) / (at * l) ** 2

    def G(t):
        return np.power(t, p) * np.power(S(t), s)

    def g(t):
        t = np.asarray(t, dtype=float)
        return p * np.power(t, p - 1.0) * np.power(S(t), s) \
            + s * np.power(t, p) * np.power(S(t), s - 1.0) * Sp(t)

    def g_prime(t):
        t = np.asarray(t, dtype=float)
        v, vp, vpp = S(t), Sp(t), Spp(t)
        return (p * (p - 1.0) * np.power(t, p - 2.0) * np.power(v, s)
                + 2.0 * p * s * np.power(t, p - 1.0) * np.power(v, s - 1.0) * vp
                + s * (s - 1.0) * np.power(t, p) * np.power(v, s - 2.0) * vp ** 2
                + s * np.power(t, p) * np.power(v, s - 1.0) * vpp)

    return NFunction(G=G, g=g, g_prime=g_prime,
                     index_pair=IndexPair(p, p + s, exact=True),
                     label=f"loglog(p={p:g}, s={s:g})")


_FAMILIES = {
    "power": (_power, ("p",)),
    "power_sum": (_power_sum, ("p", "q")),
    "log_perturbed": (_log_perturbed, ("p", "q", "r")),
    "loglog": (_loglog, ("p", "s")),
}


def make_catalog(name: str, params: Sequence[float]) -> NFunction:
    """Build a catalog N-function by family name and positional parameters.

    Parameters violating a family constraint raise ``ValueError`` naming the
    violated constraint.  The returned function carries closed-form ``G``,
    ``g``, ``g_prime`` and its exact index pair.
    """
    if name not in _FAMILIES:
        raise ValueError(f"unknown catalog family '{name}'; "
                         f"choose from {sorted(_FAMILIES)}")
    builder, names = _FAMILIES[name]
    params = tuple(float(v) for v in params)
    if len(params) != len(names):
        raise ValueError(f"{name} expects parameters {names}, got {params}")
    return builder(*params)


def catalog_parameter_names(name: str):
    if name not in _FAMILIES:
        raise ValueError(f"unknown catalog family '{name}'")
    return _FAMILIES[name][1]


# ---------------------------------------------------------------------------
# monotone inverse
# ---------------------------------------------------------------------------

def monotone_inverse(fn: Callable[[np.ndarray], np.ndarray], y, *,
                     max_expand: int = 600):
    """Vectorised bisection inverse of a strictly increasing ``fn`` on [0, inf).

    Solves ``fn(x) = y`` elementwise.  The bracket is refined geometrically
    (bisection in log x), which gives uniform relative accuracy ~1e-13 even
    when the inverse is many orders of magnitude smaller than the argument
    (as for conjugate derivatives with lower index below 2).  ``fn(0) = 0``
    is assumed, so ``y = 0`` maps to 0.
    """
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y).astype(float)
    if np.any(y < 0):
        raise ValueError("monotone_inverse expects y >= 0")
    ypos = np.where(y > 0, y, 1.0)
    hi = np.ones_like(y)
    for _ in range(max_expand):
        need = np.asarray(fn(hi)) < ypos
        if not np.any(need):
            break
        hi = np.where(need, hi * 4.0, hi)
    else:
        raise ArithmeticError("could not bracket the monotone inverse")
    lo = hi.copy()
    for _ in range(max_expand):
        need = (np.asarray(fn(lo)) >= ypos) & (lo > 1e-300)
        if not np.any(need):
            break
        lo = np.where(need, lo * 0.25, lo)
    for _ in range(60):
        mid = np.sqrt(lo * hi)
        below = np.asarray(fn(mid)) < ypos
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = np.sqrt(lo * hi)
    x[y == 0.0] = 0.0
    return float(x[0]) if scalar else x


# ---------------------------------------------------------------------------
# indices
# ---------------------------------------------------------------------------

def _golden_refine(fn, lo: float, hi: float, maximize: bool, iters: int = 80):
    """Golden-section refinement of an interior extremum of ``fn`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if (fc > fd) == maximize:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        if b - a < 1e-14 * max(1.0, abs(a)):
            break
    x = 0.5 * (a + b)
    return x, fn(x)


def simonenko_indices(nf: NFunction, *, force_estimate: bool = False,
                      t_min: float = 1e-8, t_max: float = 1e8,
                      points_per_decade: int = 400) -> IndexPair:
    """Index pair of ``nf``: the range of the ratio t*g(t)/G(t).

    When the instance carries an exact pair (catalog entries, conjugates) that
    pair is returned unless ``force_estimate`` is set.  The estimate takes the
    inf/sup of the ratio over a log-spaced grid, refined by golden-section
    search around the grid extrema, and is marked ``exact=False``.

    Raises :class:`NotAdmissibleError` when the sampled ratio falls to 1 or
    below, or appears unbounded above.
    """
    if nf.index_pair is not None and not force_estimate:
        return nf.index_pair

    decades = math.log10(t_max) - math.log10(t_min)
    npts = max(int(points_per_decade * decades), 64)
    t = np.logspace(math.log10(t_min), math.log10(t_max), npts)

    def ratio_log(x):
        tt = math.exp(x)
        return tt * float(nf.g(np.array(tt))) / float(nf.G(np.array(tt)))

    with np.errstate(over="ignore", invalid="ignore"):
        ratios = t * np.asarray(nf.g(t), dtype=float) / np.asarray(nf.G(t), dtype=float)
    if not np.all(np.isfinite(ratios)):
        raise NotAdmissibleError(
            "growth ratio t*g/G appears unbounded (overflow on the grid)")
    i_min = int(np.argmin(ratios))
    i_max = int(np.argmax(ratios))

    def refine(i, maximize):
        if 0 < i < npts - 1:
            x, val = _golden_refine(ratio_log, math.log(t[i - 1]),
                                    math.log(t[i + 1]), maximize)
            return val
        return float(ratios[i])

    p_minus = min(float(ratios[i_min]), refine(i_min, maximize=False))
    p_plus = max(float(ratios[i_max]), refine(i_max, maximize=True))

    if p_minus <= 1.0:
        raise NotAdmissibleError(
            f"ratio t*g/G falls to {p_minus:.6g} <= 1: not an admissible "
            "N-function for this toolkit")
    # unbounded-above heuristic: the sup sits at the grid edge, is large,
    # and still grew substantially over the last decade
    if i_max >= npts - 2 and p_plus > 50.0:
        i_dec = int(np.searchsorted(t, t[-1] / 10.0))
        if ratios[-1] >= 2.0 * ratios[i_dec]:
            raise NotAdmissibleError(
                f"ratio t*g/G appears unbounded above (reaches {p_plus:.3g} "
                "and still grows at the grid edge)")
    return IndexPair(p_minus, p_plus, exact=False)


# ---------------------------------------------------------------------------
# conjugate / Young
# ---------------------------------------------------------------------------

_conjugate_cache: dict = {}


def _spline_inverse(nf: NFunction):
    """Fast g^{-1}: a log-log cubic spline through bisection values.

    The spline carries ~2e-9 relative error in w; the Legendre form
    s*w - G(w) is stationary at the exact w, so conjugate VALUES computed
    through it are accurate to machine precision regardless.
    """
    from scipy.interpolate import CubicSpline

    s_kn = np.logspace(-60, 60, 4001)
    w_kn = monotone_inverse(nf.g, s_kn)
    spline = CubicSpline(np.log(s_kn), np.log(w_kn))

    def inv(s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        out = np.zeros_like(s)
        pos = s > 0
        if np.any(pos):
            out[pos] = np.exp(spline(np.log(s[pos])))
        return float(out[0]) if scalar else out

    return inv


def complementary(nf: NFunction) -> NFunction:
    """Complementary (convex conjugate) N-function of ``nf``.

    Since ``g`` is strictly increasing the supremum defining the conjugate is
    attained at ``w = g^{-1}(s)``, so

        Gtilde(s) = s * g^{-1}(s) - G(g^{-1}(s)) = int_0^s g^{-1}.

    ``g^{-1}`` comes from the closed form when attached, otherwise from a
    log-log spline through monotone-bisection values (the stationarity of the
    Legendre form keeps the conjugate values machine-accurate; the conjugate
    derivative itself carries the spline's ~2e-9 relative error).  The
    conjugate's own closed-form inverse is ``g``, which makes the bidual
    reproduce ``G`` exactly.  The conjugate index pair ((p+)', (p-)') is
    attached when ``nf`` has one.  Results are cached per instance.

    Raises ``NotAdmissibleError`` when ``g`` is not strictly increasing on the
    check grid (the inverse would be ill-defined).
    """
    cached = _conjugate_cache.get(id(nf))
    if cached is not None and cached[0] is nf:
        return cached[1]

    t = np.logspace(-8, 8, 200)
    gt = np.asarray(nf.g(t), dtype=float)
    if np.any(np.diff(gt) <= 0):
        raise NotAdmissibleError(
            "g is not strictly increasing; the conjugate derivative g^{-1} "
            "is ill-defined")

    inv = nf.g_inverse if nf.g_inverse is not None else _spline_inverse(nf)

    def Gtilde(s):
        s = np.asarray(s, dtype=float)
        w = inv(s)
        return s * w - nf.G(w)

    pair = None if nf.index_pair is None else nf.index_pair.conjugate()
    conj = NFunction(
        G=Gtilde,
        g=inv,
        index_pair=pair,
        g_inverse=nf.g,
        label=f"conjugate[{nf.label}]",
    )
    _conjugate_cache[id(nf)] = (nf, conj)
    return conj


def young_gap(nf: NFunction, s, t, conj: Optional[NFunction] = None):
    """Young-inequality gap ``G(t) + Gtilde(s) - s*t``; contract: >= -tol.

    Vectorised over ``s`` and ``t``.  Pass a precomputed conjugate to avoid
    re-deriving it in loops.
    """
    if conj is None:
        conj = complementary(nf)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    out = nf.G(t) + conj.G(s) - s * t
    return float(out) if out.ndim == 0 else out


def check_delta2(nf: NFunction, t_min: float = 1e-8, t_max: float = 1e8,
                 points: int = 2000):
    """Delta_2 evidence: (holds, C) with C = sup over a log grid of G(2t)/G(t).

    The verdict is declared from finite evidence: ``holds`` is False when the
    sampled ratio overflows or keeps growing at the upper grid edge
    (equivalently, the upper index is not finite).
    """
    t = np.logspace(math.log10(t_min), math.log10(t_max), points)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.asarray(nf.G(2 * t), dtype=float) / np.asarray(nf.G(t), dtype=float)
    if not np.all(np.isfinite(ratio)):
        return False, math.inf
    C = float(np.max(ratio))
    i = int(np.argmax(ratio))
    if i == points - 1 and ratio[-1] > 1.02 * ratio[-2] and C > 1e4:
        return False, math.inf
    return True, C


class ComparisonVerdict(Enum):
    MUCH_SMALLER = "MuchSmaller"
    NOT_MUCH_SMALLER = "NotMuchSmaller"
    INCONCLUSIVE = "Inconclusive"


def compare_at_infinity(A: NFunction, B: NFunction,
                        lambdas: Sequence[float] = (0.5, 1.0, 2.0, 10.0), *,
                        detail: bool = False):
    """Estimate whether A << B at infinity: lim_{t->inf} A(lam*t)/B(t) = 0.

    The ratio is sampled along the geometric sequence t = 10^j.  For each
    lambda the tail is classified as

    * decaying to zero: the tail decreases monotonically and either drops
      below 1e-6 or keeps halving between the middle and the end of the
      sampled range (the latter catches logarithmically slow decay, for which
      no floating-point t can push the ratio below a fixed threshold);
    * stabilising at a positive value, or growing;
    * neither (reported as inconclusive, never guessed).

    ``MuchSmaller`` requires decay for every lambda; a stabilising or growing
    lambda gives ``NotMuchSmaller``.
    """
    exps = np.arange(0, 61, dtype=float)
    per_lambda = {}
    verdicts = []
    for lam in lambdas:
        t = 10.0 ** exps
        with np.errstate(over="ignore", invalid="ignore"):
            num = np.asarray(A.G(lam * t), dtype=float)
            den = np.asarray(B.G(t), dtype=float)
            rho = num / den
        good = np.isfinite(rho) & (rho > 0)
        rho = rho[good]
        if rho.size < 12:
            verdicts.append(ComparisonVerdict.INCONCLUSIVE)
            per_lambda[lam] = []
            continue
        tail = rho[2:]
        mid = tail[tail.size // 2]
        end = tail[-1]
        decreasing = bool(np.all(np.diff(tail) <= 1e-12 * tail[:-1]))
        per_lambda[lam] = [float(tail[0]), float(mid), float(end)]
        if decreasing and (end <= 1e-6 or end <= 0.7 * mid):
            verdicts.append(ComparisonVerdict.MUCH_SMALLER)
        elif end >= mid * 0.9:
            # stabilised at a positive level, or growing
            verdicts.append(ComparisonVerdict.NOT_MUCH_SMALLER)
        else:
            verdicts.append(ComparisonVerdict.INCONCLUSIVE)
    if all(v is ComparisonVerdict.MUCH_SMALLER for v in verdicts):
        verdict = ComparisonVerdict.MUCH_SMALLER
    elif any(v is ComparisonVerdict.NOT_MUCH_SMALLER for v in verdicts):
        verdict = ComparisonVerdict.NOT_MUCH_SMALLER
    else:
        verdict = ComparisonVerdict.INCONCLUSIVE
    if detail:
        return verdict, per_lambda
    return verdict


def xi_bounds(indices: IndexPair, t):
    """Modular-norm envelopes (min{t^{p+}, t^{p-}}, max{t^{p+}, t^{p-}})."""
    t = np.asarray(t, dtype=float)
    a = np.power(t, indices.p_plus)
    b = np.power(t, indices.p_minus)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def compose_inverse(R: NFunction, H: NFunction) -> NFunction:
    """Composition F = R o H^{-1}, valid when q_plus(H) < r_minus(R).

    ``H^{-1}`` is computed by monotone bisection (closed form when attached).
    The derivative is F'(t) = R'(y)/H'(y) at y = H^{-1}(t).  The result gets
    grid-estimated indices attached and is validated as an N-function.
    """
    qp = simonenko_indices(H)
    rp = simonenko_indices(R)
    if not qp.p_plus < rp.p_minus:
        raise NotAdmissibleError(
            f"compose_inverse requires q_plus < r_minus, got "
            f"q_plus = {qp.p_plus:g} >= r_minus = {rp.p_minus:g}")

    def Hinv(t):
        t = np.asarray(t, dtype=float)
        if H.G_inverse is not None:
            return H.G_inverse(t)
        return monotone_inverse(H.G, t)

    def F(t):
        return R.G(Hinv(t))

    def f(t):
        y = Hinv(t)
        return np.asarray(R.g(y), dtype=float) / np.asarray(H.g(y), dtype=float)

    est = simonenko_indices(
        NFunction(G=F, g=f, label="tmp"), force_estimate=True)
    out = NFunction(G=F, g=f, index_pair=est,
                    label=f"compose[{R.label} o inv {H.label}]")
    out.validate()
    return out


def critical_exponent(p: float, n: int, alpha: float) -> float:
    """Henon-critical exponent n*(alpha + p)/(n - p) used by the classifier.

    Requires 1 < p < n and alpha >= 0.
    """
    if not p > 1:
        raise ValueError(f"critical_exponent requires p > 1, got {p}")
    if not p < n:
        raise ValueError(f"critical_exponent requires p < n, got p = {p}, n = {n}")
    if alpha < 0:
        raise ValueError(f"critical_exponent requires alpha >= 0, got {alpha}")
    return n * (alpha + p) / (n - p)


def psi_growth(num: IndexPair, den: IndexPair, t) -> float:
    """max over the four exponent ratios num±/den± of t**ratio."""
    t = float(t)
    exps = [num.p_plus / den.p_plus, num.p_plus / den.p_minus,
            num.p_minus / den.p_minus, num.p_minus / den.p_plus]
    return max(t ** e for e in exps)


def psi_functions(q_pair: IndexPair, r_pair: IndexPair, p_pair: IndexPair,
                  t) -> tuple[float, float]:
    """Level-set growth pair (psi1, psi2) from the boundedness iteration.

    psi1 uses the q±/r± exponent ratios, psi2 the q±/p± ratios.
    """
    return psi_growth(q_pair, r_pair, t), psi_growth(q_pair, p_pair, t)

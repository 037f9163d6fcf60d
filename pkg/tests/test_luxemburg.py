"""Modulars, Luxemburg norms, the radial decay envelope and Holder gaps."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from henon_orlicz.luxemburg import (EnvelopeTable, NonNormableError,
                                    SampledFunction, WeightedMeasure,
                                    envelope_table, holder_gap,
                                    luxemburg_norm, modular, strauss_envelope)
from henon_orlicz.nfunction import complementary, make_catalog, scaled_power
from henon_orlicz.quadrature import DivergentIntegralError


def remark_power_form(p, n, r):
    """Closed form of the p'-gauge envelope integral, ((p-1)/(n-p)
    (r^{(p-n)/(p-1)} - 1))^{(p-1)/p}."""
    return ((p - 1) / (n - p) * (r ** ((p - n) / (p - 1)) - 1)) ** ((p - 1) / p)


def conjugate_power_coefficient(p):
    """Legendre conjugate of t**p is K * s**p' with this K."""
    pp = p / (p - 1.0)
    return (1.0 / p) ** (1.0 / (p - 1.0)) / pp


def exact_power_envelope(p, n, r):
    """Envelope of t**p from the exact conjugate: K^{1/p'} times the
    p'-gauge closed form (independent derivation, frozen as the oracle)."""
    pp = p / (p - 1.0)
    K = conjugate_power_coefficient(p)
    return K ** (1.0 / pp) * remark_power_form(p, n, r)


# ---------------------------------------------------------------------------
# measures and modulars
# ---------------------------------------------------------------------------

def test_measure_validation():
    with pytest.raises(ValueError, match="not integrable"):
        WeightedMeasure(0.0, 1.0, -1.5)
    WeightedMeasure(0.5, 1.0, -1.5)  # fine away from 0
    with pytest.raises(ValueError):
        WeightedMeasure(1.0, 0.5, 0.0)


def test_modular_constant_unit():
    sq = make_catalog("power", [2.0])
    assert modular(sq, SampledFunction.constant(1.0),
                   WeightedMeasure(0, 1, 0)) == pytest.approx(1.0, abs=1e-10)


def test_modular_weighted_identity():
    sq = make_catalog("power", [2.0])
    val = modular(sq, SampledFunction(lambda s: s), WeightedMeasure(0, 1, 2))
    assert val == pytest.approx(0.2, abs=1e-10)


def test_modular_gradient_of_parabola():
    half = scaled_power(2, 0.5)
    val = modular(half, SampledFunction(lambda s: 2 * s), WeightedMeasure(0, 1, 2))
    assert val == pytest.approx(0.4, abs=1e-10)


def test_modular_reports_divergence():
    sq = make_catalog("power", [2.0])
    f = SampledFunction(lambda s: 1.0 / s, singular_exponent=-1.0)
    with pytest.raises(DivergentIntegralError):
        modular(sq, f, WeightedMeasure(0, 1, 0))


# ---------------------------------------------------------------------------
# Luxemburg norms
# ---------------------------------------------------------------------------

def test_norm_zero_function():
    sq = make_catalog("power", [2.0])
    assert luxemburg_norm(sq, SampledFunction.constant(0.0),
                          WeightedMeasure(0, 1, 0)) == 0.0


def test_norm_power_case_equals_weighted_p_norm():
    # for G = t^p the norm is exactly (int |f|^p dmu)^{1/p}
    rng = np.random.default_rng(3)
    for p in [1.5, 2.0, 2.5, 4.0]:
        nf = make_catalog("power", [p])
        coeffs = rng.uniform(0.2, 2.0, 3)
        f = SampledFunction(lambda s, c=coeffs: c[0] + c[1] * s + c[2] * s ** 2)
        for k in [0.0, 2.0]:
            mu = WeightedMeasure(0.0, 1.0, k)
            expected, _ = quad(lambda s: abs(f(np.array(s))) ** p * s ** k, 0, 1)
            got = luxemburg_norm(nf, f, mu)
            assert got == pytest.approx(expected ** (1.0 / p), rel=1e-6)


def test_norm_constant_on_long_interval():
    sq = make_catalog("power", [2.0])
    got = luxemburg_norm(sq, SampledFunction.constant(1.0), WeightedMeasure(0, 4, 0))
    assert got == pytest.approx(2.0, rel=1e-7)


def test_norm_modular_consistency():
    mu = WeightedMeasure(0.0, 1.0, 2.0)
    f = SampledFunction(lambda s: 1.0 + np.sin(3 * s) ** 2)
    for name, params in [("power_sum", [2.0, 3.0]), ("loglog", [2.0, 0.5])]:
        nf = make_catalog(name, params)
        norm = luxemburg_norm(nf, f, mu)
        scaled = SampledFunction(lambda s: f(s) / norm)
        assert modular(nf, scaled, mu) == pytest.approx(1.0, abs=1e-6)


def test_norm_homogeneity():
    nf = make_catalog("power_sum", [2.0, 3.0])
    mu = WeightedMeasure(0.0, 1.0, 1.0)
    f = SampledFunction(lambda s: np.exp(-s) + s)
    base = luxemburg_norm(nf, f, mu)
    for c in [0.125, 3.0, 17.5]:
        fc = SampledFunction(lambda s, cc=c: cc * f(s))
        assert luxemburg_norm(nf, fc, mu) == pytest.approx(c * base, rel=1e-7)


def test_norm_monotone_in_the_function():
    nf = make_catalog("power_sum", [1.5, 4.0])
    mu = WeightedMeasure(0.0, 1.0, 2.0)
    f = SampledFunction(lambda s: s)
    h = SampledFunction(lambda s: s + 0.2 * np.cos(s) ** 2 + 0.1)
    assert luxemburg_norm(nf, f, mu) <= luxemburg_norm(nf, h, mu) + 1e-10


def test_norm_non_normable():
    # f = s^{-1} is in no Orlicz class over s^0 ds near 0 for G = t^2
    sq = make_catalog("power", [2.0])
    f = SampledFunction(lambda s: 1.0 / s, singular_exponent=-1.0)
    with pytest.raises((NonNormableError, DivergentIntegralError)):
        luxemburg_norm(sq, f, WeightedMeasure(0, 1, 0))


# ---------------------------------------------------------------------------
# radial decay envelope
# ---------------------------------------------------------------------------

def test_envelope_matches_exact_power_closed_form():
    for p in [1.5, 2.0, 2.5]:
        G = make_catalog("power", [p])
        for n in [3, 4, 5]:
            for r in [0.1, 0.5, 0.9]:
                got = strauss_envelope(G, n, r)
                assert got == pytest.approx(exact_power_envelope(p, n, r),
                                            rel=1e-6)


def test_envelope_scipy_oracle():
    # independent quadrature of the conjugate modular for one case
    p, n, r = 1.5, 3, 0.1
    K = conjugate_power_coefficient(p)
    pp = p / (p - 1.0)
    I, _ = quad(lambda s: s ** ((1 - n) * pp) * s ** (n - 1), r, 1.0)
    lam = (K * I) ** (1.0 / pp)
    G = make_catalog("power", [p])
    assert strauss_envelope(G, n, r) == pytest.approx(lam, rel=1e-7)


def test_envelope_vanishes_at_outer_radius():
    G = make_catalog("power", [2.0])
    assert strauss_envelope(G, 3, 1 - 1e-6) < 1e-2
    vals = [strauss_envelope(G, 3, r) for r in [0.1, 0.3, 0.5, 0.7, 0.9]]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_envelope_rejects_bad_radius():
    G = make_catalog("power", [2.0])
    with pytest.raises(ValueError):
        strauss_envelope(G, 3, 0.0)
    with pytest.raises(ValueError):
        strauss_envelope(G, 3, 1.0)


def test_envelope_table_interpolates_within_budget():
    G = make_catalog("power_sum", [2.0, 3.0])
    table = envelope_table(G, 3)
    assert envelope_table(G, 3) is table  # write-once cache
    rng = np.random.default_rng(5)
    rs = np.concatenate((rng.uniform(1e-6, 0.95, 20),
                         rng.uniform(0.95, 0.9999, 5),
                         10 ** rng.uniform(-11.0, -6.0, 5)))
    for r in rs:
        direct = strauss_envelope(G, 3, float(r), conj=table.conj)
        interp = float(table(r))
        assert interp == pytest.approx(direct, rel=1e-5)


# ---------------------------------------------------------------------------
# Holder gap
# ---------------------------------------------------------------------------

def test_holder_gap_zero_function():
    sq = make_catalog("power", [2.0])
    gap = holder_gap(sq, SampledFunction.constant(0.0),
                     SampledFunction(lambda s: s), WeightedMeasure(0, 1, 0))
    assert gap == pytest.approx(0.0, abs=1e-12)


def test_holder_gap_frozen_value():
    # G = t^2, f = 1, h = s on (0,1), ds: conjugate is s^2/4 so
    # ||h||_{Gtilde} = sqrt(1/12) and gap = 2/sqrt(12) - 1/2
    sq = make_catalog("power", [2.0])
    gap = holder_gap(sq, SampledFunction.constant(1.0),
                     SampledFunction(lambda s: s), WeightedMeasure(0, 1, 0))
    assert gap == pytest.approx(2.0 / math.sqrt(12.0) - 0.5, rel=1e-6)


def test_holder_gap_self_pairing():
    # G = t^2/2 is self-conjugate: f = h unit-norm gives gap = 2 - int f^2
    half = scaled_power(2, 0.5)
    mu = WeightedMeasure(0.0, 1.0, 0.0)
    f = SampledFunction.constant(math.sqrt(2.0))  # modular (1/2)*2 = 1
    gap = holder_gap(half, f, f, mu)
    assert gap == pytest.approx(2.0 - 2.0, abs=1e-6)


def test_holder_gap_nonnegative_random_piecewise():
    rng = np.random.default_rng(9)
    gs = [make_catalog("power", [2.0]), make_catalog("power_sum", [2.0, 3.0]),
          make_catalog("loglog", [2.0, 0.5])]
    knots = np.linspace(0.0, 1.0, 9)
    for trial in range(8):
        cf = rng.uniform(-1.0, 2.0, 9)
        ch = rng.uniform(-1.0, 2.0, 9)
        f = SampledFunction(lambda s, c=cf: np.interp(s, knots, c),
                            breakpoints=knots)
        h = SampledFunction(lambda s, c=ch: np.interp(s, knots, c),
                            breakpoints=knots)
        mu = WeightedMeasure(0.0, 1.0, float(rng.integers(0, 3)))
        G = gs[trial % len(gs)]
        assert holder_gap(G, f, h, mu) >= -1e-9

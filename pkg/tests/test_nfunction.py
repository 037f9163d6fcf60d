"""N-function calculus: catalog, indices, conjugates, comparisons."""

import math

import numpy as np
import pytest

from henon_orlicz.nfunction import (ComparisonVerdict, IndexPair, NFunction,
                                    NotAdmissibleError, check_delta2,
                                    compare_at_infinity, complementary,
                                    compose_inverse, critical_exponent,
                                    make_catalog, monotone_inverse,
                                    psi_functions, psi_growth, scaled_power,
                                    simonenko_indices, xi_bounds, young_gap)

ALL_CATALOG = [
    ("power", [2.0]),
    ("power", [3.0]),
    ("power_sum", [2.0, 3.0]),
    ("power_sum", [1.5, 4.0]),
    ("log_perturbed", [2.0, 1.0, 1.0]),
    ("log_perturbed", [2.5, 2.0, 0.5]),
    ("loglog", [2.0, 0.5]),
    ("loglog", [3.0, 1.0]),
]


def catalog_entries():
    return [make_catalog(name, params) for name, params in ALL_CATALOG]


# ---------------------------------------------------------------------------
# catalog construction
# ---------------------------------------------------------------------------

def test_power_catalog_closed_forms():
    nf = make_catalog("power", [2.0])
    t = np.array([0.0, 0.5, 1.0, 3.0])
    np.testing.assert_allclose(nf.G(t), t ** 2)
    np.testing.assert_allclose(nf.g(t), 2 * t)
    assert nf.index_pair.as_tuple() == (2.0, 2.0)


def test_power_sum_closed_forms():
    nf = make_catalog("power_sum", [2.0, 3.0])
    t = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(nf.G(t), t ** 2 / 2 + t ** 3 / 3)
    np.testing.assert_allclose(nf.g(t), t + t ** 2)
    assert nf.index_pair.as_tuple() == (2.0, 3.0)


def test_log_perturbed_value():
    nf = make_catalog("log_perturbed", [2.0, 1.0, 1.0])
    t = np.array([0.5, 1.0, 4.0])
    np.testing.assert_allclose(nf.G(t), t ** 2 * np.log(math.e - 1 + t))
    assert nf.index_pair.as_tuple() == (2.0, 3.0)


def test_loglog_value():
    nf = make_catalog("loglog", [2.0, 0.5])
    t = np.array([0.5, 1.0, 4.0])
    a = math.e ** math.e - 1
    np.testing.assert_allclose(nf.G(t), t ** 2 * np.log(np.log(a + t)) ** 0.5)
    assert nf.index_pair.as_tuple() == (2.0, 2.5)


@pytest.mark.parametrize("family,params,message", [
    ("power", [0.5], "p > 1"),
    ("power", [1.0], "p > 1"),
    ("power_sum", [3.0, 2.0], "1 < p < q"),
    ("power_sum", [1.0, 2.0], "1 < p < q"),
    ("log_perturbed", [2.0, -1.0, 1.0], "q > 0"),
    ("log_perturbed", [0.5, 1.0, 0.2], "p + q*r > 1"),
    ("loglog", [1.0, 0.5], "p > 1"),
    ("loglog", [2.0, -0.5], "s > 0"),
])
def test_catalog_rejects_bad_parameters(family, params, message):
    import re
    with pytest.raises(ValueError, match=re.escape(message)):
        make_catalog(family, params)


def test_unknown_family():
    with pytest.raises(ValueError, match="unknown catalog family"):
        make_catalog("exponential", [2.0])


def test_catalog_entries_validate():
    for nf in catalog_entries():
        nf.validate()


def test_catalog_g_prime_matches_finite_differences():
    t = np.logspace(-3, 3, 61)
    h = 1e-6
    for nf in catalog_entries():
        fd = (nf.g(t * (1 + h)) - nf.g(t * (1 - h))) / (2 * t * h)
        np.testing.assert_allclose(nf.g_prime(t), fd, rtol=1e-5)


# ---------------------------------------------------------------------------
# indices
# ---------------------------------------------------------------------------

def test_indices_power_ratio_constant():
    pair = simonenko_indices(make_catalog("power", [3.0]), force_estimate=True)
    assert pair.p_minus == pytest.approx(3.0, abs=1e-9)
    assert pair.p_plus == pytest.approx(3.0, abs=1e-9)


def test_indices_power_sum_estimated():
    pair = simonenko_indices(make_catalog("power_sum", [1.5, 4.0]),
                             force_estimate=True)
    assert pair.p_minus == pytest.approx(1.5, abs=1e-3)
    assert pair.p_plus == pytest.approx(4.0, abs=1e-3)


def test_indices_catalog_pairs_returned_exact():
    # the attached pairs are the closed-form bounding pairs of the families
    assert simonenko_indices(make_catalog("power_sum", [2, 3])).as_tuple() == (2, 3)
    assert simonenko_indices(make_catalog("log_perturbed", [2, 1, 1])).as_tuple() == (2, 3)
    assert simonenko_indices(make_catalog("loglog", [2, 0.5])).as_tuple() == (2, 2.5)


def test_log_families_attached_pair_bounds_the_ratio():
    # for the log families the attached (p, p+qr)/(p, p+s) pairs bound the
    # ratio but are not its tight sup; the estimator must stay inside them
    for name, params in [("log_perturbed", [2.0, 1.0, 1.0]),
                         ("loglog", [2.0, 0.5])]:
        nf = make_catalog(name, params)
        est = simonenko_indices(nf, force_estimate=True)
        assert nf.index_pair.p_minus - 1e-6 <= est.p_minus
        assert est.p_plus <= nf.index_pair.p_plus + 1e-6


def test_index_sandwich_on_grid():
    # p_minus * G(t) <= t g(t) <= p_plus * G(t) for the attached pairs
    t = np.logspace(-8, 8, 400)
    for nf in catalog_entries():
        pair = nf.index_pair
        ratio = t * nf.g(t) / nf.G(t)
        assert np.all(ratio >= pair.p_minus - 1e-9)
        assert np.all(ratio <= pair.p_plus + 1e-9)


def test_not_admissible_sublinear():
    # G = t (linear): ratio identically 1
    lin = NFunction(G=lambda t: np.asarray(t, float),
                    g=lambda t: np.ones_like(np.asarray(t, float)), label="lin")
    with pytest.raises(NotAdmissibleError):
        simonenko_indices(lin, force_estimate=True)


def test_not_admissible_exponential_growth():
    expf = NFunction(G=lambda t: np.expm1(np.asarray(t, float)) - np.asarray(t, float),
                     g=lambda t: np.expm1(np.asarray(t, float)), label="exp")
    with pytest.raises(NotAdmissibleError, match="unbounded"):
        simonenko_indices(expf, force_estimate=True, t_max=500.0)


def test_index_pair_invariant():
    with pytest.raises(NotAdmissibleError):
        IndexPair(1.0, 2.0)
    with pytest.raises(NotAdmissibleError):
        IndexPair(3.0, 2.0)


# ---------------------------------------------------------------------------
# conjugates and Young
# ---------------------------------------------------------------------------

def test_complementary_half_square_self_conjugate():
    nf = scaled_power(2, 0.5)
    conj = complementary(nf)
    s = np.logspace(-4, 4, 41)
    np.testing.assert_allclose(conj.G(s), s ** 2 / 2, rtol=1e-10)


def test_complementary_cubic_closed_form():
    nf = scaled_power(3, 1.0 / 3.0)  # t^3/3
    conj = complementary(nf)
    s = np.logspace(-3, 3, 31)
    np.testing.assert_allclose(conj.G(s), (2.0 / 3.0) * s ** 1.5, rtol=1e-9)


def test_complementary_matches_sup_definition():
    # independent oracle: maximise t*w - G(w) over a fine log grid of w
    nf = make_catalog("power_sum", [2.0, 3.0])
    conj = complementary(nf)
    w = np.logspace(-8, 8, 400001)
    for s in [0.1, 1.0, 7.0, 40.0]:
        sup_val = float(np.max(s * w - nf.G(w)))
        assert conj.G(np.array(s)) == pytest.approx(sup_val, rel=1e-6)


def test_complementary_requires_strictly_increasing_g():
    flat = NFunction(G=lambda t: np.minimum(np.asarray(t, float) ** 2, 1.0),
                     g=lambda t: np.where(np.asarray(t, float) < 1.0,
                                          2 * np.asarray(t, float), 0.0),
                     label="flat")
    with pytest.raises(NotAdmissibleError, match="strictly increasing"):
        complementary(flat)


def test_bidual_recovers_catalog_entries():
    t = np.logspace(-4, 4, 81)
    for nf in catalog_entries():
        bidual = complementary(complementary(nf))
        np.testing.assert_allclose(bidual.G(t), nf.G(t), rtol=1e-5)


def test_conjugate_indices_inside_duality_bracket():
    for nf in catalog_entries():
        conj = complementary(nf)
        est = simonenko_indices(conj, force_estimate=True)
        pair = nf.index_pair
        lo = pair.p_plus / (pair.p_plus - 1.0)
        hi = pair.p_minus / (pair.p_minus - 1.0)
        assert est.p_minus >= lo - 1e-3
        assert est.p_plus <= hi + 1e-3


def test_young_gap_frozen_value():
    # G = t^3/3, s = 2, t = 1: gap = 1/3 + (2/3) 2^{3/2} - 2
    nf = scaled_power(3, 1.0 / 3.0)
    expected = 1.0 / 3.0 + (2.0 / 3.0) * 2.0 ** 1.5 - 2.0
    assert young_gap(nf, 2.0, 1.0) == pytest.approx(expected, abs=1e-9)


def test_young_gap_zero_cases():
    nf = scaled_power(2, 0.5)
    assert young_gap(nf, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    # equality case s = g(t) at t = 1
    assert young_gap(nf, 1.0, 1.0) == pytest.approx(0.0, abs=1e-10)


def test_young_gap_nonnegative_random():
    rng = np.random.default_rng(7)
    s = rng.uniform(0.0, 20.0, 400)
    t = rng.uniform(0.0, 20.0, 400)
    for nf in catalog_entries():
        conj = complementary(nf)
        gaps = young_gap(nf, s, t, conj=conj)
        assert np.min(gaps) >= -1e-10


def test_young_gap_small_at_equality_curve():
    rng = np.random.default_rng(11)
    t = rng.uniform(0.01, 10.0, 50)
    for nf in catalog_entries():
        conj = complementary(nf)
        s = np.asarray(nf.g(t))
        gaps = young_gap(nf, s, t, conj=conj)
        assert np.all(gaps <= 1e-8 * (1.0 + np.asarray(nf.G(t))))


# ---------------------------------------------------------------------------
# Delta_2, comparison, xi, composition
# ---------------------------------------------------------------------------

def test_delta2_powers():
    holds, C = check_delta2(make_catalog("power", [2.0]))
    assert holds and C == pytest.approx(4.0, rel=1e-9)
    holds, C = check_delta2(make_catalog("power", [2.5]))
    assert holds and C == pytest.approx(2.0 ** 2.5, rel=1e-9)


def test_delta2_power_sum_bounded_by_upper_index():
    holds, C = check_delta2(make_catalog("power_sum", [2.0, 3.0]))
    assert holds
    assert C <= 8.0 + 1e-6


def test_delta2_fails_for_exponential():
    expf = NFunction(G=lambda t: np.expm1(np.asarray(t, float)) - np.asarray(t, float),
                     g=lambda t: np.expm1(np.asarray(t, float)), label="exp")
    holds, C = check_delta2(expf, t_max=1e3)
    assert not holds and math.isinf(C)


def test_compare_power_cases():
    p2, p3 = make_catalog("power", [2.0]), make_catalog("power", [3.0])
    assert compare_at_infinity(p2, p3) is ComparisonVerdict.MUCH_SMALLER
    assert compare_at_infinity(p3, p3) is ComparisonVerdict.NOT_MUCH_SMALLER
    assert compare_at_infinity(p3, p2) is ComparisonVerdict.NOT_MUCH_SMALLER


def test_compare_log_gap_detected():
    # ratio ~ lambda^2 / log t decays to 0 but slower than any power
    p2 = make_catalog("power", [2.0])
    lp = make_catalog("log_perturbed", [2.0, 1.0, 1.0])
    assert compare_at_infinity(p2, lp) is ComparisonVerdict.MUCH_SMALLER
    assert compare_at_infinity(lp, p2) is ComparisonVerdict.NOT_MUCH_SMALLER


def test_xi_bounds():
    pair = IndexPair(2.0, 3.0)
    assert xi_bounds(pair, 2.0) == (4.0, 8.0)
    assert xi_bounds(pair, 1.0) == (1.0, 1.0)
    assert xi_bounds(pair, 0.5) == (0.125, 0.25)


def test_xi_sandwich_for_constant_functions():
    # unit-mass measure, u = const c: xi_-(||u||) <= modular <= xi_+(||u||)
    from henon_orlicz.luxemburg import (SampledFunction, WeightedMeasure,
                                        luxemburg_norm, modular)
    mu = WeightedMeasure(0.0, 1.0, 0.0)
    for nf in catalog_entries():
        for c in [0.3, 1.0, 4.0]:
            f = SampledFunction.constant(c)
            mod = modular(nf, f, mu)
            norm = luxemburg_norm(nf, f, mu)
            lo, hi = xi_bounds(nf.index_pair, norm)
            # multiplicative slack: the norm itself carries 1e-8 relative
            # bisection error, which the power amplifies at equality
            assert lo * (1 - 1e-6) <= mod <= hi * (1 + 1e-6)


def test_compose_inverse_pure_powers():
    F = compose_inverse(make_catalog("power", [6.0]), make_catalog("power", [2.0]))
    t = np.logspace(-2, 2, 41)
    np.testing.assert_allclose(F.G(t), t ** 3, rtol=1e-8)
    F2 = compose_inverse(make_catalog("power", [9.0]), make_catalog("power", [3.0]))
    np.testing.assert_allclose(F2.G(t), t ** 3, rtol=1e-8)


def test_compose_inverse_indices_in_expected_range():
    R = make_catalog("power", [5.0])
    H = make_catalog("power_sum", [2.0, 3.0])
    F = compose_inverse(R, H)
    assert F.index_pair.p_minus >= 5.0 / 3.0 - 1e-3
    assert F.index_pair.p_plus <= 5.0 / 2.0 + 1e-3


def test_compose_inverse_rejects_wrong_order():
    with pytest.raises(NotAdmissibleError, match="q_plus < r_minus"):
        compose_inverse(make_catalog("power", [3.0]), make_catalog("power", [3.0]))


def test_critical_exponent_values():
    assert critical_exponent(2.0, 3, 0.0) == pytest.approx(6.0)
    assert critical_exponent(2.0, 3, 1.0) == pytest.approx(9.0)
    assert critical_exponent(3.0, 5, 2.0) == pytest.approx(12.5)


def test_critical_exponent_rejects_bad_arguments():
    with pytest.raises(ValueError, match="p < n"):
        critical_exponent(3.0, 3, 1.0)
    with pytest.raises(ValueError, match="p > 1"):
        critical_exponent(1.0, 3, 1.0)


def test_psi_growth_values():
    q44 = IndexPair(4.0, 4.0)
    r88 = IndexPair(8.0, 8.0)
    assert psi_growth(q44, r88, 16.0) == pytest.approx(4.0)
    q34 = IndexPair(3.0, 4.0)
    p22 = IndexPair(2.0, 2.0)
    assert psi_growth(q34, p22, 2.0) == pytest.approx(4.0)


def test_psi_functions_pair():
    q = IndexPair(3.0, 4.0)
    r = IndexPair(6.0, 8.0)
    p = IndexPair(2.0, 2.0)
    psi1, psi2 = psi_functions(q, r, p, 1.0)
    assert psi1 == pytest.approx(1.0) and psi2 == pytest.approx(1.0)
    psi1, psi2 = psi_functions(q, r, p, 2.0)
    assert psi1 == pytest.approx(2.0 ** (4.0 / 6.0))
    assert psi2 == pytest.approx(2.0 ** 2.0)


def test_monotone_inverse_roundtrip():
    for nf in [make_catalog("power_sum", [2.0, 3.0]),
               make_catalog("power_sum", [1.5, 4.0])]:
        s = np.logspace(-8, 8, 33)
        w = monotone_inverse(nf.g, s)
        np.testing.assert_allclose(nf.g(w), s, rtol=1e-9)
    assert monotone_inverse(nf.g, 0.0) == 0.0

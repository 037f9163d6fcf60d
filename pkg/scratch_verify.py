"""Scratch: verify the load-bearing math claims before freezing tests."""
import numpy as np
from henon_orlicz.nfunction import (make_catalog, scaled_power, simonenko_indices,
                                    complementary, young_gap, compare_at_infinity,
                                    check_delta2)
from henon_orlicz.luxemburg import (WeightedMeasure, SampledFunction, modular,
                                    luxemburg_norm, strauss_envelope)
from scipy.integrate import quad

# 1. tight vs paper indices for log families
lp = make_catalog("log_perturbed", [2, 1, 1])
est = simonenko_indices(lp, force_estimate=True)
print("log_perturbed(2,1,1): attached", lp.index_pair.as_tuple(),
      "estimated(tight)", est.as_tuple())

ll = make_catalog("loglog", [2, 0.5])
est2 = simonenko_indices(ll, force_estimate=True)
print("loglog(2,0.5): attached", ll.index_pair.as_tuple(),
      "estimated(tight)", est2.as_tuple())

ps = make_catalog("power_sum", [1.5, 4])
est3 = simonenko_indices(ps, force_estimate=True)
print("power_sum(1.5,4) estimated:", est3.as_tuple())

# 2. complementary closed forms
cub = scaled_power(3, 1.0 / 3.0)   # t^3/3
conj = complementary(cub)
s = np.array([0.5, 1.0, 2.0, 5.0])
exact = (2.0 / 3.0) * s ** 1.5
print("conj(t^3/3) vs (2/3)s^{3/2}:", np.max(np.abs(conj.G(s) - exact) / exact))
print("young_gap(t^3/3, s=2, t=1):", young_gap(cub, 2.0, 1.0),
      "expected", 1/3 + (2/3)*2**1.5 - 2)

# sup-definition oracle
g23 = make_catalog("power_sum", [2, 3])
conj23 = complementary(g23)
w = np.logspace(-6, 6, 4001)
for sv in [0.1, 1.0, 7.0]:
    sup_val = np.max(sv * w - g23.G(w))
    print(f"  sup-def vs legendre at s={sv}: {sup_val:.12g} vs {float(conj23.G(np.array(sv))):.12g}")

# bidual
bид = complementary(conj23)
t = np.logspace(-4, 4, 21)
rel = np.abs(bид.G(t) - g23.G(t)) / g23.G(t)
print("bidual rel err max:", rel.max())

# 3. modular / norm sanity
sq = make_catalog("power", [2])
print("modular G=t^2, f=1, ds on (0,1):",
      modular(sq, SampledFunction.constant(1.0), WeightedMeasure(0, 1, 0)))
print("modular G=t^2, f=s, s^2 ds:",
      modular(sq, SampledFunction(lambda s: s), WeightedMeasure(0, 1, 2)))
half_sq = scaled_power(2, 0.5)
print("modular G=t^2/2, f=2s, s^2 ds:",
      modular(half_sq, SampledFunction(lambda s: 2 * s), WeightedMeasure(0, 1, 2)))
print("norm G=t^2, f=1 on (0,4):",
      luxemburg_norm(sq, SampledFunction.constant(1.0), WeightedMeasure(0, 4, 0)))

# 4. envelope: true value vs remark closed form
def remark_form(p, n, r):
    return ((p - 1) / (n - p) * (r ** ((p - n) / (p - 1)) - 1)) ** ((p - 1) / p)

def conj_coeff(p):
    # Legendre conjugate of t^p is K * s^{p'}, K = (1/p)^{1/(p-1)} / p'
    pp = p / (p - 1)
    return (1.0 / p) ** (1.0 / (p - 1)) / pp

print("\nenvelope check:")
for (p, n, r) in [(2.0, 3, 0.5), (1.5, 3, 0.1), (2.5, 5, 0.9), (2.0, 4, 0.5)]:
    Gp = make_catalog("power", [p])
    e = strauss_envelope(Gp, n, r)
    rf = remark_form(p, n, r)
    pred = conj_coeff(p) ** ((p - 1) / p) * rf   # K^{1/p'} * remark
    print(f"  p={p} n={n} r={r}: env={e:.10g} remark={rf:.10g} "
          f"K^(1/p')*remark={pred:.10g} ratio env/remark={e/rf:.6f}")

# independent quadrature oracle for one case
p, n, r = 1.5, 3, 0.1
K = conj_coeff(p)
pp = p / (p - 1)
I, _ = quad(lambda s: s ** ((1 - n) * pp) * s ** (n - 1), r, 1)
lam = (K * I) ** (1 / pp)
Gp = make_catalog("power", [p])
print("  scipy-oracle lam:", lam, "toolkit:", strauss_envelope(Gp, n, r))

# 5. admissibility boundary slope: I(r) = r^{alpha+n-1} * env(r)^q
n, alpha, pw = 3, 1.0, 2.0
G2 = make_catalog("power", [pw])
from henon_orlicz.nfunction import NFunction
for q in [5.0, 8.0, 8.5, 9.0, 10.0]:
    rs = 2.0 ** -np.arange(20, 41, dtype=float)
    I = np.array([ri ** (alpha + n - 1) * strauss_envelope(G2, n, ri) ** q for ri in rs])
    slope = np.polyfit(np.log(rs), np.log(I), 1)[0]
    print(f"  q={q}: fitted slope near 0 = {slope:.4f} "
          f"(analytic alpha+n-1+q(p-n)/p = {alpha+n-1+q*(pw-n)/pw:.4f})")

# 6. comparisons
print("\ncompare:")
print("  t^2 vs t^3:", compare_at_infinity(make_catalog("power", [2]), make_catalog("power", [3])))
print("  t^3 vs t^3:", compare_at_infinity(make_catalog("power", [3]), make_catalog("power", [3])))
print("  t^2 vs logp(2,1,1):", compare_at_infinity(make_catalog("power", [2]), lp))
print("  t^5/5 vs t^5.5:", compare_at_infinity(scaled_power(5, 0.2), make_catalog("power", [5.5])))

print("\ndelta2: power2", check_delta2(make_catalog("power", [2])),
      " power_sum(2,3)", check_delta2(g23))

# 7. nonexistence factor crossing
for (nn, p_plus, al) in [(3, 2, 0), (3, 2, 1), (5, 3, 2)]:
    f = lambda q: (nn + al) / q + 1 - nn / p_plus
    # crossing
    from scipy.optimize import brentq
    qz = brentq(f, 1.01, 100)
    print(f"  (n,p+,a)=({nn},{p_plus},{al}): factor zero at q={qz:.10g}; "
          f"spec-form n(a+p)/(n-p)={nn*(al+p_plus)/(nn-p_plus):.10g}; "
          f"paper-proof-form p(n+a)/(n-p)={p_plus*(nn+al)/(nn-p_plus):.10g}")

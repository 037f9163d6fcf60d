"""Tour of the N-function calculus: catalog, indices, conjugates, Young.

Run:  python3 demos/01_growth_functions.py
"""

import numpy as np

from henon_orlicz import (check_delta2, compare_at_infinity, complementary,
                          compose_inverse, critical_exponent, make_catalog,
                          simonenko_indices, young_gap)

print("=" * 72)
print("Catalog families and their growth index pairs")
print("=" * 72)
for family, params in [("power", [2.0]),
                       ("power_sum", [2.0, 3.0]),
                       ("log_perturbed", [2.0, 1.0, 1.0]),
                       ("loglog", [2.0, 0.5])]:
    nf = make_catalog(family, params)
    attached = nf.index_pair
    tight = simonenko_indices(nf, force_estimate=True)
    holds, C = check_delta2(nf)
    print(f"{nf.label:32s} attached ({attached.p_minus:g}, {attached.p_plus:g})"
          f"   tight ({tight.p_minus:.4f}, {tight.p_plus:.4f})"
          f"   Delta2 C = {C:.4g}")

print()
print("For the logarithmic families the attached pair bounds the ratio")
print("t g(t)/G(t) but is not its tight supremum; both are valid index")
print("pairs for every growth comparison in the toolkit.")

print()
print("=" * 72)
print("Convex conjugates and the Young inequality")
print("=" * 72)
cubic = make_catalog("power", [3.0])
conj = complementary(cubic)
s = np.array([0.5, 1.0, 2.0, 4.0])
print("G = t^3:   conjugate at s =", s, "->", np.round(conj.G(s), 6))
print("bidual recovers G:",
      np.allclose(complementary(conj).G(s), cubic.G(s), rtol=1e-12))
gaps = young_gap(cubic, np.array([0.3, 1.0, 5.0]), np.array([2.0, 1.0, 0.1]))
print("Young gaps G(t) + Gtilde(s) - st (all nonnegative):", np.round(gaps, 6))

print()
print("=" * 72)
print("Growth comparisons at infinity and compositions")
print("=" * 72)
p2, p3 = make_catalog("power", [2.0]), make_catalog("power", [3.0])
lp = make_catalog("log_perturbed", [2.0, 1.0, 1.0])
print("t^2 << t^3 ?            ", compare_at_infinity(p2, p3).value)
print("t^2 << t^2 ln(e-1+t) ?  ", compare_at_infinity(p2, lp).value,
      "   (logarithmically slow decay is detected)")
print("t^3 << t^2 ?            ", compare_at_infinity(p3, p2).value)

F = compose_inverse(make_catalog("power", [6.0]), make_catalog("power", [2.0]))
print("R o H^{-1} for R=t^6, H=t^2 reproduces t^3:",
      np.allclose(F.G(np.array([0.5, 2.0])), np.array([0.125, 8.0]), rtol=1e-8))

print()
print("Henon-critical exponent n(alpha+p)/(n-p):")
for (p, n, alpha) in [(2.0, 3, 0.0), (2.0, 3, 1.0), (3.0, 5, 2.0)]:
    print(f"   p={p}, n={n}, alpha={alpha} -> {critical_exponent(p, n, alpha):g}")

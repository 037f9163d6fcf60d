"""Existence / nonexistence classification and the power-case region.

Run:  python3 demos/03_classification.py
"""

import numpy as np

from henon_orlicz import (ProblemSpec, check_admissibility_integral, classify,
                          critical_alpha_threshold, make_catalog, scaled_power)

print("=" * 72)
print("Three classifications")
print("=" * 72)
cases = [
    ("subcritical with explicit comparison function",
     ProblemSpec(3, 1.0, make_catalog("power", [2.0]), scaled_power(5, 0.2),
                 make_catalog("power", [5.5]))),
    ("supercritical", ProblemSpec(3, 1.0, make_catalog("power", [2.0]),
                                  scaled_power(9, 1.0 / 9.0))),
    ("not superlinear", ProblemSpec(3, 1.0, make_catalog("power", [3.0]),
                                    make_catalog("power", [2.0]))),
]
for name, spec in cases:
    rep = classify(spec)
    print(f"{name:45s} -> {rep.verdict.value}")
    for c in rep.checks:
        print(f"    {c.name:30s} {c.passed}")

print()
print("=" * 72)
print("Power-case admissibility region at n=3, G=t^2 (boundary q = 2 alpha + 6)")
print("=" * 72)
G = make_catalog("power", [2.0])
qs = np.arange(3.0, 13.0)
print("          q:", "  ".join(f"{q:4g}" for q in qs))
for alpha in [0.0, 1.0, 2.0, 3.0]:
    row = []
    for q in qs:
        verdict, _ = check_admissibility_integral(
            ProblemSpec(3, alpha, G, make_catalog("power", [float(q)])))
        row.append({"Convergent": "C", "Divergent": "D",
                    "Indeterminate": "?"}[verdict.value])
    print(f"alpha = {alpha:3g}:", "     ".join(row))
print()
print("'?' marks the honest dead band where the fitted integrand slope sits")
print("within +-0.05 of the critical decay; the existence and nonexistence")
print("ranges are not complementary, and the gap is reported, never guessed.")

print()
print("Weight threshold above which critical-growth comparison functions")
print("pass the admissibility integral (vanishes for pure powers):")
for (fam, params, n) in [("power", [2.0], 5), ("power_sum", [2.0, 3.0], 5),
                         ("power_sum", [2.0, 3.0], 4)]:
    nf = make_catalog(fam, params)
    print(f"   {nf.label:24s} n={n}: alpha > "
          f"{critical_alpha_threshold(nf, n):g}")

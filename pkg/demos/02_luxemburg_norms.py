"""Modulars, Luxemburg norms and the radial decay envelope.

Run:  python3 demos/02_luxemburg_norms.py
"""

import numpy as np

from henon_orlicz import (SampledFunction, WeightedMeasure, luxemburg_norm,
                          make_catalog, modular, strauss_envelope)

sq = make_catalog("power", [2.0])

print("=" * 72)
print("Modulars and norms on weighted intervals")
print("=" * 72)
mu = WeightedMeasure(0.0, 1.0, 2.0)       # s^2 ds on (0, 1)
f = SampledFunction(lambda s: s)
print("int (s)^2 s^2 ds on (0,1) =", modular(sq, f, mu), " (exact 1/5)")

mu4 = WeightedMeasure(0.0, 4.0, 0.0)
one = SampledFunction.constant(1.0)
print("Luxemburg norm of 1 on (0,4), G=t^2:",
      luxemburg_norm(sq, one, mu4), " (exact 2)")

# for G = t^p the Luxemburg norm is exactly the weighted p-norm
p = 2.5
nf = make_catalog("power", [p])
g = SampledFunction(lambda s: 1 + s ** 2)
norm = luxemburg_norm(nf, g, mu)
from scipy.integrate import quad
exact = quad(lambda s: (1 + s ** 2) ** p * s ** 2, 0, 1)[0] ** (1 / p)
print(f"G=t^{p}: norm {norm:.10f} vs weighted p-norm {exact:.10f}")

print()
print("=" * 72)
print("Radial decay envelope E(G, n, r) = ||s^{1-n}||_{L^Gtilde((r,1), s^{n-1} ds)}")
print("=" * 72)
print("The pointwise bound for radial Sobolev functions on the unit ball is")
print("|u(r)| <= C ||grad u||_{L^G(B)} E(G, n, r); the envelope blows up at")
print("the origin like a negative power of r and vanishes at the boundary.")
print()
G = make_catalog("power", [2.0])
print(" r      E(t^2, n=3, r)")
for r in [0.9, 0.5, 0.1, 0.01, 0.001]:
    print(f" {r:<6g} {strauss_envelope(G, 3, r):.6f}")

print()
print("Exact closed form for powers (from the Legendre conjugate")
print("K s^{p'} with K = (1/p)^{1/(p-1)}/p'):")
for (p, n, r) in [(2.0, 3, 0.5), (1.5, 3, 0.1), (2.5, 5, 0.9)]:
    pp = p / (p - 1)
    K = (1 / p) ** (1 / (p - 1)) / pp
    closed = K ** (1 / pp) * ((p - 1) / (n - p)
                              * (r ** ((p - n) / (p - 1)) - 1)) ** ((p - 1) / p)
    got = strauss_envelope(make_catalog("power", [p]), n, r)
    print(f" p={p}, n={n}, r={r}: computed {got:.8f}   closed form {closed:.8f}")

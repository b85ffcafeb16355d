"""
Height growth along a Henon orbit
=================================

The Henon map (Y*Z : Y^2 - X*Z - Z^2 : Z^2) has degree sequence 2^n, so its
dynamical degree is 2.  Heights of a wandering orbit should grow like 2^n,
and the ratio table h+(f^n P) / ((2 + eps)^n h+(P)) should stay bounded.
"""

import math

from arithdyn import corpus_config
from arithdyn.degrees import degree_sequence, estimate_dyndeg
from arithdyn.harness import geometric_ratios
from arithdyn.orbits import compute_orbit, estimate_arith_degree

cfg = corpus_config("henon")
f = cfg.map
print("map:", f)

seq = degree_sequence(f, 6)
est = estimate_dyndeg(seq)
print("deg f^n:", seq.d, "->", est.stable.value, "upper bound", est.upper)

# (0:0:1) is periodic of period 3, so take a point that wanders
P = cfg.points[1]
orbit = compute_orbit(f, P, 20)
q = geometric_ratios(orbit, est.upper + 0.1)

print(f"\n{'n':>3} {'bits':>8} {'h':>14} {'h+^(1/n)':>10} {'q_n':>10}")
for n, (pt, hv) in enumerate(zip(orbit.points, orbit.heights)):
    root = hv.h_plus ** (1 / n) if n else float("nan")
    print(f"{n:3d} {pt.coord_bits():8d} {hv.h:14.4f} {root:10.5f} {q[n]:10.3e}")

a = estimate_arith_degree(orbit)
print("\nalpha_bar estimate:", round(a.alpha_bar_est, 5), " log2 of last height:",
      round(math.log2(orbit.h[-1]), 3))

"""
Canonical heights by telescoping
================================

For a stable map of degree d > 1, h(f^N P) / d^N equals
h(P) + sum_{k<N} B(f^k P) / d^(k+1) with B = h o f - d h.  For the squaring
map B is exactly zero; for Henon it is bounded, and the partial sums settle.
"""

import math

from arithdyn import corpus_config
from arithdyn.canheight import canonical_height, defect_sequence, transform_check
from arithdyn.orbits import compute_orbit
from arithdyn.projmap import normalize_point

sq = corpus_config("squaring").map
P = normalize_point([2, 3])
orbit = compute_orbit(sq, P, 20)
print("squaring: max |B| =", max(map(abs, defect_sequence(orbit, 2).B_values)))
est = canonical_height(orbit, 2)
print("hhat(2:3) =", est.hhat, " ln 3 =", math.log(3))

henon = corpus_config("henon").map
for raw in ([0, 0, 1], [2, 3, 1]):
    Q = normalize_point(raw)
    orb = compute_orbit(henon, Q, 18)
    e = canonical_height(orb, 2)
    B = defect_sequence(orb, 2).B_values
    print(f"\nHenon at {Q}: status {e.status.value}, hhat = {e.hhat:.12f} +- {e.err_bound:.2e}")
    print("  B range: [%.4f, %.4f]" % (min(B), max(B)))
    print("  partial sums:", " ".join(f"{s:.6f}" for s in e.partial_sums[:8]), "...")
    tc = transform_check(henon, Q, 2, 18)
    print(f"  |hhat(fP) - 2 hhat(P)| = {tc.residual:.3e} (bound {tc.bound:.3e})")

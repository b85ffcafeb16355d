"""
Degree drop for the Cremona involution
======================================

sigma = (YZ : XZ : XY) has degree 2, but sigma o sigma = (XYZ * X : ...)
collapses to the identity once the common factor is removed.  So deg
sigma^n alternates 2, 1, 2, 1 and the dynamical degree is 1 although
deg sigma = 2.  Heights along an orbit stay bounded.
"""

from arithdyn import corpus_config
from arithdyn.degrees import degree_sequence, estimate_dyndeg
from arithdyn.projmap import RationalMap, compose_maps, is_morphism
from arithdyn.orbits import compute_orbit

cfg = corpus_config("cremona")
s = cfg.map

s2 = compose_maps(s, s)
print("sigma   =", s)
print("sigma^2 =", s2)
print("identity?", s2 == RationalMap.identity(2, ["X", "Y", "Z"]))
print("morphism test:", is_morphism(s).value)

seq = degree_sequence(s, 8)
est = estimate_dyndeg(seq)
print("degrees:", seq.d)
print("Fekete upper bound:", est.upper, " stable:", est.stable.value)

orbit = compute_orbit(s, cfg.points[0], 6)
for n, P in enumerate(orbit.points):
    print(n, P, round(orbit.h[n], 4))

"""
A monomial map on the torus
===========================

f(x, y) = (x y, x) acts on exponent vectors through [[1, 1], [1, 0]], whose
spectral radius is the golden ratio.  Orbit heights grow like phi^n.
"""

from arithdyn import corpus_config
from arithdyn.degrees import monomial_dyndeg
from arithdyn.orbits import compute_orbit, torus_point

f = corpus_config("monomial").map
est = monomial_dyndeg(f)
print("char poly:", est.spectral.char_poly, " rho in", est.spectral.certified_interval)

orbit = compute_orbit(f, torus_point([2, 3]), 25)
for n in (5, 10, 15, 20, 25):
    print(n, round(orbit.h_plus[n] ** (1 / n), 6))

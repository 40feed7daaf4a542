"""
Critical points and the pearl differential
==========================================

After specializing the area parameters, the potential of the exotic torus has
isolated critical points.  At each one the pearl differential squares to zero
and Floer cohomology with that local system is nonzero.  The inflation step
rescales areas until the torus becomes monotone.
"""

from fractions import Fraction

from wallcross.floer import AreaFunctional, check_monotone, critical_points, monotone_inflation, pearl_delta2, specialize
from wallcross.presets import load_preset

p = load_preset("cp2-t1425")
W, chart = p.floer_potential()
vars = p.floer["vars"]
Wn = specialize(W, {k: Fraction(v) for k, v in p.floer["area_values"].items()})
for pt in critical_points(Wn, vars, seed=0):
    d2 = max(abs(x) for x in pearl_delta2(Wn, pt, vars))
    print({k: complex(round(v.real, 9), round(v.imag, 9)) for k, v in pt.items()}, f"|delta2| = {d2:.1e}")

t, cfg = p.table, p.inflation
j = t.divisors.index(cfg["divisor"])
pairings = {b: t.rows[b][j] for b in t.basis}
areas = AreaFunctional({k: Fraction(v) for k, v in cfg["areas"].items()})
print("monotone before:", check_monotone(areas, t.maslov_row))
inf = monotone_inflation(areas, pairings, t.maslov_row, Fraction(cfg["target"]["ratio"]), ("beta", "H"))
print(inf.describe(), "->", {k: str(v) for k, v in inf.areas.areas.items()})
print("monotone after:", check_monotone(inf.areas, t.maslov_row))

"""
Maslov index 2 classes
======================

Relative classes with Maslov index 2 and nonnegative intersection with the
chosen divisors form a finite set.  A linear program bounds the search box,
then lattice points are filtered.  Matching the potential's monomials against
that set shows which classes carry discs.
"""

from wallcross.classes import box_bounds, enumerate_maslov2, match_monomials
from wallcross.presets import load_preset

for name in ("cp2-t1425", "p1xp1-t129"):
    p = load_preset(name)
    bounds = box_bounds(p.table, p.positivity_divisors, p.general_form)
    classes = enumerate_maslov2(p.table, p.positivity_divisors, p.general_form)
    print(f"{name}: search box {bounds}, {len(classes)} classes")

    report = match_monomials(p.final_potential(), p.chart_to_class, p.table, classes, p.final_chart.ring)
    for e in report.entries:
        print(f"  {str(e.monomial):24} x{str(e.coefficient):<3} -> {e.cls}")
    if report.missing:
        print("  no monomial for:", ", ".join(map(str, report.missing)))
    print("  total multiplicity", report.total_multiplicity)

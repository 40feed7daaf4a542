"""
Potentials across walls
=======================

The Clifford potential u + v + q/(uv) is pushed through the wall-crossing
chain of the projective-plane preset.  Coefficients stay exact fractions all
the way, so the binomials of the last chart come out as integers.
"""

from wallcross.laurent import format_expr
from wallcross.presets import load_preset

p = load_preset("cp2-t1425")
print("start   ", format_expr(p.W0, p.charts[p.initial_chart].ring))
for step, W in zip(p.steps, p.chain()):
    chart = step.to_chart
    print(f"{','.join(chart.names):8}", format_expr(W, chart.ring), f"  [{len(W)} terms]")

W = p.final_potential()
print("coefficient sum:", sum(c for _, c in W.items()))

if p.compact:
    Wc, chart = p.compact_potential()
    print("compact ", format_expr(Wc, chart.ring))

# the product of two projective lines has a shorter chain
q = load_preset("p1xp1-t129")
Wq = q.final_potential()
print("\np1xp1:", format_expr(Wq, q.final_chart.ring), f"  [{len(Wq)} terms]")

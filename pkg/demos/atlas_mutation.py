"""
Mutating an almost toric base
=============================

Start from the projective-plane triangle with three short cuts, then mutate
along (1,1,1) -> (1,1,2) -> (1,2,5).  Each mutation swings a cut through its
node, and the polygon picks up the weights of the new weighted projective
plane.  The area never changes.
"""

from pathlib import Path

from wallcross import atlas
from wallcross.markov import MarkovTriple
from wallcross.tropical import render_svg

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

start = atlas.mutation_start()
path = [MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2), MarkovTriple(1, 2, 5)]
diagrams = atlas.mutation_sequence(start, path)

for triple, d in zip(path, diagrams):
    corners = ", ".join(f"({x},{y})" for x, y in d.vertices)
    print(f"{str(triple):>9}  weights {atlas.weights(d)}  area {d.area}  corners {corners}")
    assert d.area == start.area

# monodromy around a node with eigenvector (a,b) is a shear fixing (a,b)
A = atlas.monodromy(2, 1)
print("monodromy(2,1) =", A, "fixes (2,1):", atlas.matvec(A, (2, 1)))

target = out / "atlas_b125.svg"
target.write_text(render_svg(diagrams[-1], title="B(1,4,25)"), encoding="utf-8")
print("wrote", target)

"""
Tropical discs
==============

Each shipped figure holds a base diagram, its walls and one broken line per
monomial of the potential.  Every disc is balanced at its bends, and its
Maslov index is 2.  The figures are written as SVG next to this script.
"""

from pathlib import Path

from wallcross.figures import FIGURES, propagated_wall_slopes
from wallcross.presets import load_figure
from wallcross.tropical import check_balanced, maslov_of_tropical, render_svg

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

for name in FIGURES:
    fig = load_figure(name)
    bad = [msg for d in fig.discs for msg in check_balanced(d)]
    indices = {maslov_of_tropical(d) for d in fig.discs}
    print(f"{name}: {len(fig.discs)} discs, maslov {sorted(indices)}, unbalanced {len(bad)}  {fig.caption}")
    svg = render_svg(fig.diagram, fig.discs, fig.walls, title=fig.caption)
    (out / f"{name}.svg").write_text(svg, encoding="utf-8")

# walls change slope when they pass through another node's cut
for k, v in propagated_wall_slopes().items():
    print(k, v)
print("SVGs in", out)

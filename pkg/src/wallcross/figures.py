"""Builders for the shipped tropical-disc figures.

Each figure fixes a schematic polygon, node positions and a torus fiber; disc
directions come from the potential's monomials and the bends from tracing each
monomial back across the walls.  ``python3 -m wallcross.figures`` regenerates
the JSON assets.
"""

from __future__ import annotations

from fractions import Fraction as Q
from pathlib import Path

from .atlas import BaseDiagram, Cut, ray_exit
from .laurent import LaurentExpr, Monomial
from .presets import FigureAsset, load_preset
from .tropical import WallStage, discs_for_potential, wall_after_cut

FIGURES = ("fig4", "fig5", "fig7", "fig8", "fig9")

# a large triangle leaves room for every bent disc
POLYGON = ((Q(-6), Q(-6)), (Q(12), Q(-6)), (Q(-6), Q(12)))


def _wall_segment(node, direction, polygon=POLYGON):
    end, _ = ray_exit(list(polygon), node, direction)
    return (tuple(node), end)


def _cut(node, away, polygon=POLYGON):
    """Cut from the boundary to ``node``, leaving the node along ``away``."""
    anchor, _ = ray_exit(list(polygon), node, away)
    return Cut(node, (-away[0], -away[1]), anchor)


def _chain(preset):
    Ws = preset.chain()
    charts = [s.to_chart for s in preset.steps]
    return dict(zip((c.names for c in charts), zip(Ws, charts)))


def fig4() -> FigureAsset:
    p = load_preset("cp2-t1425")
    chart = p.charts["z"]
    node = (Q(-2), Q(-2))
    diagram = BaseDiagram(POLYGON, (_cut(node, (-1, -1)),), (Q(0), Q(0)))
    discs = discs_for_potential(p.W0, chart, (), (0, 0), POLYGON)
    walls = [_wall_segment(node, (1, -1)), _wall_segment(node, (-1, 1))]
    return FigureAsset("fig4", "Clifford torus: W = z1 + z2 + qL/(z1 z2)", diagram, walls, discs)


def fig5() -> FigureAsset:
    p = load_preset("cp2-t1425")
    uw = p.charts["uw"]
    u, w, qL = (LaurentExpr.variable(x) for x in ("u", "w", "qL"))
    before = u + qL / (u**2 * w)
    after = u + qL * (1 + w) ** 2 / (u**2 * w)
    node = (Q(3, 2), Q(-1))
    stage = WallStage(uw, Monomial({"w": 1}), node, before, uw)
    diagram = BaseDiagram(POLYGON, (_cut(node, (1, -1)),), (Q(0), Q(0)))
    discs = discs_for_potential(after, uw, (stage,), (0, 0), POLYGON)
    walls = [_wall_segment(node, (-1, 1))]
    return FigureAsset("fig5", "After one wall: u + qL(1+w)^2/(u^2 w)", diagram, walls, discs)


N1 = (Q(1), Q(-2))
N2 = (Q(2), Q(-7, 5))


def fig7() -> FigureAsset:
    p = load_preset("cp2-t1425")
    W, chart = _chain(p)[("zh1", "zh2")]
    diagram = BaseDiagram(POLYGON, (_cut(N1, (-2, -1)),), (Q(4), Q(-3)))
    discs = discs_for_potential(W, chart, (), (4, -3), POLYGON)
    walls = [_wall_segment(N1, (2, 1))]
    return FigureAsset("fig7", "Clifford side of the first wall, after the basis change", diagram, walls, discs)


def fig8() -> FigureAsset:
    p = load_preset("cp2-t1425")
    chain = _chain(p)
    Wh, zh = chain[("zh1", "zh2")]
    Wt, zt = chain[("zt1", "zt2")]
    stage = WallStage(zt, Monomial({"zt1": 2, "zt2": 1}), N1, Wh, zh)
    diagram = BaseDiagram(POLYGON, (_cut(N1, (-2, -1)),), (Q(2), Q(0)))
    discs = discs_for_potential(Wt, zt, (stage,), (2, 0), POLYGON)
    walls = [_wall_segment(N1, (2, 1))]
    return FigureAsset("fig8", "Past the first wall: T(1,1,4) potential", diagram, walls, discs)


def fig9() -> FigureAsset:
    p = load_preset("cp2-t1425")
    chain = _chain(p)
    Wh, zh = chain[("zh1", "zh2")]
    Wt, zt = chain[("zt1", "zt2")]
    Wu, u = chain[("u1", "u2")]
    stages = (
        WallStage(u, Monomial({"qL": 1, "u1": -1, "u2": 1}), N2, Wt, zt),
        WallStage(zt, Monomial({"zt1": 2, "zt2": 1}), N1, Wh, zh),
    )
    cuts = (_cut(N1, (-2, -1)), _cut(N2, (1, -1)))
    diagram = BaseDiagram(POLYGON, cuts, (Q(0), Q(0)))
    discs = discs_for_potential(Wu, u, stages, (0, 0), POLYGON)
    walls = [_wall_segment(N1, (2, 1)), _wall_segment(N2, (-1, 1))]
    return FigureAsset("fig9", "T(1,4,25): ten families of Maslov index 2 discs", diagram, walls, discs)


BUILDERS = {"fig4": fig4, "fig5": fig5, "fig7": fig7, "fig8": fig8, "fig9": fig9}


def build_figure(name: str) -> FigureAsset:
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None


def propagated_wall_slopes() -> dict[str, tuple[int, int]]:
    """Wall directions after each wall passes through the other node's cut.

    The (2,1) wall is carried across the cut with eigenvector (1,-1), and the
    (1,-1) wall across the cut with eigenvector (2,1) in the opposite sense.
    """
    return {
        "wall1_through_cut2": wall_after_cut((2, 1), (1, -1)),
        "wall2_through_cut1": wall_after_cut((1, -1), (2, 1), inverse=True),
    }


def write_assets(directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in FIGURES:
        path = directory / f"{name}.json"
        path.write_text(build_figure(name).to_json(), encoding="utf-8")
        out.append(path)
    return out


if __name__ == "__main__":
    for path in write_assets(Path(__file__).parent / "data" / "discs"):
        print(path)

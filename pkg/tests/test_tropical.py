import random
import re
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wallcross.atlas import cp2_triangle
from wallcross.errors import DomainError, RenderError, SchemaError
from wallcross.figures import FIGURES, POLYGON, build_figure, propagated_wall_slopes
from wallcross.laurent import Monomial
from wallcross.presets import _package_root, figure_from_data, load_figure
from wallcross.tropical import (
    Edge,
    TropicalDisc,
    build_disc,
    check_balanced,
    glue_wall_disc,
    initial_direction,
    maslov_of_tropical,
    render_svg,
    transform_disc,
    wall_disc,
)

from surgery import random_affine

Q = Fraction
DISC_COUNTS = {"fig4": 3, "fig5": 4, "fig7": 3, "fig8": 4, "fig9": 10}


@pytest.mark.parametrize("name", FIGURES)
def test_shipped_assets_match_a_fresh_build(name):
    shipped = (_package_root() / "data" / "discs" / f"{name}.json").read_text(encoding="utf-8")
    assert build_figure(name).to_json() == shipped


@pytest.mark.parametrize("name", FIGURES)
def test_every_disc_is_balanced_with_maslov_two(name):
    fig = load_figure(name)
    assert len(fig.discs) == DISC_COUNTS[name]
    for d in fig.discs:
        assert check_balanced(d) == []
        assert maslov_of_tropical(d) == 2
        assert d.root == fig.diagram.marked_fiber


def test_fig9_discs_follow_the_potential(cp2):
    fig = load_figure("fig9")
    chart = cp2.final_chart
    W = cp2.final_potential()
    roots = sorted(
        (d.edges[0].multiplicity * d.edges[0].direction[0], d.edges[0].multiplicity * d.edges[0].direction[1])
        for d in fig.discs
    )
    assert roots == sorted(initial_direction(m, chart) for m, _ in W.items())


def test_fig5_bent_disc():
    disc = next(d for d in load_figure("fig5").discs if d.label == "2*qL*u^-2")
    assert [(e.direction, e.multiplicity) for e in disc.edges] == [((1, 0), 2), ((1, -1), 1), ((1, 1), 1)]
    assert disc.points[2] == (Q(3, 2), Q(-1))
    assert dict(disc.leaf_kinds) == {2: "node", 3: "boundary"}


def test_initial_direction_uses_chart_lattice(cp2):
    uw = cp2.charts["uw"]
    assert initial_direction(Monomial({"u": -2, "qL": 1}), uw) == (2, 0)
    assert initial_direction(Monomial({"w": 1}), uw) == (1, -1)
    assert initial_direction(Monomial({"z1": 1}), cp2.charts["z"]) == (-1, 0)


def test_propagated_wall_slopes():
    assert propagated_wall_slopes() == {"wall1_through_cut2": (5, -2), "wall2_through_cut1": (7, 2)}


@given(st.sampled_from(FIGURES), st.integers(0, 10_000))
def test_affine_maps_preserve_balance_and_maslov(name, seed):
    f = random_affine(random.Random(seed))
    for d in load_figure(name).discs:
        image = transform_disc(d, f)
        assert check_balanced(image) == []
        assert maslov_of_tropical(image) == 2


@given(st.integers(1, 4), st.sampled_from([(1, 1), (-1, 1), (2, 1), (1, -2)]))
def test_gluing_adds_wall_classes(k, a):
    root = (Q(0), Q(0))
    D0 = (a[1], -a[0])
    D = (D0[0] + k * a[0], D0[1] + k * a[1])
    # the glued disc runs along D, bends on the wall line, then goes to the node along a
    node = (Q(D[0] + a[0], 4), Q(D[1] + a[1], 4))
    base = build_disc(root, D0, [], POLYGON)
    glued = glue_wall_disc(base, node, a, k, POLYGON)
    start = glued.edges[0]
    assert (start.multiplicity * start.direction[0], start.multiplicity * start.direction[1]) == D
    # a torus on the wall line sees the Maslov-0 disc with boundary vector a
    wall = wall_disc((node[0] - a[0], node[1] - a[1]), node)
    assert wall.edges[0].direction == a
    assert maslov_of_tropical(glued) == maslov_of_tropical(base) == 2
    assert maslov_of_tropical(wall) == 0


def test_wall_disc_has_maslov_zero():
    assert maslov_of_tropical(wall_disc((0, 0), (Q(2), Q(-1)))) == 0


def test_disc_validation():
    with pytest.raises(DomainError):  # not a tree
        TropicalDisc((0, 0), ((1, 0),), (), {1: "boundary"})
    with pytest.raises(DomainError):  # not primitive
        TropicalDisc((0, 0), ((2, 0),), (Edge(0, 1, (2, 0)),), {1: "boundary"})
    with pytest.raises(DomainError):  # edge points the wrong way
        TropicalDisc((0, 0), ((1, 0),), (Edge(0, 1, (-1, 0)),), {1: "boundary"})
    with pytest.raises(DomainError):  # leaf without a kind
        TropicalDisc((0, 0), ((1, 0),), (Edge(0, 1, (1, 0)),), {})


def test_unbalanced_disc_is_reported():
    d = TropicalDisc(
        (0, 0), ((1, 0), (2, 0), (1, 1)),
        (Edge(0, 1, (1, 0)), Edge(1, 2, (1, 0)), Edge(1, 3, (0, 1))),
        {2: "boundary", 3: "boundary"},
    )
    assert check_balanced(d)
    with pytest.raises(DomainError):
        maslov_of_tropical(d)


@pytest.mark.parametrize("name", FIGURES)
def test_disc_data_round_trip(name):
    for d in load_figure(name).discs:
        assert TropicalDisc.from_data(d.to_data()) == d


@pytest.mark.parametrize("name", FIGURES)
def test_svg_output(name):
    fig = load_figure(name)
    svg = render_svg(fig.diagram, fig.discs, fig.walls, title=fig.caption)
    assert svg == render_svg(fig.diagram, fig.discs, fig.walls, title=fig.caption)
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert len(re.findall(r'<g class="disc"', svg)) == len(fig.discs)
    assert svg.count("×") == len(fig.diagram.cuts)


def test_svg_refuses_points_outside_the_diagram():
    fig = load_figure("fig9")
    with pytest.raises(RenderError):
        render_svg(cp2_triangle(), fig.discs)


def test_corrupted_figure_fails_schema():
    doc = build_figure("fig4").to_data()
    doc["discs"][0]["edges"] = "nonsense"
    with pytest.raises(SchemaError):
        figure_from_data(doc)

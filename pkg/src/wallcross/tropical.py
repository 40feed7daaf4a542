"""Tropical discs in a base diagram: balancing, Maslov index, and SVG output."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence
from xml.sax.saxutils import escape

from .atlas import AffineMapZ, BaseDiagram, cross, matvec, primitive, ray_exit, vec
from .chart import Chart
from .errors import DomainError, RenderError
from .laurent import Monomial

NODE_END = "node"
BOUNDARY_END = "boundary"


@dataclass(frozen=True)
class Edge:
    start: int
    end: int
    direction: tuple[int, int]
    multiplicity: int = 1


@dataclass(frozen=True)
class TropicalDisc:
    """Rooted tree; point 0 is the root (the torus fiber), points 1.. are ``vertices``."""

    root: tuple
    vertices: tuple = ()
    edges: tuple = ()
    leaf_kinds: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "root", vec(*self.root))
        object.__setattr__(self, "vertices", tuple(vec(*p) for p in self.vertices))
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        items = self.leaf_kinds.items() if isinstance(self.leaf_kinds, dict) else self.leaf_kinds
        object.__setattr__(self, "leaf_kinds", tuple(sorted((int(i), str(k)) for i, k in items)))
        self._validate()

    @property
    def points(self):
        return (self.root,) + self.vertices

    def kind(self, i):
        return dict(self.leaf_kinds).get(i)

    def degree(self, i):
        return sum((e.start == i) + (e.end == i) for e in self.edges)

    def _validate(self):
        pts = self.points
        n = len(pts)
        if len(self.edges) != n - 1:
            raise DomainError("a tropical disc must be a tree (edges = points - 1)")
        adj = defaultdict(list)
        for e in self.edges:
            if not (0 <= e.start < n and 0 <= e.end < n) or e.start == e.end:
                raise DomainError(f"edge {e} has invalid endpoints")
            if e.multiplicity < 1:
                raise DomainError("edge multiplicities must be positive")
            a, b = e.direction
            if gcd(a, b) != 1:
                raise DomainError(f"edge direction {e.direction} is not primitive")
            d = (pts[e.end][0] - pts[e.start][0], pts[e.end][1] - pts[e.start][1])
            if cross(d, e.direction) != 0 or d[0] * a + d[1] * b <= 0:
                raise DomainError(f"edge {e} does not point along its direction")
            adj[e.start].append(e.end)
            adj[e.end].append(e.start)
        seen, stack = {0}, [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            raise DomainError("tropical disc is not connected")
        kinds = dict(self.leaf_kinds)
        for i in range(1, n):
            if self.degree(i) == 1:
                if kinds.get(i) not in (NODE_END, BOUNDARY_END):
                    raise DomainError(f"leaf {i} needs a kind ({NODE_END!r} or {BOUNDARY_END!r})")
            elif i in kinds:
                raise DomainError(f"point {i} is not a leaf but has a leaf kind")
        if 0 in kinds:
            raise DomainError("the root is not a leaf end")

    def to_data(self) -> dict:
        f = lambda x: f"{x.numerator}/{x.denominator}"
        return {
            "label": self.label,
            "root": [f(x) for x in self.root],
            "vertices": [[f(x) for x in p] for p in self.vertices],
            "edges": [[e.start, e.end, list(e.direction), e.multiplicity] for e in self.edges],
            "leaf_kinds": {str(i): k for i, k in self.leaf_kinds},
        }

    @classmethod
    def from_data(cls, data: dict) -> TropicalDisc:
        return cls(
            root=tuple(Fraction(x) for x in data["root"]),
            vertices=tuple(tuple(Fraction(x) for x in p) for p in data["vertices"]),
            edges=tuple(Edge(s, t, tuple(d), m) for s, t, d, m in data["edges"]),
            leaf_kinds={int(i): k for i, k in data["leaf_kinds"].items()},
            label=data.get("label", ""),
        )


def check_balanced(d: TropicalDisc) -> list[str]:
    """Violations of the balancing condition at internal vertices (empty if balanced)."""
    out = []
    for i in range(1, len(d.points)):
        if d.degree(i) < 2:
            continue
        sx = sy = 0
        for e in d.edges:
            if e.start == i:
                sx += e.multiplicity * e.direction[0]
                sy += e.multiplicity * e.direction[1]
            elif e.end == i:
                sx -= e.multiplicity * e.direction[0]
                sy -= e.multiplicity * e.direction[1]
        if sx or sy:
            out.append(f"vertex {i} at {tuple(map(str, d.points[i]))}: weighted directions sum to ({sx},{sy})")
    return out


def maslov_of_tropical(d: TropicalDisc) -> int:
    bad = check_balanced(d)
    if bad:
        raise DomainError("unbalanced tropical disc: " + "; ".join(bad))
    total = 0
    for i, kind in d.leaf_kinds:
        if kind == BOUNDARY_END:
            total += sum(e.multiplicity for e in d.edges if i in (e.start, e.end))
    return 2 * total


def initial_direction(m: Monomial, chart: Chart) -> tuple[int, int]:
    """Negated exponent vector of ``m`` in the chart lattice; area symbols are ignored."""
    r, s = chart.exponents(m)
    (a1, b1), (a2, b2) = chart.lattice
    return (-(r * a1 + s * a2), -(r * b1 + s * b2))


def transform_disc(d: TropicalDisc, m: AffineMapZ) -> TropicalDisc:
    return TropicalDisc(
        root=m(d.root),
        vertices=tuple(m(p) for p in d.vertices),
        edges=tuple(Edge(e.start, e.end, matvec(m.linear, e.direction), e.multiplicity) for e in d.edges),
        leaf_kinds=d.leaf_kinds,
        label=d.label,
    )


# --- construction ------------------------------------------------------------


def _solve_bend(p, d, node, a):
    """Solve p + t*d = node - s*a with t, s > 0."""
    rhs = (node[0] - p[0], node[1] - p[1])
    den = cross(d, a)
    if den == 0:
        raise DomainError("disc direction is parallel to the wall")
    t = cross(rhs, a) / den
    s = cross(d, rhs) / den
    if t <= 0 or s <= 0:
        raise DomainError("the disc does not meet this wall on the node's far side")
    return (p[0] + t * d[0], p[1] + t * d[1])


def build_disc(root, direction, bends, polygon: Sequence, label: str = "") -> TropicalDisc:
    """Disc leaving ``root`` with integer vector ``direction``.

    Each bend ``(node, a, k)`` meets the line through ``node`` along the
    primitive ``a`` and attaches an edge of multiplicity ``k`` running to the
    node in direction ``a``; the outgoing vector drops by ``k*a``.  The last
    edge runs to the polygon boundary.
    """
    root = vec(*root)
    pts = [root]
    edges = []
    kinds = {}
    cur, D = 0, tuple(direction)
    for node, a, k in bends:
        if k == 0:
            continue
        node = vec(*node)
        g = gcd(*D)
        p = (D[0] // g, D[1] // g)
        v = _solve_bend(pts[cur], p, node, a)
        pts.append(v)
        vi = len(pts) - 1
        edges.append(Edge(cur, vi, p, g))
        pts.append(node)
        edges.append(Edge(vi, len(pts) - 1, tuple(a), k))
        kinds[len(pts) - 1] = NODE_END
        D = (D[0] - k * a[0], D[1] - k * a[1])
        cur = vi
    g = gcd(*D)
    if g == 0:
        raise DomainError("disc direction vanished")
    p = (D[0] // g, D[1] // g)
    end, _ = ray_exit(list(polygon), pts[cur], p)
    pts.append(end)
    edges.append(Edge(cur, len(pts) - 1, p, g))
    kinds[len(pts) - 1] = BOUNDARY_END
    return TropicalDisc(root, tuple(pts[1:]), tuple(edges), kinds, label)


def wall_disc(root, node) -> TropicalDisc:
    """Maslov-0 disc: a single edge from the torus to a node."""
    root, node = vec(*root), vec(*node)
    d = primitive((node[0] - root[0], node[1] - root[1]))
    return TropicalDisc(root, (node,), (Edge(0, 1, d, 1),), {1: NODE_END}, "wall")


def glue_wall_disc(disc: TropicalDisc, node, a, k: int, polygon: Sequence) -> TropicalDisc:
    """Attach ``k`` copies of the wall class at ``node`` to a straight disc.

    The result leaves the torus with vector ``old + k*a``, bends on the wall
    and then follows the old direction to the boundary, so its class is the
    old class plus ``k`` times the wall class.
    """
    if len(disc.edges) != 1 or disc.kind(1) != BOUNDARY_END:
        raise DomainError("gluing is defined here for straight boundary discs")
    e = disc.edges[0]
    D0 = (e.multiplicity * e.direction[0], e.multiplicity * e.direction[1])
    D = (D0[0] + k * a[0], D0[1] + k * a[1])
    return build_disc(disc.root, D, [(node, tuple(a), k)], polygon, disc.label)


@dataclass(frozen=True)
class WallStage:
    """One crossed wall, as seen from the torus side."""

    chart: Chart
    wall_monomial: Monomial
    node: tuple
    previous: object  # LaurentExpr on the other side of the wall, in ``previous_chart``
    previous_chart: Chart


def _rename(m: Monomial, source: Chart, target: Chart) -> Monomial:
    ren = dict(zip(source.names, target.names))
    return Monomial({ren.get(k, k): v for k, v in m.items()})


def trace_bends(m: Monomial, chart: Chart, stages: Sequence[WallStage]):
    """Which walls a term's disc bends on, and with which multiplicities.

    Walking outward from the torus, a term ``m`` past a wall came from a term
    ``m / w^k`` of the previous potential for the least ``k >= 0``.
    """
    out = []
    cur, cur_chart = m, chart
    for st in stages:
        w = _rename(st.wall_monomial, st.chart, cur_chart) if st.chart != cur_chart else st.wall_monomial
        prev_terms = {_rename(x, st.previous_chart, cur_chart) for x, _ in st.previous.items()}
        for k in range(0, 64):
            cand = cur * w ** (-k)
            if cand in prev_terms:
                break
        else:
            raise DomainError(f"term {m} has no ancestor across the wall {st.wall_monomial}")
        out.append((st.node, initial_direction(w, cur_chart), k))
        cur = _rename(cand, cur_chart, st.previous_chart)
        cur_chart = st.previous_chart
    return out


def discs_for_potential(W, chart: Chart, stages: Sequence[WallStage], root, polygon) -> list[TropicalDisc]:
    discs = []
    ring = chart.ring
    for m, c in ring.sorted_terms(W):
        bends = trace_bends(m, chart, stages)
        label = f"{c}*{m}" if c != 1 else str(m)
        discs.append(build_disc(root, initial_direction(m, chart), bends, polygon, label))
    return discs


def wall_after_cut(wall_direction, cut_eigenvector, inverse: bool = False) -> tuple[int, int]:
    """Direction of a wall after it passes through another node's cut."""
    from .atlas import inverse_unimodular, monodromy

    A = monodromy(*cut_eigenvector)
    if inverse:
        A = inverse_unimodular(A)
    return tuple(int(x) for x in matvec(A, wall_direction))


# --- SVG ---------------------------------------------------------------------


def _inside_closed(pts, p) -> bool:
    n = len(pts)
    return all(cross((pts[(i + 1) % n][0] - pts[i][0], pts[(i + 1) % n][1] - pts[i][1]),
                     (p[0] - pts[i][0], p[1] - pts[i][1])) >= 0 for i in range(n))


def render_svg(
    diagram: BaseDiagram,
    discs: Sequence[TropicalDisc] = (),
    walls: Sequence[tuple] = (),
    size: int = 480,
    title: str = "",
) -> str:
    pts = diagram.vertices
    for d in discs:
        for p in d.points:
            if not _inside_closed(pts, p):
                raise RenderError(f"disc point {tuple(map(str, p))} lies outside the diagram")
    for a, b in walls:
        for p in (a, b):
            if not _inside_closed(pts, vec(*p)):
                raise RenderError(f"wall endpoint {p} lies outside the diagram")

    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    margin = 24
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (size - 2 * margin) / span
    x0, y1 = min(xs), max(ys)

    def X(p):
        return f"{margin + (float(p[0]) - x0) * scale:.2f}"

    def Y(p):
        return f"{margin + (y1 - float(p[1])) * scale:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    poly = " ".join(f"{X(p)},{Y(p)}" for p in pts)
    out.append(f'<polygon class="base" points="{poly}" fill="none" stroke="black" stroke-width="1.5"/>')
    for a, b in walls:
        out.append(
            f'<line class="wall" x1="{X(a)}" y1="{Y(a)}" x2="{X(b)}" y2="{Y(b)}" '
            'stroke="gray" stroke-width="1" stroke-dasharray="12,6"/>'
        )
    for c in diagram.cuts:
        a, b = c.boundary_anchor, c.node
        out.append(
            f'<line class="cut" x1="{X(a)}" y1="{Y(a)}" x2="{X(b)}" y2="{Y(b)}" '
            'stroke="black" stroke-width="1" stroke-dasharray="3,3"/>'
        )
    for i, d in enumerate(discs):
        out.append(f'<g class="disc" id="disc-{i}">')
        if d.label:
            out.append(f"<title>{escape(d.label)}</title>")
        for e in d.edges:
            a, b = d.points[e.start], d.points[e.end]
            out.append(
                f'<path class="edge" d="M {X(a)} {Y(a)} L {X(b)} {Y(b)}" '
                f'stroke="blue" fill="none" stroke-width="{e.multiplicity}"/>'
            )
        out.append("</g>")
    for c in diagram.cuts:
        out.append(
            f'<text class="node" x="{X(c.node)}" y="{Y(c.node)}" text-anchor="middle" '
            'dominant-baseline="central" font-size="16">×</text>'
        )
    tori = []
    for d in discs:
        if d.root not in tori:
            tori.append(d.root)
    if diagram.marked_fiber is not None and diagram.marked_fiber not in tori:
        tori.append(diagram.marked_fiber)
    for p in tori:
        out.append(f'<circle class="torus" cx="{X(p)}" cy="{Y(p)}" r="3.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

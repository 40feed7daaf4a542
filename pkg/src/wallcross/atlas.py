"""Integer-affine base diagrams of almost-toric fibrations.

A diagram is a convex rational polygon together with cuts.  Each cut is a
segment from a boundary anchor to a node; its ``direction`` is the primitive
integer eigenvector of the node's monodromy, pointing from the anchor towards
the node.  All coordinates are ``Fraction`` so every operation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import CornerNotSmoothError, DomainError, OutOfBaseError, PathError
from .markov import MarkovTriple, adjacent

Vec = tuple[Fraction, Fraction]
Mat = tuple[tuple[int, int], tuple[int, int]]


# --- small exact linear algebra ------------------------------------------


def vec(x, y) -> Vec:
    return (Fraction(x), Fraction(y))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def _scale(s, p):
    return (s * p[0], s * p[1])


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def mat(rows) -> Mat:
    (a, b), (c, d) = rows
    return ((int(a), int(b)), (int(c), int(d)))


def det(m: Mat) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def matmul(m: Mat, n: Mat) -> Mat:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def matvec(m: Mat, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def inverse_unimodular(m: Mat) -> Mat:
    d = det(m)
    if d not in (1, -1):
        raise DomainError(f"matrix {m} is not unimodular")
    return ((m[1][1] * d, -m[0][1] * d), (-m[1][0] * d, m[0][0] * d))


def transpose(m: Mat) -> Mat:
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


def dual(m: Mat) -> Mat:
    """Transpose inverse: how a map of the base acts on exponent vectors."""
    return transpose(inverse_unimodular(m))


IDENTITY: Mat = ((1, 0), (0, 1))


def primitive(v) -> tuple[int, int]:
    """Primitive integer vector in the direction of a nonzero rational vector."""
    x, y = Fraction(v[0]), Fraction(v[1])
    if x == 0 and y == 0:
        raise DomainError("zero vector has no primitive direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    a, b = int(x * den), int(y * den)
    g = gcd(a, b)
    return (a // g, b // g)


def is_primitive(a: int, b: int) -> bool:
    return gcd(a, b) == 1


def monodromy(a: int, b: int) -> Mat:
    """Monodromy around a node with eigenvector (a, b)."""
    if not is_primitive(a, b):
        raise DomainError(f"({a},{b}) is not primitive")
    return ((1 - a * b, a * a), (-b * b, 1 + a * b))


def sl2_sending_e1_to(a: int, b: int) -> Mat:
    """An integer matrix of determinant 1 whose first column is (a, b)."""
    if not is_primitive(a, b):
        raise DomainError(f"({a},{b}) is not primitive")
    # extended Euclid: a*x + b*y = 1, then columns (a,b), (-y,x)
    x0, y0, r0, r1 = 1, 0, a, b
    x1, y1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        x0, y0 = -x0, -y0
    return ((a, -y0), (b, x0))


# --- types ----------------------------------------------------------------


@dataclass(frozen=True)
class AffineMapZ:
    linear: Mat = IDENTITY
    translation: Vec = (Fraction(0), Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "linear", mat(self.linear))
        object.__setattr__(self, "translation", vec(*self.translation))
        if det(self.linear) != 1:
            raise DomainError(f"linear part {self.linear} must have determinant 1")

    def __call__(self, p) -> Vec:
        return _add(matvec(self.linear, vec(*p)), self.translation)

    def compose(self, other: AffineMapZ) -> AffineMapZ:
        """``self ∘ other``."""
        return AffineMapZ(matmul(self.linear, other.linear), self(other.translation))

    def inverse(self) -> AffineMapZ:
        inv = inverse_unimodular(self.linear)
        t = matvec(inv, self.translation)
        return AffineMapZ(inv, (-t[0], -t[1]))


@dataclass(frozen=True)
class Cut:
    node: Vec
    direction: tuple[int, int]
    boundary_anchor: Vec

    def __post_init__(self):
        object.__setattr__(self, "node", vec(*self.node))
        object.__setattr__(self, "boundary_anchor", vec(*self.boundary_anchor))
        a, b = (int(x) for x in self.direction)
        object.__setattr__(self, "direction", (a, b))
        if not is_primitive(a, b):
            raise DomainError(f"cut direction {self.direction} is not primitive")
        d = _sub(self.node, self.boundary_anchor)
        if cross(d, self.direction) != 0 or d[0] * a + d[1] * b <= 0:
            raise DomainError("segment anchor -> node must point along the cut direction")

    @property
    def length(self) -> Fraction:
        """Affine length of the cut, in units of the primitive direction."""
        d = _sub(self.node, self.boundary_anchor)
        a, b = self.direction
        return d[0] / a if a else d[1] / b


@dataclass(frozen=True)
class BaseDiagram:
    vertices: tuple[Vec, ...]
    cuts: tuple[Cut, ...] = ()
    marked_fiber: Vec | None = None

    def __post_init__(self):
        pts = _clean_polygon([vec(*p) for p in self.vertices])
        object.__setattr__(self, "vertices", tuple(pts))
        object.__setattr__(self, "cuts", tuple(self.cuts))
        if self.marked_fiber is not None:
            object.__setattr__(self, "marked_fiber", vec(*self.marked_fiber))
        self._validate()

    def _validate(self):
        pts = self.vertices
        if len(pts) < 3:
            raise DomainError("a base diagram needs at least three corners")
        if signed_area(pts) <= 0:
            raise DomainError("vertices must be listed counterclockwise")
        n = len(pts)
        for i in range(n):
            if cross(_sub(pts[(i + 1) % n], pts[i]), _sub(pts[(i + 2) % n], pts[(i + 1) % n])) < 0:
                raise DomainError("polygon is not convex")
        for c in self.cuts:
            if not strictly_inside(pts, c.node):
                raise OutOfBaseError(f"node {c.node} is not strictly inside the polygon")
            if not on_boundary(pts, c.boundary_anchor):
                raise DomainError(f"anchor {c.boundary_anchor} is not on the boundary")
        for i in range(len(self.cuts)):
            for j in range(i + 1, len(self.cuts)):
                a, b = self.cuts[i], self.cuts[j]
                if segments_meet(a.boundary_anchor, a.node, b.boundary_anchor, b.node):
                    raise DomainError(f"cuts {i} and {j} intersect")
        if self.marked_fiber is not None:
            if not strictly_inside(pts, self.marked_fiber):
                raise OutOfBaseError("marked fiber must lie inside the polygon")
            if any(c.node == self.marked_fiber for c in self.cuts):
                raise DomainError("marked fiber cannot be a node")

    @property
    def area(self) -> Fraction:
        return signed_area(self.vertices)

    @property
    def anchors(self) -> set[Vec]:
        return {c.boundary_anchor for c in self.cuts}

    @property
    def vertex_count(self) -> int:
        """Corners of the almost-toric base: polygon corners not hidden by a cut."""
        return sum(1 for v in self.vertices if v not in self.anchors)

    def corner_determinants(self) -> list[int]:
        """|det| of the two edge primitives at each polygon corner."""
        n = len(self.vertices)
        out = []
        for i, v in enumerate(self.vertices):
            e1 = primitive(_sub(self.vertices[(i + 1) % n], v))
            e2 = primitive(_sub(self.vertices[i - 1], v))
            out.append(abs(cross(e1, e2)))
        return out

    def cut_determinants(self) -> list[int]:
        """Corner determinant at each cut's anchor (1 if the anchor is not a corner)."""
        dets = dict(zip(self.vertices, self.corner_determinants()))
        return [dets.get(c.boundary_anchor, 1) for c in self.cuts]

    def normalized(self) -> BaseDiagram:
        """Translate so the first vertex sits at the origin."""
        v0 = self.vertices[0]
        return apply_affine(self, AffineMapZ(IDENTITY, (-v0[0], -v0[1])))

    def node_passed_marked_fiber(self, cut_index: int) -> bool:
        """True when the marked fiber lies on the cut, between the anchor and the node."""
        if self.marked_fiber is None:
            return False
        c = self.cuts[cut_index]
        return _on_segment(c.boundary_anchor, c.node, self.marked_fiber)


# --- geometry helpers ------------------------------------------------------


def signed_area(pts: Sequence[Vec]) -> Fraction:
    n = len(pts)
    s = sum(cross(pts[i], pts[(i + 1) % n]) for i in range(n))
    return Fraction(s) / 2


def _clean_polygon(pts):
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            a, b, c = out[i - 1], out[i], out[(i + 1) % n]
            if cross(_sub(b, a), _sub(c, b)) == 0:
                out.pop(i)
                changed = True
                break
    return out


def strictly_inside(pts, p) -> bool:
    n = len(pts)
    return all(cross(_sub(pts[(i + 1) % n], pts[i]), _sub(p, pts[i])) > 0 for i in range(n))


def _on_segment(a, b, p) -> bool:
    if cross(_sub(b, a), _sub(p, a)) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def on_boundary(pts, p) -> bool:
    n = len(pts)
    return any(_on_segment(pts[i], pts[(i + 1) % n], p) for i in range(n))


def segments_meet(a, b, c, d) -> bool:
    d1 = cross(_sub(b, a), _sub(c, a))
    d2 = cross(_sub(b, a), _sub(d, a))
    d3 = cross(_sub(d, c), _sub(a, c))
    d4 = cross(_sub(d, c), _sub(b, c))
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (
        (d1 == 0 and _on_segment(a, b, c))
        or (d2 == 0 and _on_segment(a, b, d))
        or (d3 == 0 and _on_segment(c, d, a))
        or (d4 == 0 and _on_segment(c, d, b))
    )


def _clip(pts, origin, direction, keep_left: bool):
    """Sutherland-Hodgman clip of a convex polygon against a half-plane."""

    def side(p):
        s = cross(direction, _sub(p, origin))
        return s if keep_left else -s

    out = []
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        sp, sq = side(p), side(q)
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = sp / (sp - sq)
            out.append(_add(p, _scale(t, _sub(q, p))))
    return _clean_polygon(out)


def ray_exit(pts, origin, direction) -> tuple[Vec, Fraction]:
    """First boundary point hit by ``origin + s*direction`` for s > 0, and that s."""
    best = None
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        e = _sub(b, a)
        den = cross(direction, e)
        if den == 0:
            continue
        w = _sub(a, origin)
        s = cross(w, e) / den
        u = cross(w, direction) / den
        if s > 0 and 0 <= u <= 1 and (best is None or s < best):
            best = s
    if best is None:
        raise OutOfBaseError("ray does not leave the polygon")
    return _add(origin, _scale(best, direction)), best


# --- constructors ----------------------------------------------------------


def cp2_triangle(size=1, marked_fiber: bool = True) -> BaseDiagram:
    L = Fraction(size)
    center = (L / 3, L / 3) if marked_fiber else None
    return BaseDiagram((vec(0, 0), vec(L, 0), vec(0, L)), (), center)


# --- operations -------------------------------------------------------------


def nodal_trade(d: BaseDiagram, vertex_index: int, cut_length) -> BaseDiagram:
    cut_length = Fraction(cut_length)
    if cut_length <= 0:
        raise DomainError("cut length must be positive")
    pts = d.vertices
    n = len(pts)
    if not 0 <= vertex_index < n:
        raise DomainError(f"vertex index {vertex_index} out of range")
    v = pts[vertex_index]
    if v in d.anchors:
        raise DomainError("corner already carries a cut")
    e1 = primitive(_sub(pts[(vertex_index + 1) % n], v))
    e2 = primitive(_sub(pts[vertex_index - 1], v))
    if abs(cross(e1, e2)) != 1:
        raise CornerNotSmoothError(
            f"corner {v} has edge determinant {abs(cross(e1, e2))}, not a smooth corner"
        )
    direction = (e1[0] + e2[0], e1[1] + e2[1])
    node = _add(v, _scale(cut_length, direction))
    if not strictly_inside(pts, node):
        raise OutOfBaseError("traded node would leave the polygon")
    return replace(d, cuts=d.cuts + (Cut(node, direction, v),))


def nodal_slide(d: BaseDiagram, cut_index: int, new_length) -> BaseDiagram:
    new_length = Fraction(new_length)
    if new_length <= 0:
        raise DomainError("cut length must be positive")
    c = d.cuts[cut_index]
    node = _add(c.boundary_anchor, _scale(new_length, c.direction))
    if not strictly_inside(d.vertices, node):
        raise OutOfBaseError(f"node at {node} would leave the polygon")
    cuts = list(d.cuts)
    cuts[cut_index] = Cut(node, c.direction, c.boundary_anchor)
    return replace(d, cuts=tuple(cuts))


def _half(p, node, v):
    s = cross(v, _sub(p, node))
    return (s > 0) - (s < 0)


def cut_and_glue(d: BaseDiagram, cut_index: int, side: str) -> BaseDiagram:
    """Cut along the node's eigenline, twist one side, and re-glue.

    ``side`` is ``"left"`` or ``"right"`` of the eigenline oriented from the
    anchor to the node.  The right side is mapped by the monodromy, the left
    side by its inverse, both fixing the node; either way the old cut closes
    up and a new cut opens on the other side of the node.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    c = d.cuts[cut_index]
    v = c.direction
    node = c.node
    left = _clip(list(d.vertices), node, v, keep_left=True)
    right = _clip(list(d.vertices), node, v, keep_left=False)
    if len(left) < 3 or len(right) < 3 or signed_area(left) <= 0 or signed_area(right) <= 0:
        raise DomainError("the eigenline does not split the polygon")

    A = monodromy(*v)
    M = A if side == "right" else inverse_unimodular(A)
    sgn = -1 if side == "right" else 1
    twist = AffineMapZ(M, _sub(node, matvec(M, node)))

    on_line = sorted(
        (p for p in left if _half(p, node, v) == 0),
        key=lambda p: p[0] * v[0] + p[1] * v[1],
    )
    p_old, p_new = on_line[0], on_line[-1]

    if side == "right":
        right = [twist(p) for p in right]
    else:
        left = [twist(p) for p in left]

    def walk(poly, start, stop):
        i = poly.index(start)
        out = []
        while True:
            out.append(poly[i])
            if poly[i] == stop:
                return out
            i = (i + 1) % len(poly)

    outline = walk(left, p_new, p_old)[:-1] + walk(right, p_old, p_new)[:-1]

    cuts = []
    for j, other in enumerate(d.cuts):
        if j == cut_index:
            cuts.append(Cut(node, (-v[0], -v[1]), p_new))
            continue
        if _crosses_line(other, node, v):
            raise DomainError(f"cut {j} crosses the eigenline of cut {cut_index}")
        if _half(other.node, node, v) == sgn:
            other = Cut(twist(other.node), matvec(M, other.direction), twist(other.boundary_anchor))
        cuts.append(other)

    marked = d.marked_fiber
    if marked is not None and _half(marked, node, v) == sgn:
        marked = twist(marked)
    try:
        return BaseDiagram(tuple(outline), tuple(cuts), marked)
    except DomainError as exc:
        raise DomainError(f"re-glued diagram is invalid: {exc}") from exc


def apply_affine(d: BaseDiagram, m: AffineMapZ) -> BaseDiagram:
    cuts = tuple(Cut(m(c.node), matvec(m.linear, c.direction), m(c.boundary_anchor)) for c in d.cuts)
    marked = None if d.marked_fiber is None else m(d.marked_fiber)
    return BaseDiagram(tuple(m(p) for p in d.vertices), cuts, marked)


def equal_up_to_affine(d1: BaseDiagram, d2: BaseDiagram, compare_nodes: bool = True) -> AffineMapZ | None:
    """Find an AffineMapZ carrying ``d1`` onto ``d2``, or return ``None``.

    Candidate maps are those sending the two edges at the first corner of
    ``d1`` onto the two edges at some corner of ``d2``.  With
    ``compare_nodes=False`` cuts are compared by anchor and direction only.
    """
    p, q = d1.vertices, d2.vertices
    n = len(p)
    if n != len(q) or len(d1.cuts) != len(d2.cuts):
        return None
    if (d1.marked_fiber is None) != (d2.marked_fiber is None) and compare_nodes:
        return None
    e1, e2 = _sub(p[1], p[0]), _sub(p[-1], p[0])
    de = cross(e1, e2)
    for k in range(n):
        f1, f2 = _sub(q[(k + 1) % n], q[k]), _sub(q[k - 1], q[k])
        # M [e1 e2] = [f1 f2]
        m00 = (f1[0] * e2[1] - f2[0] * e1[1]) / de
        m01 = (f2[0] * e1[0] - f1[0] * e2[0]) / de
        m10 = (f1[1] * e2[1] - f2[1] * e1[1]) / de
        m11 = (f2[1] * e1[0] - f1[1] * e2[0]) / de
        if any(x.denominator != 1 for x in (m00, m01, m10, m11)):
            continue
        lin = ((int(m00), int(m01)), (int(m10), int(m11)))
        if det(lin) != 1:
            continue
        t = _sub(q[k], matvec(lin, p[0]))
        f = AffineMapZ(lin, t)
        if any(f(p[i]) != q[(i + k) % n] for i in range(n)):
            continue
        if compare_nodes:
            mine = {(f(c.boundary_anchor), f(c.node), matvec(lin, c.direction)) for c in d1.cuts}
            theirs = {(c.boundary_anchor, c.node, c.direction) for c in d2.cuts}
            if d1.marked_fiber is not None and f(d1.marked_fiber) != d2.marked_fiber:
                continue
        else:
            mine = {(f(c.boundary_anchor), matvec(lin, c.direction)) for c in d1.cuts}
            theirs = {(c.boundary_anchor, c.direction) for c in d2.cuts}
        if mine == theirs:
            return f
    return None


def mutation_start(size=1, cut_fraction=Fraction(1, 10)) -> BaseDiagram:
    """CP^2 triangle with a short cut traded in at each corner."""
    d = cp2_triangle(size)
    for corner in range(3):
        i = d.vertices.index(cp2_triangle(size).vertices[corner])
        d = nodal_trade(d, i, Fraction(cut_fraction) * Fraction(size))
    return d


def _crosses_line(c: Cut, node, v) -> bool:
    s1, s2 = _half(c.node, node, v), _half(c.boundary_anchor, node, v)
    return s1 == 0 or s1 * s2 < 0


def _clear_eigenline(d: BaseDiagram, cut_index: int) -> BaseDiagram:
    """Shorten other cuts (nodal slides towards their anchors) until none meets the eigenline."""
    c = d.cuts[cut_index]
    for j, other in enumerate(d.cuts):
        if j == cut_index:
            continue
        for _ in range(64):
            if not _crosses_line(d.cuts[j], c.node, c.direction):
                break
            d = nodal_slide(d, j, d.cuts[j].length / 2)
        else:
            raise DomainError(f"cut {j} cannot be moved off the eigenline of cut {cut_index}")
    return d


def mutate_diagram(d: BaseDiagram, cut_index: int, side: str = "right") -> BaseDiagram:
    """Slide a node to the mirror position along its eigenline, then cut and glue."""
    c = d.cuts[cut_index]
    d = _clear_eigenline(d, cut_index)
    _, total = ray_exit(d.vertices, c.boundary_anchor, c.direction)
    target = total - c.length
    if target <= 0 or target >= total:
        raise OutOfBaseError("cut is too long to mirror along its eigenline")
    if target != c.length:
        d = nodal_slide(d, cut_index, target)
    return cut_and_glue(d, cut_index, side)


def mutation_sequence(start: BaseDiagram, triple_path: Sequence[MarkovTriple], side: str = "right") -> list[BaseDiagram]:
    """Diagrams B(a^2, b^2, c^2) along a path in the Markov tree.

    Each step mutates at a cut whose anchor corner has determinant x^2, where
    x is the entry being replaced, and checks that the new corner has
    determinant x'^2.
    """
    path = [t if isinstance(t, MarkovTriple) else MarkovTriple.of(t) for t in triple_path]
    out = [start]
    d = start
    for prev, nxt in zip(path, path[1:]):
        slot = adjacent(prev, nxt)
        if slot is None:
            raise PathError(f"{prev} and {nxt} are not related by one mutation")
        old = prev.astuple()[slot - 1]
        new_val = 3 * (prev.a * prev.b * prev.c // old) - old
        dets = d.cut_determinants()
        candidates = [i for i, x in enumerate(dets) if x == old * old]
        if not candidates:
            raise PathError(f"no cut at a corner of weight {old * old} in the current diagram")
        last_error = None
        for i in candidates:
            try:
                nd = mutate_diagram(d, i, side)
            except DomainError as exc:
                last_error = exc
                continue
            if nd.cut_determinants()[i] == new_val * new_val:
                d = nd
                break
        else:
            raise PathError(f"could not realize mutation {prev} -> {nxt}: {last_error}")
        out.append(d)
    return out


def weights(d: BaseDiagram) -> tuple[int, ...]:
    return tuple(sorted(d.corner_determinants()))

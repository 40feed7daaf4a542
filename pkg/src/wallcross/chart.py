"""Wall-crossing and change of basis for Laurent superpotentials.

A chart names two torus coordinates plus the area symbols in play.  Crossing
a wall with direction (m, n) and class monomial w rewrites

    z1^r z2^s  ->  u1^r u2^s (1 + w)^(orientation * (n r - m s))

and the summed result must again be a Laurent polynomial; if it is not, the
orientation or the wall monomial is wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .atlas import det, inverse_unimodular, is_primitive, mat, Mat
from .errors import CrossingInconsistentError, DomainError, NotLaurentError
from .laurent import LaurentExpr, Monomial, Ring, RationalExpr, substitute, to_laurent


@dataclass(frozen=True)
class Chart:
    names: tuple[str, str]
    area_symbols: tuple[str, ...] = ()
    # integer vectors attached to the chart variables, used to turn exponents
    # into directions in the base; the default is the standard basis
    lattice: tuple[tuple[int, int], tuple[int, int]] = ((1, 0), (0, 1))

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "area_symbols", tuple(self.area_symbols))
        object.__setattr__(self, "lattice", tuple(tuple(int(x) for x in v) for v in self.lattice))
        allnames = self.names + self.area_symbols
        if len(self.names) != 2:
            raise DomainError("a chart has exactly two coordinates")
        if len(set(allnames)) != len(allnames) or any(not n for n in allnames):
            raise DomainError(f"chart names must be distinct and nonempty: {allnames}")

    @property
    def ring(self) -> Ring:
        return Ring(self.names + self.area_symbols)

    def exponents(self, m: Monomial) -> tuple[int, int]:
        extra = set(m.variables) - set(self.names) - set(self.area_symbols)
        if extra:
            raise DomainError(f"monomial {m} uses variables {sorted(extra)} outside chart {self.names}")
        return (m[self.names[0]], m[self.names[1]])

    def check(self, W: LaurentExpr) -> LaurentExpr:
        for m, _ in W.items():
            self.exponents(m)
        return W

    def gens(self):
        return self.ring.gens(*self.names)


@dataclass(frozen=True)
class Wall:
    direction: tuple[int, int]
    wall_monomial: Monomial
    orientation: int = -1

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))
        if not is_primitive(*self.direction):
            raise DomainError(f"wall direction {self.direction} is not primitive")
        if self.orientation not in (1, -1):
            raise DomainError("orientation must be +1 or -1")
        if not isinstance(self.wall_monomial, Monomial):
            object.__setattr__(self, "wall_monomial", Monomial(self.wall_monomial))

    def check(self, chart: Chart):
        if chart.exponents(self.wall_monomial) != self.direction:
            raise DomainError(
                f"wall monomial {self.wall_monomial} has chart exponents "
                f"{chart.exponents(self.wall_monomial)}, expected {self.direction}"
            )

    def monomial_in(self, source: Chart, target: Chart) -> Monomial:
        """The wall monomial rewritten in ``target``'s coordinate names."""
        rename = dict(zip(source.names, target.names))
        return Monomial({rename.get(k, k): v for k, v in self.wall_monomial.items()})

    def reversed(self) -> Wall:
        return Wall(self.direction, self.wall_monomial, -self.orientation)


def wall_cross(W: LaurentExpr, wall: Wall, from_chart: Chart, to_chart: Chart) -> LaurentExpr:
    from_chart.check(W)
    wall.check(from_chart)
    m, n = wall.direction
    o = wall.orientation
    w = LaurentExpr.monomial(wall.monomial_in(from_chart, to_chart))
    one_plus_w = RationalExpr(1 + w)
    u1, u2 = (LaurentExpr.variable(x) for x in to_chart.names)
    # z1 -> u1 (1+w)^(o n), z2 -> u2 (1+w)^(-o m) realizes the exponent o(n r - m s)
    rules = {
        from_chart.names[0]: RationalExpr(u1) * one_plus_w ** (o * n),
        from_chart.names[1]: RationalExpr(u2) * one_plus_w ** (-o * m),
    }
    summed = substitute(W, rules)
    try:
        return to_laurent(summed)
    except NotLaurentError as exc:
        raise CrossingInconsistentError(
            f"crossing the {wall.direction} wall with orientation {o} does not give a Laurent "
            f"polynomial; check the orientation or the wall monomial",
            remainder=exc.remainder,
        ) from exc


def laurent_orientations(W: LaurentExpr, direction, wall_monomial, from_chart: Chart, to_chart: Chart) -> list[int]:
    """Orientations for which crossing the wall keeps ``W`` Laurent."""
    out = []
    for o in (1, -1):
        try:
            wall_cross(W, Wall(direction, wall_monomial, o), from_chart, to_chart)
        except CrossingInconsistentError:
            continue
        out.append(o)
    return out


def change_basis(W: LaurentExpr, linear, from_chart: Chart, to_chart: Chart) -> LaurentExpr:
    """Map each exponent vector (r, s) to ``linear @ (r, s)``.

    For a redrawing of the base by a matrix ``M`` pass ``dual(M)``, the
    transpose inverse.
    """
    T = mat(linear)
    if det(T) not in (1, -1):
        raise DomainError(f"basis change {T} is not unimodular")
    from_chart.check(W)
    a, b = from_chart.names
    x, y = to_chart.names
    terms = {}
    for mono, c in W.items():
        r, s = mono[a], mono[b]
        nr, ns = T[0][0] * r + T[0][1] * s, T[1][0] * r + T[1][1] * s
        rest = {k: v for k, v in mono.items() if k not in (a, b)}
        rest[x] = rest.get(x, 0) + nr
        rest[y] = rest.get(y, 0) + ns
        terms[Monomial(rest)] = c
    return LaurentExpr(terms)


@dataclass(frozen=True)
class ChangeBasis:
    linear: Mat
    from_chart: Chart
    to_chart: Chart

    def apply(self, W):
        return change_basis(W, self.linear, self.from_chart, self.to_chart)

    def inverse(self) -> ChangeBasis:
        return ChangeBasis(inverse_unimodular(mat(self.linear)), self.to_chart, self.from_chart)


@dataclass(frozen=True)
class WallCross:
    wall: Wall
    from_chart: Chart
    to_chart: Chart

    def apply(self, W):
        return wall_cross(W, self.wall, self.from_chart, self.to_chart)


Step = ChangeBasis | WallCross


def mutation_chain(steps: Sequence[Step], W0: LaurentExpr) -> list[LaurentExpr]:
    """Potentials after each step; an empty chain returns ``[W0]``."""
    if not steps:
        return [W0]
    for prev, nxt in zip(steps, steps[1:]):
        if prev.to_chart != nxt.from_chart:
            raise DomainError(f"chain step goes to {prev.to_chart.names} but the next starts from {nxt.from_chart.names}")
    out = []
    W = W0
    for step in steps:
        W = step.apply(W)
        out.append(W)
    return out


def substitute_chart(W: LaurentExpr, rules: dict) -> LaurentExpr:
    """Laurent substitution helper, e.g. passing to the (u, w) chart."""
    return to_laurent(substitute(W, rules))

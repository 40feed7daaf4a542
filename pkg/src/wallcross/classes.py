"""Relative classes, divisor intersection tables and Maslov-2 enumeration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, UnboundedEnumerationError, ValidationError
from .laurent import LaurentExpr, Monomial, Ring

SAFETY_MARGIN = 5


@dataclass(frozen=True)
class RelativeClass:
    basis: tuple[str, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.basis) != len(self.coords):
            raise DomainError("class coordinates do not match the basis")

    @classmethod
    def of(cls, basis: Sequence[str], **coords) -> RelativeClass:
        unknown = set(coords) - set(basis)
        if unknown:
            raise DomainError(f"labels {sorted(unknown)} are not in the basis {tuple(basis)}")
        return cls(tuple(basis), tuple(coords.get(b, 0) for b in basis))

    @classmethod
    def zero(cls, basis):
        return cls(tuple(basis), (0,) * len(basis))

    def __getitem__(self, label: str) -> int:
        return self.coords[self.basis.index(label)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.basis, self.coords))

    def _same(self, other):
        if not isinstance(other, RelativeClass) or other.basis != self.basis:
            raise DomainError("classes over different bases")

    def __add__(self, other):
        self._same(other)
        return RelativeClass(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._same(other)
        return RelativeClass(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return RelativeClass(self.basis, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return RelativeClass(self.basis, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    def __str__(self):
        parts = []
        for label, c in zip(self.basis, self.coords):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + label)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s


@dataclass(frozen=True)
class IntersectionTable:
    basis: tuple[str, ...]
    divisors: tuple[str, ...]
    rows: Mapping[str, tuple[int, ...]]
    maslov_row: Mapping[str, int]
    anticanonical: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "anticanonical", tuple(self.anticanonical))
        rows = {k: tuple(int(x) for x in v) for k, v in self.rows.items()}
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "maslov_row", {k: int(v) for k, v in self.maslov_row.items()})
        if set(rows) != set(self.basis) or set(self.maslov_row) != set(self.basis):
            raise ValidationError("table rows must cover exactly the basis")
        if any(len(r) != len(self.divisors) for r in rows.values()):
            raise ValidationError("every row needs one entry per divisor")
        missing = set(self.anticanonical) - set(self.divisors)
        if missing:
            raise ValidationError(f"anticanonical components {sorted(missing)} are not table divisors")
        for b in self.basis:
            twice = 2 * sum(self.rows[b][self.divisors.index(d)] for d in self.anticanonical)
            if twice != self.maslov_row[b]:
                raise ValidationError(
                    f"Maslov entry of {b} is {self.maslov_row[b]} but twice its anticanonical pairing is {twice}"
                )

    def element(self, **coords) -> RelativeClass:
        return RelativeClass.of(self.basis, **coords)

    def gens(self) -> tuple[RelativeClass, ...]:
        return tuple(RelativeClass.of(self.basis, **{b: 1}) for b in self.basis)


def pairing(c: RelativeClass, divisor: str, t: IntersectionTable) -> int:
    if divisor not in t.divisors:
        raise KeyError(f"unknown divisor {divisor!r}; table has {t.divisors}")
    if c.basis != t.basis:
        raise DomainError("class basis does not match the table")
    j = t.divisors.index(divisor)
    return sum(x * t.rows[b][j] for b, x in zip(c.basis, c.coords))


def maslov(c: RelativeClass, t: IntersectionTable) -> int:
    return 2 * sum(pairing(c, d, t) for d in t.anticanonical)


@dataclass(frozen=True)
class GeneralForm:
    """Affine family ``base + sum_p x_p * generators[p]`` of candidate classes."""

    base: RelativeClass
    generators: tuple[tuple[str, RelativeClass], ...]

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.generators)

    def at(self, values: Sequence[int]) -> RelativeClass:
        c = self.base
        for (_, g), x in zip(self.generators, values):
            c = c + g * int(x)
        return c


def _constraints(t, divisors, form):
    A, b = [], []
    for d in divisors:
        A.append([pairing(g, d, t) for _, g in form.generators])
        b.append(pairing(form.base, d, t))
    return np.array(A, dtype=float), np.array(b, dtype=float)


def box_bounds(t: IntersectionTable, positivity_divisors: Sequence[str], form: GeneralForm, margin: int = SAFETY_MARGIN):
    """Integer box containing every feasible parameter vector, widened by ``margin``.

    Returns ``None`` if the Maslov-2, nonnegative-pairing region is empty.
    """
    A, b = _constraints(t, positivity_divisors, form)
    k = len(form.generators)
    mas = [maslov(g, t) for _, g in form.generators]
    A_eq = np.array([mas], dtype=float)
    b_eq = np.array([2 - maslov(form.base, t)], dtype=float)
    bounds = []
    for i in range(k):
        lohi = []
        for sign in (1, -1):
            cost = np.zeros(k)
            cost[i] = sign
            res = linprog(cost, A_ub=-A if len(A) else None, b_ub=b if len(A) else None,
                          A_eq=A_eq, b_eq=b_eq, bounds=[(None, None)] * k, method="highs")
            if res.status == 2:
                return None
            if res.status == 3:
                raise UnboundedEnumerationError(
                    f"parameter {form.params[i]} is unbounded under divisors {list(positivity_divisors)}"
                )
            if res.status != 0:
                raise ValidationError(f"linear program failed: {res.message}")
            lohi.append(sign * res.fun)
        lo, hi = lohi
        bounds.append((math.floor(lo + 1e-9) - margin, math.ceil(hi - 1e-9) + margin))
    return bounds


def enumerate_maslov2(t: IntersectionTable, positivity_divisors: Sequence[str], general_form: GeneralForm) -> list[RelativeClass]:
    for d in positivity_divisors:
        if d not in t.divisors:
            raise KeyError(f"unknown divisor {d!r}")
    bounds = box_bounds(t, positivity_divisors, general_form)
    if bounds is None:
        return []
    found = []
    for values in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        c = general_form.at(values)
        if maslov(c, t) != 2:
            continue
        if all(pairing(c, d, t) >= 0 for d in positivity_divisors):
            found.append((tuple(values), c))
    found.sort(key=lambda vc: vc[0])
    return [c for _, c in found]


@dataclass
class MatchEntry:
    monomial: Monomial
    coefficient: object
    cls: RelativeClass | None
    maslov: int | None
    enumerated: bool
    flags: list[str] = field(default_factory=list)


@dataclass
class MatchReport:
    entries: list[MatchEntry]
    enumerated: list[RelativeClass]

    @property
    def hit(self) -> list[RelativeClass]:
        seen = []
        for e in self.entries:
            if e.enumerated and e.cls not in seen:
                seen.append(e.cls)
        return seen

    @property
    def missing(self) -> list[RelativeClass]:
        hit = set(self.hit)
        return [c for c in self.enumerated if c not in hit]

    @property
    def total_multiplicity(self):
        return sum(e.coefficient for e in self.entries if e.enumerated)

    @property
    def flagged(self) -> list[MatchEntry]:
        return [e for e in self.entries if e.flags]


def class_of_monomial(m: Monomial, chart_to_class: Mapping[str, RelativeClass], basis) -> RelativeClass:
    c = RelativeClass.zero(basis)
    for v, e in m.items():
        if v not in chart_to_class:
            raise KeyError(v)
        c = c + chart_to_class[v] * e
    return c


def match_monomials(
    W: LaurentExpr,
    chart_to_class: Mapping[str, RelativeClass],
    t: IntersectionTable,
    enumerated: Sequence[RelativeClass] | None = None,
    ring: Ring | None = None,
) -> MatchReport:
    enumerated = list(enumerated or [])
    allowed = set(enumerated)
    items = ring.sorted_terms(W) if ring else sorted(W.items(), key=lambda mc: str(mc[0]))
    entries = []
    for m, coeff in items:
        try:
            c = class_of_monomial(m, chart_to_class, t.basis)
        except KeyError as exc:
            entries.append(MatchEntry(m, coeff, None, None, False, [f"variable {exc.args[0]} has no class"]))
            continue
        mu = maslov(c, t)
        flags = []
        if mu != 2:
            flags.append(f"maslov index {mu}")
        if c.is_zero():
            flags.append("zero class")
        hit = c in allowed
        if not hit:
            flags.append("not among enumerated classes")
        entries.append(MatchEntry(m, coeff, c, mu, hit, flags))
    return MatchReport(entries, enumerated)

"""Markov triples a^2 + b^2 + c^2 = 3abc and their mutation tree."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


def is_markov(a: int, b: int, c: int) -> bool:
    for x in (a, b, c):
        if isinstance(x, bool) or not isinstance(x, int):
            raise DomainError(f"Markov entries must be integers, got {x!r}")
        if x <= 0:
            raise DomainError(f"Markov entries must be positive, got {x}")
    return a * a + b * b + c * c == 3 * a * b * c


@dataclass(frozen=True, order=True)
class MarkovTriple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not is_markov(self.a, self.b, self.c):
            raise DomainError(f"{self.astuple()} is not a Markov triple")
        if not self.a <= self.b <= self.c:
            raise DomainError(f"{self.astuple()} is not sorted; use MarkovTriple.of")

    @classmethod
    def of(cls, *entries) -> MarkovTriple:
        if len(entries) == 1:
            entries = tuple(entries[0])
        a, b, c = sorted(entries)
        return cls(a, b, c)

    def astuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def weights(self) -> tuple[int, int, int]:
        """Squared entries, the weights of the degeneration CP(a^2, b^2, c^2)."""
        return (self.a ** 2, self.b ** 2, self.c ** 2)

    def __iter__(self):
        return iter(self.astuple())

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def mutate_ordered(t: tuple[int, int, int], slot: int) -> tuple[int, int, int]:
    """Vieta jump in position ``slot`` (1-based) without re-sorting."""
    if slot not in (1, 2, 3):
        raise DomainError(f"slot must be 1, 2 or 3, got {slot}")
    vals = list(t)
    i = slot - 1
    others = vals[(i + 1) % 3] * vals[(i + 2) % 3]
    vals[i] = 3 * others - vals[i]
    return tuple(vals)


def mutate(t: MarkovTriple, slot: int) -> MarkovTriple:
    return MarkovTriple.of(mutate_ordered(t.astuple(), slot))


def neighbors(t: MarkovTriple) -> set[MarkovTriple]:
    return {mutate(t, s) for s in (1, 2, 3)}


def markov_tree_with_parents(depth: int) -> dict[MarkovTriple, MarkovTriple | None]:
    """Breadth-first tree from (1,1,1); each triple maps to the triple it was first reached from."""
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
        raise DomainError(f"depth must be a nonnegative integer, got {depth!r}")
    root = MarkovTriple(1, 1, 1)
    parents: dict[MarkovTriple, MarkovTriple | None] = {root: None}
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for t in frontier:
            for s in (1, 2, 3):
                u = mutate(t, s)
                if u not in parents:
                    parents[u] = t
                    nxt.append(u)
        frontier = sorted(nxt)
    return parents


def markov_tree(depth: int) -> set[MarkovTriple]:
    return set(markov_tree_with_parents(depth))


def adjacent(s: MarkovTriple, t: MarkovTriple) -> int | None:
    """Slot of ``s`` whose mutation gives ``t``, or ``None``."""
    for slot in (1, 2, 3):
        if mutate(s, slot) == t:
            return slot
    return None

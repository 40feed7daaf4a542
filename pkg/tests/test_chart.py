from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from wallcross.atlas import det, inverse_unimodular
from wallcross.chart import (
    ChangeBasis,
    Chart,
    Wall,
    WallCross,
    change_basis,
    laurent_orientations,
    mutation_chain,
    wall_cross,
)
from wallcross.errors import CrossingInconsistentError, DomainError
from wallcross.laurent import LaurentExpr, Monomial

V = LaurentExpr.variable
qL, qA, qB = V("qL"), V("qA"), V("qB")
zh1, zh2, zt1, zt2, u1, u2, u, w = (V(n) for n in ("zh1", "zh2", "zt1", "zt2", "u1", "u2", "u", "w"))

# potentials on each side of the walls, typed in by hand
W_CLIFFORD_HAT = zh1 + zh1 ** 3 * zh2 + qL * zh1 ** -4 * zh2 ** -1
W_CHEKANOV = zt1 + qL * zt2 + 2 * qL * zt1 ** -2 + qL * zt1 ** -4 * zt2 ** -1
w12 = qL * u2 / u1
W_T1425 = u1 + 2 * qL * u1 ** -2 * (1 + w12) ** 2 + qL * u1 ** -4 * u2 ** -1 * (1 + w12) ** 5
W_T1425_UW = u + 2 * qL * (1 + w) ** 2 * u ** -2 + qL ** 2 * (1 + w) ** 5 * u ** -5 * w ** -1
W_T129 = (
    u2 + qA / u2 + qB / u2 + qA * u1 * u2 ** -2 + qB * u1 * u2 ** -2 + qA * qB * u1 ** -1 * u2 ** -2
    + 3 * qA * qB * u2 ** -3 + 3 * qA * qB * u1 * u2 ** -4 + qA * qB * u1 ** 2 * u2 ** -5
)

z = Chart(("z1", "z2"), ("q",))
t = Chart(("t1", "t2"), ("q",))


def test_cp2_chain_reproduces_each_potential(cp2):
    assert cp2.chain() == [W_CLIFFORD_HAT, W_CHEKANOV, W_T1425]


def test_t1425_expansion():
    # written out term by term; the (1+w)^2 terms carry qL^2 and qL^3 once w = qL u2/u1 is expanded
    expanded = (
        u1 + 2 * qL * u1 ** -2 + 4 * qL ** 2 * u2 * u1 ** -3 + 2 * qL ** 3 * u2 ** 2 * u1 ** -4
        + qL * u1 ** -4 * u2 ** -1 + 5 * qL ** 2 * u1 ** -5 + 10 * qL ** 3 * u2 * u1 ** -6
        + 10 * qL ** 4 * u2 ** 2 * u1 ** -7 + 5 * qL ** 5 * u2 ** 3 * u1 ** -8 + qL ** 6 * u2 ** 4 * u1 ** -9
    )
    assert W_T1425 == expanded
    assert sorted(c for _, c in W_T1425.items()) == [1, 1, 1, 2, 2, 4, 5, 5, 10, 10]


def test_cp2_compact_form(cp2):
    W, chart = cp2.compact_potential()
    assert chart.names == ("u", "w")
    assert W == W_T1425_UW


def test_p1xp1_chain(p1xp1):
    v1, v2 = V("v1"), V("v2")
    first, final = p1xp1.chain()
    assert first == v1 + v2 + (qA + qB) / v2 + qA * qB * v1 ** -1 * v2 ** -2
    assert final == W_T129


def test_wrong_orientation_is_detected(cp2):
    step = cp2.steps[1]
    flipped = Wall(step.wall.direction, step.wall.wall_monomial, -step.wall.orientation)
    with pytest.raises(CrossingInconsistentError):
        wall_cross(W_CLIFFORD_HAT, flipped, step.from_chart, step.to_chart)
    assert laurent_orientations(W_CLIFFORD_HAT, (2, 1), step.wall.wall_monomial,
                                step.from_chart, step.to_chart) == [step.wall.orientation]


def test_wall_monomial_must_match_direction():
    with pytest.raises(DomainError):
        wall_cross(V("z1"), Wall((1, 0), Monomial({"z2": 1})), z, t)
    with pytest.raises(DomainError):
        Wall((2, 2), Monomial({"z1": 1}))


def test_chain_steps_must_connect():
    a = ChangeBasis(((1, 0), (0, 1)), z, t)
    with pytest.raises(DomainError):
        mutation_chain([a, a], V("z1"))
    assert mutation_chain([], V("z1")) == [V("z1")]


def test_non_unimodular_basis_change_rejected():
    with pytest.raises(DomainError):
        change_basis(V("z1"), ((2, 0), (0, 1)), z, t)


monomial_z = st.builds(lambda r, s, k: Monomial({"z1": r, "z2": s, "q": k}),
                       st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 2))
potentials_z = st.dictionaries(monomial_z, st.integers(1, 5), min_size=1, max_size=5).map(LaurentExpr)
sl2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(
    lambda m: abs(m[0] * m[3] - m[1] * m[2]) == 1
)


@given(potentials_z, sl2)
def test_basis_change_round_trip(W, m):
    T = ((m[0], m[1]), (m[2], m[3]))
    there = change_basis(W, T, z, t)
    assert change_basis(there, inverse_unimodular(T), t, z) == W


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 4), st.integers(1, 5)), min_size=1, max_size=5))
def test_wall_cross_round_trip(terms):
    # monomials z1^r z2^s with exponent s >= 0 cross the (1,0) wall with w = z1 and stay Laurent
    W = LaurentExpr({Monomial({"z1": r, "z2": s}): c for r, s, c in terms})
    wall = Wall((1, 0), Monomial({"z1": 1}), -1)
    there = wall_cross(W, wall, z, t)
    back = wall_cross(there, Wall((1, 0), Monomial({"t1": 1}), 1), t, z)
    assert back == W
    # the value at a point is unchanged by the coordinate change z2 = t2 (1+t1)
    pt = {"t1": Fraction(1, 3), "t2": Fraction(2, 5)}
    zpt = {"z1": pt["t1"], "z2": pt["t2"] * (1 + pt["t1"])}
    assert sum(c * _ev(m, zpt) for m, c in W.items()) == sum(c * _ev(m, pt) for m, c in there.items())


def _ev(m, point):
    out = Fraction(1)
    for v, e in m.items():
        out *= Fraction(point[v]) ** e
    return out

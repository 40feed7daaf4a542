import itertools

import pytest
from hypothesis import given, strategies as st

from wallcross.classes import (
    GeneralForm,
    RelativeClass,
    box_bounds,
    class_of_monomial,
    enumerate_maslov2,
    maslov,
    match_monomials,
    pairing,
)
from wallcross.errors import UnboundedEnumerationError, ValidationError
from wallcross.laurent import Monomial
from wallcross.presets import load_preset

CP2_TABLE = load_preset("cp2-t1425").table


def cp2_class(H=0, beta=0, alpha=0):
    return RelativeClass.of(("H", "beta", "alpha"), H=H, beta=beta, alpha=alpha)


def p1_class(H1=0, H2=0, beta=0, alpha=0):
    return RelativeClass.of(("H1", "H2", "beta", "alpha"), H1=H1, H2=H2, beta=beta, alpha=alpha)


CP2_LIST = (
    [cp2_class(beta=1)]
    + [cp2_class(1, -2, m) for m in range(-1, 3)]
    + [cp2_class(2, -5, k) for k in range(-2, 5)]
)
P1_LIST = [
    p1_class(beta=1),
    p1_class(H1=1, beta=-1),
    p1_class(H2=1, beta=-1),
    p1_class(H1=1, beta=-1, alpha=1),
    p1_class(H2=1, beta=-1, alpha=1),
] + [p1_class(1, 1, -3, k) for k in range(-1, 3)]


def brute_force(preset, box):
    t, form = preset.table, preset.general_form
    out = set()
    for values in itertools.product(*box):
        c = form.at(values)
        if maslov(c, t) == 2 and all(pairing(c, d, t) >= 0 for d in preset.positivity_divisors):
            out.add(c)
    return out


def test_cp2_classes(cp2):
    found = enumerate_maslov2(cp2.table, cp2.positivity_divisors, cp2.general_form)
    assert len(found) == 12
    assert set(found) == set(CP2_LIST)
    assert set(found) == brute_force(cp2, [range(0, 11), range(-30, 31)])


def test_p1xp1_classes(p1xp1):
    found = enumerate_maslov2(p1xp1.table, p1xp1.positivity_divisors, p1xp1.general_form)
    assert len(found) == 9
    assert set(found) == set(P1_LIST)
    assert set(found) == brute_force(p1xp1, [range(-12, 13)] * 3)


def test_dropping_the_bounding_divisor_is_unbounded(cp2):
    divisors = [d for d in cp2.positivity_divisors if d != "D5"]
    with pytest.raises(UnboundedEnumerationError):
        enumerate_maslov2(cp2.table, divisors, cp2.general_form)


def test_unknown_divisor(cp2):
    with pytest.raises(KeyError):
        enumerate_maslov2(cp2.table, ["nowhere"], cp2.general_form)


def test_box_contains_every_solution(cp2):
    box = box_bounds(cp2.table, cp2.positivity_divisors, cp2.general_form, margin=0)
    assert box == [(0, 2), (-2, 4)]


def test_cp2_matching(cp2):
    enum = enumerate_maslov2(cp2.table, cp2.positivity_divisors, cp2.general_form)
    rep = match_monomials(cp2.final_potential(), cp2.chart_to_class, cp2.table, enum, cp2.final_chart.ring)
    assert len(rep.hit) == 10
    assert set(rep.missing) == {cp2_class(1, -2, -1), cp2_class(2, -5, -2)}
    assert rep.total_multiplicity == 41
    assert not rep.flagged
    by_class = {e.cls: e.coefficient for e in rep.entries}
    # the (1+w)^2 family carries 2, 4, 2 and the (1+w)^5 family the binomials
    assert [by_class[cp2_class(1, -2, m)] for m in range(0, 3)] == [2, 4, 2]
    assert [by_class[cp2_class(2, -5, k)] for k in range(-1, 5)] == [1, 5, 10, 10, 5, 1]


def test_p1xp1_matching(p1xp1):
    enum = enumerate_maslov2(p1xp1.table, p1xp1.positivity_divisors, p1xp1.general_form)
    rep = match_monomials(p1xp1.final_potential(), p1xp1.chart_to_class, p1xp1.table, enum)
    assert len(rep.hit) == 9
    assert rep.missing == []
    assert rep.total_multiplicity == 13


def test_unknown_variable_is_flagged(cp2):
    rep = match_monomials(cp2.final_potential(), {"u1": cp2.chart_to_class["u1"]}, cp2.table, [])
    assert all(e.cls is None and e.flags for e in rep.entries if "u2" in e.monomial.variables)
    with pytest.raises(KeyError):
        class_of_monomial(Monomial({"zz": 1}), cp2.chart_to_class, cp2.table.basis)


def test_table_maslov_row_is_checked(cp2):
    from wallcross.classes import IntersectionTable

    t = cp2.table
    bad = dict(t.maslov_row, beta=4)
    with pytest.raises(ValidationError):
        IntersectionTable(t.basis, t.divisors, t.rows, bad, t.anticanonical)


coords = st.integers(-6, 6)


@given(coords, coords, coords, coords, coords, coords)
def test_pairing_and_maslov_are_linear(a, b, c, d, e, f):
    t = CP2_TABLE
    x, y = cp2_class(a, b, c), cp2_class(d, e, f)
    assert maslov(x + y, t) == maslov(x, t) + maslov(y, t)
    for div in t.divisors:
        assert pairing(x - y, div, t) == pairing(x, div, t) - pairing(y, div, t)


def test_general_form_parameters(cp2):
    form = cp2.general_form
    assert isinstance(form, GeneralForm)
    assert form.params == ("l", "k")
    assert form.at((2, -2)) == cp2_class(2, -5, -2)

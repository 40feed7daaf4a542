"""End-to-end acceptance checks, one test per criterion.

Each test records PASS or FAIL in ``conftest.ACCEPTANCE``; the terminal
summary prints one line per criterion.
"""

import cmath
import functools
import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE
from surgery import random_sequence
from test_atlas import reference_b114
from test_chart import W_CHEKANOV, W_CLIFFORD_HAT, W_T1425, W_T129
from test_classes import CP2_LIST, P1_LIST, brute_force, cp2_class

from wallcross import atlas
from wallcross.classes import enumerate_maslov2, match_monomials
from wallcross.floer import AreaFunctional, check_monotone, critical_points, monotone_inflation, pearl_delta2, specialize
from wallcross.markov import MarkovTriple
from wallcross.numeric import (
    DiscParams,
    algebraic_count_H2b,
    is_cyclic_shift,
    limit_disc_p114,
    orbit_count_z5,
    solve_family_H2b,
    verify_asymptotics,
)


def criterion(n, description):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            ACCEPTANCE[n] = (description, False)
            fn(*args, **kwargs)
            ACCEPTANCE[n] = (description, True)

        return run

    return wrap


def coefficients(W):
    return Counter(c for _, c in W.items())


@criterion(1, "CP2 mutation chain is coefficient-exact; W_T(1,4,25) has 10 terms summing to 41")
def test_cp2_chain(cp2):
    assert cp2.chain() == [W_CLIFFORD_HAT, W_CHEKANOV, W_T1425]
    W = cp2.final_potential()
    assert len(W) == 10
    assert coefficients(W) == Counter([1, 2, 4, 2, 1, 5, 10, 10, 5, 1])
    assert sum(c for _, c in W.items()) == 41


@criterion(2, "CP1xCP1 chain gives the 9-term W_T(1,2,9)")
def test_p1xp1_chain(p1xp1):
    W = p1xp1.final_potential()
    assert W == W_T129
    assert coefficients(W) == Counter([1, 1, 1, 1, 1, 1, 3, 3, 1])


@criterion(3, "Maslov 2 class enumeration (12 and 9 classes) agrees with a brute-force box")
def test_class_enumeration(cp2, p1xp1):
    found = enumerate_maslov2(cp2.table, cp2.positivity_divisors, cp2.general_form)
    assert sorted(map(str, found)) == sorted(map(str, CP2_LIST))
    assert set(found) == brute_force(cp2, [range(0, 11), range(-30, 31)])
    found = enumerate_maslov2(p1xp1.table, p1xp1.positivity_divisors, p1xp1.general_form)
    assert sorted(map(str, found)) == sorted(map(str, P1_LIST))
    assert set(found) == brute_force(p1xp1, [range(-12, 13)] * 3)


@criterion(4, "terms hit 10 of 12 CP2 classes (missing H-2beta-alpha, 2H-5beta-2alpha) and all 9 CP1xCP1 classes")
def test_matching(cp2, p1xp1):
    enum = enumerate_maslov2(cp2.table, cp2.positivity_divisors, cp2.general_form)
    rep = match_monomials(cp2.final_potential(), cp2.chart_to_class, cp2.table, enum, cp2.final_chart.ring)
    assert len(rep.hit) == 10
    assert set(rep.missing) == {cp2_class(1, -2, -1), cp2_class(2, -5, -2)}
    enum = enumerate_maslov2(p1xp1.table, p1xp1.positivity_divisors, p1xp1.general_form)
    rep = match_monomials(p1xp1.final_potential(), p1xp1.chart_to_class, p1xp1.table, enum)
    assert len(rep.hit) == 9 and not rep.missing


@criterion(5, "H-2beta+m*alpha: 4/4/4/0 solutions, counts 2/4/2/0, cyclic theta shift")
def test_numeric_counts():
    p = DiscParams(c=1.0, r=0.5, t=1e-3)
    expected = {2: (4, 2), 1: (4, 4), 0: (4, 2), -1: (0, 0)}
    for m, (n_solutions, count) in expected.items():
        s = solve_family_H2b(m, p, steps=256)
        assert len(s.solutions) == n_solutions, m
        assert all(x.residual <= 1e-9 for x in s.solutions)
        assert algebraic_count_H2b(s) == count, m
        if n_solutions:
            assert s.orbit_data["steps"] == 256
            assert is_cyclic_shift(s.orbit_data["permutation"])
            assert s.orbit_data["shift_error"] <= 1e-6
        else:
            assert s.orbit_data["exclusion"]["excluded"]


@criterion(6, "log-log slopes of |a| and |eta_0| in t are 0.5 +- 0.1")
def test_asymptotics():
    rep = verify_asymptotics("h2b", t_sequence=(1e-2, 1e-3, 1e-4, 1e-5), m=2, p=DiscParams(1.0, 0.5))
    assert abs(rep.slopes["abs_a"] - 0.5) <= 0.1
    assert abs(rep.slopes["abs_eta0"] - 0.5) <= 0.1


@criterion(7, "t=0 limit discs lie on the torus and avoid (0:0:1); Z/5 counts are binomial(5,k)")
def test_limit_discs():
    c, r = 1.0, 0.5
    w = np.exp(2j * np.pi * np.arange(1024) / 1024)
    for k in range(6):
        for I in itertools.combinations(range(1, 6), k):
            for j in range(8):
                d = limit_disc_p114(I, 2 * math.pi * j / 8, c, r)
                x, y, z = d(w)
                assert np.max(np.abs(x * z / y ** 5 * w ** 5 - (c * w ** 5 + r))) < 1e-10
                x0, y0, _ = d(np.array([0j]))
                assert abs(x0[0]) > 0 or abs(y0[0]) > 0
                assert d.avoids_orbifold_point()
    assert [orbit_count_z5(k) for k in range(6)] == [math.comb(5, k) for k in range(6)]


@criterion(8, "W_T(1,4,25) at q=1 has exactly 3 critical points w=1/8, u=(9/4)e^(2 pi i k/3); delta_2 vanishes")
def test_floer(cp2):
    W, _ = cp2.floer_potential()
    W = specialize(W, {"qL": 1})
    pts = critical_points(W, ["u", "w"])
    assert len(pts) == 3
    targets = [2.25 * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    for p in pts:
        assert abs(p["w"] - 0.125) <= 1e-9
        assert min(abs(p["u"] - t) for t in targets) <= 1e-9
        assert max(abs(v) for v in pearl_delta2(W, p, ["u", "w"])) <= 1e-9
    assert len({min(range(3), key=lambda k: abs(p["u"] - targets[k])) for p in pts}) == 3


@criterion(9, "inflation ratios 2/5 > 1/3 and 2/3 > 1/2 give K with monotone areas")
def test_monotone(cp2, p1xp1):
    for preset, (num, den), expected in ((cp2, ("beta", "H"), Fraction(2, 5)), (p1xp1, ("beta", "H1"), Fraction(2, 3))):
        t, cfg = preset.table, preset.inflation
        j = t.divisors.index(cfg["divisor"])
        pair = {b: t.rows[b][j] for b in t.basis}
        target = Fraction(t.maslov_row[num], t.maslov_row[den])
        assert Fraction(pair[num], pair[den]) == expected > target
        inf = monotone_inflation(AreaFunctional(cfg["areas"]), pair, t.maslov_row, target, (num, den))
        assert check_monotone(inf.areas, t.maslov_row)
    assert target == Fraction(1, 2)


@criterion(10, "surgery preserves area; monodromy invariants; mutation reaches B(1,1,4) up to affine maps")
def test_diagram_surgery():
    rng = random.Random(20240601)
    applied = 0
    for i in range(1000):
        start = atlas.mutation_start() if i % 2 else atlas.cp2_triangle()
        d, ops = random_sequence(start, rng, 8)
        applied += len(ops)
        assert d.area == start.area
    assert applied > 4000

    for a in range(-20, 21):
        for b in range(-20, 21):
            if not atlas.is_primitive(a, b):
                continue
            A = atlas.monodromy(a, b)
            assert atlas.det(A) == 1
            assert A[0][0] + A[1][1] == 2
            assert atlas.matvec(A, (a, b)) == (a, b)

    seq = atlas.mutation_sequence(atlas.mutation_start(), [MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2)])
    assert atlas.equal_up_to_affine(seq[-1], reference_b114(), compare_nodes=False) is not None

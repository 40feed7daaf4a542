import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wallcross import atlas
from wallcross.atlas import (
    AffineMapZ,
    BaseDiagram,
    Cut,
    apply_affine,
    cp2_triangle,
    cut_and_glue,
    det,
    equal_up_to_affine,
    is_primitive,
    matvec,
    monodromy,
    mutation_sequence,
    mutation_start,
    nodal_slide,
    nodal_trade,
    sl2_sending_e1_to,
)
from wallcross.errors import CornerNotSmoothError, DomainError, OutOfBaseError, PathError
from wallcross.markov import MarkovTriple

from surgery import random_affine, random_sequence

Q = Fraction
primitive_pairs = st.tuples(st.integers(-20, 20), st.integers(-20, 20)).filter(lambda v: is_primitive(*v))


def corner_cut(vertices, i, length):
    """Cut at corner i along the sum of its two primitive edge vectors."""
    n = len(vertices)
    v = vertices[i]
    e1 = atlas.primitive((vertices[(i + 1) % n][0] - v[0], vertices[(i + 1) % n][1] - v[1]))
    e2 = atlas.primitive((vertices[i - 1][0] - v[0], vertices[i - 1][1] - v[1]))
    d = atlas.primitive((e1[0] + e2[0], e1[1] + e2[1]))
    return Cut((v[0] + length * d[0], v[1] + length * d[1]), d, v)


def reference_b114():
    """B(1,1,4) drawn by hand: the triangle (0,0), (2,0), (0,1/2) with a cut at each corner."""
    verts = ((Q(0), Q(0)), (Q(2), Q(0)), (Q(0), Q(1, 2)))
    return BaseDiagram(verts, tuple(corner_cut(verts, i, Q(1, 40)) for i in range(3)))


@given(primitive_pairs)
def test_monodromy_invariants(v):
    a, b = v
    A = monodromy(a, b)
    assert det(A) == 1
    assert A[0][0] + A[1][1] == 2
    assert matvec(A, (a, b)) == (a, b)
    # A - I has rank one with image spanned by (a, b)
    for u in ((1, 0), (0, 1)):
        w = matvec(A, u)
        d = (w[0] - u[0], w[1] - u[1])
        assert d[0] * b - d[1] * a == 0


@given(primitive_pairs)
def test_sl2_sends_e1_to_vector(v):
    m = sl2_sending_e1_to(*v)
    assert det(m) == 1
    assert matvec(m, (1, 0)) == v


def test_monodromy_needs_primitive_vector():
    with pytest.raises(DomainError):
        monodromy(2, 4)


def test_nodal_trade_requires_smooth_corner():
    d = reference_b114()
    bare = BaseDiagram(d.vertices)
    with pytest.raises(CornerNotSmoothError):
        nodal_trade(bare, 2, Q(1, 10))
    traded = nodal_trade(bare, 0, Q(1, 10))
    assert traded.cuts[0].direction == (1, 1)
    with pytest.raises(DomainError):
        nodal_trade(traded, 0, Q(1, 20))


def test_nodal_slide_stays_inside():
    d = mutation_start()
    with pytest.raises(OutOfBaseError):
        nodal_slide(d, 0, 10)
    moved = nodal_slide(d, 0, Q(1, 5))
    assert moved.cuts[0].length == Q(1, 5)
    assert moved.area == d.area


def test_cut_and_glue_changes_corners_but_not_area():
    d = cut_and_glue(mutation_start(), 0, "right")
    assert d.area == Q(1, 2)
    assert sorted(d.corner_determinants()) == [1, 1, 4]
    with pytest.raises(DomainError):
        cut_and_glue(mutation_start(), 0, "up")


def test_base_diagram_validation():
    with pytest.raises(DomainError):
        BaseDiagram(((0, 0), (0, 1), (1, 0)))  # clockwise
    with pytest.raises(OutOfBaseError):
        BaseDiagram(cp2_triangle().vertices, (), (Q(2), Q(2)))
    with pytest.raises(DomainError):
        Cut((Q(1), Q(1)), (2, 2), (Q(0), Q(0)))
    with pytest.raises(DomainError):
        AffineMapZ(((2, 0), (0, 1)))


@given(st.integers(0, 10_000))
def test_random_surgery_preserves_area(seed):
    rng = random.Random(seed)
    start = mutation_start() if seed % 2 else cp2_triangle()
    d, _ = random_sequence(start, rng, 6)
    assert d.area == start.area


@given(st.integers(0, 10_000))
def test_affine_images_are_recognized(seed):
    d = mutation_start()
    f = random_affine(random.Random(seed))
    g = equal_up_to_affine(d, apply_affine(d, f))
    assert g is not None
    assert all(g(p) == f(p) for p in d.vertices)


def test_mutation_to_b114_matches_hand_drawn_diagram():
    seq = mutation_sequence(mutation_start(), [MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2)])
    assert equal_up_to_affine(seq[-1], reference_b114(), compare_nodes=False) is not None
    assert equal_up_to_affine(seq[0], reference_b114(), compare_nodes=False) is None


def test_mutation_sequence_weights():
    path = [MarkovTriple.of(t) for t in ((1, 1, 1), (1, 1, 2), (1, 2, 5), (2, 5, 29))]
    seq = mutation_sequence(mutation_start(), path)
    assert [atlas.weights(d) for d in seq] == [t.weights() for t in path]
    assert all(d.area == Q(1, 2) for d in seq)


def test_mutation_sequence_rejects_non_adjacent_steps():
    with pytest.raises(PathError):
        mutation_sequence(mutation_start(), [MarkovTriple(1, 1, 1), MarkovTriple(1, 2, 5)])

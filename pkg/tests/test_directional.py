import random
from fractions import Fraction
from itertools import product as iproduct

import pytest

from homdigraph.directional import (
    BilinearRelation,
    DirectionalGVS,
    all_elements,
    check_bilinear_properties,
    direct_sum,
    dgvs_isomorphic_check,
    elem_add,
    elem_scale,
    full_relation,
    generate,
    generate_dgvs,
    intersect_relations,
    is_morphism,
    is_morphism_from_generators,
    tensor,
    tensor_defining_via_interchange,
    zero_relation,
)
from homdigraph.linalg import GF, GF2, QQ, DimensionError, Elem, GradedLinearMap, GradedVectorSpace, Matrix

V3 = GradedVectorSpace({0: 3})


def e(*coords, degree=0):
    return Elem(degree, tuple(coords))


# the five nonzero pairs of a relation on GF(2)^3 that is closed under the
# four closure properties but is not bilinear
RAW_PAIRS = [
    (e(1, 0, 0), e(0, 1, 1)),
    (e(0, 1, 0), e(0, 1, 0)),
    (e(0, 0, 1), e(1, 1, 0)),
    (e(1, 1, 0), e(1, 0, 0)),
    (e(0, 1, 1), e(0, 0, 1)),
]


def raw_points_to(v, w):
    return v.is_zero() or w.is_zero() or (v, w) in RAW_PAIRS


def test_raw_relation_satisfies_the_closure_properties():
    elems = all_elements(V3, GF2)
    assert len(elems) == 8
    assert check_bilinear_properties(raw_points_to, V3, GF2) == []


def test_generated_relation_strictly_contains_the_raw_one():
    rel = generate(V3, GF2, RAW_PAIRS)
    assert rel.dims() == {0: 5}
    v = e(1, 1, 1)
    assert rel.points_to(v, v)
    assert not raw_points_to(v, v)
    extra = [(a, b) for a in all_elements(V3, GF2) for b in all_elements(V3, GF2)
             if rel.points_to(a, b) and not raw_points_to(a, b)]
    assert (v, v) in extra


def test_generate_with_no_pairs_is_zero():
    rel = generate(V3, GF2, [])
    assert rel == zero_relation(V3, GF2)
    assert rel.points_to(e(0, 0, 0), e(1, 0, 0))
    assert rel.points_to(e(1, 0, 0), e(0, 0, 0))
    assert not rel.points_to(e(1, 0, 0), e(1, 0, 0))


def test_single_pair_is_scalar_stable():
    V = GradedVectorSpace({0: 2})
    v, w = e(Fraction(1), Fraction(2)), e(Fraction(3), Fraction(-1))
    rel = generate(V, QQ, [(v, w)])
    assert rel.dims() == {0: 1}
    assert rel.points_to(elem_scale(Fraction(2), v, QQ), elem_scale(Fraction(3), w, QQ))
    assert not rel.points_to(w, v)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        generate(V3, GF2, [(e(1, 0), e(1, 0, 0))])
    rel = generate(V3, GF2, RAW_PAIRS)
    with pytest.raises(DimensionError):
        rel.points_to(e(1, 0), e(1, 0, 0))


def test_full_relation_points_everywhere():
    V = GradedVectorSpace({0: 1, 1: 2})
    rel = full_relation(V, GF2)
    assert all(rel.points_to(a, b) for a in all_elements(V, GF2) for b in all_elements(V, GF2))


# ---------------------------------------------------------------- intersections


def test_intersect_examples():
    V = GradedVectorSpace({0: 2})
    e1, e2 = e(1, 0), e(0, 1)
    a = generate(V, GF2, [(e1, e1)])
    b = generate(V, GF2, [(e1, e1), (e2, e2)])
    assert intersect_relations([a, b]) == a
    assert intersect_relations([b, b]) == b
    assert intersect_relations([b, zero_relation(V, GF2)]) == zero_relation(V, GF2)
    with pytest.raises(ValueError):
        intersect_relations([])
    with pytest.raises(DimensionError):
        intersect_relations([a, zero_relation(V3, GF2)])


def test_intersection_points_iff_both_point():
    rng = random.Random(3)
    V = GradedVectorSpace({0: 2, 1: 1})
    elems = all_elements(V, GF2)
    for _ in range(20):
        a = generate(V, GF2, [(rng.choice(elems), rng.choice(elems)) for _ in range(3)])
        b = generate(V, GF2, [(rng.choice(elems), rng.choice(elems)) for _ in range(3)])
        both = intersect_relations([a, b])
        for v in elems:
            for w in elems:
                assert both.points_to(v, w) == (a.points_to(v, w) and b.points_to(v, w))


# ---------------------------------------------------------------- property suites


def _small_spaces():
    return [
        GradedVectorSpace({0: 1}),
        GradedVectorSpace({0: 2}),
        GradedVectorSpace({0: 1, 1: 1}),
        GradedVectorSpace({0: 2, 1: 2}),
        GradedVectorSpace({0: 1, 2: 3}),
        GradedVectorSpace({1: 4}),
    ]


def _random_dgvs(V, field, rng, count):
    elems = [x for x in all_elements(V, field) if not x.is_zero()]
    gens = [(rng.choice(elems), rng.choice(elems)) for _ in range(count)]
    return generate_dgvs(V, field, gens)


@pytest.mark.parametrize("V", _small_spaces(), ids=repr)
def test_generated_relations_are_bilinear_over_gf2(V):
    rng = random.Random(V.total_dim())
    for count in range(0, 5):
        d = _random_dgvs(V, GF2, rng, count)
        assert check_bilinear_properties(d.points_to, V, GF2) == []


def test_generated_relations_are_bilinear_over_gf3():
    rng = random.Random(5)
    V = GradedVectorSpace({0: 1, 1: 1})
    for count in range(4):
        d = _random_dgvs(V, GF(3), rng, count)
        assert check_bilinear_properties(d.points_to, V, GF(3)) == []


def test_sums_and_tensors_are_bilinear_over_gf2():
    rng = random.Random(8)
    a = _random_dgvs(GradedVectorSpace({0: 1, 1: 1}), GF2, rng, 2)
    b = _random_dgvs(GradedVectorSpace({0: 1}), GF2, rng, 1)
    s, _ = direct_sum([a, b])
    t = tensor(a, a)
    for d in (s, t):
        assert d.space.total_dim() <= 4
        assert check_bilinear_properties(d.points_to, d.space, GF2) == []


def _rand_q(rng):
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def _rand_elem(V, k, rng):
    return Elem(k, tuple(_rand_q(rng) for _ in range(V.dim(k))))


def test_random_relations_over_q_keep_the_closure_properties():
    rng = random.Random(21)
    V = GradedVectorSpace({0: 2, 1: 2})
    for _ in range(10):
        gens = []
        for _ in range(3):
            i, j = rng.choice([0, 1]), rng.choice([0, 1])
            gens.append((_rand_elem(V, i, rng), _rand_elem(V, j, rng)))
        rel = generate(V, QQ, gens)
        pos = list(gens)
        for v, w in gens:
            assert rel.points_to(v, w)
        for _ in range(30):
            v, w = rng.choice(pos)
            lam, mu = _rand_q(rng), _rand_q(rng)
            assert rel.points_to(elem_scale(lam, v, QQ), elem_scale(mu, w, QQ))
            # additivity in the first slot, over pairs sharing a target
            v2 = elem_scale(_rand_q(rng), v, QQ)
            assert rel.points_to(elem_add(v, v2, QQ), w)
            z = Elem(v.degree, tuple(QQ.zero for _ in v.coords))
            assert rel.points_to(z, _rand_elem(V, 1, rng))
        for (v, w), (v2, w2) in iproduct(gens, gens):
            if w == w2 and v.degree == v2.degree:
                assert rel.points_to(elem_add(v, v2, QQ), w)
            if v == v2 and w.degree == w2.degree:
                assert rel.points_to(v, elem_add(w, w2, QQ))


# ---------------------------------------------------------------- direct sums


def _summand_part(total_elem, s_space, off, k):
    coords = total_elem.coords[off: off + s_space.dim(k)]
    rest = total_elem.coords[:off] + total_elem.coords[off + s_space.dim(k):]
    return Elem(k, tuple(coords)), not any(c != 0 for c in rest)


def test_direct_sum_dichotomy_exhaustive():
    rng = random.Random(13)
    cases = [
        (GradedVectorSpace({0: 1}), GradedVectorSpace({0: 1})),
        (GradedVectorSpace({0: 1, 1: 1}), GradedVectorSpace({0: 1})),
        (GradedVectorSpace({0: 2}), GradedVectorSpace({0: 1, 1: 1})),
    ]
    for Va, Vb in cases:
        for _ in range(4):
            a = _random_dgvs(Va, GF2, rng, 2)
            b = _random_dgvs(Vb, GF2, rng, 2)
            s, inj = direct_sum([a, b])
            for x in all_elements(s.space, GF2, nonzero=True):
                for y in all_elements(s.space, GF2, nonzero=True):
                    expected = False
                    for idx, d in enumerate((a, b)):
                        offx = 0 if idx == 0 else a.space.dim(x.degree)
                        offy = 0 if idx == 0 else a.space.dim(y.degree)
                        px, inside_x = _summand_part(x, d.space, offx, x.degree)
                        py, inside_y = _summand_part(y, d.space, offy, y.degree)
                        if inside_x and inside_y and d.points_to(px, py):
                            expected = True
                    assert s.points_to(x, y) == expected
            assert all(is_morphism(f, d, s) for f, d in zip(inj, (a, b)))


def test_cross_summand_and_mixed_elements_never_point():
    V = GradedVectorSpace({0: 1})
    a = DirectionalGVS(V, full_relation(V, GF2))
    s, _ = direct_sum([a, a])
    assert s.points_to(e(1, 0), e(1, 0))
    assert not s.points_to(e(1, 0), e(0, 1))
    mixed = e(1, 1)
    for y in all_elements(s.space, GF2, nonzero=True):
        assert not s.points_to(mixed, y)
        assert not s.points_to(y, mixed)


def test_single_summand_is_a_copy():
    rng = random.Random(1)
    a = _random_dgvs(GradedVectorSpace({0: 2, 1: 1}), GF2, rng, 3)
    s, (f,) = direct_sum([a])
    assert s.pointing.dims() == a.pointing.dims()
    assert dgvs_isomorphic_check(f, a, s)


# ---------------------------------------------------------------- tensors


def _full_pair_tensor(a, b):
    """Defining space of the tensor product from every pointing pair."""
    F = a.field
    pa = [(v, w) for v in all_elements(a.space, F, True) for w in all_elements(a.space, F, True) if a.points_to(v, w)]
    pb = [(v, w) for v in all_elements(b.space, F, True) for w in all_elements(b.space, F, True) if b.points_to(v, w)]
    full_a = generate_dgvs(a.space, F, pa)
    full_b = generate_dgvs(b.space, F, pb)
    return tensor(full_a, full_b).pointing


def _tiny_spaces():
    return [
        GradedVectorSpace({0: 1}),
        GradedVectorSpace({0: 2}),
        GradedVectorSpace({0: 1, 1: 1}),
        GradedVectorSpace({0: 2, 1: 2}),
        GradedVectorSpace({1: 1, 2: 2}),
    ]


def test_tensor_from_generators_equals_tensor_from_all_pairs():
    rng = random.Random(17)
    checked = 0
    for Va, Vb in iproduct(_tiny_spaces(), repeat=2):
        for count in (1, 2, 3):
            a = _random_dgvs(Va, GF2, rng, count)
            b = _random_dgvs(Vb, GF2, rng, count)
            gen = tensor(a, b).pointing
            assert gen == _full_pair_tensor(a, b)
            assert gen == tensor_defining_via_interchange(a, b)
            checked += 1
    assert checked == 75


def test_tensor_with_unit_is_a_copy():
    rng = random.Random(2)
    unit_space = GradedVectorSpace({0: 1})
    unit = generate_dgvs(unit_space, GF2, [(e(1), e(1))])
    a = _random_dgvs(GradedVectorSpace({0: 1, 1: 2}), GF2, rng, 3)
    t = tensor(a, unit)
    assert t.space.dims == a.space.dims
    assert t.pointing.dims() == a.pointing.dims()
    blocks = {k: Matrix.identity(GF2, d) for k, d in a.space.dims.items()}
    f = GradedLinearMap(a.space, t.space, GF2, blocks)
    assert dgvs_isomorphic_check(f, a, t)


def test_tensor_of_zero_pointing_is_zero():
    V = GradedVectorSpace({0: 1, 1: 1})
    z = generate_dgvs(V, GF2, [])
    t = tensor(z, z)
    assert t.pointing.dims() == {}
    assert t.pointing == tensor_defining_via_interchange(z, z)


# ---------------------------------------------------------------- morphisms


def _random_map(Va, Vb, field, rng):
    blocks = {}
    for k in Va.degrees():
        rows, cols = Vb.dim(k), Va.dim(k)
        if rows:
            blocks[k] = Matrix(field, rows, cols, [[rng.choice(list(field.elements())) for _ in range(cols)]
                                                   for _ in range(rows)])
    return GradedLinearMap(Va, Vb, field, blocks)


def test_generator_check_agrees_with_full_check_on_random_maps():
    rng = random.Random(100)
    outcomes = {True: 0, False: 0}
    for trial in range(100):
        field = GF2 if trial % 2 == 0 else GF(3)
        Va = rng.choice([GradedVectorSpace({0: 2}), GradedVectorSpace({0: 1, 1: 2})])
        Vb = rng.choice([GradedVectorSpace({0: 2, 1: 1}), GradedVectorSpace({0: 1, 1: 2})])
        a = _random_dgvs(Va, field, rng, rng.randint(0, 3))
        b = _random_dgvs(Vb, field, rng, rng.randint(1, 5))
        f = _random_map(Va, Vb, field, rng)
        full = is_morphism(f, a, b)
        assert full == is_morphism_from_generators(f, a.generators, b)
        outcomes[full] += 1
    assert outcomes[True] > 10 and outcomes[False] > 10


def test_identity_and_zero_maps_are_morphisms():
    rng = random.Random(4)
    a = _random_dgvs(GradedVectorSpace({0: 2, 1: 1}), GF2, rng, 3)
    ident = GradedLinearMap.identity(a.space, GF2)
    assert is_morphism(ident, a, a)
    assert dgvs_isomorphic_check(ident, a, a)
    zero = GradedLinearMap(a.space, a.space, GF2, {})
    assert is_morphism(zero, a, a)
    with pytest.raises(ValueError):
        dgvs_isomorphic_check(zero, a, a)


def test_swap_is_not_a_morphism():
    V = GradedVectorSpace({0: 2})
    a = generate_dgvs(V, GF2, [(e(1, 0), e(1, 0))])
    swap = GradedLinearMap(V, V, GF2, {0: Matrix(GF2, 2, 2, [[0, 1], [1, 0]])})
    assert not is_morphism(swap, a, a)
    assert not is_morphism_from_generators(swap, a.generators, a)


def test_scalar_map_over_q_is_an_isomorphism():
    rng = random.Random(6)
    V = GradedVectorSpace({0: 2, 1: 1})
    gens = [(_rand_elem(V, 0, rng), _rand_elem(V, 1, rng)), (_rand_elem(V, 1, rng), _rand_elem(V, 1, rng))]
    a = generate_dgvs(V, QQ, gens)
    two = Fraction(2)
    blocks = {k: Matrix(QQ, d, d, [[two if r == c else 0 for c in range(d)] for r in range(d)])
              for k, d in V.dims.items()}
    assert dgvs_isomorphic_check(GradedLinearMap(V, V, QQ, blocks), a, a)


def test_morphism_dimension_mismatch():
    a = generate_dgvs(V3, GF2, RAW_PAIRS)
    V = GradedVectorSpace({0: 2})
    f = GradedLinearMap(V, V, GF2, {})
    with pytest.raises(DimensionError):
        is_morphism(f, a, a)


def test_relation_equality_and_repr():
    a = generate(V3, GF2, RAW_PAIRS)
    b = BilinearRelation(V3, GF2, a.defining)
    assert a == b
    assert "5" in repr(a)
    assert a.block_rank(0, 0) == 5

import random

import pytest

from homdigraph.digraph import (
    ConceptPair,
    VerificationError,
    brute_force_digraph,
    check_excision_hypothesis,
    enumerate_concepts,
    homology_digraph,
    homology_digraph_pair,
    induced_digraph_morphism,
    next_closure_concepts,
    oracle_compare,
    product_pair,
    relative_kunneth,
    verify_connecting,
    verify_coproduct,
    verify_excision,
    verify_kunneth,
    verify_map,
)
from homdigraph.directional import dgvs_isomorphic_check
from homdigraph.homology import induced_inclusion, induced_map
from homdigraph.linalg import GF, GF2, QQ, Elem, basis_element
from homdigraph.models import (
    directed_circle_space,
    interval_space,
    ordered_circle_space,
    point_space,
    small_models,
    torus_space,
)
from homdigraph.spaces import (
    HypothesisNotMet,
    InputError,
    PointMap,
    coproduct,
    identity_map,
    inclusion_map,
    make_pair,
    product,
    relabel,
    restrict,
    validate,
)


def _concept_spaces():
    return [(m.name, m.space) for m in small_models()] + [("torus", torus_space())]


@pytest.mark.parametrize("name, x", _concept_spaces(), ids=lambda v: v if isinstance(v, str) else "")
def test_concepts_match_next_closure(name, x):
    assert enumerate_concepts(x) == next_closure_concepts(x)


@pytest.mark.parametrize("name, x", _concept_spaces(), ids=lambda v: v if isinstance(v, str) else "")
def test_concepts_are_maximal_rectangles(name, x):
    for c in enumerate_concepts(x):
        for i in range(len(x)):
            if c.extent >> i & 1:
                assert c.intent & ~x.dir_up[i] == 0
        # maximality in both directions
        up = x.full
        for i in range(len(x)):
            if c.extent >> i & 1:
                up &= x.dir_up[i]
        assert up == c.intent
        down = x.full
        for j in range(len(x)):
            if c.intent >> j & 1:
                down &= x.dir_down[j]
        assert down == c.extent


def test_concepts_of_two_discrete_points():
    x = validate(["a", "b"], [], dir_mode="discrete")
    got = [c.sets(x) for c in enumerate_concepts(x)]
    assert got == [([], ["a", "b"]), (["b"], ["b"]), (["a"], ["a"]), (["a", "b"], [])]


def test_concepts_of_ordered_circle():
    x = ordered_circle_space()
    got = [c.sets(x) for c in enumerate_concepts(x)]
    assert got == [
        (["m"], ["m", "l", "r", "t"]),
        (["m", "r"], ["r", "t"]),
        (["m", "l"], ["l", "t"]),
        (["m", "l", "r", "t"], ["t"]),
    ]


def test_ordered_circle_pointing_table():
    d = homology_digraph(ordered_circle_space(), GF2)
    assert d.pointing_matrix() == [
        ("h0.0", "h0.0", True),
        ("h0.0", "h1.0", True),
        ("h1.0", "h0.0", True),
        ("h1.0", "h1.0", False),
    ]
    assert d.relation.dims() == {0: 1, 1: 2}
    assert d.relation.block_rank(1, 1) == 0


def test_justification_names_a_concept():
    x = ordered_circle_space()
    d = homology_digraph(x, GF2)
    just = d.justification()
    assert set(just) == {("h0.0", "h0.0"), ("h0.0", "h1.0"), ("h1.0", "h0.0")}
    for pair, concept in just.items():
        assert isinstance(concept, ConceptPair)
    # the loop class needs the whole circle on one side
    assert just[("h1.0", "h0.0")].sets(x) == (["m", "l", "r", "t"], ["t"])
    assert just[("h0.0", "h1.0")].sets(x) == (["m"], ["m", "l", "r", "t"])


@pytest.mark.parametrize("model", small_models(), ids=lambda m: m.name)
@pytest.mark.parametrize("field", [GF2, QQ], ids=str)
def test_witnesses_are_sound(model, field):
    d = homology_digraph_pair(model.pair, field)
    x = d.space
    hb = d.basis
    assert len(d.witnesses) <= len(d.concepts)
    for wit in d.witnesses:
        c = wit.pair
        for i in range(len(x)):
            if c.extent >> i & 1:
                assert c.intent & ~x.dir_up[i] == 0
        assert wit.image_e == induced_inclusion(hb, c.extent)[0].map.image()
        assert wit.image_f == induced_inclusion(hb, c.intent)[0].map.image()
        for k, part in wit.image_e.parts.items():
            for v in part.vectors():
                for l, part_f in wit.image_f.parts.items():
                    for w in part_f.vectors():
                        assert d.points_to(Elem(k, tuple(v)), Elem(l, tuple(w)))


@pytest.mark.parametrize("model", small_models(), ids=lambda m: m.name)
@pytest.mark.parametrize("field", [GF2, GF(3), QQ], ids=str)
def test_concepts_agree_with_brute_force(model, field):
    r = oracle_compare(model.space, field, subset_mask=model.pair.mask)
    assert r.passed, r.details


def test_brute_force_cap():
    with pytest.raises(InputError, match="cap"):
        brute_force_digraph(torus_space(), GF2)
    with pytest.raises(InputError, match="cap"):
        brute_force_digraph(ordered_circle_space(), GF2, cap=3)


def test_relabelled_space_has_isomorphic_digraph():
    x = ordered_circle_space()
    rng = random.Random(9)
    d = homology_digraph(x, GF2)
    for _ in range(6):
        perm = list(range(len(x)))
        rng.shuffle(perm)
        y, f = relabel(x, perm, [f"p{i}" for i in range(len(x))])
        dy = homology_digraph(y, GF2)
        fm = induced_map(f, d.basis, dy.basis).map
        assert dgvs_isomorphic_check(fm, d.dgvs, dy.dgvs)


def test_threads_and_seed_do_not_change_the_relation():
    x = torus_space()
    base = homology_digraph(x, GF2)
    for threads, seed in ((4, None), (1, 5), (3, 17)):
        d = homology_digraph(x, GF2, threads=threads, seed=seed)
        assert d.relation.defining.key() == base.relation.defining.key()
        assert d.dgvs.generators == base.dgvs.generators


def test_nonzero_classes_need_finite_field():
    d = homology_digraph(ordered_circle_space(), QQ)
    with pytest.raises(ValueError):
        d.nonzero_classes()
    d2 = homology_digraph(ordered_circle_space(), GF(3))
    assert len(d2.nonzero_classes()) == 4


# ---------------------------------------------------------------- morphisms


def test_identity_is_a_morphism():
    x = ordered_circle_space()
    d = homology_digraph(x, GF2)
    assert induced_digraph_morphism(identity_map(x), d, d).verified


def test_inclusion_of_minimal_point():
    x = ordered_circle_space()
    m = restrict(x, ["m"])
    vm = induced_digraph_morphism(inclusion_map(m, x), homology_digraph(m, GF2), homology_digraph(x, GF2))
    assert vm.verified and vm.map.ranks() == {0: 1}


def test_torus_projections_are_morphisms():
    dc, oc = directed_circle_space(), ordered_circle_space()
    t = product(dc, oc)
    dt = homology_digraph(t, GF2)
    for target, pick in ((oc, 1), (dc, 0)):
        f = PointMap.from_dict(t, target, {f"({a},{b})": (a, b)[pick] for a in dc.points for b in oc.points})
        vm = induced_digraph_morphism(f, dt, homology_digraph(target, GF2))
        assert vm.verified


def test_identity_of_points_only_goes_one_way():
    # the same point map is monotone from the ordered circle to the directed
    # circle, but not in the other direction
    dc, oc = directed_circle_space(), ordered_circle_space()
    src = homology_digraph(oc, GF2)
    tgt = homology_digraph(dc, GF2)
    back = PointMap(oc, dc, tuple(range(4)))
    assert induced_digraph_morphism(back, src, tgt).verified
    forward = PointMap(dc, oc, tuple(range(4)))
    with pytest.raises(InputError, match="monotone"):
        induced_digraph_morphism(forward, tgt, src)


def test_verify_map_report():
    x = ordered_circle_space()
    collapse = PointMap.from_dict(x, point_space(), {p: "p" for p in x.points})
    r = verify_map(collapse, GF2)
    assert r.passed and r.details["ranks"] == {"0": 1, "1": 0}


# ---------------------------------------------------------------- theorem checks


@pytest.mark.parametrize("field", [GF2, QQ], ids=str)
def test_kunneth(field):
    oc, dc, pt = ordered_circle_space(), directed_circle_space(), point_space()
    for x, y in ((dc, oc), (oc, oc), (oc, pt), (interval_space(), dc)):
        r = verify_kunneth(x, y, field).require()
        assert r.details["tensor_constructions_agree"]


def test_coproduct():
    oc, dc, pt = ordered_circle_space(), directed_circle_space(), point_space()
    assert verify_coproduct([oc], GF2).passed
    r = verify_coproduct([pt, pt], GF2).require()
    assert r.details["target_defining_dims"] == {"0": 2}
    assert verify_coproduct([oc, dc], QQ).passed
    with pytest.raises(InputError):
        verify_coproduct([], GF2)


def test_coproduct_has_no_cross_pointing():
    pt = point_space()
    x, _ = coproduct([pt, pt])
    d = homology_digraph(x, GF2)
    a, b = basis_element(d.basis.gvs, 0, 0, GF2), basis_element(d.basis.gvs, 0, 1, GF2)
    assert d.points_to(a, a) and d.points_to(b, b)
    assert not d.points_to(a, b) and not d.points_to(b, a)


def test_excision():
    oc = ordered_circle_space()
    x, _ = coproduct([oc, point_space()])
    assert verify_excision(make_pair(x, ["1:p"]), ["1:p"], GF2).passed
    assert verify_excision(make_pair(oc, ["m", "l", "r"]), ["m"], QQ).passed
    assert verify_excision(make_pair(oc, ["m", "t"]), [], GF2).passed
    with pytest.raises(HypothesisNotMet):
        verify_excision(make_pair(oc, ["m", "l"]), ["m"], GF2)
    with pytest.raises(HypothesisNotMet, match="not contained"):
        check_excision_hypothesis(make_pair(oc, ["m"]), oc.mask(["t"]))


def test_connecting():
    oc = ordered_circle_space()
    for sub in (oc.points, ["m"], ["m", "t"]):
        r = verify_connecting(make_pair(oc, sub), GF2).require()
        assert r.details["long_exact_sequence_exact"]
    r = verify_connecting(make_pair(oc, ["m", "t"]), QQ)
    assert r.passed and r.details["connecting_ranks"] == {"1": 1}


def test_relative_kunneth():
    iv, pt = interval_space(), point_space()
    oc, dc = ordered_circle_space(), directed_circle_space()
    assert relative_kunneth(make_pair(iv, ["b"]), make_pair(pt, []), GF2).passed
    assert relative_kunneth(make_pair(oc, ["l", "r"]), make_pair(dc, ["l"]), GF2).passed
    with pytest.raises(HypothesisNotMet, match="open"):
        relative_kunneth(make_pair(oc, ["m"]), make_pair(pt, []), GF2)


def test_product_pair_subset():
    p = product_pair(make_pair(interval_space(), ["b"]), make_pair(interval_space(), []))
    assert p.subset == {"(b,a)", "(b,b)"}


def test_verification_error_is_an_assertion():
    assert issubclass(VerificationError, AssertionError)

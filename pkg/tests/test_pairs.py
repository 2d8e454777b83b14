"""Inducing pairs: layout, singular forms, residues, criterion, Weyl data."""

import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from rsresidues.affine import AffineForm, AffineSubspace, parse_form
from rsresidues.lfactors import (
    AtomRegistry,
    CuspidalAtom,
    SCOPE_GLOBAL,
    SpehDatum,
    standard_registry,
)
from rsresidues.mero import (
    FormalMero,
    evaluate_numeric,
    global_rs,
    residue_symbol,
)
from rsresidues.pairs import (
    InducingPair,
    cl_quotient,
    cl_star,
    criterion_multisets,
    first_order_schedule,
    global_kernel,
    global_residue_pipeline,
    intersection_check,
    nu_pairings,
    pair_block_maps,
    pair_from_json,
    pair_layout,
    pair_to_json,
    pipeline_report,
    residue_weyl_data,
    second_order_schedule,
    sigma1_products_check,
    singular_forms,
    validate_pair,
    w_delta_elements,
    w_delta_permute,
)
from rsresidues.rsparabolic import from_pair
from rsresidues.weyl import BlockParabolic, Composition, conjugate, lift_block_permutation

REG = standard_registry()

SELF_DUAL = AtomRegistry(
    [
        CuspidalAtom("sig", 1, SCOPE_GLOBAL),
        CuspidalAtom("chi1", 1, SCOPE_GLOBAL),
        CuspidalAtom("chi2", 1, SCOPE_GLOBAL),
        CuspidalAtom("tau", 1, SCOPE_GLOBAL),
        CuspidalAtom("b2", 2, SCOPE_GLOBAL),
    ],
    dual_pairs=[("sig", "sig"), ("chi1", "chi1"), ("chi2", "chi2"),
                ("tau", "tau"), ("b2", "b2")],
)

NO_DUAL = AtomRegistry(
    [
        CuspidalAtom("sig", 1, SCOPE_GLOBAL),
        CuspidalAtom("chi1", 1, SCOPE_GLOBAL),
        CuspidalAtom("chi2", 1, SCOPE_GLOBAL),
    ],
)

CROSS_DUAL = AtomRegistry(
    [
        CuspidalAtom("a", 1, SCOPE_GLOBAL),
        CuspidalAtom("b", 1, SCOPE_GLOBAL),
        CuspidalAtom("c", 1, SCOPE_GLOBAL),
    ],
    dual_pairs=[("a", "b"), ("c", "c")],
)


def gl1_gl2():
    return validate_pair(REG, [], [(1, 2, "one")])


def gl2_gl3(reg=SELF_DUAL):
    return validate_pair(reg, [(1, 2, "sig")], [(1, 1, "chi1"), (1, 1, "chi2")])


def gl3_gl4():
    return validate_pair(SELF_DUAL, [(1, 2, "sig")],
                         [(1, 2, "chi1"), (1, 1, "chi2")])


def tempered_pair():
    return validate_pair(SELF_DUAL, [(1, 1, "sig")],
                         [(1, 1, "chi1"), (1, 1, "chi2")])


def test_validate_pair_examples():
    pair = gl1_gl2()
    assert (pair.n, pair.n_plus_one, pair.k) == (1, 2, 0)
    assert pair.m1 == 0 and pair.m2 == 1

    pair = gl2_gl3()
    assert (pair.n, pair.n_plus_one, pair.k) == (2, 3, 1)

    with pytest.raises(ValueError, match="rank balance"):
        validate_pair(SELF_DUAL, [(1, 2, "sig")], [(1, 2, "tau")])


def test_validate_pair_rejects_bad_data():
    with pytest.raises(ValueError, match="rank 2 but atom"):
        validate_pair(SELF_DUAL, [], [(2, 2, "chi1")])
    with pytest.raises(ValueError, match="multiplicity"):
        validate_pair(SELF_DUAL, [], [(1, 0, "chi1")])
    with pytest.raises(ValueError, match="unknown atom"):
        validate_pair(SELF_DUAL, [], [(1, 2, "ghost")])
    with pytest.raises(ValueError, match="centers"):
        validate_pair(REG, [], [(1, 2, "one")], nu2=[Fraction(1, 2)])
    with pytest.raises(ValueError, match="entries for"):
        validate_pair(REG, [], [(1, 2, "one")], nu2=[0, 0])
    mixed = [CuspidalAtom("g", 1, "global"), CuspidalAtom("l", 1, "local")]
    reg = AtomRegistry(mixed)
    with pytest.raises(ValueError, match="scope"):
        InducingPair((SpehDatum(mixed[0], 1),), (SpehDatum(mixed[1], 2),))


def test_pair_json_roundtrip():
    pair = validate_pair(SELF_DUAL, [(1, 2, "sig")],
                         [(1, 1, "chi1"), (1, 1, "chi2")],
                         nu1=[Fraction(1, 4)], nu2=[0, Fraction(-1, 8)])
    data = pair_to_json(pair, registry_ref="test-registry")
    assert data["registry_ref"] == "test-registry"
    assert data["family1"] == [{"r": 1, "d": 2, "atom": "sig", "nu": "1/4"}]
    assert data["family2"][0] == {"r": 1, "d": 1, "atom": "chi1"}
    back = pair_from_json(SELF_DUAL, json.dumps(data))
    assert back == pair


def test_layout_gl1_gl2():
    lay = pair_layout(gl1_gl2())
    assert lay.names == ("y1_1", "v1_1", "v1_2")
    assert lay.small_names == ("z2_1",)
    params = [str(slot.param) for slot in lay.slots_n + lay.slots_n1]
    assert params == ["-(z2_1)", "z2_1+1/2", "z2_1-1/2"]


def test_layout_gl2_gl3():
    lay = pair_layout(gl2_gl3())
    assert lay.names == ("x1_1", "x1_2", "u1_1", "v1_1", "v2_1")
    assert lay.small_names == ("z1_1", "z2_1", "z2_2")
    param = lay.param_map()
    assert str(param["x1_1"]) == "z1_1+1/2"
    assert str(param["x1_2"]) == "z1_1-1/2"
    assert str(param["u1_1"]) == "-(z1_1)"
    assert str(param["v1_1"]) == "z2_1"
    assert str(param["v2_1"]) == "z2_2"


def test_singular_forms_examples():
    sf = singular_forms(gl1_gl2())
    assert [str(f) for f in sf.l_plus] == ["-(y1_1+v1_2+1/2)"]
    assert [str(f) for f in sf.l_minus] == ["y1_1+v1_1-1/2"]
    assert sf.labels_plus == ((2, 1, 1),)

    sf = singular_forms(tempered_pair())
    assert sf.l_plus == () and sf.l_minus == ()

    sf = singular_forms(gl2_gl3())
    assert [str(f) for f in sf.l_plus] == ["-(x1_2+u1_1+1/2)"]
    assert [str(f) for f in sf.l_minus] == ["x1_1+u1_1-1/2"]


def test_intersection_gl1_gl2_line():
    pair = gl1_gl2()
    space = intersection_check(pair)
    assert space.dim == 1 and space.codim == 2
    names = pair_layout(pair).names
    assert space.reduce(parse_form(names, "y1_1+v1_2+1/2")).is_zero()
    assert space.reduce(parse_form(names, "y1_1+v1_1-1/2")).is_zero()
    for t in (Fraction(0), Fraction(1), Fraction(-3, 7)):
        point = {"y1_1": -t, "v1_1": t + Fraction(1, 2),
                 "v1_2": t - Fraction(1, 2)}
        assert space.contains_point(point)
    assert not space.contains_point(
        {"y1_1": 0, "v1_1": 0, "v1_2": Fraction(-1, 2)})


def test_intersection_tempered_and_dim():
    pair = tempered_pair()
    space = intersection_check(pair)
    assert space.codim == 0

    pair = gl3_gl4()
    space = intersection_check(pair)
    sf = singular_forms(pair)
    names = pair_layout(pair).names
    assert space.dim == len(names) - len(sf.l_plus) - len(sf.l_minus)


def test_cl_quotient_examples():
    assert cl_quotient(REG, gl1_gl2()) == FormalMero.one(("z2_1",))

    F = cl_quotient(SELF_DUAL, gl2_gl3())
    rows = sorted((str(a.argument), a.pair, a.exponent) for a in F.atoms)
    assert rows == [
        ("z1_1+z2_1+1", ("chi1", "sig"), 1),
        ("z1_1+z2_2+1", ("chi2", "sig"), 1),
        ("z2_1-z2_2+1", ("chi1", "chi2"), -1),
    ]


def test_cl_star_judgments():
    report = cl_star(SELF_DUAL, gl2_gl3())
    assert report.verdict == "nonzero"
    judged = {(f.role, f.atom.pair): f.judgment for f in report.factors}
    assert judged == {
        ("numerator", ("chi1", "sig")): "zero_free",
        ("numerator", ("chi2", "sig")): "zero_free",
        ("denominator", ("chi1", "chi2")): "zero_free",
    }

    pair = validate_pair(CROSS_DUAL, [(1, 2, "a")], [(1, 1, "b"), (1, 1, "c")])
    report = cl_star(CROSS_DUAL, pair)
    assert report.verdict == "nonzero"
    judged = {f.atom.pair: f.judgment for f in report.factors
              if f.role == "numerator"}
    assert judged[("a", "b")] == "pole"
    assert judged[("a", "c")] == "zero_free"
    symbols = [f.atom for f in report.factors if f.judgment == "pole"]
    assert symbols[0].point == Fraction(1)

    wide = validate_pair(CROSS_DUAL, [(1, 3, "a")], [(1, 1, "b"), (1, 1, "c")])
    report = cl_star(CROSS_DUAL, wide)
    judged = {f.atom.pair: f.judgment for f in report.factors
              if f.role == "numerator"}
    assert judged[("a", "b")] == "zero_free"
    assert report.verdict == "nonzero"


def test_cl_star_zero_and_indeterminate():
    pair = validate_pair(SELF_DUAL, [(1, 1, "sig")],
                         [(1, 1, "chi1"), (1, 1, "chi1")])
    report = cl_star(SELF_DUAL, pair)
    assert report.verdict == "zero"
    assert report.value.is_zero()

    twisted = validate_pair(SELF_DUAL, [(1, 1, "sig")],
                            [(1, 1, "chi1"), (1, 1, "chi2")],
                            nu1=[Fraction(1, 4)])
    report = cl_star(SELF_DUAL, twisted)
    assert report.verdict == "indeterminate"


def test_global_kernel_gl1_gl2_matches_display():
    F = global_kernel(REG, gl1_gl2())
    names = ("y1_1", "v1_1", "v1_2")
    want = FormalMero.build(names, 1, [
        global_rs(names, ("one", "one"), parse_form(names, "y1_1+v1_1+1/2"), True),
        global_rs(names, ("one", "one"), parse_form(names, "y1_1+v1_2+1/2"), True),
        global_rs(names, ("one", "one"), parse_form(names, "v1_1-v1_2+1"), True,
                  exponent=-1),
    ])
    assert F == want
    with pytest.raises(ValueError, match="global"):
        local = validate_pair(REG, [], [(1, 2, "triv")])
        global_kernel(REG, local)


def test_pipeline_gl1_gl2_frozen_and_numeric():
    pair = gl1_gl2()
    out = global_residue_pipeline(REG, pair)
    names = ("y1_1", "v1_1", "v1_2")
    space = AffineSubspace.from_forms(names, singular_forms(pair).forms())
    want = FormalMero.build(names, -1, [
        residue_symbol(names, ("one", "one"), 0),
        residue_symbol(names, ("one", "one"), 1),
        global_rs(names, ("one", "one"),
                  AffineForm.constant_form(names, 2), True, exponent=-1),
    ], space)
    assert out == want

    value = evaluate_numeric(out, {"y1_1": 0.0, "v1_1": 0.5, "v1_2": -0.5})
    assert abs(value - 6.0 / math.pi) < 1e-10


def test_pipeline_tempered_is_kernel():
    pair = tempered_pair()
    assert global_residue_pipeline(SELF_DUAL, pair) == global_kernel(SELF_DUAL, pair)


def test_pipeline_non_dual_vanishes():
    pair = gl2_gl3(NO_DUAL)
    out = global_residue_pipeline(NO_DUAL, pair)
    assert out.is_zero()
    report = pipeline_report(NO_DUAL, pair)
    assert report["vanishes"] is True
    assert report["steps"][0]["pole_order"] == 0


def test_pipeline_gl2_gl3_frozen():
    pair = gl2_gl3()
    out = global_residue_pipeline(SELF_DUAL, pair)
    names = pair_layout(pair).names
    space = AffineSubspace.from_forms(names, singular_forms(pair).forms())

    def L(text, ids, dual, exponent=1):
        return global_rs(names, ids, parse_form(names, text), dual, exponent)

    want = FormalMero.build(names, -1, [
        residue_symbol(names, ("sig", "sig"), 0),
        residue_symbol(names, ("sig", "sig"), 1),
        L("2", ("sig", "sig"), True, exponent=-1),
        L("v1_1-u1_1+1", ("sig", "chi1"), False),
        L("v1_1-u1_1", ("sig", "chi1"), False),
        L("v2_1-u1_1+1", ("sig", "chi2"), False),
        L("v2_1-u1_1", ("sig", "chi2"), False),
        L("u1_1-v1_1+1", ("sig", "chi1"), False, exponent=-1),
        L("u1_1-v2_1+1", ("sig", "chi2"), False, exponent=-1),
        L("v1_1-v2_1+1", ("chi1", "chi2"), False, exponent=-1),
    ], space)
    assert out == want


def test_pipeline_report_shape():
    pair = gl1_gl2()
    report = pipeline_report(REG, pair)
    assert set(report) == {"pair", "forms", "order", "steps", "result",
                           "vanishes", "criterion"}
    assert report["order"] == list(first_order_schedule(pair))
    assert [s["pole_order"] for s in report["steps"]] == [1, 1]
    assert report["criterion"] == "nonzero"
    assert report["vanishes"] is False
    json.dumps(report)


def test_pipeline_order_independence_random():
    rng = random.Random(23)
    for pair in (gl2_gl3(), gl3_gl4()):
        count = len(singular_forms(pair).forms())
        extras = []
        for _ in range(3):
            order = list(range(count))
            rng.shuffle(order)
            extras.append(tuple(order))
        out = global_residue_pipeline(SELF_DUAL, pair, extra_orders=extras)
        assert not out.is_zero()
    with pytest.raises(ValueError, match="permutation"):
        global_residue_pipeline(SELF_DUAL, gl2_gl3(), order=(0,))


def test_schedules_are_permutations():
    for pair in (gl1_gl2(), gl2_gl3(), gl3_gl4(), tempered_pair()):
        count = len(singular_forms(pair).forms())
        for sched in (first_order_schedule(pair), second_order_schedule(pair)):
            assert sorted(sched) == list(range(count))
    deep = validate_pair(SELF_DUAL, [(1, 3, "sig")],
                         [(1, 2, "chi1"), (1, 2, "chi2")])
    assert first_order_schedule(deep) != second_order_schedule(deep)


def test_w_delta_invariance():
    for pair, reg in ((gl2_gl3(), SELF_DUAL),
                      (gl3_gl4(), SELF_DUAL),
                      (validate_pair(CROSS_DUAL, [(1, 2, "a")],
                                     [(1, 1, "b"), (1, 1, "c")]), CROSS_DUAL)):
        base_sets = criterion_multisets(reg, pair)
        base_star = cl_star(reg, pair)
        base_vanishes = global_residue_pipeline(reg, pair).is_zero()
        for p1, p2 in w_delta_elements(pair):
            moved = w_delta_permute(pair, p1, p2)
            assert criterion_multisets(reg, moved) == base_sets
            assert cl_star(reg, moved).verdict == base_star.verdict
            assert global_residue_pipeline(reg, moved).is_zero() == base_vanishes


def test_w_delta_invariance_twisted():
    pair = validate_pair(SELF_DUAL, [(1, 2, "sig")],
                         [(1, 1, "chi1"), (1, 1, "chi2")],
                         nu1=[Fraction(1, 8)], nu2=[Fraction(1, 4), 0])
    base = criterion_multisets(SELF_DUAL, pair)
    for p1, p2 in w_delta_elements(pair):
        moved = w_delta_permute(pair, p1, p2)
        assert criterion_multisets(SELF_DUAL, moved) == base
        assert not global_residue_pipeline(SELF_DUAL, moved).is_zero()


def _small_valid_pairs(max_n=6):
    reg = AtomRegistry(
        [CuspidalAtom("a1", 1, SCOPE_GLOBAL), CuspidalAtom("b1", 1, SCOPE_GLOBAL),
         CuspidalAtom("a2", 2, SCOPE_GLOBAL), CuspidalAtom("a3", 3, SCOPE_GLOBAL)],
        dual_pairs=[("a1", "a1"), ("b1", "b1"), ("a2", "a2"), ("a3", "a3")],
    )
    by_rank = {1: "a1", 2: "a2", 3: "a3"}
    shapes = [(), ((1, 1),), ((1, 2),), ((1, 3),), ((2, 1),), ((2, 2),),
              ((3, 1),), ((1, 1), (1, 1)), ((1, 1), (1, 2)), ((1, 2), (1, 2)),
              ((2, 1), (1, 1)), ((1, 1), (2, 1))]
    pairs = []
    for shape1, shape2 in itertools.product(shapes, shapes):
        if not shape2 and not shape1:
            continue
        k1 = sum(r for r, _ in shape1)
        k2 = sum(r for r, _ in shape2)
        if k2 != k1 + 1:
            continue
        fam1 = [(r, d, by_rank[r]) for r, d in shape1]
        fam2 = [(r, d, by_rank[r]) for r, d in shape2]
        pair = validate_pair(reg, fam1, fam2)
        if 1 <= pair.n <= max_n:
            pairs.append((reg, pair))
    return pairs


def test_dimension_identity_sweep():
    pairs = _small_valid_pairs()
    assert len(pairs) >= 10
    for reg, pair in pairs:
        space = intersection_check(pair)
        sf = singular_forms(pair)
        names = pair_layout(pair).names
        assert space.dim == len(names) - len(sf.l_plus) - len(sf.l_minus)
        assert space.dim == pair.m1 + pair.m2


def test_nu_dominance_positive():
    for reg, pair in _small_valid_pairs():
        assert all(v > 0 for v in nu_pairings(pair))
    assert nu_pairings(gl1_gl2()) == (Fraction(1),)


def test_residue_weyl_data_gl1_gl2():
    data = residue_weyl_data(gl1_gl2())
    assert data.w1 == ((0,), (0, 1))
    assert data.w2 == ((0,), (1, 0))
    assert data.w_plus == ((0,), (0, 1))
    assert data.p_res == data.p_plus == from_pair((1, 1), 2)
    assert data.q_pi[0].composition().parts == (1,)
    assert data.q_pi[1].composition().parts == (1, 1)
    assert data.p_pi[1].composition().parts == (1, 1)


def test_residue_weyl_cycle_example():
    reg = AtomRegistry(
        [CuspidalAtom("a1", 1, SCOPE_GLOBAL), CuspidalAtom("b2", 2, SCOPE_GLOBAL)],
        dual_pairs=[("a1", "a1"), ("b2", "b2")],
    )
    pair = validate_pair(reg, [(1, 3, "a1")], [(2, 1, "b2")])
    maps = pair_block_maps(pair)
    assert maps.w1[0] == (2, 0, 1)
    assert maps.w2[0] == (0, 1, 2)
    data = residue_weyl_data(pair)
    assert data.w1[0] == (2, 0, 1)
    assert data.q_pi[0].composition().parts == (1, 1, 1)
    assert data.p_res.parts.parts == (1, 1, 2)
    assert data.p_res.corner == 3


def test_residue_weyl_block_action():
    reg = AtomRegistry(
        [CuspidalAtom("b2", 2, SCOPE_GLOBAL), CuspidalAtom("c1", 1, SCOPE_GLOBAL)],
        dual_pairs=[("b2", "b2"), ("c1", "c1")],
    )
    pair = validate_pair(
        reg, [(2, 2, "b2")], [(1, 1, "c1"), (1, 1, "c1"), (1, 1, "c1")])
    data = residue_weyl_data(pair)
    assert data.w1[0] == (2, 3, 0, 1)
    moved = conjugate(data.w1[0], data.p_pi[0])
    assert moved.levi_partition() == data.q_pi[0].levi_partition()
    assert data.q_pi[0].composition().parts == (2, 2)
    assert data.q_pi[1].composition().parts == (2, 1, 1, 1)
    assert data.p_plus_pi[0].composition().parts == (2, 2)
    assert data.p_plus.parts.parts == (2, 3)


def test_residue_weyl_sweep():
    for reg, pair in _small_valid_pairs():
        data = residue_weyl_data(pair)
        assert BlockParabolic.from_composition(data.p_res.parts).contains(data.q_pi[1])
        for side in (0, 1):
            assert data.p[side].contains(data.p_plus_pi[side])
            assert data.p_plus_pi[side].contains(data.p_pi[side])


def test_sigma1_examples():
    report = sigma1_products_check(tempered_pair())
    assert report == report.__class__(0, 0, 0, 0)

    report = sigma1_products_check(gl1_gl2())
    assert (report.bullet1_roots, report.sigma1) == (1, 1)
    assert (report.bullet2_roots, report.sigma1_prime) == (0, 0)

    report = sigma1_products_check(gl2_gl3())
    assert (report.bullet1_roots, report.sigma1) == (0, 0)
    assert (report.bullet2_roots, report.sigma1_prime) == (1, 1)

    report = sigma1_products_check(gl3_gl4())
    assert report.sigma1 == 1 and report.sigma1_prime == 1


def test_sigma1_sweep():
    for reg, pair in _small_valid_pairs():
        sigma1_products_check(pair)


def test_pair_block_maps_frozen():
    maps = pair_block_maps(gl2_gl3())
    assert maps.w1 == ((1, 0), (0, 1, 2))
    assert maps.w2 == ((0, 1), (0, 1, 2))
    assert maps.w_star == ((1, 0), (0, 1, 2))

    maps = pair_block_maps(gl3_gl4())
    assert maps.w1[0] == (2, 0, 1)
    assert maps.w1[1] == (0, 1, 2, 3)
    assert maps.w2[1] == (0, 2, 1, 3)


def test_w_delta_permute_roundtrip():
    pair = gl3_gl4()
    moved = w_delta_permute(pair, (0,), (1, 0))
    assert moved.family2[0].atom.id == "chi2"
    assert moved.family2[1].atom.id == "chi1"
    back = w_delta_permute(moved, (0,), (1, 0))
    assert back == pair
    with pytest.raises(ValueError, match="degree"):
        w_delta_permute(pair, (0, 1), (0, 1))

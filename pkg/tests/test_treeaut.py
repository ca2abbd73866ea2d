import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from invgen.errors import DepthExhausted, InvalidPartition, NotInBallStabilizer, NotInStabilizer, SupplyIncomplete, WrongClass
from invgen.perm import Perm
from invgen.treeaut import (
    Affine,
    Elliptic,
    Hyperbolic,
    Identity,
    Inversion,
    Truncated,
    TypeSpec,
    Undetermined,
    addresses as A,
    all_type_specs,
    classify,
    conjugacy_test,
    conjugate,
    default_supply,
    element_from_json,
    evaluate_hs,
    families,
    make_edge_flip,
    make_hyperbolic_translation,
    make_spherically_transitive,
    make_type_nP,
    orbital_type,
    parse_element,
    phi_v1,
    phi_vnu,
    random_automorphism,
    random_stabilizer_element,
    stabilizer_approximation,
    translation_length,
    type_about,
    verify_spherical_transitivity,
    vertex_transitivity_witness,
)

T = make_hyperbolic_translation(3)
S = make_spherically_transitive("", 3)
seeds = st.integers(0, 10_000)


def spec(text, d=3):
    return TypeSpec.parse(text, d)


# ---------------------------------------------------------------------------
# addresses


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sphere_sizes(d):
    for r in range(5):
        assert len(A.sphere("", r, d)) == A.sphere_size(r, d)
        assert len(A.sphere("121"[: min(3, d)], r, d)) == A.sphere_size(r, d)


def test_ball_sizes():
    assert len(A.ball("", 6, 3)) == 190
    assert len(A.ball("", 4, 3)) == 46
    assert all(A.is_address(w, 3) for w in A.ball("", 6, 3))


def test_address_validation():
    assert A.is_address("1213", 3)
    assert not A.is_address("112", 3)
    assert not A.is_address("14", 3)
    with pytest.raises(ValueError):
        A.check_address("11", 3)


@given(st.integers(0, 189), st.integers(0, 189))
def test_dist_matches_geodesic(i, j):
    ball = A.ball("", 6, 3)
    x, y = ball[i], ball[j]
    path = A.geodesic(x, y)
    assert len(path) - 1 == A.dist(x, y) == A.dist(y, x)
    assert all(A.dist(a, b) == 1 for a, b in zip(path, path[1:]))


def test_digit_round_trip():
    for d in (3, 4):
        for w in A.ball("", 4, d):
            x = A.to_digits(w)
            assert A.from_digits(x) == w
            assert all(0 <= k < d - 1 for k in x[1:])


# ---------------------------------------------------------------------------
# element algebra


def test_compose_identity_and_inverse():
    rng = random.Random(3)
    for _ in range(20):
        g = random_automorphism(rng, 3)
        assert (g * Identity(3)).agrees_with(g, 4)
        assert (g * g.inverse()).agrees_with(Identity(3), 4)
        assert (g.inverse() * g).agrees_with(Identity(3), 4)


def test_composition_convention():
    g, h = T, make_edge_flip(3)
    for w in A.ball("", 3, 3):
        assert (g * h).image(w) == g.image(h.image(w))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_elements_preserve_adjacency(seed):
    g = random_automorphism(random.Random(seed), 3)
    ball = A.ball("", 4, 3)
    assert len({g(w) for w in ball}) == len(ball)
    for w in ball[1:]:
        assert A.dist(g(w), g(w[:-1])) == 1


def test_depth_bookkeeping():
    t4 = T.restrict(6)
    assert t4.depth == 6
    assert (t4 * t4).depth == 5
    assert t4.inverse().depth == 5
    with pytest.raises(DepthExhausted):
        (t4 ** 8)
    fixers = [random_stabilizer_element(random.Random(i), 3, 3).restrict(6) for i in range(2)]
    assert (fixers[0] * fixers[1]).depth == 6
    with pytest.raises(DepthExhausted):
        t4.image("1212121")


def test_truncation_validation():
    g = T.restrict(3)
    g.validate()
    bad = dict(g.mapping)
    bad["12"], bad["13"] = bad["13"], bad["1"]
    with pytest.raises(Exception):
        Truncated(3, bad, 3, check=True)


def test_affine_inverse():
    g = Affine(3, "12", Perm([2, 0, 1]))
    assert (g * g.inverse()).agrees_with(Identity(3), 5)


@pytest.mark.parametrize("name", ["translation", "flip", "odometer", "type:1:12", "type:2:12/1", "type:3:12/21"])
def test_json_round_trip(name):
    g = parse_element(name)
    doc = json.loads(json.dumps(g.to_json()))
    assert element_from_json(doc).agrees_with(g, 5)
    assert element_from_json(g.inverse().to_json()).agrees_with(g.inverse(), 5)


def test_truncation_json():
    g = (T * S).restrict(3)
    doc = g.to_json()
    assert doc["kind"] == "truncation"
    assert "→" in doc["data"][1]
    assert element_from_json(doc).agrees_with(g, 3)


def test_product_json():
    g = conjugate(S, T) * make_edge_flip(3) ** 2
    assert element_from_json(g.to_json()).agrees_with(g, 4)


# ---------------------------------------------------------------------------
# classification


def test_classify_examples():
    assert classify(Identity(3)) == Elliptic("")
    assert classify(make_edge_flip(3)) == Inversion(("", "1"))
    c = classify(T)
    assert isinstance(c, Hyperbolic) and c.length == 1
    assert all(set(w) <= {"1", "2"} for w in c.axis)
    assert len(c.axis) == 13


def test_translation_axis_is_displacement_argmin():
    # oracle: brute-force displacement minimum over the ball
    prof = {w: A.dist(w, T(w)) for w in A.ball("", 6, 3)}
    argmin = {w for w, x in prof.items() if x == 1}
    assert argmin == set(classify(T).axis)
    assert all(prof[w] == 1 + 2 * min(A.dist(w, a) for a in argmin) for w in prof)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_translation_powers(k):
    assert translation_length(T ** k) == k
    assert translation_length(T ** -k) == k


def test_inverse_reverses_axis():
    a, b = classify(T), classify(T.inverse())
    assert a.axis == tuple(reversed(b.axis))


def test_elliptic_length_zero():
    assert translation_length(S) == 0
    assert isinstance(translation_length(make_edge_flip(3)), Undetermined)


def test_undetermined_far_axis():
    far = conjugate(T, Affine(3, "313131", Perm.identity(3)))
    # the axis passes at distance 5 from v0; nothing in B(v0, 3) certifies it
    assert isinstance(classify(far, radius=3), Undetermined)
    assert isinstance(classify(far, radius=8), Hyperbolic)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(["translation", "square", "flip", "odometer", "type:1:12", "type:2:12/1"]))
def test_conjugation_covariance(seed, name):
    h = T ** 2 if name == "square" else parse_element(name)
    x = random_automorphism(random.Random(seed), 3)
    g = conjugate(h, x)  # x h x^-1
    ch, cg = classify(h), classify(g)
    assert type(ch) is type(cg)
    xi = x.inverse()
    if isinstance(cg, Elliptic):
        assert h(xi(cg.fixed_vertex)) == xi(cg.fixed_vertex)
    elif isinstance(cg, Inversion):
        assert {xi(w) for w in cg.edge} == set(ch.edge)
    else:
        assert cg.length == ch.length
        assert all(A.dist(xi(w), h(xi(w))) == ch.length for w in cg.axis)


def test_trichotomy_on_random_elements():
    rng = random.Random(11)
    for _ in range(50):
        c = classify(random_automorphism(rng, 3, moves=4))
        assert isinstance(c, (Elliptic, Inversion, Hyperbolic))


# ---------------------------------------------------------------------------
# orbital types


def test_orbital_type_identity():
    ot = orbital_type(Identity(3), 2)
    assert ot.marks_by_level() == [[1], [1, 1, 1], [1] * 6]


def test_orbital_type_odometer():
    ot = orbital_type(S, 3)
    assert ot.marks_by_level() == [[1], [3], [6], [12]]
    assert ot.to_json()["tree"]["children"][0]["mark"] == 3


def test_orbital_type_transposition():
    ot = orbital_type(make_type_nP("", spec("1:12")), 1)
    assert ot.marks_by_level() == [[1], [1, 2]]


def test_orbital_type_hyperbolic_rejected():
    with pytest.raises(WrongClass):
        orbital_type(T, 2)


def test_orbital_type_lower_bound_flags():
    g = make_type_nP("3", spec("1:123"))
    ot = orbital_type(g, 1, center="")
    assert any(not exact for _, _, exact in ot.orbits)


def test_orbital_type_flipped_edge():
    ot = orbital_type(make_edge_flip(3), 1, center=("", "1"))
    assert ot.root.mark == 2
    assert all(o[2] for o in ot.orbits)


# ---------------------------------------------------------------------------
# conjugacy


def test_conjugacy_examples():
    assert conjugacy_test(T, T ** 2, 3).status == "not_conjugate"
    r = conjugacy_test(T, conjugate(T, S), 3)
    assert (r.status, r.exact) == ("conjugate_up_to", True)
    a, b = make_type_nP("", spec("1:12")), make_type_nP("", spec("1:123"))
    assert conjugacy_test(a, b, 3).status == "not_conjugate"
    assert conjugacy_test(b, a, 3).status == "not_conjugate"
    assert conjugacy_test(T, S, 3).status == "not_conjugate"


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(["odometer", "type:1:12", "type:1:123", "type:2:12/1", "flip"]))
def test_conjugates_match(seed, name):
    g = parse_element(name)
    x = random_automorphism(random.Random(seed), 3)
    assert conjugacy_test(g, conjugate(g, x), 3).status == "conjugate_up_to"


def test_type_shapes_pairwise_not_conjugate():
    reps = {}
    for t in all_type_specs(3, 1):
        reps.setdefault(t.shape(), make_type_nP("", t))
    shapes = sorted(reps)
    assert shapes == [(2, 1), (3,)]
    for i, p in enumerate(shapes):
        for q in shapes[i + 1:]:
            assert conjugacy_test(reps[p], reps[q], 2).status == "not_conjugate"


def test_same_shape_types_conjugate():
    a, b = make_type_nP("", spec("1:12")), make_type_nP("", spec("1:23"))
    assert conjugacy_test(a, b, 3).status == "conjugate_up_to"


# ---------------------------------------------------------------------------
# local actions


def test_phi_v1_examples():
    assert phi_v1(Identity(3)).is_identity()
    assert phi_v1(make_type_nP("", spec("1:12"))).cycle_type() == (2, 1)
    assert phi_v1(S).cycle_type() == (3,)
    with pytest.raises(NotInStabilizer):
        phi_v1(T)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_phi_v1_homomorphism(a, b):
    g = random_stabilizer_element(random.Random(a), 3, 3)
    h = random_stabilizer_element(random.Random(b), 3, 3)
    assert phi_v1(g * h) == phi_v1(g) * phi_v1(h)


def test_phi_v1_kernel():
    k = make_type_nP("", spec("2:12"), "1")
    assert phi_v1(k).is_identity()
    assert all(k(w) == w for w in A.ball("", 1, 3))


def test_phi_vnu_examples():
    g = make_type_nP("", spec("2:12"), "1")
    assert phi_vnu(g, "", "1") == Perm([1, 0])
    assert phi_vnu(g, "", "2").is_identity()
    assert phi_vnu(Identity(3), "", "12").is_identity()
    deep = make_type_nP("", spec("3:12"), "12")
    assert phi_vnu(deep, "", "1").is_identity()
    with pytest.raises(NotInBallStabilizer):
        phi_vnu(make_type_nP("", spec("1:12")), "", "1")


@pytest.mark.parametrize("d", [3, 4])
def test_phi_vnu_homomorphism(d):
    rng = random.Random(d)
    u = A.sphere("", 1, d)[1]
    specs = all_type_specs(d, 2)
    for _ in range(20):
        g = make_type_nP("", rng.choice(specs), u)
        h = make_type_nP("", rng.choice(specs), u)
        assert phi_vnu(g * h, "", u) == phi_vnu(g, "", u) * phi_vnu(h, "", u)


def test_phi_vnu_relabels_inward_color():
    # at u = "2" the inward color is 2, so outward colors 1 and 3 become digits 0 and 1
    g = make_type_nP("", spec("2:12"), "2")
    assert {g("21"), g("23")} == {"21", "23"} and g("21") == "23"


# ---------------------------------------------------------------------------
# constructions


@pytest.mark.parametrize("d", [3, 4, 5])
def test_type_nP_construction(d):
    for n in (1, 2, 3):
        u = None if n == 1 else A.sphere("", n - 1, d)[-1]
        for t in all_type_specs(d, n):
            g = make_type_nP("", t, u)
            assert type_about(g, "", n) == t.shape()


def test_type_examples():
    g = make_type_nP("", spec("2:12"), "1")
    moved = [w for w in A.ball("", 2, 3) if g(w) != w]
    assert sorted(moved) == ["12", "13"]


def test_invalid_partitions():
    with pytest.raises(InvalidPartition):
        TypeSpec(1, ((1,), (2,), (3,)))
    with pytest.raises(InvalidPartition):
        TypeSpec(2, ((1, 2, 3),))
    with pytest.raises(InvalidPartition):
        make_type_nP("", spec("2:12"))
    with pytest.raises(InvalidPartition):
        make_type_nP("", spec("3:12"), "1")


def test_partition_counts():
    # nontrivial set partitions: Bell(d) - 1 for n = 1, Bell(d-1) - 1 otherwise
    assert len(all_type_specs(3, 1)) == 4
    assert len(all_type_specs(3, 2)) == 1
    assert len(all_type_specs(4, 1)) == 14
    assert len(all_type_specs(4, 2)) == 4


@pytest.mark.parametrize("d", [3, 4])
def test_spherical_transitivity(d):
    s = make_spherically_transitive("", d)
    assert verify_spherical_transitivity(s, "", 5 if d == 3 else 4)
    assert not verify_spherical_transitivity(Identity(d), "", 1)
    assert not verify_spherical_transitivity(make_type_nP("", TypeSpec(1, (tuple(range(1, d + 1)),), d)), "", 2)


def test_spherical_transitivity_orbit_sizes():
    for n in range(1, 7):
        w = A.sphere("", n, 3)[0]
        orbit = {w}
        x = S(w)
        while x != w:
            orbit.add(x)
            x = S(x)
        assert len(orbit) == 3 * 2 ** (n - 1)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_conjugated_odometer(seed):
    x = random_automorphism(random.Random(seed), 3)
    assert verify_spherical_transitivity(conjugate(S, x), x(""), 4)


def test_odometer_about_other_vertex():
    s = make_spherically_transitive("12", 3)
    assert s("12") == "12"
    assert verify_spherical_transitivity(s, "12", 4)


# ---------------------------------------------------------------------------
# families


def test_family_memberships():
    assert families(S)["Ts"] and not families(S)["H"]
    assert families(T)["H"] and not any(v for k, v in families(T).items() if k != "H")
    f = families(make_type_nP("", spec("2:12"), "1"))
    assert f["P2"] and not f["Ts"] and not f["H"]


def test_family_relations():
    # hyperbolics meet no elliptic family; spherically transitive elements have no type n >= 2
    samples = [S, conjugate(S, T), T, T ** 2, conjugate(T, S)]
    samples += [make_type_nP("", t, None if t.n == 1 else A.sphere("", t.n - 1, 3)[0])
                for n in (1, 2, 3) for t in all_type_specs(3, n)]
    for g in samples:
        f = families(g)
        if f["H"]:
            assert not (f["Ts"] or f["P1"] or f["P2"] or f["P3"])
        if f["Ts"]:
            assert f["P1"] and not f["P2"] and not f["P3"]


def test_family_invariance_under_conjugation():
    rng = random.Random(5)
    for name in ["odometer", "translation", "type:1:12", "type:2:12/1"]:
        g = parse_element(name)
        x = random_automorphism(rng, 3, moves=2)
        assert families(conjugate(g, x)) == families(g)


# ---------------------------------------------------------------------------
# generation


def test_vertex_transitivity_small_cases():
    c = vertex_transitivity_witness(T, S, "")
    assert len(c.word) == 0
    for x in A.neighbors("", 3):
        c = vertex_transitivity_witness(T, S, x)
        assert c.element("") == x
        assert evaluate_hs(c.word, T, S)("") == x


def test_vertex_transitivity_ball():
    for x in A.ball("", 4, 3):
        c = vertex_transitivity_witness(T, S, x)
        assert c.element("") == x
        assert evaluate_hs(c.word, T, S)("") == x


@pytest.mark.parametrize("d", [3, 4])
def test_vertex_transitivity_off_axis(d):
    # s fixes a vertex off the axis of h
    v = "3"
    s = make_spherically_transitive(v, d)
    h = make_hyperbolic_translation(d)
    for x in A.ball(v, 3, d):
        c = vertex_transitivity_witness(h, s, x, v)
        assert c.element(v) == x
        assert evaluate_hs(c.word, h, s)(v) == x


def test_stabilizer_identity_and_supply():
    sup = default_supply(3, 4)
    c = stabilizer_approximation(Identity(3), sup, 4, S)
    assert len(c.word) == 0
    for t, g in sup.items():
        c = stabilizer_approximation(g, sup, t.n, S)
        assert c.element.agrees_with(g, t.n)


def test_stabilizer_random():
    sup = default_supply(3, 4)
    specs = sorted(sup, key=lambda t: (t.n, t.blocks))
    ops_vals = [sup[t] for t in specs] + [S]
    rng = random.Random(2)
    for _ in range(5):
        k = random_stabilizer_element(rng, 3, 4)
        c = stabilizer_approximation(k, sup, 4, S)
        assert c.element.agrees_with(k, 4)
        from invgen.treeaut import tree_ops
        from invgen.words import evaluate

        assert evaluate(c.word, ops_vals, tree_ops(3)).agrees_with(k, 4)


def test_stabilizer_d4():
    s = make_spherically_transitive("", 4)
    sup = default_supply(4, 3)
    k = random_stabilizer_element(random.Random(9), 4, 3)
    assert stabilizer_approximation(k, sup, 3, s).element.agrees_with(k, 3)


def test_stabilizer_supply_incomplete():
    sup = default_supply(3, 4)
    missing = {t: g for t, g in sup.items() if t.shape() != (3,)}
    k = make_type_nP("", spec("1:123"))
    with pytest.raises(SupplyIncomplete):
        stabilizer_approximation(k, missing, 2, S)
    no_level = {t: g for t, g in sup.items() if t.n != 3}
    with pytest.raises(SupplyIncomplete):
        stabilizer_approximation(k, no_level, 3, S)


def test_stabilizer_depth_exhausted():
    k = random_stabilizer_element(random.Random(1), 3, 3).restrict(2)
    with pytest.raises(DepthExhausted):
        stabilizer_approximation(k, default_supply(3, 4), 4, S)

import json
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from invgen.errors import NoRealRoot, NotUnimodular, PreconditionViolation, TrialsExhausted, ZeroElement
from invgen.matgrp import (
    Borderline,
    Elliptic,
    GaussianRational,
    Hyperbolic,
    Mat2,
    ParabolicCentral,
    ParabolicShear,
    Sl2LieElem,
    borel_conjugator,
    borel_discriminant,
    classify_key,
    eigenvalues,
    exp_sl2,
    extend_free_tuple,
    invariant_plane,
    lie_classify,
    mat_from_json,
    mat_ops,
    max_diff,
    plane_residual,
    psl_equal,
    random_sl2_rational,
    sl2_classify,
    spectrum_of_words,
)
from invgen.words import evaluate, free_up_to, parse_word

small = st.integers(-6, 6)


def rand_sl2(rng, height=5):
    return random_sl2_rational(rng, height)


# --- Mat2 plumbing

def test_mat2_arithmetic_exact():
    g = Mat2(2, 1, 1, 1)
    assert (g * g.inverse()).is_identity()
    h = Mat2(F(1, 2), 3, 0, 2)
    assert h.det() == 1
    assert h.inverse() == Mat2(2, -3, 0, F(1, 2))
    assert Mat2(2, 0, 0, 4).inverse() == Mat2(F(1, 2), 0, 0, F(1, 4))


def test_mat2_json_round_trip():
    m = Mat2(F(1, 3), -2, 0, 3)
    doc = json.loads(json.dumps(m.to_json()))
    assert doc == [["1/3", -2], [0, 3]]
    assert mat_from_json(doc) == m


def test_gaussian_rational_field_ops():
    i = GaussianRational(0, 1)
    assert i * i == -1
    z = GaussianRational(F(1, 2), 3)
    assert (z / z) == 1
    assert z * z.conjugate() == z.norm()


@pytest.mark.parametrize("p,q,expected", [
    (Mat2(1, 2, 3, 7), Mat2(-1, -2, -3, -7), True),
    (Mat2.identity(), Mat2(1, 0, 0, -1), False),
    (Mat2(2, 0, 0, 2), Mat2.identity(), True),
    (Mat2(2.0, 1.0, 1.0, 1.0), Mat2(-2.0, -1.0, -1.0, -1.0), True),
])
def test_psl_equal(p, q, expected):
    assert psl_equal(p, q) is expected


# --- sl2_classify

def test_classify_examples():
    cls, X = sl2_classify(Mat2.diag(2, F(1, 2)))
    assert cls == Hyperbolic(2) and X.is_identity()
    cls, X = sl2_classify(Mat2(1, 1, 0, 1))
    assert cls == ParabolicShear(1, 1)
    cls, X = sl2_classify(Mat2(0, -1, 1, 0))
    assert cls == Elliptic(0, 1)
    assert cls.canonical() == Mat2(0, -1, 1, 0)
    assert X.is_identity()
    cls, X = sl2_classify(Mat2(2.0, 1.0, 1.0, 1.0))
    assert cls.kind == "Hyperbolic"
    assert cls.lam == pytest.approx((3 + math.sqrt(5)) / 2)
    assert max_diff(X.inverse() * Mat2(2.0, 1.0, 1.0, 1.0) * X, cls.canonical()) < 1e-10


@pytest.mark.parametrize("g,expected", [
    (Mat2(1, 0, 0, 1), ParabolicCentral(1)),
    (Mat2(-1, 0, 0, -1), ParabolicCentral(-1)),
    (Mat2(1, 1, 0, 1), ParabolicShear(1, 1)),
    (Mat2(1, -1, 0, 1), ParabolicShear(-1, 1)),
    (Mat2(-1, 1, 0, -1), ParabolicShear(1, -1)),
    (Mat2(-1, -1, 0, -1), ParabolicShear(-1, -1)),
    (Mat2(1, 0, 1, 1), ParabolicShear(-1, 1)),
])
def test_six_parabolic_forms(g, expected):
    cls, X = sl2_classify(g)
    assert cls == expected
    assert X.inverse() * g * X == cls.canonical()
    assert X.det() == 1


def test_parabolic_signs_are_not_conjugate():
    # (1 1; 0 1) and (1 -1; 0 1) are not conjugate in SL2(R): no real
    # X with X^-1 (1 1; 0 1) X = (1 -1; 0 1) exists, which we check with sympy
    x, y, z, w = sympy.symbols("x y z w", real=True)
    X = sympy.Matrix([[x, y], [z, w]])
    A, B = sympy.Matrix([[1, 1], [0, 1]]), sympy.Matrix([[1, -1], [0, 1]])
    eqs = list(A * X - X * B) + [x * w - y * z - 1]
    assert sympy.solve(eqs, [x, y, z, w], dict=True) == []


def test_classify_rejects_non_unimodular():
    with pytest.raises(NotUnimodular):
        sl2_classify(Mat2(2, 0, 0, 1))
    with pytest.raises(NotUnimodular):
        sl2_classify(Mat2(1.0, 1e-9, 0.0, 1.0 + 1e-9))


def test_borderline_double():
    cls, X = sl2_classify(Mat2(1.0, 1.0, 0.0, 1.0))
    assert cls == Borderline(2.0) and X is None


def _numpy_classify(g: Mat2):
    # oracle: eigen-decomposition on floats
    m = np.array([[float(g.a), float(g.b)], [float(g.c), float(g.d)]])
    ev = np.linalg.eigvals(m)
    return ev


@pytest.mark.parametrize("seed", range(5))
def test_classify_against_numpy(seed):
    rng = random.Random(seed)
    for _ in range(100):
        g = rand_sl2(rng)
        cls, X = sl2_classify(g)
        ev = _numpy_classify(g)
        t = g.trace()
        assert (cls.kind == "Hyperbolic") == (t * t > 4)
        assert (cls.kind == "Elliptic") == (t * t < 4)
        if cls.kind == "Hyperbolic":
            assert max(abs(ev)) == pytest.approx(abs(float(cls.lam)))
        if cls.kind == "Elliptic":
            assert np.all(np.abs(np.abs(ev) - 1) < 1e-9)
            assert cls.cos_theta == F(t, 2)
        assert X.det() == 1 if X.is_exact() else abs(X.det() - 1) < 1e-12
        assert max_diff(X.inverse() * g * X, cls.canonical()) < 1e-10
        if X.is_exact() and cls.kind != "Elliptic":
            assert X.inverse() * g * X == cls.canonical()


@pytest.mark.parametrize("seed", range(3))
def test_classify_conjugation_invariant(seed):
    rng = random.Random(100 + seed)
    for _ in range(100):
        g, h = rand_sl2(rng), rand_sl2(rng)
        assert classify_key(sl2_classify(h.inverse() * g * h)[0]) == classify_key(sl2_classify(g)[0])


def test_elliptic_sign_is_the_invariant():
    # rotations by theta and -theta share the trace but not the class
    c1, _ = sl2_classify(Mat2(0, -1, 1, 0))
    c2, _ = sl2_classify(Mat2(0, 1, -1, 0))
    assert c1.cos_theta == c2.cos_theta and c1.sin_sign == -c2.sin_sign


# --- Lie algebra

def test_lie_examples():
    o = lie_classify(Sl2LieElem(1, 0, 0))
    assert o.kind == "Split" and o.orbit.t == 1 and o.conjugator.is_identity()
    o = lie_classify(Sl2LieElem(0, 1, 0))
    assert o.kind == "Nilpotent" and o.conjugator.is_identity()
    o = lie_classify(Sl2LieElem(0, 2, -2))
    assert o.kind == "Rotation" and o.orbit.theta == 2 and o.conjugator.is_identity()


def test_lie_zero():
    with pytest.raises(ZeroElement):
        lie_classify(Sl2LieElem(0, 0, 0))


@given(small, small, small)
@settings(max_examples=40, deadline=None)
def test_lie_conjugator_exact(a, b, c):
    X = Sl2LieElem(a, b, c)
    if X.is_zero():
        return
    o = lie_classify(X)
    C = o.conjugator
    assert sympy.simplify(C.det() - 1) == 0
    disc = a * a + b * c
    assert o.kind == ("Split" if disc > 0 else "Nilpotent" if disc == 0 else "Rotation")
    M = C.inverse() * X.matrix() * C - o.orbit.canonical()
    assert all(sympy.simplify(e) == 0 for e in M.entries())


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=60)
def test_lie_conjugator_double(a, b, c):
    X = Sl2LieElem(a, b, c)
    if abs(a * a + b * c) < 1e-3 or max(abs(a), abs(b), abs(c)) < 1e-3:
        return
    o = lie_classify(X)
    C = o.conjugator
    assert abs(C.det() - 1) < 1e-10
    assert max_diff(C.inverse() * X.matrix() * C, o.orbit.canonical()) < 1e-8 * max(1, C.max_abs() ** 2)


def test_exp_canonical_forms():
    assert exp_sl2(Sl2LieElem(1, 0, 0)) == Mat2.diag(math.e, 1 / math.e)
    assert exp_sl2(Sl2LieElem(0, 1, 0)) == Mat2(1, 1, 0, 1)
    t = math.pi / 2
    R = exp_sl2(Sl2LieElem(0, t, -t))
    assert R == Mat2(math.cos(t), math.sin(t), -math.sin(t), math.cos(t))
    assert max_diff(R, Mat2(0, 1, -1, 0)) < 1e-15
    assert exp_sl2(Sl2LieElem(0, 0, 0)).is_identity()


def test_exp_against_scipy():
    import scipy.linalg

    rng = random.Random(3)
    for _ in range(50):
        X = Sl2LieElem(*(rng.uniform(-2, 2) for _ in range(3)))
        E = exp_sl2(X)
        ref = scipy.linalg.expm(np.array([[X.a, X.b], [X.c, -X.a]]))
        assert np.max(np.abs(np.array(E.rows, dtype=float) - ref)) < 1e-10


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-1, 1), st.floats(-1, 1))
@settings(max_examples=80)
def test_exp_one_parameter_law(a, b, c, s, t):
    X = Sl2LieElem(a, b, c)
    lhs = exp_sl2(X.scaled(s + t))
    rhs = exp_sl2(X.scaled(s)) * exp_sl2(X.scaled(t))
    assert max_diff(lhs, rhs) < 1e-10
    assert abs(lhs.det() - 1) < 1e-12 * max(1, lhs.max_abs() ** 2)


# --- spectra

def test_spectrum_examples():
    r = spectrum_of_words([Mat2.diag(2, F(1, 2))], 3)
    assert r.real_values == {2, 4, 8, F(1, 2), F(1, 4), F(1, 8), 1}
    assert r.circle_values() == {1}
    assert not r.other
    t = 1.0
    w = Mat2(0, math.exp(-t), -math.exp(t), 0)
    r = spectrum_of_words([w], 1, include_identity=False)
    assert r.unit_values == {1j, -1j}
    r = spectrum_of_words([Mat2(1, 1, 0, 1), Mat2.diag(3, F(1, 3))], 4)
    assert not r.unit_values and not r.other


def test_spectrum_other_bucket_for_non_unimodular():
    r = spectrum_of_words([Mat2(0, -2, 2, 0)], 1, include_identity=False)
    assert r.other == {2j, -2j, 0.5j, -0.5j}


@pytest.mark.parametrize("seed", range(3))
def test_eigenvalues_match_numpy(seed):
    rng = random.Random(seed)
    for _ in range(50):
        g = rand_sl2(rng)
        kind, vals = eigenvalues(g)
        ref = sorted(np.linalg.eigvals(np.array(g.to_float().rows, dtype=float)), key=lambda z: (z.real, z.imag))
        got = sorted((complex(v) for v in vals), key=lambda z: (z.real, z.imag))
        assert np.allclose(got, ref, atol=1e-8)


# --- Borel

def test_borel_examples():
    x, B = borel_conjugator(Mat2(1, 0, 5, 1))
    assert x == "swap" and B == Mat2(1, -5, 0, 1)
    x, B = borel_conjugator(Mat2(2, 1, 1, 1))
    assert x * x - x - 1 == pytest.approx(0, abs=1e-12)
    assert abs(B.c) < 1e-10
    with pytest.raises(NoRealRoot):
        borel_conjugator(Mat2(0, -1, 1, 0))
    x, B = borel_conjugator(Mat2(0, -1, 1, 0), "complex")
    assert x in (GaussianRational(0, 1), GaussianRational(0, -1))
    assert B.c == 0


@given(small, small, small, small)
def test_borel_exact_when_rational(a, b, c, d):
    A = Mat2(a, b, c, d)
    if A.det() == 0:
        return
    disc = borel_discriminant(A)
    try:
        x, B = borel_conjugator(A, "real")
    except NoRealRoot:
        assert disc < 0
        return
    assert disc >= 0
    if B.is_exact():
        assert B.c == 0
    else:
        assert abs(B.c) < 1e-10
    # conjugation keeps trace and determinant
    assert abs(complex(B.trace()) - complex(A.trace())) < 1e-9
    assert abs(complex(B.det()) - complex(A.det())) < 1e-9


# --- invariant planes

def test_plane_examples():
    rot = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float)
    q, branch = invariant_plane(rot)
    assert branch == "complex"
    assert np.allclose(np.abs(q[2:]), 0)
    q, branch = invariant_plane(np.diag([2.0, 3.0, 5.0]))
    assert branch == "real"
    assert np.allclose(np.abs(q), np.eye(3)[:, :2])
    q, _ = invariant_plane(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert abs(np.linalg.det(q)) == pytest.approx(1)


@pytest.mark.parametrize("seed", range(20))
def test_plane_residual(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    g = rng.normal(size=(n, n))
    q, _ = invariant_plane(g)
    assert q.shape == (n, 2)
    assert plane_residual(g, q) < 1e-10 * max(1, np.abs(g).max())
    assert abs(np.linalg.det(q.T @ q)) > 0.5


# --- freeness

def test_sanov_pair_free_up_to_ten():
    A, B = Mat2(1, 2, 0, 1), Mat2(1, 0, 2, 1)
    cert = free_up_to([A, B], 10, mat_ops(projective=True))
    assert cert.is_free and cert.words_checked == 2 * (3 ** 10 - 1)


def test_relation_for_repeated_element():
    g = Mat2(2, 1, 1, 1)
    cert = free_up_to([g, g], 2, mat_ops())
    assert str(cert.relation) == "x1 x2^-1"


def test_modular_generators_have_relation():
    # S = (0 -1; 1 0), T = (1 1; 0 1): (ST)^3 = -I, S^2 = -I
    S, T = Mat2(0, -1, 1, 0), Mat2(1, 1, 0, 1)
    ops = mat_ops(projective=True)
    cert = free_up_to([S, T], 6, ops)
    assert cert.orders == (2, 0)
    assert cert.relation is not None
    assert ops.is_identity(evaluate(cert.relation, [S, T], ops))


def test_extend_free_tuple_examples():
    g, cert = extend_free_tuple([Mat2(1, 2, 0, 1)], Mat2(1, 0, 2, 1), 8, seed=0)
    assert g.det() == 1 and cert.is_free
    g, cert = extend_free_tuple([], Mat2(2, 1, 1, 1), 4, seed=0)
    assert cert.is_free
    with pytest.raises(PreconditionViolation):
        extend_free_tuple([Mat2(1, 2, 0, 1)], Mat2(-1, 0, 0, -1), 4, seed=0)


def test_extend_free_tuple_exhausts_on_central_target():
    # -I commutes with everything, so x1 x2 x1^-1 x2^-1 vanishes in every trial
    T = Mat2(1, 1, 0, 1)
    with pytest.raises(TrialsExhausted) as info:
        extend_free_tuple([T], Mat2(-1, 0, 0, -1), 4, trials=3, seed=0, projective=False)
    assert info.value.details["count"] == 3
    rel = parse_word(info.value.details["relation"])
    assert evaluate(rel, [T, Mat2(-1, 0, 0, -1)], mat_ops()).is_identity()

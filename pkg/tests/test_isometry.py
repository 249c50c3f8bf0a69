import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cherbolic.domains import CASES
from cherbolic.errors import IdentityElement, NonPositivePolar, NotAnIsometry
from cherbolic.groups import FAMILIES, sporadic_group
from cherbolic.isometry import (
    Isometry,
    Tag,
    classify_isometry,
    complex_reflection,
    fixed_geodesics,
    fixed_points,
    order_by_eigenvalues,
    order_by_powering,
    proj_equal,
    projective_order,
)
from cherbolic.linalg import OMEGA, STANDARD_FORM, basis, herm_inner
from cherbolic.plane import PointClass, projective_distance

TAU1 = FAMILIES["tau1"].params[0]


def test_reflection_matches_sporadic_generator():
    for p in (3, 4, 6):
        g = sporadic_group(p, TAU1)
        r = complex_reflection(basis(0), p, g.form)
        u = cmath.exp(2j * math.pi / (3 * p))
        expected = np.array(
            [[u**2, TAU1, -u * TAU1.conjugate()], [0, u.conjugate(), 0], [0, 0, u.conjugate()]]
        )
        np.testing.assert_allclose(r.matrix, expected, atol=1e-12)
        np.testing.assert_allclose(g["1"].matrix, expected, atol=1e-12)


@pytest.mark.parametrize("p", [2, 3, 4, 5, 6, 8, 10, 12])
def test_reflection_order_and_spectrum(p):
    r = complex_reflection(basis(0), p, STANDARD_FORM)
    assert projective_order(r) == p
    u = cmath.exp(2j * math.pi / (3 * p))
    ev = sorted(np.linalg.eigvals(r.matrix), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    want = sorted([u**2, u.conjugate(), u.conjugate()], key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    np.testing.assert_allclose(ev, want, atol=1e-9)
    np.testing.assert_allclose(r(basis(0)), u**2 * basis(0), atol=1e-12)


def test_reflection_needs_positive_polar():
    with pytest.raises(NonPositivePolar):
        complex_reflection(basis(2), 3, STANDARD_FORM)


def test_isometry_check_rejects_non_isometries():
    with pytest.raises(NotAnIsometry):
        Isometry.checked(2 * np.eye(3), STANDARD_FORM)
    with pytest.raises(NotAnIsometry):
        Isometry.checked(np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), STANDARD_FORM)


def test_projective_equality(tau1_p3):
    m = tau1_p3.eval("1 2 3'")
    assert proj_equal(m, Isometry(OMEGA * m.matrix, m.form))
    assert not proj_equal(m, Isometry(2 * m.matrix, m.form))
    assert not proj_equal(m, Isometry(-m.matrix, m.form))
    assert proj_equal(tau1_p3.eval("123123123"), tau1_p3.eval("1J"))


word_text = st.lists(st.sampled_from(["1", "2", "3", "J", "1'", "2'", "3'", "J'"]), max_size=8).map(" ".join)


@given(word_text, st.sampled_from([1, OMEGA, OMEGA**2]), st.sampled_from([1, OMEGA, OMEGA**2]))
def test_projective_equality_is_an_equivalence(text, a, b):
    g = FAMILIES["tau1"].build(4)
    m = g.eval(text)
    x, y = Isometry(a * m.matrix, g.form), Isometry(b * m.matrix, g.form)
    assert proj_equal(m, m)
    assert proj_equal(x, y) and proj_equal(y, x)
    assert proj_equal(m, x) and proj_equal(x, y) and proj_equal(m, y)


def test_classification_examples(tau1_p3, tau1_p6):
    assert classify_isometry(tau1_p3["J"]).tag is Tag.REGULAR_ELLIPTIC
    r1 = classify_isometry(tau1_p3["1"])
    assert r1.tag is Tag.COMPLEX_REFLECTION and r1.reflection_kind == "line"
    assert classify_isometry(Isometry.identity(STANDARD_FORM)).tag is Tag.IDENTITY
    w = {q.name: q.word for q in CASES["tau1"].pairings}
    g521 = tau1_p6.eval(f"({w['g5']}) ({w['g2']}) ({w['g1']})")
    assert classify_isometry(g521).tag is Tag.ELLIPTO_PARABOLIC


def test_loxodromic_has_two_null_fixed_points(tau1_p3):
    m = tau1_p3.eval("1 2 3'")
    assert classify_isometry(m).tag is Tag.LOXODROMIC
    classes = sorted(f.point.cls.value for f in fixed_points(m))
    assert classes == ["Null", "Null", "Positive"]
    assert projective_order(m) is None


def test_orders(tau1_p3):
    assert projective_order(Isometry.identity(tau1_p3.form)) == 1
    assert projective_order(tau1_p3.eval("P")) == 8
    assert projective_order(tau1_p3["J"]) == 3
    assert projective_order(tau1_p3.eval("1 2")) is None


@given(word_text)
def test_order_routes_agree(text):
    g = FAMILIES["tau2"].build(4)
    m = g.eval(text)
    assert order_by_powering(m, 200) == order_by_eigenvalues(m, 200)


def test_reflection_fixed_points():
    r = complex_reflection(basis(0), 5, STANDARD_FORM)
    with pytest.raises(IdentityElement):
        fixed_points(Isometry.identity(STANDARD_FORM))
    pts = fixed_points(r)
    dims = sorted(f.eigenspace_dim for f in pts)
    assert dims == [1, 2, 2]
    (line,) = fixed_geodesics(r)
    assert projective_distance(line.polar, basis(0)) < 1e-12


def test_tau2_pairing_fixes_a_point_of_the_first_mirror():
    g = FAMILIES["tau2"].build(3)
    m = g.eval("2 3 2' P P")
    inside = [f.point for f in fixed_points(m) if f.point.cls is PointClass.NEGATIVE]
    assert len(inside) == 1
    assert abs(herm_inner(inside[0].lift, g.polar(1), g.form)) < 1e-9
    assert proj_equal(m**2, g.eval("1'"))


@pytest.mark.parametrize("case", ["tau1", "tau2", "tau4"])
def test_elements_preserving_the_first_mirror_commute_with_its_reflection(case):
    spec = CASES[case]
    p = spec.lattice_p[0]
    g = FAMILIES[spec.family].build(p)
    r1 = g["1"]
    for q in spec.pairings:
        m = g.eval(q.word)
        image = m(g.polar(1))
        assert projective_distance(image, g.polar(1)) < 1e-9
        assert proj_equal(m @ r1, r1 @ m)

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cherbolic.errors import NotHermitian
from cherbolic.groups import sporadic_group
from cherbolic.linalg import (
    STANDARD_FORM,
    HermitianForm,
    basis,
    box_product,
    eigen3,
    eigenvalues3,
    eigenspaces,
    form_signature,
    herm_inner,
)

from .conftest import complexes, vectors

TAU1 = complex(-1, math.sqrt(2))


def test_inner_on_standard_form():
    e3 = basis(2)
    assert herm_inner(e3, e3, STANDARD_FORM) == pytest.approx(-1)
    assert herm_inner(np.array([1, 2j, 3]), np.zeros(3), STANDARD_FORM) == 0


def test_inner_convention_conjugates_second_argument():
    z = np.array([1j, 0, 0])
    w = np.array([1, 0, 0])
    # <z,w> = conj(w)^T H z
    assert herm_inner(z, w, STANDARD_FORM) == pytest.approx(1j)
    assert herm_inner(w, z, STANDARD_FORM) == pytest.approx(-1j)


def test_sporadic_diagonal_entry():
    g = sporadic_group(3, TAU1)
    assert herm_inner(basis(0), basis(0), g.form) == pytest.approx(3.0, abs=1e-12)


@given(vectors, vectors)
def test_inner_is_conjugate_symmetric(z, w):
    a = herm_inner(z, w, STANDARD_FORM)
    b = herm_inner(w, z, STANDARD_FORM)
    assert abs(a - b.conjugate()) <= 1e-9 * (1 + abs(a))


@given(vectors, vectors, complexes)
def test_inner_is_linear_in_first_argument(z, w, c):
    lhs = herm_inner(c * z, w, STANDARD_FORM)
    rhs = c * herm_inner(z, w, STANDARD_FORM)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))


def test_box_product_of_equal_vectors_vanishes():
    a = np.array([1, 2 - 1j, 0.5j])
    assert np.allclose(box_product(a, a, STANDARD_FORM), 0)


def test_box_product_standard_basis():
    # row cross product of e1 H = e1 and e2 H = e2
    assert np.allclose(box_product(basis(0), basis(1), STANDARD_FORM), [0, 0, 1])


def test_box_product_matches_displayed_vertex_formula():
    g = sporadic_group(3, TAU1)
    h = g.form.matrix
    a, b = h[0, 0].real, h[0, 1]
    expected = np.array([a * a - abs(b) ** 2, b * b - a * b.conjugate(), b.conjugate() ** 2 - a * b])
    got = box_product(basis(1), basis(2), g.form)
    assert np.allclose(got, expected, atol=1e-12)


@given(vectors, vectors)
def test_box_product_is_orthogonal_to_both_factors(a, b):
    z = box_product(a, b, STANDARD_FORM)
    scale = (1 + np.linalg.norm(a)) ** 2 * (1 + np.linalg.norm(b)) ** 2
    assert abs(herm_inner(z, a, STANDARD_FORM)) <= 1e-9 * scale
    assert abs(herm_inner(z, b, STANDARD_FORM)) <= 1e-9 * scale


@pytest.mark.parametrize(
    "diag, expected",
    [((1, 1, -1), (2, 1, 0)), ((1, 1, 1), (3, 0, 0)), ((-2, 0, 5), (1, 1, 1)), ((-1, -1, -1), (0, 3, 0))],
)
def test_signature_of_diagonal_forms(diag, expected):
    assert tuple(form_signature(np.diag(diag))) == expected


def test_signature_of_sporadic_form():
    assert tuple(form_signature(sporadic_group(3, TAU1).form.matrix)) == (2, 1, 0)


def test_non_hermitian_matrix_is_rejected():
    with pytest.raises(NotHermitian):
        form_signature(np.array([[1, 2, 0], [0, 1, 0], [0, 0, -1]], dtype=complex))
    with pytest.raises(NotHermitian):
        HermitianForm(np.array([[1, 1j, 0], [1j, 1, 0], [0, 0, -1]]))


def test_eigenvalues_of_identity_and_diagonal():
    assert np.allclose(sorted(eigenvalues3(np.eye(3)), key=abs), [1, 1, 1])
    vals = sorted(eigenvalues3(np.diag([2, 3, 5])), key=lambda z: z.real)
    assert np.allclose(vals, [2, 3, 5])


def test_eigenpairs_of_diagonal_are_standard_basis():
    for pair in eigen3(np.diag([2.0, 3.0, 5.0])):
        k = int(np.argmax(np.abs(pair.vector)))
        assert pair.value == pytest.approx([2, 3, 5][k])
        assert abs(abs(pair.vector[k]) - np.linalg.norm(pair.vector)) < 1e-12


def test_eigenvalues_of_cyclic_permutation():
    j = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    w = cmath.exp(2j * math.pi / 3)
    vals = eigenvalues3(j)
    for target in (1, w, w * w):
        assert min(abs(v - target) for v in vals) < 1e-12


unitary_like = st.lists(st.floats(-3, 3), min_size=18, max_size=18)


@given(unitary_like)
def test_eigen3_residuals_against_numpy(entries):
    m = (np.array(entries[:9]) + 1j * np.array(entries[9:])).reshape(3, 3)
    oracle = np.linalg.eigvals(m)
    pairs = eigen3(m)
    norm = max(np.linalg.norm(m), 1.0)
    for pair in pairs:
        r = np.linalg.norm(m @ pair.vector - pair.value * pair.vector)
        assert r <= 1e-6 * norm * np.linalg.norm(pair.vector)
        assert min(abs(pair.value - o) for o in oracle) <= 1e-5 * norm


def test_repeated_eigenvalue_is_accurate():
    # a reflection-like matrix with a double eigenvalue
    g = sporadic_group(4, TAU1)
    spaces = eigenspaces(g["1"].matrix)
    dims = sorted(len(s.basis) for s in spaces)
    assert dims == [1, 2]
    u = cmath.exp(2j * math.pi / 12)
    double = next(s for s in spaces if len(s.basis) == 2)
    assert abs(double.value - u.conjugate()) < 1e-12

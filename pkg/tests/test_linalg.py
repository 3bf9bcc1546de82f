import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geoqm import linalg as la
from geoqm.linalg import ValidationError


def test_tensor_identity():
    t = la.tensor_product(np.eye(3), np.eye(3))
    assert t.dims == (3, 3)
    assert np.array_equal(t.matrix, np.eye(9))


def test_tensor_basis_projectors():
    t = la.tensor_product(np.diag([1, 0, 0]), np.diag([0, 1, 0])).matrix
    expected = np.zeros((9, 9))
    expected[1, 1] = 1
    assert np.array_equal(t, expected)


def test_tensor_trace_factorizes(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    t = la.tensor_product(a, b).matrix
    assert np.trace(t) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


def test_tensor_rejects_non_square():
    with pytest.raises(ValidationError):
        la.tensor_product(np.ones((2, 3)), np.eye(3))


def test_partial_trace_product(rng):
    s1, s2 = la.random_density(3, rng), la.random_density(4, rng)
    x = la.tensor_product(s1, s2)
    assert np.allclose(la.partial_trace(x, "K"), s1, atol=1e-12)
    assert np.allclose(la.partial_trace(x, "H"), s2, atol=1e-12)


def test_partial_trace_identity():
    assert np.allclose(la.partial_trace(np.eye(12), "K", (3, 4)), 4 * np.eye(3))


def test_partial_trace_maximally_entangled():
    phi = la.maximally_entangled(3)
    assert np.allclose(la.partial_trace(la.projector(phi), "K", (3, 3)), np.eye(3) / 3, atol=1e-15)


def test_partial_trace_duality_on_basis(rng):
    n, m = 3, 4
    x = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    red = la.partial_trace(x, "K", (n, m))
    for b in la.hermitian_basis(n):
        assert np.trace(red @ b) == pytest.approx(np.trace(x @ np.kron(b, np.eye(m))), abs=1e-12)


def test_partial_trace_needs_dims():
    with pytest.raises(ValidationError):
        la.partial_trace(np.eye(9), "K")


def test_partial_transpose_maximally_entangled_spectrum():
    pt = la.partial_transpose(la.projector(la.maximally_entangled(3)), (3, 3))
    w = np.linalg.eigvalsh(pt)
    assert w[0] == pytest.approx(-1 / 3, abs=1e-12)
    assert w[-1] == pytest.approx(1 / 3, abs=1e-12)


def test_hs_inner():
    assert la.hs_inner(np.eye(3), np.eye(3)) == pytest.approx(3)
    p = la.projector([1, 1j, 0])
    assert la.hs_inner(p, p) == pytest.approx(1)


def test_hs_inner_entrywise(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert la.hs_inner(a, b) == pytest.approx(np.sum(a.conj() * b), abs=1e-12)


def test_eigen_decomposition_descending():
    w, v = la.eigen_decomposition(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [3, 2, 1])
    assert np.allclose(np.abs(v), np.eye(3)[:, [0, 2, 1]])


def test_eigen_decomposition_projector():
    w, _ = la.eigen_decomposition(la.projector([1, 2, 3]))
    assert np.allclose(w, [1, 0, 0], atol=1e-12)


def test_eigen_decomposition_reconstructs(rng):
    a = la.random_hermitian(5, rng)
    w, v = la.eigen_decomposition(a)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) < 1e-12


def test_eigen_decomposition_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        la.eigen_decomposition(np.array([[0, 1], [0, 0]]))


def test_schmidt_product_vector(rng):
    psi = np.kron(la.random_state_vector(3, rng), la.random_state_vector(4, rng))
    s = la.schmidt_decomposition(psi, (3, 4))[0]
    assert s[0] == pytest.approx(1, abs=1e-12)
    assert np.all(s[1:] < 1e-10)


def test_schmidt_maximally_entangled():
    s = la.schmidt_decomposition(la.maximally_entangled(3), (3, 3))[0]
    assert np.allclose(s, [1 / np.sqrt(3)] * 3, atol=1e-12)


def test_schmidt_reconstructs(rng):
    psi = la.random_state_vector(12, rng)
    s, u, v = la.schmidt_decomposition(psi, (3, 4))
    rebuilt = sum(s[i] * np.kron(u[:, i], v[:, i]) for i in range(s.size))
    assert np.allclose(rebuilt, psi, atol=1e-12)
    assert np.allclose(s, np.linalg.svd(psi.reshape(3, 4), compute_uv=False), atol=1e-12)


def test_hermitian_basis_qubit():
    basis = la.hermitian_basis(2)
    assert len(basis) == 4
    assert np.allclose(basis[0], np.eye(2) / np.sqrt(2))
    assert all(abs(np.trace(g)) < 1e-15 for g in basis[1:])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_hermitian_basis_orthonormal(n):
    basis = la.hermitian_basis(n)
    gram = np.array([[la.hs_inner(a, b) for b in basis] for a in basis])
    assert np.allclose(gram, np.eye(n * n), atol=1e-12)
    assert all(la.is_hermitian(g) for g in basis)


def test_hermitian_expansion_roundtrip(rng):
    a = la.random_hermitian(4, rng)
    basis = la.hermitian_basis(4)
    c = la.hermitian_coefficients(a, basis)
    assert np.allclose(sum(ci * g for ci, g in zip(c, basis)), a, atol=1e-12)


def test_validation_errors():
    with pytest.raises(ValidationError):
        la.check_hermitian(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValidationError):
        la.check_density(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        la.check_density(np.eye(3))
    with pytest.raises(ValidationError):
        la.as_square(np.ones((2, 3)))


def test_bipartite_require_proper():
    assert la.BipartiteOperator(np.eye(9), (3, 3)).require_proper().dim == 9
    with pytest.raises(ValidationError):
        la.BipartiteOperator(np.eye(6), (2, 3)).require_proper()
    with pytest.raises(ValidationError):
        la.BipartiteOperator(np.eye(9), (3, 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(2, 4))
def test_partial_trace_preserves_trace(seed, n, m):
    r = np.random.default_rng(seed)
    x = r.standard_normal((n * m, n * m)) + 1j * r.standard_normal((n * m, n * m))
    t = np.trace(x)
    assert abs(np.trace(la.partial_trace(x, "K", (n, m))) - t) < 1e-9
    assert abs(np.trace(la.partial_trace(x, "H", (n, m))) - t) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_random_density_valid(seed, rank):
    d = la.random_density(5, np.random.default_rng(seed), rank)
    assert la.is_density(d)
    assert np.linalg.matrix_rank(d, tol=1e-10) == rank

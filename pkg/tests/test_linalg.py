"""Spectral helpers: ordering, matrix functions, norms, vectorization."""

import numpy as np
import pytest

from quasirel import (
    SpectralDomainError,
    eigh,
    eigvalsh_desc,
    hermitian_part,
    holder3_check,
    left_mult_matrix,
    mat_func,
    operator_norm,
    right_mult_matrix,
    trace_norm,
    unvec,
    vec,
)


def _rng(seed=0):
    return np.random.default_rng(seed)


def _random_hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def test_hermitian_part_symmetrizes_and_rejects():
    rng = _rng(1)
    h = _random_hermitian(4, rng)
    out = hermitian_part(h + 1e-14 * rng.standard_normal((4, 4)))
    np.testing.assert_allclose(out, out.conj().T)
    skew = np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(ValueError):
        hermitian_part(skew)


def test_eigh_descending_and_reconstructs():
    rng = _rng(2)
    for dim in (2, 3, 5, 8):
        h = _random_hermitian(dim, rng)
        vals, vecs = eigh(h)
        assert np.all(np.diff(vals) <= 0)
        np.testing.assert_allclose((vecs * vals) @ vecs.conj().T, h, atol=1e-12)
        np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(dim), atol=1e-12)
        np.testing.assert_allclose(eigvalsh_desc(h), vals)


def test_norms_match_known_values():
    x = np.diag([3.0, -1.0, 0.5])
    assert trace_norm(x) == pytest.approx(4.5)
    assert operator_norm(x) == pytest.approx(3.0)
    # unitary invariance
    rng = _rng(3)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u = np.linalg.qr(g)[0]
    assert trace_norm(u @ x @ u.conj().T) == pytest.approx(4.5)


def test_mat_func_agrees_with_series_identities():
    rng = _rng(4)
    h = _random_hermitian(4, rng)
    exp_h = mat_func(h, np.exp)
    np.testing.assert_allclose(mat_func(exp_h, np.log), h, atol=1e-10)
    np.testing.assert_allclose(
        mat_func(h, lambda v: v * v), h @ h, atol=1e-10
    )


def test_mat_func_rejects_out_of_domain():
    indefinite = np.diag([1.0, -2.0])
    with pytest.raises(SpectralDomainError):
        mat_func(indefinite, np.log)
    with pytest.raises(SpectralDomainError):
        mat_func(indefinite, np.sqrt)


def test_holder3_random_triples():
    rng = _rng(5)
    for _ in range(200):
        dim = int(rng.integers(2, 6))
        x, y, z = (_random_hermitian(dim, rng) for _ in range(3))
        check = holder3_check(x, y, z)
        assert check.ok
        assert check.lhs <= check.rhs + 1e-9
    # equality case: all three identity
    eye = np.eye(3)
    tight = holder3_check(eye, eye, eye)
    assert tight.lhs == pytest.approx(tight.rhs)


def test_vec_is_row_major_and_invertible():
    x = np.arange(9, dtype=float).reshape(3, 3)
    v = vec(x)
    np.testing.assert_array_equal(v[:3], x[0])
    np.testing.assert_array_equal(unvec(v, 3), x)


def test_mult_matrices_realize_products():
    rng = _rng(6)
    for _ in range(50):
        dim = int(rng.integers(2, 5))
        a = _random_hermitian(dim, rng)
        b = _random_hermitian(dim, rng)
        x = _random_hermitian(dim, rng)
        np.testing.assert_allclose(
            unvec(left_mult_matrix(a) @ vec(x), dim), a @ x, atol=1e-12
        )
        np.testing.assert_allclose(
            unvec(right_mult_matrix(b) @ vec(x), dim), x @ b, atol=1e-12
        )
        # the two actions commute, so the composites agree
        np.testing.assert_allclose(
            left_mult_matrix(a) @ right_mult_matrix(b),
            right_mult_matrix(b) @ left_mult_matrix(a),
            atol=1e-12,
        )

import numpy as np
import pytest
import scipy.sparse as sp

from grembed.errors import MalformedLineError, NoConvergenceError
from grembed.numerics import (
    AdamState,
    adam_step,
    child_rng,
    fix_signs,
    gershgorin_bound,
    jacobi_eigh,
    lanczos_largest,
    one_sided_jacobi_svd,
    read_dense_csv,
    seeded_rng,
    spectral_radius,
    symmetric_eigs_smallest,
    truncated_svd,
    write_dense_csv,
)


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0


def path_laplacian(n):
    main = np.full(n, 2.0)
    main[0] = main[-1] = 1.0
    return sp.diags([main, -np.ones(n - 1), -np.ones(n - 1)], [0, 1, -1], format="csr")


# Test the dense Jacobi eigensolver against numpy on many random matrices
def test_jacobi_eigh_matches_numpy_oracle():
    rng = seeded_rng(1)
    for trial in range(50):
        n = 1 + trial % 12
        a = random_symmetric(rng, n)
        result = jacobi_eigh(a)
        expected = np.linalg.eigvalsh(a)

        np.testing.assert_allclose(result.values, expected, atol=1e-8)
        residual = a @ result.vectors - result.vectors * result.values
        assert np.linalg.norm(residual) <= 1e-6
        np.testing.assert_allclose(result.vectors.T @ result.vectors, np.eye(n), atol=1e-10)


# Test that eigenvalues come back ascending with sign-normalized vectors
def test_jacobi_eigh_diagonal_and_signs():
    result = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(result.values, [1.0, 2.0, 3.0])
    for column in result.vectors.T:
        assert column[np.argmax(np.abs(column))] > 0


# Test that a non-square input is rejected
def test_jacobi_eigh_rejects_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))


# Test the sign convention helper
def test_fix_signs_makes_largest_entry_positive():
    vectors = np.array([[0.1, -0.2], [-0.9, 0.3]])
    fixed = fix_signs(vectors)
    np.testing.assert_array_equal(fixed[:, 0], [-0.1, 0.9])
    np.testing.assert_array_equal(fixed[:, 1], [-0.2, 0.3])


# Test the smallest eigenpairs of a path-graph Laplacian via the sparse Lanczos path
def test_symmetric_eigs_smallest_sparse_path_laplacian():
    n = 120
    laplacian = path_laplacian(n)
    result = symmetric_eigs_smallest(laplacian, 4, dense_threshold=16)

    # Closed form for the path Laplacian: 2 - 2 cos(pi k / n).
    expected = 2.0 - 2.0 * np.cos(np.pi * np.arange(4) / n)
    np.testing.assert_allclose(result.values, expected, atol=1e-8)
    residual = laplacian @ result.vectors - result.vectors * result.values
    assert np.linalg.norm(residual) <= 1e-6


# Test the dense and Lanczos paths agree on a random symmetric matrix
def test_symmetric_eigs_smallest_dense_and_lanczos_agree():
    a = random_symmetric(seeded_rng(5), 80)
    dense = symmetric_eigs_smallest(a, 5, dense_threshold=100)
    iterative = symmetric_eigs_smallest(a, 5, dense_threshold=10)

    np.testing.assert_allclose(iterative.values, dense.values, atol=1e-8)
    np.testing.assert_allclose(np.abs(iterative.vectors.T @ dense.vectors), np.eye(5), atol=1e-6)


# Test the preconditions of the eigensolver
def test_symmetric_eigs_smallest_preconditions():
    with pytest.raises(ValueError):
        symmetric_eigs_smallest(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(ValueError):
        symmetric_eigs_smallest(np.eye(3), 4)


# Test that Lanczos reports non-convergence when the basis cap is too small
def test_lanczos_raises_when_capped():
    a = random_symmetric(seeded_rng(2), 200)
    with pytest.raises(NoConvergenceError):
        lanczos_largest(lambda x: a @ x, 200, 6, max_dim=8, tol=1e-14, scale=gershgorin_bound(a))


# Test that Lanczos recovers repeated eigenvalues after a breakdown
def test_lanczos_handles_identity():
    values, vectors, size = lanczos_largest(lambda x: x.copy(), 30, 3)
    np.testing.assert_allclose(values, np.ones(3), atol=1e-10)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(3), atol=1e-8)
    assert size <= 30


# Test the one-sided Jacobi SVD against numpy on tall, wide and square matrices
def test_one_sided_jacobi_svd_matches_numpy_oracle():
    rng = seeded_rng(3)
    for trial in range(50):
        rows, cols = 1 + trial % 12, 1 + (trial * 7) % 12
        a = rng.standard_normal((rows, cols))
        result = one_sided_jacobi_svd(a)
        expected = np.linalg.svd(a, compute_uv=False)

        k = min(rows, cols)
        np.testing.assert_allclose(result.s[:k], expected, atol=1e-8)
        np.testing.assert_allclose(result.u[:, :k] * result.s[:k] @ result.v[:, :k].T, a, atol=1e-8)


# Test the Gram-Lanczos truncated SVD against the numpy optimum
def test_truncated_svd_lanczos_path():
    a = seeded_rng(4).standard_normal((90, 70))
    result = truncated_svd(a, 6, dense_threshold=10)
    u, s, vt = np.linalg.svd(a)

    np.testing.assert_allclose(result.s, s[:6], atol=1e-8)
    np.testing.assert_allclose(np.abs(result.u.T @ u[:, :6]), np.eye(6), atol=1e-6)
    np.testing.assert_allclose(a @ result.v, result.u * result.s, atol=1e-6)


# Test that both truncated SVD paths return the same sign-paired factors
def test_truncated_svd_paths_agree():
    a = seeded_rng(6).standard_normal((40, 30))
    dense = truncated_svd(a, 4, dense_threshold=64)
    iterative = truncated_svd(a, 4, dense_threshold=5)
    np.testing.assert_allclose(iterative.s, dense.s, atol=1e-8)
    np.testing.assert_allclose(iterative.u, dense.u, atol=1e-6)
    np.testing.assert_allclose(iterative.v, dense.v, atol=1e-6)


# Test the spectral radius of a bipartite graph, whose spectrum is symmetric
def test_spectral_radius_of_bipartite_star():
    star = np.zeros((5, 5))
    star[0, 1:] = star[1:, 0] = 1.0
    assert spectral_radius(star) == pytest.approx(2.0, abs=1e-9)


# Test the spectral radius on random non-negative matrices
def test_spectral_radius_matches_numpy():
    rng = seeded_rng(8)
    for _ in range(10):
        w = rng.random((15, 15))
        w = (w + w.T) / 2.0
        assert spectral_radius(w) == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(w))), rel=1e-8)


# Test one Adam step against the textbook recurrence
def test_adam_step_first_update():
    params = np.array([1.0, -2.0])
    grads = np.array([0.5, -0.25])
    updated, state = adam_step(params, grads, AdamState.zeros_like(params, lr=0.1))

    # After bias correction the first step moves every coordinate by lr * sign(grad).
    np.testing.assert_allclose(updated, params - 0.1 * np.sign(grads), atol=1e-6)
    assert state.t == 1
    np.testing.assert_allclose(state.m, 0.1 * grads)


# Test that Adam rejects mismatched shapes
def test_adam_step_shape_mismatch():
    with pytest.raises(ValueError):
        adam_step(np.zeros(3), np.zeros(2), AdamState.zeros_like(np.zeros(3)))


# Test that seeded streams are reproducible and child streams differ by index
def test_rng_streams():
    assert np.array_equal(seeded_rng(42).random(5), seeded_rng(42).random(5))
    assert np.array_equal(child_rng(42, 3).random(5), child_rng(42, 3).random(5))
    assert not np.array_equal(child_rng(42, 3).random(5), child_rng(42, 4).random(5))


# Test that dense matrices round-trip exactly through CSV
def test_dense_csv_round_trip(tmp_path):
    matrix = seeded_rng(9).standard_normal((4, 3)) * 1e-7
    path = str(tmp_path / "m.csv")
    write_dense_csv(path, matrix)
    assert np.array_equal(read_dense_csv(path), matrix)


# Test that a truncated matrix file is reported
def test_dense_csv_truncated(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("3,2\n1,2\n3,4\n")
    with pytest.raises(MalformedLineError):
        read_dense_csv(str(path))


# Test the smallest eigenpairs of a diagonal matrix
def test_symmetric_eigs_smallest_diagonal():
    result = symmetric_eigs_smallest(np.diag([1.0, 2.0, 3.0]), 2)
    np.testing.assert_array_equal(result.values, [1.0, 2.0])
    np.testing.assert_allclose(np.abs(result.vectors), np.eye(3)[:, :2])


# Test the truncated SVD of a rank-one matrix and of a diagonal matrix
def test_truncated_svd_small_examples():
    u = np.array([0.6, 0.8, 0.0])
    v = np.array([0.0, 1.0])
    result = truncated_svd(np.outer(u, v), 1)
    np.testing.assert_allclose(result.s, [1.0], atol=1e-12)
    np.testing.assert_allclose(np.abs(result.u[:, 0]), u, atol=1e-12)
    np.testing.assert_allclose(np.abs(result.v[:, 0]), v, atol=1e-12)

    np.testing.assert_allclose(truncated_svd(np.diag([3.0, 2.0, 1.0]), 2).s, [3.0, 2.0])


# Test that a zero gradient leaves parameters and moments unchanged
def test_adam_step_zero_gradient():
    params = np.array([0.5, -1.5])
    updated, state = adam_step(params, np.zeros(2), AdamState.zeros_like(params))
    np.testing.assert_array_equal(updated, params)
    np.testing.assert_array_equal(state.m, np.zeros(2))
    np.testing.assert_array_equal(state.v, np.zeros(2))


# Test the size of the first two Adam steps under a constant gradient
def test_adam_step_constant_gradient_magnitudes():
    params = np.array([0.0])
    state = AdamState.zeros_like(params, lr=0.001)
    first, state = adam_step(params, np.array([1.0]), state)
    second, state = adam_step(first, np.array([1.0]), state)

    assert 0.00099 < abs(first[0] - params[0]) <= 0.001
    assert abs(second[0] - first[0]) <= abs(first[0] - params[0]) + 1e-12

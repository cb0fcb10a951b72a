import logging
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from grembed.errors import NoConvergenceError
from grembed.numerics.rng import seeded_rng
from grembed.numerics.types import DenseMatrix, EigenResult, MatrixLike, SVDResult

# Problems at or below this order go straight to the dense Jacobi solvers.
DENSE_THRESHOLD = 64

_TINY = np.finfo(np.float64).tiny
_EPS = np.finfo(np.float64).eps

Operator = Callable[[np.ndarray], np.ndarray]


def fix_signs(vectors: DenseMatrix) -> DenseMatrix:
    """Flips each column so its largest-magnitude entry is positive (first such entry on ties)."""
    vectors = np.array(vectors, dtype=np.float64, copy=True)
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def jacobi_eigh(a: DenseMatrix, tol: float = 1e-14, max_sweeps: int = 100) -> EigenResult:
    """Full eigendecomposition of a dense symmetric matrix by cyclic Jacobi rotations.

    Args:
        a (DenseMatrix): Symmetric input; only its symmetric part is used.
        tol (float): Stop once the off-diagonal Frobenius norm falls below ``tol * ||a||_F``.
        max_sweeps (int): Cap on full sweeps over the upper triangle.

    Returns:
        EigenResult: All eigenpairs, ascending, with sign-normalized orthonormal vectors.

    Raises:
        NoConvergenceError: If the off-diagonal mass is still above tolerance after ``max_sweeps``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}")

    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), _TINY)

    for sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            logging.debug("Jacobi eigensolver converged after %d sweeps", sweep)
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= _TINY:
                    continue

                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                a[:, p] = c * col_p - s * a[:, q]
                a[:, q] = s * col_p + c * a[:, q]
                row_p = a[p, :].copy()
                a[p, :] = c * row_p - s * a[q, :]
                a[q, :] = s * row_p + c * a[q, :]
                vec_p = v[:, p].copy()
                v[:, p] = c * vec_p - s * v[:, q]
                v[:, q] = s * vec_p + c * v[:, q]
                a[p, q] = a[q, p] = 0.0
    else:
        raise NoConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigenResult(values=values[order], vectors=fix_signs(v[:, order]))


def _as_operator(m: MatrixLike) -> Operator:
    if sp.issparse(m):
        return lambda x: m @ x
    dense = np.asarray(m, dtype=np.float64)
    return lambda x: dense @ x


def gershgorin_bound(m: MatrixLike) -> float:
    """Upper bound on the spectral radius: the largest absolute row sum."""
    if sp.issparse(m):
        return float(np.max(np.asarray(abs(m).sum(axis=1)).ravel(), initial=0.0))
    return float(np.max(np.abs(np.asarray(m)).sum(axis=1), initial=0.0))


def _check_symmetric(m: MatrixLike, atol: float = 1e-12) -> None:
    diff = m - m.T
    gap = abs(diff).max() if sp.issparse(m) else np.max(np.abs(diff), initial=0.0)
    if gap > atol * max(1.0, gershgorin_bound(m)):
        raise ValueError(f"Matrix is not symmetric (max asymmetry {gap:.3e})")


def lanczos_largest(
    operator: Operator,
    n: int,
    k: int,
    max_dim: Optional[int] = None,
    tol: float = 1e-10,
    scale: float = 1.0,
    seed: int = 0,
    check_every: int = 5,
) -> Tuple[np.ndarray, DenseMatrix, int]:
    """Largest algebraic eigenpairs of a symmetric operator by Lanczos with full reorthogonalization.

    The Krylov basis grows until the ``k`` leading Ritz pairs have residual estimates
    ``|beta_j * s_j|`` below ``tol * scale``. On breakdown (an invariant subspace) the basis is
    extended with a fresh random direction orthogonal to everything seen so far, so repeated
    eigenvalues can still surface.

    Returns:
        Tuple[np.ndarray, DenseMatrix, int]: Ritz values (descending), Ritz vectors, basis size used.

    Raises:
        NoConvergenceError: If ``max_dim`` basis vectors are not enough.
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")

    max_dim = min(n, max_dim if max_dim is not None else max(10 * k + 100, 300))
    min_dim = min(n, max(2 * k + 10, 20))
    rng = seeded_rng(seed)

    basis = np.zeros((n, max_dim))
    alphas = []
    betas = []
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    beta_prev = 0.0

    for j in range(max_dim):
        basis[:, j] = q
        w = operator(q)
        alpha = float(q @ w)
        w = w - alpha * q
        if j > 0:
            w -= beta_prev * basis[:, j - 1]
        # Twice is enough.
        for _ in range(2):
            w -= basis[:, : j + 1] @ (basis[:, : j + 1].T @ w)

        alphas.append(alpha)
        beta = float(np.linalg.norm(w))
        size = j + 1
        breakdown = beta <= 1e-12 * max(scale, _TINY)

        if size >= k and not breakdown and (size >= min_dim and (size % check_every == 0) or size == max_dim):
            theta, s = _tridiagonal_eigh(alphas, betas)
            wanted = np.argsort(-theta, kind="stable")[:k]
            residuals = np.abs(beta * s[-1, wanted])
            if np.all(residuals <= tol * scale):
                logging.debug("Lanczos converged with a basis of %d vectors", size)
                return theta[wanted], basis[:, :size] @ s[:, wanted], size

        if size == max_dim:
            break

        if breakdown:
            if size == n:
                break
            q = rng.standard_normal(n)
            for _ in range(2):
                q -= basis[:, :size] @ (basis[:, :size].T @ q)
            q /= np.linalg.norm(q)
            betas.append(0.0)
            beta_prev = 0.0
        else:
            betas.append(beta)
            q = w / beta
            beta_prev = beta

    size = len(alphas)
    if size == n:
        # The basis spans the whole space, so the Ritz pairs are exact.
        theta, s = _tridiagonal_eigh(alphas, betas[: size - 1])
        wanted = np.argsort(-theta, kind="stable")[:k]
        return theta[wanted], basis[:, :size] @ s[:, wanted], size

    raise NoConvergenceError(f"Lanczos did not converge within {max_dim} basis vectors (k={k}, n={n})")


def _tridiagonal_eigh(alphas, betas) -> Tuple[np.ndarray, DenseMatrix]:
    d = np.asarray(alphas, dtype=np.float64)
    if d.size == 1:
        return d.copy(), np.ones((1, 1))
    e = np.asarray(betas[: d.size - 1], dtype=np.float64)
    return eigh_tridiagonal(d, e)


def symmetric_eigs_smallest(
    m: MatrixLike,
    k: int,
    max_iter: Optional[int] = None,
    tol: float = 1e-10,
    dense_threshold: int = DENSE_THRESHOLD,
    seed: int = 0,
) -> EigenResult:
    """The ``k`` smallest eigenpairs of a symmetric matrix.

    Orders up to ``dense_threshold`` use :func:`jacobi_eigh`. Larger inputs run Lanczos on the
    shifted operator ``sigma*I - m``, whose largest eigenpairs are the smallest of ``m``; ``sigma``
    is the Gershgorin bound, which keeps the shifted spectrum non-negative.

    Args:
        m (MatrixLike): Symmetric sparse or dense matrix.
        k (int): Number of eigenpairs, ``1 <= k <= n``.
        max_iter (Optional[int]): Largest Krylov basis allowed; defaults to ``max(10k + 100, 300)``.
        tol (float): Relative residual target.
        dense_threshold (int): Largest order handled by the dense solver.
        seed (int): Seed of the Lanczos start vector.

    Returns:
        EigenResult: Ascending eigenvalues and orthonormal, sign-normalized eigenvectors.

    Raises:
        ValueError: If ``m`` is not square and symmetric or ``k`` is out of range.
        NoConvergenceError: If the iteration cap is reached.
    """
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError(f"Expected a square matrix, got shape {m.shape}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    _check_symmetric(m)

    if n <= dense_threshold:
        dense = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=np.float64)
        full = jacobi_eigh(dense)
        return EigenResult(values=full.values[:k], vectors=full.vectors[:, :k])

    sigma = max(gershgorin_bound(m), _TINY)
    apply_m = _as_operator(m)
    _, vectors, _ = lanczos_largest(lambda x: sigma * x - apply_m(x), n, k, max_iter, tol, sigma, seed)

    vectors /= np.linalg.norm(vectors, axis=0)
    values = np.einsum("ij,ij->j", vectors, np.column_stack([apply_m(vectors[:, i]) for i in range(k)]))
    order = np.argsort(values, kind="stable")
    return EigenResult(values=values[order], vectors=fix_signs(vectors[:, order]))


def spectral_radius(m: MatrixLike, max_iter: int = 2000, tol: float = 1e-12) -> float:
    """Estimates the spectral radius of a symmetric matrix by power iteration.

    The estimate is the norm ratio ``||m x|| / ||x||``, which converges to the spectral radius even
    when ``+rho`` and ``-rho`` are both eigenvalues (bipartite graphs), where the Rayleigh quotient
    would oscillate.
    """
    n = m.shape[0]
    if n == 0:
        return 0.0

    apply_m = _as_operator(m)
    x = np.full(n, 1.0 / np.sqrt(n))
    estimate = 0.0
    for it in range(max_iter):
        y = apply_m(x)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        if abs(norm - estimate) <= tol * norm:
            logging.debug("Power iteration converged after %d steps (rho=%.6g)", it, norm)
            return norm
        estimate = norm
        x = y / norm

    logging.warning("Power iteration stopped at %d steps; spectral radius estimate %.6g", max_iter, estimate)
    return estimate


def _complete_orthonormal(u: DenseMatrix, good: np.ndarray) -> DenseMatrix:
    """Replaces the columns flagged ``~good`` with unit vectors orthogonal to all the others."""
    u = u.copy()
    rows = u.shape[0]
    for j in np.flatnonzero(~good):
        kept = np.delete(u, j, axis=1)
        for e in range(rows):
            candidate = np.zeros(rows)
            candidate[e] = 1.0
            for _ in range(2):
                candidate -= kept @ (kept.T @ candidate)
            norm = np.linalg.norm(candidate)
            if norm > 1e-8:
                u[:, j] = candidate / norm
                break
    return u


def one_sided_jacobi_svd(a: DenseMatrix, tol: Optional[float] = None, max_sweeps: int = 100) -> SVDResult:
    """Thin SVD of a dense matrix by one-sided (Hestenes) Jacobi rotations.

    Returns:
        SVDResult: ``u`` (rows x p), ``s`` (p, descending) and ``v`` (cols x p) with
        ``p = min(rows, cols)``.

    Raises:
        NoConvergenceError: If some column pair is still non-orthogonal after ``max_sweeps``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    if a.shape[0] < a.shape[1]:
        result = one_sided_jacobi_svd(a.T, tol, max_sweeps)
        return SVDResult(u=result.v, s=result.s, v=result.u, iterations=result.iterations)

    cols = a.shape[1]
    v = np.eye(cols)
    tol = a.shape[0] * _EPS if tol is None else tol

    for sweep in range(max_sweeps):
        rotated = False
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                alpha = a[:, i] @ a[:, i]
                beta = a[:, j] @ a[:, j]
                gamma = a[:, i] @ a[:, j]
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue

                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t

                col_i = a[:, i].copy()
                a[:, i] = c * col_i - s * a[:, j]
                a[:, j] = s * col_i + c * a[:, j]
                vec_i = v[:, i].copy()
                v[:, i] = c * vec_i - s * v[:, j]
                v[:, j] = s * vec_i + c * v[:, j]

        if not rotated:
            break
    else:
        raise NoConvergenceError(f"One-sided Jacobi SVD did not converge in {max_sweeps} sweeps")

    sigma = np.linalg.norm(a, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    a = a[:, order]
    v = v[:, order]

    good = sigma > max(sigma[0] if sigma.size else 0.0, _TINY) * _EPS * max(a.shape)
    u = np.zeros_like(a)
    u[:, good] = a[:, good] / sigma[good]
    if not np.all(good):
        u = _complete_orthonormal(u, good)

    return SVDResult(u=u, s=sigma, v=v, iterations=sweep + 1)


def truncated_svd(
    m: DenseMatrix,
    d: int,
    dense_threshold: int = DENSE_THRESHOLD,
    tol: float = 1e-12,
    max_iter: Optional[int] = None,
    seed: int = 0,
) -> SVDResult:
    """Leading ``d`` singular triplets of a dense matrix.

    Small inputs (``min(rows, cols) <= dense_threshold``) use :func:`one_sided_jacobi_svd`.
    Larger ones run Lanczos on the Gram operator of the short side and recover the other factor
    by one multiplication.

    Raises:
        ValueError: If ``d`` is outside ``[1, min(rows, cols)]``.
        NoConvergenceError: If the iterative solver reaches its cap.
    """
    m = np.asarray(m, dtype=np.float64)
    rows, cols = m.shape
    if not 1 <= d <= min(rows, cols):
        raise ValueError(f"d must lie in [1, {min(rows, cols)}], got {d}")

    if min(rows, cols) <= dense_threshold:
        full = one_sided_jacobi_svd(m)
        u, s, v = full.u[:, :d], full.s[:d], full.v[:, :d]
        iterations = full.iterations
    else:
        transpose = rows < cols
        a = m.T if transpose else m
        scale = max(gershgorin_bound(a.T @ a), _TINY)
        theta, v, iterations = lanczos_largest(lambda x: a.T @ (a @ x), a.shape[1], d, max_iter, tol, scale, seed)
        v /= np.linalg.norm(v, axis=0)
        s = np.sqrt(np.clip(theta, 0.0, None))
        good = s > max(s[0], _TINY) * _EPS * max(rows, cols)
        u = np.zeros((a.shape[0], d))
        u[:, good] = (a @ v[:, good]) / s[good]
        if not np.all(good):
            u = _complete_orthonormal(u, good)
        if transpose:
            u, v = v, u

    # Pair signs so the largest entry of each left vector is positive.
    signed = fix_signs(u)
    flips = np.sign(np.sum(signed * u, axis=0))
    flips[flips == 0] = 1.0
    return SVDResult(u=u * flips, s=s, v=v * flips, iterations=iterations)

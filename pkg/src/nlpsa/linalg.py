"""Small dense solvers: complex LU with partial pivoting and cyclic Jacobi.

Both target matrices of order ~3..32, so clarity wins over blocking.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NumericalError, SingularDesign


def lu_factor(a):
    """LU-factorize a square complex matrix with partial (row) pivoting.

    Parameters
    ----------
    a : array_like, shape (n, n)

    Returns
    -------
    lu : ndarray
        Packed factors; the unit-diagonal L sits below the diagonal.
    piv : ndarray of int
        Row permutation, ``a[piv] == L @ U``.

    Raises
    ------
    SingularDesign
        If a pivot vanishes relative to the matrix scale.
    """
    lu = np.array(a, dtype=complex)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    piv = np.arange(n)
    scale = np.max(np.abs(lu)) if n else 0.0
    tiny = n * np.finfo(float).eps * scale
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if not np.abs(lu[p, k]) > tiny:
            raise SingularDesign(f"matrix is singular (pivot {k} vanishes)")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve(lu, piv, b):
    """Solve ``a x = b`` given the output of :func:`lu_factor`.

    `b` may be a vector or a matrix of right-hand sides (one per column).
    """
    x = np.array(b, dtype=complex)[piv]
    n = lu.shape[0]
    for k in range(n):
        x[k + 1:] -= np.multiply.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= np.multiply.outer(lu[:k, k], x[k])
    return x


def solve(a, b, refine=1):
    """Solve a dense complex system; returns ``(x, cond1)``.

    ``cond1`` is the 1-norm condition number computed from the explicit
    inverse, which is cheap at these sizes. `refine` rounds of iterative
    refinement are applied to the solution.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    lu, piv = lu_factor(a)
    x = lu_solve(lu, piv, b)
    for _ in range(refine):
        x = x + lu_solve(lu, piv, b - a @ x)
    inv = lu_solve(lu, piv, np.eye(a.shape[0], dtype=complex))
    cond = float(np.max(np.abs(a).sum(axis=0)) * np.max(np.abs(inv).sum(axis=0)))
    return x, cond


def jacobi_eigh(a, tol=1e-15, max_sweeps=100):
    """Eigen-decompose a real symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in descending order and the matching unit
    eigenvectors as columns.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(np.max(np.abs(a)), 1e-300)):
        raise DimensionMismatch("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * np.sqrt(np.sum(a * a)) or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # rotate rows/cols p and q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericalError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]

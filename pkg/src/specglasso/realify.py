"""Real representations of complex scalars, vectors and matrices.

A complex number ``a + ib`` is identified with the 2x2 rotation-scaling
matrix ``[[a, -b], [b, a]]``; applying this entrywise maps complex m x n
matrices onto a subring of real 2m x 2n matrices.  The maps here are only
used for verification: the production solvers work on complex arrays
directly.
"""
import numpy as np

from .exceptions import ConvergenceError, InvalidInputError


def phi_scalar(z):
    """Return the 2x2 real matrix representing the complex scalar ``z``."""
    z = complex(z)
    return np.array([[z.real, -z.imag], [z.imag, z.real]])


def phi_matrix(Z):
    """Entrywise realification of a complex matrix.

    Parameters
    ----------
    Z : array_like, shape (m, n) or (m,)
        Complex matrix. A 1-d input is treated as a column vector.

    Returns
    -------
    ndarray, shape (2m, 2n)
        Block matrix whose (i, j) 2x2 block is ``phi_scalar(Z[i, j])``.
    """
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim == 1:
        Z = Z[:, None]
    m, n = Z.shape
    out = np.empty((2 * m, 2 * n))
    out[0::2, 0::2] = Z.real
    out[0::2, 1::2] = -Z.imag
    out[1::2, 0::2] = Z.imag
    out[1::2, 1::2] = Z.real
    return out


def permutation(k):
    """Index vector of the permutation sending (1, ..., 2k) to (1, 3, ..., 2, 4, ...).

    Zero-based: ``permutation(2)`` is ``[0, 2, 1, 3]``. Column ``i`` of the
    permutation matrix is the unit vector ``e[perm[i]]``, so ``M[perm]``
    computes ``Pi.T @ M`` without materializing ``Pi``.
    """
    if k < 1:
        raise InvalidInputError(f"permutation size must be >= 1, got {k}")
    return np.concatenate([np.arange(0, 2 * k, 2), np.arange(1, 2 * k, 2)])


def tilde_vec(z):
    """Stack real parts over imaginary parts: ``[Re z; Im z]``."""
    z = np.asarray(z, dtype=complex)
    if z.ndim == 2:
        if z.shape[1] != 1:
            raise InvalidInputError(f"expected a column vector, got shape {z.shape}")
        z = z[:, 0]
    return phi_matrix(z)[permutation(z.shape[0]), 0]


def tildetilde_mat(Z):
    """Block form ``[[Re Z, -Im Z], [Im Z, Re Z]]`` of a complex matrix."""
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim == 1:
        Z = Z[:, None]
    m, n = Z.shape
    return phi_matrix(Z)[permutation(m)][:, permutation(n)]


def from_tilde_vec(x):
    """Inverse of :func:`tilde_vec`."""
    x = np.asarray(x, dtype=float)
    half = x.shape[0] // 2
    return x[:half] + 1j * x[half:]


def real_group_lasso_oracle(X, Y, lam, tol=1e-10, max_iter=100_000):
    """Solve the complex lasso through its real group-lasso formulation.

    Minimizes ``(1/2n) ||Yt - sum_j Xtt_j b_j||^2 + lam * sum_j ||b_j||_2``
    over real 2-vectors ``b_j``, where ``Xtt_j`` holds the two real columns
    ``[Re X_j, Im X_j]`` / ``[-Im X_j, Re X_j]`` of the block representation.
    Each block update uses the closed form available because those two
    columns are orthogonal with equal norms.

    This is a reference solver for tests; it works purely on real arrays.

    Raises
    ------
    ConvergenceError
        If the largest block change is still above ``tol`` after
        ``max_iter`` cyclic sweeps.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex).reshape(-1)
    if lam < 0:
        raise InvalidInputError("lam must be non-negative")
    n, p = X.shape
    Xtt = tildetilde_mat(X)
    yt = tilde_vec(Y)
    # group j occupies real columns j and p + j
    groups = [np.array([j, p + j]) for j in range(p)]
    sq_norms = np.array([Xtt[:, g[0]] @ Xtt[:, g[0]] for g in groups]) / n
    b = np.zeros(2 * p)
    r = yt.copy()
    for _ in range(max_iter):
        max_delta = 0.0
        for j, g in enumerate(groups):
            Xg = Xtt[:, g]
            old = b[g].copy()
            r += Xg @ old
            grad = Xg.T @ r / n
            norm = np.sqrt(grad @ grad)
            if norm <= lam or sq_norms[j] == 0.0:
                new = np.zeros(2)
            else:
                new = (1.0 - lam / norm) * grad / sq_norms[j]
            b[g] = new
            r -= Xg @ new
            max_delta = max(max_delta, np.sqrt(np.sum((new - old) ** 2)))
        if max_delta <= tol:
            return from_tilde_vec(b)
    raise ConvergenceError(
        f"group lasso oracle did not converge in {max_iter} sweeps "
        f"(last change {max_delta:.3e})"
    )

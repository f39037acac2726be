"""Coordinate descent for the lasso with complex coefficients.

The penalty ``|beta_j|`` is the Euclidean norm of ``(Re beta_j, Im beta_j)``,
so the problem is a group lasso with groups of size two.  Because the two
real predictors of each group are orthogonal with equal norms, every block
update is a closed-form complex soft threshold and the solvers below never
leave complex arithmetic.
"""
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .exceptions import InvalidInputError

TOL = 1e-11
MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class LassoSolution:
    beta: np.ndarray
    lam: float
    iterations: int
    converged: bool
    objective: float


@dataclass(frozen=True)
class LassoPath:
    lambdas: np.ndarray
    solutions: list = field(default_factory=list)

    @property
    def coefs(self):
        """Coefficients stacked as an array of shape (n_lambdas, p)."""
        return np.array([s.beta for s in self.solutions])


def soft_threshold(z, lam):
    """Complex soft threshold ``(|z| - lam)_+ z / |z|``, zero at ``z = 0``.

    Works elementwise on arrays.  Ties ``|z| == lam`` map to zero.
    """
    if np.any(np.asarray(lam) < 0):
        raise InvalidInputError("threshold must be non-negative")
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    with np.errstate(over="ignore"):
        shrink = np.where(a > lam, 1.0 - lam / np.where(a > 0, a, 1.0), 0.0)
    out = shrink * z
    return out if out.ndim else complex(out)


@njit(cache=True)
def _soft(z, lam):
    a = abs(z)
    if a <= lam:
        return 0j
    return (a - lam) * z / a


@njit(cache=True)
def _sweeps_residual(XT, colsq, r, beta, lam, idx, tol, max_sweeps):
    # XT is X transposed (p, n) so a column of X is a contiguous row.
    n = XT.shape[1]
    max_delta = np.inf
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in idx:
            bj = beta[j]
            acc = 0j
            for i in range(n):
                acc += XT[j, i].conjugate() * r[i]
            z = acc / n + colsq[j] * bj
            new = _soft(z, lam) / colsq[j]
            delta = new - bj
            if delta != 0:
                for i in range(n):
                    r[i] -= XT[j, i] * delta
                beta[j] = new
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if max_delta <= tol:
            return sweep + 1, max_delta
    return max_sweeps, max_delta


@njit(cache=True)
def _sweeps_covariance(S, s_r, beta, lam, idx, tol, max_sweeps):
    # s_r holds s_XY - S_XX beta and is updated in place.
    p = S.shape[0]
    max_delta = np.inf
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in idx:
            bj = beta[j]
            v = s_r[j] + S[j, j] * bj
            new = _soft(v, lam) / S[j, j].real
            delta = new - bj
            if delta != 0:
                for i in range(p):
                    s_r[i] -= S[i, j] * delta
                beta[j] = new
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if max_delta <= tol:
            return sweep + 1, max_delta
    return max_sweeps, max_delta


def _run(sweep, grad, beta, lam, p, tol, max_sweeps, screen):
    """Drive a sweep kernel, optionally restricted to a screened active set.

    ``sweep(idx, tol, max_sweeps)`` runs cyclic passes over ``idx``;
    ``grad()`` returns the partial-residual correlations used for screening.
    With screening, passes cycle over the active coordinates until they
    settle, and a pass over every coordinate then confirms convergence.
    """
    everything = np.arange(p)
    if not np.any(beta) and np.all(np.abs(grad()) <= lam):
        return 0, True  # zero already satisfies the optimality conditions
    if not screen:
        used, delta = sweep(everything, tol, max_sweeps)
        return used, delta <= tol
    used = 0
    while used < max_sweeps:
        active = np.flatnonzero((beta != 0) | (np.abs(grad()) >= lam))
        if active.size:
            k, _ = sweep(active, tol, max_sweeps - used)
            used += k
            if used >= max_sweeps:
                break
        k, delta = sweep(everything, tol, 1)
        used += k
        if delta <= tol:
            return used, True
    return used, False


def _as_design(X, Y):
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex).reshape(-1)
    if X.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise InvalidInputError(f"shape mismatch: X {X.shape}, Y {Y.shape}")
    return X, Y


def _start(beta0, p):
    if beta0 is None:
        return np.zeros(p, dtype=complex)
    beta = np.array(beta0, dtype=complex).reshape(-1)
    if beta.shape[0] != p:
        raise InvalidInputError(f"beta0 has length {beta.shape[0]}, expected {p}")
    return beta


def lasso_objective(X, Y, beta, lam):
    r = Y - X @ beta
    return float(np.vdot(r, r).real / (2 * X.shape[0]) + lam * np.abs(beta).sum())


def lambda_max(X, Y):
    """Smallest penalty at which the all-zero vector solves the lasso."""
    X, Y = _as_design(X, Y)
    return float(np.abs(X.conj().T @ Y / X.shape[0]).max())


def scale_columns(X):
    """Rescale columns to Euclidean norm ``sqrt(n)``.

    Returns ``(X_scaled, scales)`` with ``X = X_scaled * scales``.
    """
    X = np.asarray(X, dtype=complex)
    scales = np.linalg.norm(X, axis=0) / np.sqrt(X.shape[0])
    if np.any(scales == 0):
        raise InvalidInputError("cannot scale an all-zero column")
    return X / scales, scales


def classo(X, Y, lam, beta0=None, tol=TOL, max_iter=MAX_SWEEPS, screen=False):
    """Complex lasso by cyclic coordinate descent on residuals.

    Minimizes ``(1/2n) ||Y - X beta||^2 + lam ||beta||_1`` where
    ``||beta||_1`` sums complex moduli.

    Parameters
    ----------
    X : array_like, shape (n, p)
        Complex design whose columns have norm ``sqrt(n)``
        (see :func:`scale_columns`).
    Y : array_like, shape (n,)
        Complex response.
    lam : float
        Penalty level, ``lam >= 0``.
    beta0 : array_like, optional
        Starting coefficients; zero by default.
    tol : float
        Convergence threshold on the largest coordinate change in a sweep.
    max_iter : int
        Cap on the number of sweeps.
    screen : bool
        Restrict sweeps to an active set, confirmed by full passes.

    Returns
    -------
    LassoSolution
        ``converged`` is False when the sweep cap was hit; ``beta`` is then
        the last iterate.
    """
    X, Y = _as_design(X, Y)
    n, p = X.shape
    if lam < 0:
        raise InvalidInputError("lam must be non-negative")
    colsq = np.einsum("ij,ij->j", X.conj(), X).real / n
    if np.any(np.abs(colsq - 1.0) > 2e-8):
        raise InvalidInputError("columns of X must have norm sqrt(n); use scale_columns")
    beta = _start(beta0, p)
    r = Y - X @ beta
    XT = np.ascontiguousarray(X.T)

    def sweep(idx, tol_, cap):
        return _sweeps_residual(XT, colsq, r, beta, float(lam), idx, tol_, cap)

    def grad():
        return X.conj().T @ r / n + colsq * beta

    used, converged = _run(sweep, grad, beta, lam, p, tol, max_iter, screen)
    return LassoSolution(
        beta=beta, lam=float(lam), iterations=int(used), converged=bool(converged),
        objective=lasso_objective(X, Y, beta, lam),
    )


def classo_cov(S_XX, s_XY, lam, beta0=None, tol=TOL, max_iter=MAX_SWEEPS, screen=False):
    """Complex lasso from second moments (covariance updates).

    Minimizes ``0.5 beta^H S beta - Re(s^H beta) + lam ||beta||_1``.  Each
    coordinate update divides the thresholded value by ``S[j, j]``, so the
    diagonal need not be one.
    """
    S = np.asarray(S_XX, dtype=complex)
    s = np.asarray(s_XY, dtype=complex).reshape(-1)
    p = S.shape[0]
    if S.shape != (p, p) or s.shape[0] != p:
        raise InvalidInputError(f"shape mismatch: S {S.shape}, s {s.shape}")
    if lam < 0:
        raise InvalidInputError("lam must be non-negative")
    diag = np.diag(S).real
    if np.any(diag <= 0):
        raise InvalidInputError("S_XX must have a strictly positive diagonal")
    beta = _start(beta0, p)
    s_r = s - S @ beta
    S = np.ascontiguousarray(S)

    def sweep(idx, tol_, cap):
        return _sweeps_covariance(S, s_r, beta, float(lam), idx, tol_, cap)

    def grad():
        return s_r + diag * beta

    used, converged = _run(sweep, grad, beta, lam, p, tol, max_iter, screen)
    objective = 0.5 * np.vdot(beta, S @ beta).real - np.vdot(s, beta).real + lam * np.abs(beta).sum()
    return LassoSolution(
        beta=beta, lam=float(lam), iterations=int(used), converged=bool(converged),
        objective=float(objective),
    )


def lambda_grid(lam_max, num=50, decades=3.0):
    """Log-linear grid from ``lam_max`` down to ``lam_max * 10**-decades``."""
    if lam_max <= 0:
        raise InvalidInputError("lam_max must be positive")
    return np.logspace(np.log10(lam_max), np.log10(lam_max) - decades, num)


def _check_decreasing(lambdas):
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.ndim != 1 or lambdas.size == 0:
        raise InvalidInputError("lambdas must be a non-empty 1-d sequence")
    if np.any(np.diff(lambdas) >= 0):
        raise InvalidInputError("lambdas must be strictly decreasing")
    if lambdas[-1] < 0:
        raise InvalidInputError("lambdas must be non-negative")
    return lambdas


def classo_path(X, Y, lambdas=None, warm_start=True, screen=True, tol=TOL, max_iter=MAX_SWEEPS):
    """Pathwise coordinate descent over a decreasing penalty sequence.

    Each fit starts from the previous solution when ``warm_start`` is set.
    The default grid is 50 log-spaced values over three decades below
    :func:`lambda_max`.
    """
    X, Y = _as_design(X, Y)
    if lambdas is None:
        lambdas = lambda_grid(lambda_max(X, Y))
    lambdas = _check_decreasing(lambdas)
    solutions = []
    beta = None
    for lam in lambdas:
        sol = classo(X, Y, lam, beta0=beta, tol=tol, max_iter=max_iter, screen=screen)
        solutions.append(sol)
        if warm_start:
            beta = sol.beta
    return LassoPath(lambdas=lambdas, solutions=solutions)


def classo_kkt(X, Y, beta, lam):
    """Largest violation of the lasso optimality conditions.

    With ``g = X^H (Y - X beta) / n``: zero coordinates need ``|g_j| <= lam``
    and nonzero ones need ``g_j = lam * beta_j / |beta_j|``.
    """
    X, Y = _as_design(X, Y)
    beta = np.asarray(beta, dtype=complex).reshape(-1)
    g = X.conj().T @ (Y - X @ beta) / X.shape[0]
    nz = beta != 0
    viol = np.maximum(np.abs(g) - lam, 0.0)
    viol[nz] = np.abs(g[nz] - lam * beta[nz] / np.abs(beta[nz]))
    return float(viol.max()) if viol.size else 0.0

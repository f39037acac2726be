"""Graphical lasso for complex Hermitian spectral matrices.

Block coordinate descent over the columns of a working matrix ``W``, which
converges to the inverse of the estimated precision.  Each column update
solves a complex lasso in covariance form, and the precision is recovered
from ``W`` and the stacked regression coefficients at the end.

Three variants are available:

``plain``
    penalty ``lam * sum_{k != l} |Theta_kl|`` on the raw input.
``I``
    solve on the coherence matrix ``D^-1/2 P D^-1/2`` (``D = diag P``) and
    map back with ``D^-1/2 Theta D^-1/2``; this is the plain problem with
    penalty weights ``sqrt(D_k D_l)``.
``II``
    rescale every inner lasso by the diagonal of the input; column ``k``
    then penalizes ``|beta_l|`` with weight ``sqrt(D_l)``.
"""
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .classo import _check_decreasing, _sweeps_covariance, lambda_grid
from .exceptions import InvalidInputError
from .metrics import rmse

TOL = 1e-8
MAX_SWEEPS = 1000
INNER_TOL = 1e-9
INNER_MAX = 10_000
EDGE_TOL = 1e-8
VARIANTS = ("plain", "I", "II")


@dataclass(frozen=True)
class PrecisionEstimate:
    theta: np.ndarray
    lam: float
    kkt_residual: float
    converged: bool
    iterations: int = 0
    variant: str = "plain"

    @property
    def lambda_(self):
        return self.lam


@dataclass
class PrecisionPath:
    lambdas: np.ndarray
    estimates: list = field(default_factory=list)
    ebic: list = field(default_factory=list)
    selected_index: int = -1
    variant: str = "plain"
    rmse: list = None
    stopped_early: bool = False

    @property
    def selected(self):
        return self.estimates[self.selected_index]


def _check_input(P):
    P = np.asarray(P, dtype=complex)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise InvalidInputError(f"input must be a square matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InvalidInputError("input contains non-finite values")
    if np.max(np.abs(P - P.conj().T), initial=0.0) > 1e-8 * max(1.0, np.abs(P).max()):
        raise InvalidInputError("input must be Hermitian")
    d = np.diag(P)
    if np.any(d.real <= 0):
        raise InvalidInputError("input must have a strictly positive diagonal")
    P = (P + P.conj().T) / 2
    return P


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


@njit(cache=True)
def _glasso_sweeps(P, W, B, lam, s, inner_tol, inner_max, tol, max_sweeps):
    # B[:, k] holds the scaled coefficients of column k; beta = s[idx] * B[:, k].
    p = P.shape[0]
    q = p - 1
    all_inner = np.arange(q)
    idx = np.empty(q, dtype=np.int64)
    W11 = np.empty((q, q), dtype=np.complex128)
    for sweep in range(max_sweeps):
        change = 0.0
        for k in range(p):
            a = 0
            for i in range(p):
                if i != k:
                    idx[a] = i
                    a += 1
            for a in range(q):
                for b in range(q):
                    W11[a, b] = W[idx[a], idx[b]] * s[idx[a]] * s[idx[b]]
            beta = B[:, k].copy()
            s_r = np.empty(q, dtype=np.complex128)
            for a in range(q):
                acc = P[idx[a], k] * s[idx[a]]
                for b in range(q):
                    acc -= W11[a, b] * beta[b]
                s_r[a] = acc
            _sweeps_covariance(W11, s_r, beta, lam, all_inner, inner_tol, inner_max)
            for a in range(q):
                B[a, k] = beta[a]
            for a in range(q):
                acc = 0j
                for b in range(q):
                    acc += W[idx[a], idx[b]] * s[idx[b]] * beta[b]
                d = abs(W[idx[a], k] - acc)
                if d > change:
                    change = d
                W[idx[a], k] = acc
                W[k, idx[a]] = acc.conjugate()
        if change <= tol:
            return sweep + 1, True
    return max_sweeps, False


def _recover(W, B, s):
    p = W.shape[0]
    theta = np.zeros((p, p), dtype=complex)
    for k in range(p):
        idx = np.delete(np.arange(p), k)
        beta = s[idx] * B[:, k]
        w12 = W[idx, k]
        t22 = 1.0 / (W[k, k].real - np.vdot(w12, beta).real)
        theta[k, k] = t22
        theta[idx, k] = -beta * t22
    return (theta + theta.conj().T) / 2


def glasso_objective(P, theta, lam, weights=None):
    """``tr(P Theta) - log det Theta + lam * sum_{k != l} w_kl |Theta_kl|``.

    Returns ``inf`` when ``theta`` is not positive definite.
    """
    P = np.asarray(P, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    H = (theta + theta.conj().T) / 2
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        return np.inf
    logdet = 2 * np.log(np.abs(np.diag(L))).sum()
    off = np.abs(theta)
    np.fill_diagonal(off, 0.0)
    if weights is not None:
        off = off * weights
    return float(np.trace(P @ theta).real - logdet + lam * off.sum())


def penalty_weights(P, variant):
    """Off-diagonal penalty weights of the problem a variant solves.

    Entry ``(l, k)`` multiplies ``|Theta_lk|``.  For variant ``II`` the
    weights depend on the row only and are not symmetric.
    """
    _check_variant(variant)
    d = np.real(np.diag(P))
    p = d.shape[0]
    if variant == "plain":
        w = np.ones((p, p))
    elif variant == "I":
        w = np.sqrt(np.outer(d, d))
    else:
        w = np.repeat(np.sqrt(d)[:, None], p, axis=1)
    np.fill_diagonal(w, 0.0)
    return w


def kkt_residual(P, theta, lam, weights=None):
    """Largest violation of ``P - inv(Theta) + lam * Psi = 0``.

    ``Psi_kl = w_kl Theta_kl / |Theta_kl|`` on nonzero off-diagonal entries
    and any value of modulus at most ``w_kl`` on zero ones; the diagonal
    must match exactly.  ``weights`` defaults to ones.
    """
    P = np.asarray(P, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    try:
        cond = np.linalg.cond(theta)
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > 1e14:
        raise InvalidInputError("theta is singular")
    p = P.shape[0]
    if weights is None:
        weights = np.ones((p, p))
    G = P - np.linalg.inv(theta)
    a = np.abs(theta)
    nz = a > 0
    viol = np.maximum(np.abs(G) - lam * weights, 0.0)
    phase = np.where(nz, theta / np.where(nz, a, 1.0), 0.0)
    viol[nz] = np.abs(G + lam * weights * phase)[nz]
    diag = np.abs(np.diag(G))
    np.fill_diagonal(viol, diag)
    return float(viol.max())


def lambda_zero(P, variant="plain"):
    """Smallest penalty giving a diagonal estimate for the chosen variant."""
    _check_variant(variant)
    P = _check_input(P)
    # same floating point operations as the sweeps, so lam = lambda_zero gives exact zeros
    d = np.real(np.diag(P))
    if variant == "I":
        sd = np.sqrt(d)
        A = np.abs(P / np.outer(sd, sd))
    elif variant == "II":
        A = np.abs(P * (1.0 / np.sqrt(d))[:, None])
    else:
        A = np.abs(P)
    A = A.copy()
    np.fill_diagonal(A, 0.0)
    return float(A.max()) if A.size > 1 else 0.0


def _fit(P, lam, variant, W0=None, B0=None, tol=TOL, max_iter=MAX_SWEEPS):
    """Run the sweeps for one penalty; returns (estimate, W, B)."""
    p = P.shape[0]
    d = np.real(np.diag(P)).copy()
    if variant == "I":
        sd = np.sqrt(d)
        Q = P / np.outer(sd, sd)
        s = np.ones(p)
    else:
        Q = P
        s = 1.0 / np.sqrt(d) if variant == "II" else np.ones(p)
    W = Q.copy() if W0 is None else np.array(W0, dtype=complex)
    np.fill_diagonal(W, np.diag(Q))
    if B0 is None:
        B = np.zeros((p - 1, p), dtype=complex)
    else:
        B = np.array(B0, dtype=complex)
        if B.shape != (p - 1, p):
            raise InvalidInputError(f"B0 must have shape {(p - 1, p)}, got {B.shape}")
    if p == 1:
        used, converged = 0, True
    else:
        used, converged = _glasso_sweeps(
            np.ascontiguousarray(Q), W, B, float(lam), s, INNER_TOL, INNER_MAX, tol, max_iter
        )
    theta = _recover(W, B, s)
    if variant == "I":
        theta = theta / np.outer(sd, sd)
    try:
        kkt = kkt_residual(P, theta, lam, penalty_weights(P, variant))
    except InvalidInputError:
        kkt = np.inf
    est = PrecisionEstimate(
        theta=theta, lam=float(lam), kkt_residual=kkt, converged=bool(converged),
        iterations=int(used), variant=variant,
    )
    return est, W, B


def cglasso(P, lam, B0=None, variant="plain", tol=TOL, max_iter=MAX_SWEEPS):
    """Penalized precision estimate for a Hermitian positive-diagonal input.

    Parameters
    ----------
    P : array_like, shape (p, p)
        Hermitian input, typically an averaged periodogram.
    lam : float
        Penalty level.
    B0 : array_like, shape (p-1, p), optional
        Starting regression coefficients, column ``k`` for node ``k``.
    variant : {"plain", "I", "II"}
        Penalty scaling, see the module docstring.
    tol : float
        Stop once no entry of ``W`` moves by more than ``tol`` in a sweep.
    max_iter : int
        Sweep cap; hitting it sets ``converged=False``.

    Returns
    -------
    PrecisionEstimate
    """
    _check_variant(variant)
    P = _check_input(P)
    if lam < 0:
        raise InvalidInputError("lam must be non-negative")
    est, _, _ = _fit(P, lam, variant, B0=B0, tol=tol, max_iter=max_iter)
    return est


def cglasso_I(fhat, lam, **kw):
    return cglasso(fhat, lam, variant="I", **kw)


def cglasso_II(fhat, lam, **kw):
    return cglasso(fhat, lam, variant="II", **kw)


def num_edges(theta, tol=EDGE_TOL):
    """Count unordered off-diagonal pairs with modulus above ``tol``."""
    a = np.abs(np.asarray(theta))
    return int(np.count_nonzero(np.triu(a > tol, k=1)))


def whittle_loglik(theta, fhat, n_eff):
    """``n_eff * (log det Theta - tr(fhat Theta))``; Theta must be positive definite."""
    theta = np.asarray(theta, dtype=complex)
    H = (theta + theta.conj().T) / 2
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        raise InvalidInputError("theta is not positive definite") from None
    logdet = 2 * np.log(np.abs(np.diag(L))).sum()
    return float(n_eff * (logdet - np.trace(np.asarray(fhat) @ theta).real))


def ebic(theta, fhat, n_eff, n_raw, gamma=0.0):
    """Extended BIC ``-2 l + |E| log n_raw + 4 gamma |E| log p``.

    ``theta`` may be a matrix or a :class:`PrecisionEstimate`.
    """
    if isinstance(theta, PrecisionEstimate):
        theta = theta.theta
    if not 0 <= gamma <= 1:
        raise InvalidInputError("gamma must lie in [0, 1]")
    theta = np.asarray(theta, dtype=complex)
    p = theta.shape[0]
    e = num_edges(theta)
    return -2 * whittle_loglik(theta, fhat, n_eff) + e * np.log(n_raw) + 4 * gamma * e * np.log(p)


def partial_coherence(theta):
    """Standardized precision: ``-theta_kl / sqrt(theta_kk theta_ll)``, unit diagonal."""
    theta = np.asarray(theta, dtype=complex)
    d = np.real(np.diag(theta))
    if np.any(d <= 0):
        raise InvalidInputError("theta must have a positive diagonal")
    sd = np.sqrt(d)
    out = -theta / np.outer(sd, sd)
    np.fill_diagonal(out, 1.0)
    return out


def should_stop(rmses, lambdas, factor=0.5, gap=0.5):
    """Truth-based stopping rule replayed on the RMSE values seen so far.

    Stops at the latest point when ``lambda_0 - lambda >= gap * lambda_0``
    and ``RMSE - min RMSE > factor * (RMSE_0 - min RMSE)``.
    """
    r = np.asarray(rmses, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    if r.size < 2:
        return False
    rmin = r.min()
    far = lam[0] - lam[-1] >= gap * lam[0]
    return bool(far and r[-1] - rmin > factor * (r[0] - rmin))


def cglasso_path(
    fhat, lambdas=None, variant="II", truth=None, n_eff=None, n_raw=None, gamma=0.0,
    warm_start=True, tol=TOL, max_iter=MAX_SWEEPS, num=50, decades=3.0,
):
    """Fit a decreasing sequence of penalties with warm starts.

    ``W`` and the coefficient matrix carry over from one penalty to the next.
    When ``truth`` is given the RMSE of every estimate is recorded and the
    path stops early by :func:`should_stop`.  EBIC needs ``n_eff`` and
    ``n_raw``; without them every entry scores ``nan`` and the selection
    falls back to the last converged estimate.
    """
    _check_variant(variant)
    P = _check_input(fhat)
    if lambdas is None:
        lam0 = lambda_zero(P, variant)
        lambdas = lambda_grid(lam0 if lam0 > 0 else 1.0, num=num, decades=decades)
    lambdas = _check_decreasing(lambdas)
    path = PrecisionPath(lambdas=lambdas, variant=variant, rmse=[] if truth is not None else None)
    W = B = None
    for lam in lambdas:
        est, W1, B1 = _fit(P, lam, variant, W0=W, B0=B, tol=tol, max_iter=max_iter)
        if warm_start:
            W, B = W1, B1
        path.estimates.append(est)
        if n_eff is not None and n_raw is not None:
            try:
                score = ebic(est.theta, P, n_eff, n_raw, gamma)
            except InvalidInputError:
                score = np.inf
        else:
            score = np.nan
        path.ebic.append(float(score))
        if truth is not None:
            path.rmse.append(rmse(est.theta, truth))
            if should_stop(path.rmse, lambdas[: len(path.rmse)]):
                path.stopped_early = True
                break
    path.lambdas = lambdas[: len(path.estimates)]
    path.selected_index = _select(path)
    return path


def _select(path):
    ok = [i for i, e in enumerate(path.estimates) if e.converged]
    if not ok:
        ok = list(range(len(path.estimates)))
    scores = np.array([path.ebic[i] for i in ok])
    if np.all(np.isnan(scores)):
        return ok[-1]
    return ok[int(np.nanargmin(scores))]

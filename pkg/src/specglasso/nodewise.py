"""Node-wise complex lasso regressions of DFT columns on each other."""
from dataclasses import dataclass

import numpy as np

from .classo import classo, lambda_grid, scale_columns
from .exceptions import InvalidInputError

RULES = ("OR", "AND")


@dataclass(frozen=True)
class NodewiseResult:
    coefficients: np.ndarray
    support: np.ndarray
    rule: str
    lam: np.ndarray = None


def _others(p, k):
    return np.delete(np.arange(p), k)


def symmetrize(raw, rule="OR"):
    """Combine a directed support (``raw[l, k]``: l selected for node k) by rule."""
    if rule not in RULES:
        raise InvalidInputError(f"unknown rule {rule!r}; expected one of {RULES}")
    raw = np.asarray(raw, dtype=bool)
    out = raw | raw.T if rule == "OR" else raw & raw.T
    np.fill_diagonal(out, True)
    return out


def _directed(coefs, tol=0.0):
    p = coefs.shape[1]
    raw = np.zeros((p, p), dtype=bool)
    for k in range(p):
        raw[_others(p, k), k] = np.abs(coefs[:, k]) > tol
    return raw


def _as_data(Z):
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[1] < 2:
        raise InvalidInputError(f"need an (N, p) matrix with p >= 2, got {Z.shape}")
    return Z


def _lams(lam, p):
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (p,)).copy()
    if np.any(lam < 0):
        raise InvalidInputError("penalties must be non-negative")
    return lam


def nodewise_regression(Z, lam, rule="OR", beta0=None, tol=1e-9, max_iter=10_000):
    """Regress each column of ``Z`` on the rest with a complex lasso.

    Predictors are rescaled to norm ``sqrt(N)`` for the fit and the
    coefficients mapped back to the original scale.  ``lam`` is a scalar or
    one value per node.
    """
    Z = _as_data(Z)
    N, p = Z.shape
    lam = _lams(lam, p)
    Zs, scales = scale_columns(Z)
    coefs = np.zeros((p - 1, p), dtype=complex)
    for k in range(p):
        idx = _others(p, k)
        start = None if beta0 is None else beta0[:, k] * scales[idx]
        sol = classo(Zs[:, idx], Z[:, k], lam[k], beta0=start, tol=tol, max_iter=max_iter, screen=True)
        coefs[:, k] = sol.beta / scales[idx]
    return NodewiseResult(coefficients=coefs, support=symmetrize(_directed(coefs), rule), rule=rule, lam=lam)


def nodewise_lambda_max(Z):
    """Smallest shared penalty that empties every node's fit."""
    Z = _as_data(Z)
    Zs, _ = scale_columns(Z)
    p = Z.shape[1]
    G = np.abs(Zs.conj().T @ Z) / Z.shape[0]
    np.fill_diagonal(G, 0.0)
    return float(G.max()) if p > 1 else 0.0


def nodewise_path(Z, lambdas=None, rule="OR", num=50, decades=3.0):
    """Fits over a shared decreasing penalty grid, warm-started node by node."""
    Z = _as_data(Z)
    if lambdas is None:
        lambdas = lambda_grid(nodewise_lambda_max(Z), num=num, decades=decades)
    results, prev = [], None
    for lam in lambdas:
        res = nodewise_regression(Z, lam, rule=rule, beta0=prev)
        prev = res.coefficients
        results.append(res)
    return np.asarray(lambdas), results


def nodewise_ols(Z):
    """Per-node complex least squares through the normal equations."""
    Z = _as_data(Z)
    N, p = Z.shape
    if N <= p - 1:
        raise InvalidInputError(f"OLS needs N > p - 1, got N={N}, p={p}")
    coefs = np.zeros((p - 1, p), dtype=complex)
    for k in range(p):
        X = Z[:, _others(p, k)]
        G = X.conj().T @ X
        if np.linalg.matrix_rank(G) < p - 1:
            raise InvalidInputError(f"predictors for node {k} are rank deficient")
        coefs[:, k] = np.linalg.solve(G, X.conj().T @ Z[:, k])
    return coefs

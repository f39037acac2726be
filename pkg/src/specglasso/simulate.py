"""VARMA data generators with closed-form spectral densities."""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .exceptions import InvalidInputError

BURN_IN = 500
FAMILIES = ("WhiteNoise", "VAR1", "VARMA22", "VAR1Block")


@dataclass
class VarmaModel:
    """``X_t = sum_i A_i X_{t-i} + e_t + sum_j B_j e_{t-j}``, ``e_t ~ N(0, sigma_eps)``."""

    ar: list = field(default_factory=list)
    ma: list = field(default_factory=list)
    sigma_eps: np.ndarray = None

    def __post_init__(self):
        self.sigma_eps = np.asarray(self.sigma_eps, dtype=float)
        p = self.sigma_eps.shape[0]
        if self.sigma_eps.shape != (p, p):
            raise InvalidInputError("sigma_eps must be square")
        if not np.allclose(self.sigma_eps, self.sigma_eps.T):
            raise InvalidInputError("sigma_eps must be symmetric")
        if np.linalg.eigvalsh(self.sigma_eps).min() <= 0:
            raise InvalidInputError("sigma_eps must be positive definite")
        self.ar = [np.asarray(a, dtype=float) for a in self.ar]
        self.ma = [np.asarray(b, dtype=float) for b in self.ma]
        for m in self.ar + self.ma:
            if m.shape != (p, p):
                raise InvalidInputError(f"coefficient shape {m.shape} does not match p={p}")
        if self.spectral_radius() >= 1:
            raise InvalidInputError("AR part is not stable")

    @property
    def p(self):
        return self.sigma_eps.shape[0]

    def companion(self):
        p, k = self.p, len(self.ar)
        if k == 0:
            return np.zeros((p, p))
        C = np.zeros((p * k, p * k))
        C[:p] = np.hstack(self.ar)
        C[p:, :-p] = np.eye(p * (k - 1))
        return C

    def spectral_radius(self):
        if not self.ar:
            return 0.0
        return float(np.abs(np.linalg.eigvals(self.companion())).max())


@dataclass(frozen=True)
class DgpSpec:
    family: str
    p: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown DGP family {self.family!r}; expected one of {FAMILIES}")
        if self.p < 1 or self.n < 2:
            raise InvalidInputError("need p >= 1 and n >= 2")


def _banded(p, diagonals):
    A = np.zeros((p, p))
    for offset, value in diagonals.items():
        A += np.diag(np.full(p - abs(offset), value), offset)
    return A


def build_dgp(spec):
    """Model for one of the simulation families."""
    p = spec.p
    if spec.family in ("VARMA22", "VAR1Block") and p % 5:
        raise InvalidInputError(f"{spec.family} needs p divisible by 5, got {p}")
    if spec.family == "WhiteNoise":
        return VarmaModel(sigma_eps=_banded(p, {0: 0.7, 1: 0.3, -1: 0.3}))
    if spec.family == "VAR1":
        A = _banded(p, {0: 0.5, 1: -0.3, 2: 0.2})
        return VarmaModel(ar=[A], sigma_eps=np.eye(p))
    nb = p // 5
    if spec.family == "VARMA22":
        blk = np.eye(5) + np.ones((5, 5))
        B1 = block_diag(*[1.5 * blk] * nb)
        B2 = block_diag(*[0.75 * blk] * nb)
        return VarmaModel(ar=[0.4 * np.eye(p), 0.2 * np.eye(p)], ma=[B1, B2], sigma_eps=np.eye(p))
    blk = _banded(5, {0: 0.5, 1: 0.2})
    return VarmaModel(ar=[block_diag(*[blk] * nb)], sigma_eps=0.5 * np.eye(p))


def simulate_path(model, n, seed=0, burn_in=BURN_IN):
    """Draw an (n, p) sample path after discarding ``burn_in`` steps."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    if model.spectral_radius() >= 1:
        raise InvalidInputError("AR part is not stable")
    rng = np.random.default_rng(seed)
    p = model.p
    P, Q = len(model.ar), len(model.ma)
    total = n + burn_in
    L = np.linalg.cholesky(model.sigma_eps)
    eps = rng.standard_normal((total + Q, p)) @ L.T
    X = np.zeros((total + P, p))
    for t in range(total):
        x = eps[t + Q].copy()
        for j, B in enumerate(model.ma, start=1):
            x += B @ eps[t + Q - j]
        for i, A in enumerate(model.ar, start=1):
            x += A @ X[t + P - i]
        X[t + P] = x
    return X[P + burn_in:]


def _poly(mats, z, sign):
    p = mats[0].shape[0]
    out = np.eye(p, dtype=complex)
    for t, M in enumerate(mats, start=1):
        out += sign * M * z**t
    return out


def true_spectral_density(model, omega):
    """``(1/2pi) A(z)^-1 B(z) Sigma B(z)^H A(z)^-H`` at ``z = exp(-i omega)``."""
    p = model.p
    z = np.exp(-1j * omega)
    A = _poly(model.ar, z, -1.0) if model.ar else np.eye(p, dtype=complex)
    B = _poly(model.ma, z, 1.0) if model.ma else np.eye(p, dtype=complex)
    if np.linalg.cond(A) > 1e12:
        raise InvalidInputError("AR polynomial is singular at this frequency")
    H = np.linalg.solve(A, B)
    f = H @ model.sigma_eps @ H.conj().T / (2 * np.pi)
    return (f + f.conj().T) / 2


def true_precision(model, omega):
    f = true_spectral_density(model, omega)
    if np.linalg.cond(f) > 1e12:
        raise InvalidInputError("spectral density is singular at this frequency")
    theta = np.linalg.inv(f)
    return (theta + theta.conj().T) / 2


def true_support(model, omega, tol=1e-8):
    """Edge set used to score support recovery.

    For pure white noise the graph is the sparsity pattern of the innovation
    covariance; its inverse is dense with geometrically decaying entries, so
    thresholding it would leave no absent edges to score.  Otherwise it is
    the support of the true precision at ``omega``.
    """
    if not model.ar and not model.ma:
        return np.abs(model.sigma_eps) > tol
    return np.abs(true_precision(model, omega)) > tol


def sample_complex_normal(mu, Sigma, count, seed=0):
    """Draw ``count`` complex normal vectors with mean ``mu`` and covariance ``Sigma``.

    Uses the real 2p-dimensional vector ``[Re; Im]`` with covariance
    ``0.5 [[Re S, -Im S], [Im S, Re S]]``.  Returns shape (count, p).
    """
    Sigma = np.asarray(Sigma, dtype=complex)
    p = Sigma.shape[0]
    mu = np.zeros(p, complex) if mu is None else np.asarray(mu, dtype=complex).reshape(-1)
    if np.abs(Sigma - Sigma.conj().T).max() > 1e-10:
        raise InvalidInputError("Sigma must be Hermitian")
    R = 0.5 * np.block([[Sigma.real, -Sigma.imag], [Sigma.imag, Sigma.real]])
    w, V = np.linalg.eigh(R)
    if w.min() < -1e-10 * max(1.0, abs(w).max()):
        raise InvalidInputError("Sigma must be positive semidefinite")
    root = V * np.sqrt(np.clip(w, 0, None))
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((count, 2 * p)) @ root.T
    return mu + Z[:, :p] + 1j * Z[:, p:]

"""Sparse spectral precision estimation for multivariate time series."""
from .cglasso import (
    PrecisionEstimate, PrecisionPath, cglasso, cglasso_I, cglasso_II, cglasso_path, ebic,
    kkt_residual, partial_coherence,
)
from .classo import LassoPath, LassoSolution, classo, classo_cov, classo_path, soft_threshold
from .exceptions import ConvergenceError, InvalidInputError
from .metrics import auroc, rmse, support_scores
from .nodewise import nodewise_ols, nodewise_regression
from .simulate import DgpSpec, VarmaModel, build_dgp, simulate_path, true_precision, true_spectral_density
from .spectral import averaged_periodogram, dft

__all__ = [name for name in dir() if not name.startswith("_")]

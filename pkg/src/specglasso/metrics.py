"""Error and support-recovery measures for precision estimates."""
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError

TOL = 1e-8


@dataclass(frozen=True)
class SupportScores:
    precision: float | None
    recall: float
    accuracy: float


@dataclass(frozen=True)
class RocCurve:
    points: np.ndarray
    auroc: float


def rmse(theta_hat, theta_true):
    """Relative squared Frobenius error ``||hat - true||^2 / ||true||^2``."""
    a = np.asarray(theta_hat, dtype=complex)
    b = np.asarray(theta_true, dtype=complex)
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch: {a.shape} vs {b.shape}")
    denom = np.sum(np.abs(b) ** 2)
    if denom == 0:
        raise InvalidInputError("true matrix is zero")
    return float(np.sum(np.abs(a - b) ** 2) / denom)


def support(theta, tol=TOL):
    return np.abs(np.asarray(theta)) > tol


def support_scores(theta_hat, theta_true, tol=TOL, truth_support=None):
    """Precision, recall and accuracy over all ``p^2`` entries, diagonal included.

    ``precision`` is None when nothing is predicted.  ``truth_support``
    overrides the thresholded support of ``theta_true``.
    """
    est = support(theta_hat, tol)
    true = support(theta_true, tol) if truth_support is None else np.asarray(truth_support, bool)
    if est.shape != true.shape:
        raise InvalidInputError(f"shape mismatch: {est.shape} vs {true.shape}")
    tp = np.count_nonzero(est & true)
    tn = np.count_nonzero(~est & ~true)
    predicted = np.count_nonzero(est)
    actual = np.count_nonzero(true)
    precision = tp / predicted if predicted else None
    recall = tp / actual if actual else 0.0
    return SupportScores(precision=precision, recall=recall, accuracy=(tp + tn) / est.size)


def _pair_mask(p):
    return np.triu(np.ones((p, p), dtype=bool), k=1)


def roc_curve(supports, truth_support):
    """ROC points for a sequence of estimated supports against a true support.

    Only unordered off-diagonal pairs count.  Points are returned in input
    order (sparsest first for a decreasing penalty path), with ``(0, 0)``
    prepended and ``(1, 1)`` appended; the area uses the trapezoid rule
    after sorting by false-positive rate.
    """
    true = np.asarray(truth_support, dtype=bool)
    p = true.shape[0]
    mask = _pair_mask(p)
    t = true[mask]
    pos, neg = np.count_nonzero(t), np.count_nonzero(~t)
    if pos == 0 or neg == 0:
        raise InvalidInputError("ROC is undefined when the true edge set is empty or complete")
    pts = [(0.0, 0.0)]
    for s in supports:
        s = np.asarray(s, dtype=bool)
        if s.shape != true.shape:
            raise InvalidInputError(f"shape mismatch: {s.shape} vs {true.shape}")
        e = s[mask] | s.T[mask]
        pts.append((np.count_nonzero(e & ~t) / neg, np.count_nonzero(e & t) / pos))
    pts.append((1.0, 1.0))
    pts = np.array(pts)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = pts[order]
    area = float(np.sum(np.diff(srt[:, 0]) * (srt[:, 1][1:] + srt[:, 1][:-1]) / 2))
    return RocCurve(points=pts, auroc=area)


def auroc(path, theta_true=None, tol=TOL, truth_support=None):
    """Area under the ROC curve traced by a penalty path.

    ``path`` is a path object with ``estimates``, a list of matrices, or a
    list of boolean supports.  The truth is ``theta_true`` thresholded at
    ``tol`` unless ``truth_support`` is given.
    """
    items = path.estimates if hasattr(path, "estimates") else list(path)
    if len(items) < 2:
        raise InvalidInputError("need at least two path points")
    supports = []
    for it in items:
        m = it.theta if hasattr(it, "theta") else np.asarray(it)
        supports.append(m if m.dtype == bool else support(m, tol))
    if truth_support is None:
        if theta_true is None:
            raise InvalidInputError("either theta_true or truth_support is required")
        truth_support = support(theta_true, tol)
    return roc_curve(supports, truth_support).auroc

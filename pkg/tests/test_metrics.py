import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specglasso.exceptions import InvalidInputError
from specglasso.metrics import auroc, rmse, roc_curve, support_scores

T = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])


def test_rmse_examples():
    assert rmse(T, T) == 0
    assert rmse(np.zeros_like(T), T) == 1
    assert rmse(2 * T, T) == 1
    with pytest.raises(InvalidInputError):
        rmse(T, np.zeros_like(T))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rmse_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    U, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    assert rmse(U @ A @ U.conj().T, U @ B @ U.conj().T) == pytest.approx(rmse(A, B), rel=1e-10)


def test_support_scores_examples():
    s = support_scores(T, T)
    assert (s.precision, s.recall, s.accuracy) == (1, 1, 1)
    z = support_scores(np.zeros((3, 3)), T)
    assert z.precision is None and z.recall == 0 and z.accuracy == pytest.approx(2 / 9)
    d = support_scores(np.diag([1.0, 1.0, 1.0]), T)
    assert d.recall == pytest.approx(3 / 7) and d.precision == 1
    # truth edges (0,1),(1,2); estimate keeps (0,1) and adds (0,2)
    est = np.diag([1.0, 1.0, 1.0])
    est[0, 1] = est[1, 0] = est[0, 2] = est[2, 0] = 0.5
    s = support_scores(est, T)
    assert s.precision == pytest.approx(5 / 7)
    assert s.recall == pytest.approx(5 / 7)
    assert s.accuracy == pytest.approx(5 / 9)
    inf = support_scores(T, T, tol=np.inf)
    assert inf.precision is None and inf.recall == 0


def test_auroc_perfect_and_errors():
    truth = np.abs(T) > 0
    path = [np.eye(3, dtype=bool), truth, np.ones((3, 3), bool)]
    assert auroc(path, truth_support=truth) == 1.0
    # refining a nested path leaves the area unchanged
    assert auroc(path[:2] + [truth, truth] + path[2:], truth_support=truth) == 1.0
    with pytest.raises(InvalidInputError):
        auroc(path, truth_support=np.eye(3, dtype=bool))
    with pytest.raises(InvalidInputError):
        auroc(path, truth_support=np.ones((3, 3), bool))
    with pytest.raises(InvalidInputError):
        auroc(path[:1], truth_support=truth)


def test_roc_points_anchored():
    truth = np.abs(T) > 0
    curve = roc_curve([truth], truth)
    np.testing.assert_array_equal(curve.points, [[0, 0], [0, 1], [1, 1]])


def test_auroc_random_guess():
    rng = np.random.default_rng(0)
    p = 60
    truth = np.zeros((p, p), bool)
    idx = np.triu_indices(p, 1)
    pick = rng.random(idx[0].size) < 0.2
    truth[idx[0][pick], idx[1][pick]] = True
    truth |= truth.T
    u = rng.random((p, p))
    path = [u < q for q in np.linspace(0.02, 0.98, 30)]
    assert abs(auroc(path, truth_support=truth) - 0.5) <= 0.05

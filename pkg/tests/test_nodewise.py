import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specglasso.exceptions import InvalidInputError
from specglasso.metrics import auroc
from specglasso.nodewise import (
    nodewise_lambda_max, nodewise_ols, nodewise_path, nodewise_regression, symmetrize,
)
from specglasso.simulate import DgpSpec, build_dgp, simulate_path, true_support
from specglasso.spectral import dft_data_matrix


def cdata(N, p, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((N, p)) + 1j * rng.standard_normal((N, p))


def test_large_lambda_empty():
    Z = cdata(15, 5, 0)
    res = nodewise_regression(Z, nodewise_lambda_max(Z) * (1 + 1e-9))
    assert not res.coefficients.any()
    np.testing.assert_array_equal(res.support, np.eye(5, dtype=bool))


def test_rules():
    raw = np.array([[False, True], [False, False]])
    assert symmetrize(raw, "AND")[0, 1] == symmetrize(raw, "AND")[1, 0] == False  # noqa: E712
    assert symmetrize(raw, "OR")[0, 1] and symmetrize(raw, "OR")[1, 0]
    with pytest.raises(InvalidInputError):
        symmetrize(raw, "XOR")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.5))
def test_and_subset_of_or(seed, frac):
    Z = cdata(21, 6, seed)
    lam = frac * nodewise_lambda_max(Z)
    a = nodewise_regression(Z, lam, rule="AND").support
    o = nodewise_regression(Z, lam, rule="OR").support
    assert np.all(o[a])
    assert np.array_equal(o, o.T) and np.array_equal(a, a.T)


def test_ols_orthogonal_predictors():
    N = 8
    F = np.fft.fft(np.eye(N))[:, :3]  # orthogonal columns with norm sqrt(N)
    F[:, 1] *= 2.0
    Z = F.copy()
    Z[:, 0] = F[:, 0] + 0.5 * F[:, 1] - 0.25j * F[:, 2]
    # nodes 1 and 2 are regressed on the rest; check node 0 against decoupled equations
    coefs = nodewise_ols(Z)
    X = Z[:, [1, 2]]
    expected = (X.conj().T @ Z[:, 0]) / np.sum(np.abs(X) ** 2, axis=0)
    np.testing.assert_allclose(coefs[:, 0], expected, atol=1e-12)


def test_ols_hand_instance():
    Z = np.array([[1.0, 1j], [2.0, 0.0], [0.0, 1.0]])
    coefs = nodewise_ols(Z)
    assert coefs[0, 0] == pytest.approx(np.vdot(Z[:, 1], Z[:, 0]) / np.vdot(Z[:, 1], Z[:, 1]))
    assert coefs[0, 1] == pytest.approx(np.vdot(Z[:, 0], Z[:, 1]) / np.vdot(Z[:, 0], Z[:, 0]))


def test_ols_errors():
    with pytest.raises(InvalidInputError):
        nodewise_ols(cdata(3, 5, 0))
    Z = cdata(10, 3, 1)
    Z[:, 2] = 2 * Z[:, 1]
    with pytest.raises(InvalidInputError):
        nodewise_ols(Z)


def test_small_lambda_matches_ols():
    Z = cdata(30, 5, 2)
    res = nodewise_regression(Z, 1e-10, tol=1e-13, max_iter=100_000)
    assert np.abs(res.coefficients - nodewise_ols(Z)).max() <= 1e-6


def test_per_node_lambda():
    Z = cdata(20, 4, 3)
    lm = nodewise_lambda_max(Z)
    res = nodewise_regression(Z, [10 * lm, 0.1 * lm, 10 * lm, 10 * lm], rule="OR")
    assert not res.coefficients[:, [0, 2, 3]].any()
    assert res.coefficients[:, 1].any()


def test_white_noise_auroc_reference_band():
    model = build_dgp(DgpSpec("WhiteNoise", 10, 400))
    truth = true_support(model, 0.0)
    m = int(np.sqrt(400))
    scores = []
    for r in range(20):
        Z = dft_data_matrix(simulate_path(model, 400, seed=r), 0, m, center=False)
        _, results = nodewise_path(Z)
        scores.append(auroc([x.support for x in results], truth_support=truth))
    assert abs(100 * np.mean(scores) - 96.67) <= 2 * 2.98

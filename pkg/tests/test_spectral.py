import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import naive_dft

from specglasso.exceptions import InvalidInputError
from specglasso.spectral import (
    averaged_periodogram, dft, dft_all, dft_data_matrix, fourier_grid, nearest_fourier_index,
    periodogram, smoothing_span, wrap_index,
)


def test_fourier_grid_examples():
    np.testing.assert_array_equal(fourier_grid(4), [-1, 0, 1, 2])
    np.testing.assert_array_equal(fourier_grid(5), [-2, -1, 0, 1, 2])
    np.testing.assert_array_equal(fourier_grid(2), [0, 1])
    with pytest.raises(InvalidInputError):
        fourier_grid(1)


@given(st.integers(2, 500))
def test_fourier_grid_size_and_wrap(n):
    g = fourier_grid(n)
    assert g.size == n and np.all(np.diff(g) == 1)
    np.testing.assert_array_equal(wrap_index(g + n, n), g)
    np.testing.assert_array_equal(wrap_index(g - 3 * n, n), g)


def test_dft_constant_series():
    X = np.full((12, 2), 3.0)
    np.testing.assert_allclose(dft(X, 0, center=False), np.sqrt(12) * 3.0)
    for j in (1, -3, 6):
        np.testing.assert_allclose(dft(X, j, center=False), 0, atol=1e-10)


def test_dft_matches_naive_sum():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((8, 3))
    for j in fourier_grid(8):
        np.testing.assert_allclose(dft(X, j, center=False), naive_dft(X, j), atol=1e-10)
    with pytest.raises(InvalidInputError):
        dft(X, 5)


def test_fft_path_agrees_with_direct_sum():
    rng = np.random.default_rng(1)
    for n in (9, 10):
        X = rng.standard_normal((n, 2))
        idx, D = dft_all(X)
        for j, d in zip(idx, D):
            np.testing.assert_allclose(d, dft(X, j), atol=1e-10)


def test_centering_only_affects_frequency_zero():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((16, 2)) + 5.0
    np.testing.assert_allclose(dft(X, 0), 0, atol=1e-10)
    np.testing.assert_allclose(dft(X, 3), dft(X, 3, center=False), atol=1e-10)


def test_periodogram_examples():
    np.testing.assert_array_equal(periodogram([1, 0]), [[1, 0], [0, 0]])
    np.testing.assert_allclose(periodogram([1, 1j]), [[1, -1j], [1j, 1]])
    d = np.array([1 + 2j, -0.5j, 3])
    assert np.trace(periodogram(d)).real == pytest.approx(np.linalg.norm(d) ** 2)


def test_averaged_periodogram_single_term():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((20, 3))
    est = averaged_periodogram(X, 4, 0, center=False)
    np.testing.assert_allclose(est.fhat, periodogram(naive_dft(X, 4)) / (2 * np.pi), atol=1e-12)


def test_averaged_periodogram_wraps_at_boundary():
    rng = np.random.default_rng(4)
    n = 10
    X = rng.standard_normal((n, 2))
    j = n // 2
    expected = sum(periodogram(naive_dft(X, k)) for k in (4, 5, -4)) / (2 * np.pi * 3)
    np.testing.assert_allclose(averaged_periodogram(X, j, 1, center=False).fhat, expected, atol=1e-12)


def test_averaged_periodogram_rejects_wide_span():
    X = np.random.default_rng(5).standard_normal((10, 2))
    with pytest.raises(InvalidInputError):
        averaged_periodogram(X, 0, 5)


def test_data_matrix_rows_and_full_grid():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((9, 3))
    np.testing.assert_allclose(dft_data_matrix(X, 2, 0, center=False)[0], naive_dft(X, 2), atol=1e-12)
    Z = dft_data_matrix(X, 0, 4, center=False)
    np.testing.assert_allclose(Z, np.array([naive_dft(X, k) for k in range(-4, 5)]), atol=1e-12)


def test_gram_identity():
    # rows of Z are DFT vectors, so Z^H Z sums conj(d) d^T, the transpose of sum d d^H
    rng = np.random.default_rng(7)
    X = rng.standard_normal((40, 4))
    j, m = 5, 3
    Z = dft_data_matrix(X, j, m)
    fhat = averaged_periodogram(X, j, m).fhat
    np.testing.assert_allclose(Z.conj().T @ Z / (2 * m + 1), 2 * np.pi * fhat.conj(), atol=1e-10)
    np.testing.assert_allclose(Z.T @ Z.conj() / (2 * m + 1), 2 * np.pi * fhat, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 60), st.integers(1, 4), st.integers(0, 10_000))
def test_fhat_hermitian_psd_and_conjugate_symmetric(n, p, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    m = min(2, (n - 1) // 2)
    j = int(rng.integers(-((n - 1) // 2), n // 2 + 1))
    f = averaged_periodogram(X, j, m).fhat
    np.testing.assert_array_equal(f, f.conj().T)
    assert np.linalg.eigvalsh(f).min() >= -1e-10
    g = averaged_periodogram(X, int(wrap_index(-j, n)), m).fhat
    np.testing.assert_allclose(g, f.conj(), atol=1e-10)


def test_parseval():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((25, 3))
    _, D = dft_all(X, center=False)
    np.testing.assert_allclose((np.abs(D) ** 2).sum(axis=0), (X ** 2).sum(axis=0), rtol=1e-8)


def test_white_noise_fhat_near_truth():
    Sigma = np.array([[0.7, 0.3], [0.3, 0.7]])
    L = np.linalg.cholesky(Sigma)
    ests = []
    for r in range(50):
        X = np.random.default_rng(r).standard_normal((2000, 2)) @ L.T
        ests.append(averaged_periodogram(X, 0, 44, center=False).fhat.real)
    ests = np.array(ests)
    sd = ests.std(axis=0, ddof=1)
    mean = ests.mean(axis=0)
    assert np.all(np.abs(mean - Sigma / (2 * np.pi)) <= 3 * sd / np.sqrt(len(ests)) + 1e-12)


def test_nearest_index_and_span_rules():
    assert nearest_fourier_index(np.pi / 2, 1200) == (300, np.pi / 2)
    # pi sits halfway between the two end points of an odd grid
    j, om = nearest_fourier_index(np.pi, 11)
    assert abs(j) == 5 and abs(om) == pytest.approx(10 * np.pi / 11)
    assert nearest_fourier_index(np.pi, 10)[0] == 5
    assert smoothing_span(200) == 14
    assert smoothing_span(200, "ceil_4_sqrt_n") == 57
    assert smoothing_span(200, 7) == 7
    with pytest.raises(InvalidInputError):
        smoothing_span(200, "nope")

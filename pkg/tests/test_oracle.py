import numpy as np
import pytest

from rfct.errors import TestScaleError
from rfct.oracle import (
    brute_response,
    build_circulant,
    solve_rfct_dense,
    solve_srdcf_equivalent,
    solve_standard_cf,
    solve_standard_cf_fourier,
)
from rfct.spectral import circular_convolve, gaussian_label


def test_smallest_circulant():
    a, b = 2.0, 7.0
    np.testing.assert_array_equal(build_circulant(np.array([[a, b]])), [[a, b], [b, a]])


def test_impulse_gives_permutation(rng):
    x = np.zeros((3, 4))
    x[1, 2] = 1
    P = build_circulant(x)
    assert np.all(P.sum(axis=0) == 1) and np.all(P.sum(axis=1) == 1)
    assert set(np.unique(P)) == {0.0, 1.0}


def test_rows_are_cyclic_shifts(rng):
    x = rng.standard_normal((3, 4))
    C = build_circulant(x)
    assert np.array_equal(C[1 * 4 + 2], np.roll(x, (1, 2), axis=(0, 1)).ravel())


def test_transpose_product_is_convolution(rng):
    x = rng.standard_normal((5, 6))
    w = rng.standard_normal((5, 6))
    dense = (build_circulant(x).T @ w.ravel()).reshape(5, 6)
    assert np.max(np.abs(dense - circular_convolve(x, w))) < 1e-10


def test_eigenvalues_are_unnormalized_spectrum(rng):
    x = rng.standard_normal((4, 5))
    C = build_circulant(x)
    # C^T acts as convolution with x: the DFT basis diagonalises it
    F = np.kron(np.fft.fft(np.eye(4)), np.fft.fft(np.eye(5)))
    D = F @ C.T @ np.linalg.inv(F)
    assert np.max(np.abs(D - np.diag(np.diag(D)))) < 1e-9
    assert np.max(np.abs(np.diag(D) - np.fft.fft2(x).ravel())) < 1e-9


def test_size_guard():
    with pytest.raises(TestScaleError):
        build_circulant(np.zeros((65, 64)))


def test_standard_cf_two_oracles_agree(rng):
    x = rng.standard_normal((2, 8, 8))
    y = gaussian_label(8, 8, 1.5)
    dense = solve_standard_cf(x, y, 0.01)
    fourier = solve_standard_cf_fourier(x, y, 0.01)
    assert np.linalg.norm(dense.w - fourier.w) / np.linalg.norm(dense.w) < 1e-10


def test_standard_cf_heavy_regularisation(rng):
    x = rng.standard_normal((6, 6))
    w = solve_standard_cf(x, gaussian_label(6, 6, 1.0), 1e12).w
    assert np.max(np.abs(w)) < 1e-9


def test_standard_cf_impulse_reproduces_label():
    x = np.zeros((5, 5))
    x[0, 0] = 1
    y = gaussian_label(5, 5, 1.0)
    w = solve_standard_cf(x, y, 1e-10).w[0]
    np.testing.assert_allclose(w, y, atol=1e-8)


def test_rfct_all_ones_is_standard(rng):
    x = rng.standard_normal((2, 6, 6))
    y = gaussian_label(6, 6, 1.0)
    a = solve_rfct_dense(x, y, np.ones((6, 6)), 0.05).w
    b = solve_standard_cf(x, y, 0.05).w
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)


def test_rfct_zero_map(rng):
    x = rng.standard_normal((6, 6))
    assert np.all(solve_rfct_dense(x, gaussian_label(6, 6, 1.0), np.zeros((6, 6)), 0.01).w == 0)


def test_srdcf_identity_map(rng):
    x = rng.standard_normal((2, 6, 6))
    y = gaussian_label(6, 6, 1.0)
    np.testing.assert_allclose(
        solve_srdcf_equivalent(x, y, np.ones((6, 6)), 0.01), solve_standard_cf(x, y, 0.01).w, rtol=1e-10, atol=1e-12
    )


def test_srdcf_change_of_variables(rng):
    x = rng.standard_normal((2, 6, 6))
    y = gaussian_label(6, 6, 1.0)
    c = rng.uniform(0.1, 2.0, (6, 6))
    t = solve_srdcf_equivalent(x, y, c, 0.01)
    w = solve_rfct_dense(x, y, c, 0.01).w
    assert np.max(np.abs(t - c * w)) < 1e-8


def test_srdcf_rejects_zero_entry(rng):
    c = np.ones((4, 4))
    c[2, 1] = 0
    with pytest.raises(ValueError):
        solve_srdcf_equivalent(rng.standard_normal((4, 4)), np.ones((4, 4)), c, 0.01)


def test_dense_residual_small(rng):
    x = rng.standard_normal((7, 5))
    y = gaussian_label(7, 5, 1.0)
    c = rng.uniform(0, 1, (7, 5))
    w = solve_rfct_dense(x, y, c, 0.01).w[0].ravel()
    X = build_circulant(x)
    cv = c.ravel()
    A = (cv[:, None] * (X @ X.T)) * cv[None, :] + 0.01 * np.eye(35)
    assert np.linalg.norm(A @ w - cv * (X @ y.ravel())) < 1e-10 * np.linalg.norm(cv * (X @ y.ravel()))


def test_oracles_deterministic(rng):
    x = rng.standard_normal((2, 5, 5))
    y = gaussian_label(5, 5, 1.0)
    c = rng.uniform(0.2, 1, (5, 5))
    assert np.array_equal(solve_rfct_dense(x, y, c, 0.01).w, solve_rfct_dense(x, y, c, 0.01).w)


def test_brute_response_shape(rng):
    z = rng.standard_normal((2, 4, 4))
    assert brute_response(z, np.zeros((2, 4, 4)), np.ones((4, 4))).shape == (4, 4)

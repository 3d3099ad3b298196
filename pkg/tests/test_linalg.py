import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cholkit import (
    DimensionError,
    LdlFactors,
    SingularFactorError,
    as_cmatrix,
    hermitian_check,
    ldl_decompose,
    pinv_from_ldl,
    reconstruct,
    solve_lower_unit,
    solve_upper_unit,
)
from oracles import crandn, random_hermitian_pd


def test_hermitian_check_examples():
    assert hermitian_check(np.eye(3), 0.0)
    assert hermitian_check([[1, 1j], [-1j, 2]], 1e-14)
    assert not hermitian_check([[1, 2], [3, 4]], 1e-14)


def test_hermitian_check_rejects_nonsquare():
    with pytest.raises(DimensionError):
        hermitian_check(np.ones((2, 3)))


def test_as_cmatrix_validates():
    a = as_cmatrix([[1, 2], [3, 4]])
    assert a.dtype == np.complex128
    assert as_cmatrix([1, 2, 3]).shape == (3, 1)
    with pytest.raises(DimensionError):
        as_cmatrix(np.ones((2, 2, 2)))
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan]])


def test_solve_lower_unit_examples():
    B = np.arange(6.0).reshape(3, 2)
    np.testing.assert_array_equal(solve_lower_unit(np.eye(3), B), B)
    np.testing.assert_allclose(solve_lower_unit([[1, 0], [0.5, 1]], [[2], [3]]), [[2], [2]])
    np.testing.assert_allclose(solve_lower_unit([[1, 0], [-1j, 1]], [[1], [0]]), [[1], [1j]])


def test_triangular_solves_shape_errors():
    with pytest.raises(DimensionError):
        solve_lower_unit(np.eye(3), np.ones((2, 1)))
    with pytest.raises(DimensionError):
        solve_upper_unit(np.ones((2, 3)), np.ones((2, 1)))


@given(n=st.integers(1, 12), k=st.integers(1, 3), seed=st.integers(0, 2**32 - 1))
def test_triangular_solves_residual(n, k, seed):
    rng = np.random.default_rng(seed)
    L = np.tril(crandn(rng, n, n), -1) + np.eye(n)
    B = crandn(rng, n, k)
    X = solve_lower_unit(L, B)
    np.testing.assert_allclose(L @ X, B, atol=1e-9 * max(1.0, np.abs(X).max()))
    U = L.conj().T
    X = solve_upper_unit(U, B)
    np.testing.assert_allclose(U @ X, B, atol=1e-9 * max(1.0, np.abs(X).max()))


def test_reconstruct_examples():
    f = LdlFactors(np.eye(3), (1.0, 1.0, 1.0), 1)
    np.testing.assert_array_equal(reconstruct(f), np.eye(3))
    f = LdlFactors([[1, 0], [0.5, 1]], (4.0, 2.0), 1)
    np.testing.assert_allclose(reconstruct(f), [[4, 2], [2, 3]])


def test_pinv_examples():
    np.testing.assert_allclose(pinv_from_ldl(ldl_decompose(np.eye(4))), np.eye(4))
    np.testing.assert_allclose(
        pinv_from_ldl(ldl_decompose([[4, 2], [2, 3]])), [[0.375, -0.25], [-0.25, 0.5]], atol=1e-15
    )


def test_pinv_singular_block_index():
    with pytest.raises(SingularFactorError) as info:
        pinv_from_ldl(LdlFactors(np.eye(2), (1.0, 0.0), 1))
    assert info.value.index == 2
    with pytest.raises(SingularFactorError) as info:
        pinv_from_ldl(LdlFactors(np.eye(1), (0.0,), 1))
    assert info.value.index == 1


def test_ldl_factors_shape_mismatch():
    with pytest.raises(DimensionError):
        LdlFactors(np.eye(4), (np.eye(2),), 2)


@given(n=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_pinv_is_inverse_for_pd(n, seed):
    rng = np.random.default_rng(seed)
    R = random_hermitian_pd(rng, n, 1e4)
    P = pinv_from_ldl(ldl_decompose(R))
    assert hermitian_check(P, 0.0)
    np.testing.assert_allclose(P, np.linalg.inv(R), atol=1e-8 * np.abs(np.linalg.inv(R)).max())

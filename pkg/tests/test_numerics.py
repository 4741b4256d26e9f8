import numpy as np
import pytest

from mcentropy.errors import BracketError, EvaluationError, InvalidInputError
from mcentropy.numerics import (
    fd_derivatives,
    fd_jacobian,
    newton_bracketed,
    pd_check,
    sym_eig_extremes,
)


def test_pd_check_diagonal():
    rep = pd_check(np.diag([2.0, 3.0]))
    assert rep.is_pd
    np.testing.assert_allclose(rep.leading_minors, [2.0, 6.0])


def test_pd_check_indefinite():
    rep = pd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not rep.is_pd
    np.testing.assert_allclose(rep.leading_minors, [1.0, -3.0])


def test_pd_check_reference_congruence_matrix():
    rep = pd_check(np.diag([2.0, 1.0, 1.0, 2.25]))
    assert rep.is_pd
    np.testing.assert_allclose(rep.leading_minors, [2.0, 2.0, 2.0, 4.5])


@pytest.mark.parametrize("n", range(1, 9))
def test_pd_check_identity(n):
    assert pd_check(np.eye(n)).is_pd


def test_pd_check_gram_matrices(rng):
    for _ in range(50):
        n = rng.integers(1, 7)
        A = rng.normal(size=(n, n))
        M = A.T @ A + 1e-8 * np.linalg.norm(A) ** 2 * np.eye(n)
        assert pd_check(M).is_pd


def test_pd_check_rejects_asymmetric():
    rep = pd_check(np.array([[1.0, 0.5], [0.0, 1.0]]))
    assert not rep.is_pd
    assert rep.symmetry_defect == pytest.approx(0.5)


def test_pd_check_rejects_nan():
    with pytest.raises(InvalidInputError):
        pd_check(np.array([[1.0, np.nan], [np.nan, 1.0]]))


def test_pd_check_rejects_non_square():
    with pytest.raises(InvalidInputError):
        pd_check(np.ones((2, 3)))


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(3), (1.0, 1.0)),
        (np.diag([0.5, 4.0]), (0.5, 4.0)),
        (np.array([[2.0, 1.0], [1.0, 2.0]]), (1.0, 3.0)),
    ],
)
def test_sym_eig_extremes_examples(M, expected):
    ext = sym_eig_extremes(M)
    assert (ext.min_eig, ext.max_eig) == pytest.approx(expected, rel=1e-12)


def test_minors_agree_with_min_eig(rng):
    for _ in range(200):
        n = rng.choice([4, 5])
        A = rng.normal(size=(n, n))
        M = 0.5 * (A + A.T) + rng.uniform(-1, 3) * np.eye(n)
        ext = sym_eig_extremes(M)
        if abs(ext.min_eig) < 1e-6:
            continue
        assert pd_check(M).is_pd == (ext.min_eig > 0)


def test_sym_eig_extremes_stack():
    M = np.stack([np.diag([1.0, 2.0]), np.diag([-1.0, 5.0])])
    ext = sym_eig_extremes(M)
    np.testing.assert_allclose(ext.min_eig, [1.0, -1.0])
    np.testing.assert_allclose(ext.max_eig, [2.0, 5.0])


def test_sym_eig_extremes_rejects_asymmetric():
    with pytest.raises(InvalidInputError):
        sym_eig_extremes(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_fd_quadratic_gradient():
    D = np.diag([1.0, 2.0])
    d = fd_derivatives(lambda x: x @ D @ x, np.array([1.0, 1.0]), h=1e-4)
    np.testing.assert_allclose(d.gradient, [2.0, 4.0], atol=1e-7)
    np.testing.assert_allclose(d.hessian, 2 * D, atol=1e-6)


def test_fd_constant():
    d = fd_derivatives(lambda x: 3.0, np.array([0.3, -1.0, 2.0]))
    np.testing.assert_array_equal(d.gradient, 0.0)
    np.testing.assert_array_equal(d.hessian, 0.0)


def test_fd_random_quadratic_forms(rng):
    for _ in range(20):
        n = rng.integers(1, 6)
        A = rng.normal(size=(n, n))
        Q = A + A.T
        b = rng.normal(size=n)
        x = rng.uniform(-1, 1, n)
        d = fd_derivatives(lambda y: 0.5 * y @ Q @ y + b @ y, x)
        np.testing.assert_allclose(d.gradient, Q @ x + b, rtol=1e-6, atol=1e-8)
        np.testing.assert_allclose(d.hessian, Q, rtol=1e-6, atol=1e-6 * np.abs(Q).max())


def test_fd_reports_failing_point():
    with pytest.raises(EvaluationError) as info, np.errstate(invalid="ignore"):
        fd_derivatives(lambda x: np.log(x[0]), np.array([1e-5]), h=1e-4)
    assert info.value.point is not None


def test_fd_jacobian_linear_map(rng):
    A = rng.normal(size=(3, 3))
    J = fd_jacobian(lambda x: x @ A.T, rng.normal(size=(5, 3)))
    np.testing.assert_allclose(J, np.broadcast_to(A, (5, 3, 3)), rtol=1e-8, atol=1e-9)


def test_newton_linear():
    assert newton_bracketed(lambda T: T - 2.0, 0.0, 10.0) == pytest.approx(2.0, abs=1e-12)


def test_newton_quadratic_heat_capacity():
    # T + T^2/4 = 3 has positive root 2; default scale is max |g| at the ends = 32
    g = lambda T: T + T**2 / 4 - 3.0  # noqa: E731
    T = newton_bracketed(g, 0.0, 10.0)
    assert abs(g(T)) <= 1e-12 * 32.0
    assert T == pytest.approx(2.0, abs=1e-10)
    assert newton_bracketed(g, 0.0, 10.0, scale=1.0, tol=1e-15) == pytest.approx(2.0, abs=1e-14)


def test_newton_no_sign_change():
    with pytest.raises(BracketError):
        newton_bracketed(lambda T: T**2, 1.0, 2.0)


def test_newton_vectorized():
    target = np.array([0.5, 2.0, 7.0])
    T = newton_bracketed(lambda T: T**3 - target, np.zeros(3), np.full(3, 3.0))
    np.testing.assert_allclose(T, np.cbrt(target), rtol=1e-12)


def test_newton_falls_back_to_bisection():
    # Newton from the secant guess overshoots on this flat-then-steep function
    g = lambda x: np.arctan(10 * (x - 0.3))  # noqa: E731
    x = newton_bracketed(g, -5.0, 5.0)
    assert x == pytest.approx(0.3, abs=1e-12)

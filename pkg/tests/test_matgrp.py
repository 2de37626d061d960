from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from homlie.algebra import check_axioms
from homlie.errors import BadParameter, DimensionMismatch, ModeError, SingularMatrix
from homlie.exactnum import Matrix
from homlie.matgrp import (
    TwistedMatrixSpace,
    ad_beta_map,
    ad_hat,
    ad_small,
    adhat_hexp_check,
    bracket_map,
    check_homgroup,
    commutator_fd_verify,
    gl_ad_beta,
    gl_bracket,
    gl_to_algebra,
    group_inverse,
    group_product,
    hexp,
    infinitesimal_action,
    one_param_check,
    omega_deviation,
    omega_nested,
    omega_product,
    random_invertible,
    tilde_ad,
    tilde_ad_check,
    unvec,
    vec,
)

import oracles

F = Fraction
E12 = Matrix.from_rows([[0, 1], [0, 0]])
E21 = Matrix.from_rows([[0, 0], [1, 0]])
DIAG12 = Matrix.diag([1, 2])
JORDAN = Matrix.from_rows([[1, 1], [0, 1]])


def space(beta):
    return TwistedMatrixSpace(beta)


def betas(m):
    jordan = np.eye(m) + np.diag(np.ones(m - 1), 1)
    return [np.eye(m), np.diag(np.arange(1.0, m + 1)), jordan]


# -- bracket / conjugation / group ------------------------------------------------


def test_gl_bracket_examples():
    S1 = TwistedMatrixSpace.identity(2)
    A = Matrix.from_rows([[1, 2], [3, 4]])
    B = Matrix.from_rows([[0, 1], [5, -1]])
    assert gl_bracket(S1, A, B) == A @ B - B @ A
    assert gl_bracket(space(DIAG12), A, A).is_zero()
    assert gl_bracket(space(DIAG12), E12, E21) == Matrix.from_rows([[F(1, 2), 0], [0, -1]])


def test_gl_bracket_float_matches_exact():
    S = space(DIAG12)
    exact = gl_bracket(S, E12, E21).to_array()
    assert np.allclose(gl_bracket(S, E12.to_array(), E21.to_array()), exact, atol=0)


def test_gl_ad_beta_examples():
    A = Matrix.from_rows([[1, 2], [3, 4]])
    assert gl_ad_beta(TwistedMatrixSpace.identity(2), A) == A
    assert gl_ad_beta(space(DIAG12), DIAG12) == DIAG12
    assert gl_ad_beta(space(DIAG12), E12) == Matrix.from_rows([[0, F(1, 2)], [0, 0]])
    assert gl_ad_beta(space(DIAG12), gl_ad_beta(space(DIAG12), A, -1)) == A


def test_group_product_and_inverse_examples():
    S1 = TwistedMatrixSpace.identity(2)
    A = Matrix.from_rows([[1, 2], [3, 4]])
    B = Matrix.from_rows([[0, 1], [1, 1]])
    assert group_product(S1, A, B) == A @ B
    S = space(DIAG12)
    assert group_product(S, A, DIAG12) == gl_ad_beta(S, A)
    assert group_inverse(S, Matrix.diag([3, 4])) == Matrix.diag([F(1, 3), 1])
    assert group_product(S, A, group_inverse(S, A)) == DIAG12


def test_group_errors():
    S = space(DIAG12)
    with pytest.raises(SingularMatrix):
        group_product(S, Matrix.from_rows([[1, 2], [2, 4]]), DIAG12)
    with pytest.raises(SingularMatrix):
        group_inverse(S, np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(DimensionMismatch):
        gl_bracket(S, Matrix.identity(3), Matrix.identity(3))
    with pytest.raises(SingularMatrix):
        TwistedMatrixSpace(Matrix.from_rows([[1, 2], [2, 4]]))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_homgroup_axioms_on_random_samples(rng, m):
    for beta in betas(m):
        S = space(beta)
        samples = [random_invertible(rng, m) for _ in range(10 if m == 2 else 5)]
        rep = check_homgroup(S, samples)
        assert rep.ok, rep.residuals


def test_homgroup_identity_twist_is_exact():
    S = TwistedMatrixSpace.identity(2)
    xs = [np.array([[1.0, 1], [0, 1]]), np.array([[2.0, 0], [0, 1]]), np.array([[0.0, 1], [1, 0]])]
    rep = check_homgroup(S, xs)
    assert rep.ok and max(rep.residuals.values()) <= 1e-15


def test_homgroup_rejects_singular_and_short_samples():
    S = space(DIAG12)
    with pytest.raises(SingularMatrix):
        check_homgroup(S, [np.eye(2), np.eye(2), np.zeros((2, 2))])
    with pytest.raises(BadParameter):
        check_homgroup(S, [np.eye(2)])


@pytest.mark.parametrize("m", [2, 3, 4])
def test_hom_jacobi_numerically(rng, m):
    for beta in betas(m):
        S = space(beta)
        for _ in range(5):
            A, B, C = (rng.uniform(-1, 1, (m, m)) for _ in range(3))
            tw = lambda X: gl_ad_beta(S, X)
            total = (
                gl_bracket(S, tw(A), gl_bracket(S, B, C))
                + gl_bracket(S, tw(B), gl_bracket(S, C, A))
                + gl_bracket(S, tw(C), gl_bracket(S, A, B))
            )
            assert np.abs(total).max() <= 1e-9


# -- exponentials ----------------------------------------------------------------


def test_hexp_examples():
    S = space(DIAG12)
    assert np.array_equal(hexp(S, np.zeros((2, 2))), DIAG12.to_array())
    A = np.array([[0.3, -1.0], [0.5, 0.2]])
    assert np.abs(hexp(TwistedMatrixSpace.identity(2), A) - expm(A)).max() <= 1e-13
    assert np.abs(hexp(S, np.diag([1.0, 2.0])) - np.diag([np.e, 2 * np.e])).max() <= 1e-13
    with pytest.raises(ModeError):
        hexp(S, E12)


def test_hexp_against_scipy(rng):
    for m in (2, 3):
        for beta in betas(m):
            S = space(beta)
            for _ in range(5):
                A = rng.uniform(-1, 1, (m, m))
                t = rng.uniform(-1, 1)
                assert np.abs(hexp(S, A, t) - oracles.hexp(beta, A, t)).max() <= 1e-12


def test_one_param_examples(rng):
    S = space(DIAG12)
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert one_param_check(S, A, [(0.0, 0.0)]).residual <= 1e-15
    grid = [(t, s) for t in np.linspace(-1, 1, 5) for s in np.linspace(-1, 1, 5)]
    assert one_param_check(TwistedMatrixSpace.identity(2), A, grid).residual <= 1e-10
    rep = one_param_check(S, A, grid)
    assert rep.ok and rep.count == 25


def test_inverse_pairs_of_hexp(rng):
    for beta in betas(2) + betas(3):
        S = space(beta)
        m = beta.shape[0]
        A = rng.uniform(-1, 1, (m, m))
        for t in (0.3, 1.0):
            left = np.linalg.solve(S.b, hexp(S, A, t) @ S.b)
            right = np.linalg.solve(S.b, hexp(S, A, -t) @ S.b)
            assert np.abs(group_product(S, left, right) - S.b).max() <= 1e-9


# -- commutator ------------------------------------------------------------------


def test_omega_forms_agree(rng):
    for m in (2, 3):
        for beta in betas(m):
            S = space(beta)
            A, B = rng.uniform(-1, 1, (2, m, m))
            for s, t in [(0.3, -0.7), (1.0, 0.5), (1e-4, -1e-4)]:
                nested = omega_nested(S, A, B, s, t)
                prod = omega_product(S, A, B, s, t)
                assert np.abs(nested - prod).max() <= 1e-9
                assert np.abs(omega_deviation(S, A, B, s, t) - (prod - S.b)).max() <= 1e-12


def test_commutator_examples():
    A, B = E12.to_array(), E21.to_array()
    chk = commutator_fd_verify(TwistedMatrixSpace.identity(2), A, B, 1e-4)
    assert np.abs(chk.fd - np.diag([1.0, -1.0])).max() <= 1e-6
    assert chk.residual <= 1e-6
    chk = commutator_fd_verify(space(DIAG12), A, B, 1e-4)
    assert np.abs(chk.fd - np.array([[0.5, 0], [0, -1.0]])).max() <= 1e-6
    same = commutator_fd_verify(space(DIAG12), A + B, A + B, 1e-3)
    assert np.abs(same.closed).max() == 0 and same.residual <= 1e-6
    assert chk.residual == np.abs(chk.fd - chk.closed).max()


def test_commutator_second_order(rng):
    S = space(DIAG12)
    A, B = rng.uniform(-1, 1, (2, 2, 2))
    r = [commutator_fd_verify(S, A, B, h).residual for h in (1e-3, 5e-4, 2.5e-4)]
    assert r[0] / r[1] >= 3.5 and r[1] / r[2] >= 3.5


def test_commutator_step_range():
    S = space(DIAG12)
    with pytest.raises(BadParameter):
        commutator_fd_verify(S, np.eye(2), np.eye(2), 0.5)
    with pytest.raises(BadParameter):
        commutator_fd_verify(S, np.eye(2), np.eye(2), 0.0)


def test_commutator_json_shape():
    doc = commutator_fd_verify(space(DIAG12), E12.to_array(), E21.to_array(), 1e-4).to_json()
    assert set(doc) == {"residual", "step", "fd", "closed"}
    assert doc["fd"]["rows"] == 2 and doc["closed"]["mode"] == "approx"


# -- adjoint actions -------------------------------------------------------------


def test_vec_is_column_major():
    X = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert list(vec(X)) == [1.0, 3.0, 2.0, 4.0]
    assert np.array_equal(unvec(vec(X), 2), X)


def test_ad_beta_map_is_conjugation(rng):
    S = space(np.array([[1.0, 1.0], [0.0, 2.0]]))
    E = rng.uniform(-1, 1, (2, 2))
    assert np.abs(unvec(ad_beta_map(S) @ vec(E), 2) - S.b @ E @ S.binv).max() <= 1e-14


def test_tilde_ad_examples(rng):
    S = space(DIAG12)
    b = random_invertible(rng, 2)
    assert np.abs(tilde_ad(S, S.b, b) - S.b @ b @ S.binv).max() <= 1e-14
    a = random_invertible(rng, 2)
    S1 = TwistedMatrixSpace.identity(2)
    assert np.abs(tilde_ad(S1, a, b) - a @ b @ np.linalg.inv(a)).max() <= 1e-13
    # closed form of the twisted conjugation
    assert np.abs(tilde_ad(S, a, b) - S.b @ a @ S.binv @ b @ np.linalg.inv(a)).max() <= 1e-12


def test_tilde_ad_action_axioms(rng):
    for beta in betas(2) + betas(3):
        m = beta.shape[0]
        S = space(beta)
        rep = tilde_ad_check(S, [random_invertible(rng, m) for _ in range(5)])
        assert rep.ok, rep.residuals


def test_ad_hat_examples(rng):
    S = space(DIAG12)
    assert np.abs(ad_hat(S, S.b) - ad_beta_map(S)).max() <= 1e-8
    a = random_invertible(rng, 2)
    S1 = TwistedMatrixSpace.identity(2)
    E = rng.uniform(-1, 1, (2, 2))
    assert np.abs(unvec(ad_hat(S1, a) @ vec(E), 2) - a @ E @ np.linalg.inv(a)).max() <= 1e-8


def test_ad_hat_closed_form(rng):
    for beta in betas(2):
        S = space(beta)
        a = random_invertible(rng, 2)
        E = rng.uniform(-1, 1, (2, 2))
        expected = a @ E @ S.binv @ np.linalg.inv(a) @ S.b
        assert np.abs(unvec(ad_hat(S, a) @ vec(E), 2) - expected).max() <= 1e-8


def test_infinitesimal_action_is_bracket(rng):
    S = space(DIAG12)
    for _ in range(5):
        X, Y = rng.uniform(-1, 1, (2, 2, 2))
        assert np.abs(infinitesimal_action(S, X, Y) - gl_bracket(S, X, Y)).max() <= 1e-4


def test_ad_small_matches_closed_form(rng):
    S = space(DIAG12)
    X = rng.uniform(-1, 1, (2, 2))
    P = ad_beta_map(S)
    expected = np.linalg.solve(P, bracket_map(S, X) @ P)
    assert np.abs(ad_small(S, X) - expected).max() <= 1e-4


def test_adhat_hexp_examples():
    S = space(DIAG12)
    zero = adhat_hexp_check(S, np.zeros((2, 2)))
    assert zero.residual <= 1e-8
    X = np.array([[0.0, 0.25], [0.25, 0.0]])
    assert adhat_hexp_check(TwistedMatrixSpace.identity(2), X).residual <= 1e-6
    assert adhat_hexp_check(S, X).ok


# -- exact algebra ---------------------------------------------------------------


def test_gl_to_algebra_examples():
    one = gl_to_algebra(TwistedMatrixSpace(Matrix.identity(1)))
    assert one.dim == 1 and one.tensor_entries() == []
    gl2 = gl_to_algebra(TwistedMatrixSpace(Matrix.identity(2)))
    # [E11, E12] = E12 with labels in column-major order E11, E21, E12, E22
    assert gl2.labels == ("E11", "E21", "E12", "E22")
    assert gl2.structure(0, 2) == (0, 0, 1, 0)
    assert gl2.structure(1, 2) == (-1, 0, 0, 1)
    for beta in (DIAG12, JORDAN):
        assert check_axioms(gl_to_algebra(TwistedMatrixSpace(beta))).ok


def test_gl_to_algebra_matches_float_bracket(rng):
    S = TwistedMatrixSpace(JORDAN)
    alg = gl_to_algebra(S)
    X, Y = rng.integers(-3, 4, (2, 2, 2))
    bx = alg.bracket(tuple(int(v) for v in vec(X)), tuple(int(v) for v in vec(Y)))
    assert np.allclose(unvec(np.array([float(c) for c in bx]), 2), gl_bracket(S, X.astype(float), Y.astype(float)))


def test_gl_to_algebra_three_dimensional():
    beta = Matrix.from_rows([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert check_axioms(gl_to_algebra(TwistedMatrixSpace(beta))).ok

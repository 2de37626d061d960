"""The twisted matrix group ``(GL(V), A*B = b A b^-1 B b^-1, b, Ad_b)`` and its algebra.

Functions take matrices either as :class:`~homlie.exactnum.Matrix` or as numpy
arrays.  Purely algebraic operations (bracket, conjugation, product, inverse)
stay exact on exact ``Matrix`` input; everything involving an exponential or a
finite difference works on float arrays and returns arrays.

Linear maps on ``gl(V)`` are stored as ``m^2 x m^2`` arrays acting on
column-major flattened matrices (``E11, E21, ..., Emm``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algebra import HomLieAlgebra
from .errors import BadParameter, ConsistencyError, DimensionMismatch, ModeError, SingularMatrix
from .exactnum import (
    APPROX,
    EXACT,
    TAU_RANK,
    TAU_RES,
    Matrix,
    expm1_array,
    expm_array,
    inverse,
    rank,
)

H_AD = 1e-5  # central-difference step for pushforwards
H_OUTER = 1e-4  # step for a derivative taken over an already differenced quantity


class TwistedMatrixSpace:
    """An invertible twist ``beta`` on an ``m``-dimensional space."""

    def __init__(self, beta):
        if isinstance(beta, Matrix):
            self.beta = beta
        else:
            self.beta = Matrix.from_array(beta)
        if not self.beta.is_square:
            raise DimensionMismatch("beta must be square")
        self.m = self.beta.rows
        if rank(self.beta) != self.m:
            raise SingularMatrix("beta is not invertible")
        self.beta_inv = inverse(self.beta)
        self.b = self.beta.to_array()
        self.binv = np.linalg.inv(self.b) if self.beta.mode == APPROX else self.beta_inv.to_array()

    @classmethod
    def identity(cls, m: int):
        return cls(Matrix.identity(m))

    @property
    def exact(self) -> bool:
        return self.beta.mode == EXACT

    def __repr__(self):
        return f"TwistedMatrixSpace(m={self.m}, beta={self.beta!r})"


def _is_exact(*xs) -> bool:
    flags = [isinstance(x, Matrix) and x.mode == EXACT for x in xs]
    if any(flags) and not all(flags):
        raise ModeError("mix of exact and float matrices")
    return bool(flags) and all(flags)


def _arr(S: TwistedMatrixSpace, x) -> np.ndarray:
    a = x.to_array() if isinstance(x, Matrix) else np.asarray(x, dtype=float)
    if a.shape != (S.m, S.m):
        raise DimensionMismatch(f"expected a {S.m}x{S.m} matrix, got {a.shape}")
    return a


def _exact(S: TwistedMatrixSpace, x: Matrix) -> Matrix:
    if not S.exact:
        raise ModeError("exact matrices need an exact twist")
    if x.shape != (S.m, S.m):
        raise DimensionMismatch(f"expected a {S.m}x{S.m} matrix, got {x.shape}")
    return x


def _out(like, a: np.ndarray):
    return Matrix.from_array(a) if isinstance(like, Matrix) else a


def _require_invertible(a: np.ndarray) -> None:
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= TAU_RANK * max(s[0], 1.0):
        raise SingularMatrix("matrix is singular to working precision")


def _power(S: TwistedMatrixSpace, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``(beta^k, beta^-k)`` as arrays; ``k`` may be negative."""
    p = np.linalg.matrix_power(S.b if k >= 0 else S.binv, abs(k))
    q = np.linalg.matrix_power(S.binv if k >= 0 else S.b, abs(k))
    return p, q


# -- algebraic operations ---------------------------------------------------------


def gl_bracket(S: TwistedMatrixSpace, A, B):
    """``[A, B]_beta = beta A beta^-1 B beta^-1 - beta B beta^-1 A beta^-1``."""
    if _is_exact(A, B):
        A, B = _exact(S, A), _exact(S, B)
        b, bi = S.beta, S.beta_inv
        return b @ A @ bi @ B @ bi - b @ B @ bi @ A @ bi
    a, bb = _arr(S, A), _arr(S, B)
    return _out(A, S.b @ a @ S.binv @ bb @ S.binv - S.b @ bb @ S.binv @ a @ S.binv)


def gl_ad_beta(S: TwistedMatrixSpace, A, power: int = 1):
    """Conjugation ``beta^k A beta^-k`` (``k = power``, default the twist ``Ad_beta``)."""
    if _is_exact(A):
        A = _exact(S, A)
        out = A
        step, back = (S.beta, S.beta_inv) if power >= 0 else (S.beta_inv, S.beta)
        for _ in range(abs(power)):
            out = step @ out @ back
        return out
    p, q = _power(S, power)
    return _out(A, p @ _arr(S, A) @ q)


def group_product(S: TwistedMatrixSpace, A, B):
    """``A * B = beta A beta^-1 B beta^-1``."""
    if _is_exact(A, B):
        A, B = _exact(S, A), _exact(S, B)
        if rank(A) != S.m or rank(B) != S.m:
            raise SingularMatrix("group elements must be invertible")
        return S.beta @ A @ S.beta_inv @ B @ S.beta_inv
    a, b = _arr(S, A), _arr(S, B)
    _require_invertible(a)
    _require_invertible(b)
    return _out(A, S.b @ a @ S.binv @ b @ S.binv)


def group_inverse(S: TwistedMatrixSpace, A):
    """Hom-inverse ``beta A^-1 beta``."""
    if _is_exact(A):
        return S.beta @ inverse(_exact(S, A)) @ S.beta
    a = _arr(S, A)
    _require_invertible(a)
    return _out(A, S.b @ np.linalg.inv(a) @ S.b)


def _prod(S, a, b):
    return S.b @ a @ S.binv @ b @ S.binv


def _hinv(S, a):
    return S.b @ np.linalg.inv(a) @ S.b


def _tw(S, a):
    return S.b @ a @ S.binv


def _untw(S, a):
    return S.binv @ a @ S.b


def random_invertible(rng: np.random.Generator, m: int, min_det: float = 0.1) -> np.ndarray:
    """Uniform entries in ``[-1, 1]``, redrawn until ``|det| >= min_det``."""
    while True:
        a = rng.uniform(-1.0, 1.0, size=(m, m))
        if abs(np.linalg.det(a)) >= min_det:
            return a


@dataclass
class HomGroupReport:
    residuals: dict[str, float]
    tol: float

    @property
    def ok(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    def verdicts(self):
        return [(k, v <= self.tol, f"residual {v:.3e}") for k, v in self.residuals.items()]


def check_homgroup(S: TwistedMatrixSpace, samples: Sequence, tol: float = TAU_RES) -> HomGroupReport:
    """Worst residual of each Hom-group axiom over all ordered sample triples.

    Axioms: the twist is multiplicative, Hom-associativity, ``beta`` is a
    two-sided Hom-unit, and the Hom-inverse gives ``beta`` on both sides.
    """
    if len(samples) < 3:
        raise BadParameter("need at least three samples")
    xs = [_arr(S, x) for x in samples]
    for x in xs:
        _require_invertible(x)
    res = {"twist_multiplicative": 0.0, "hom_associative": 0.0, "hom_unit": 0.0, "inverse": 0.0}

    def upd(key, lhs, rhs):
        res[key] = max(res[key], float(np.max(np.abs(lhs - rhs))))

    for a in xs:
        upd("hom_unit", _prod(S, a, S.b), _tw(S, a))
        upd("hom_unit", _prod(S, S.b, a), _tw(S, a))
        ai = _hinv(S, a)
        upd("inverse", _prod(S, a, ai), S.b)
        upd("inverse", _prod(S, ai, a), S.b)
        for b in xs:
            ab = _prod(S, a, b)
            upd("twist_multiplicative", _tw(S, ab), _prod(S, _tw(S, a), _tw(S, b)))
            for c in xs:
                upd("hom_associative", _prod(S, _tw(S, a), _prod(S, b, c)), _prod(S, ab, _tw(S, c)))
    return HomGroupReport(res, tol)


# -- exponentials -----------------------------------------------------------------


def hexp(S: TwistedMatrixSpace, A, t: float = 1.0) -> np.ndarray:
    """Hom-exponential ``beta exp(t A beta^-1)``."""
    if _is_exact(A):
        raise ModeError("the Hom-exponential needs float input")
    return S.b @ expm_array(t * _arr(S, A) @ S.binv)


@dataclass
class ResidualReport:
    residual: float
    tol: float
    count: int

    @property
    def ok(self) -> bool:
        return self.residual <= self.tol


def one_param_check(S: TwistedMatrixSpace, A, ts: Iterable[tuple[float, float]], tol: float = TAU_RES) -> ResidualReport:
    """``sigma(t+s)`` against ``Ad_beta^-1 sigma(t) * Ad_beta^-1 sigma(s)`` with ``sigma(t) = hexp(tA)``."""
    a = _arr(S, A)
    worst, n = 0.0, 0
    for t, s in ts:
        lhs = hexp(S, a, t + s)
        rhs = _prod(S, _untw(S, hexp(S, a, t)), _untw(S, hexp(S, a, s)))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        n += 1
    return ResidualReport(worst, tol, n)


# -- commutator ------------------------------------------------------------------


def omega_nested(S: TwistedMatrixSpace, A, B, s: float, t: float) -> np.ndarray:
    """Omega built literally from Hom-products and inverse twists of Hom-exponentials."""
    a, b = _arr(S, A), _arr(S, B)
    p3, q3 = _power(S, -3)
    p2, q2 = _power(S, -2)
    first = p3 @ _prod(S, hexp(S, a, s), hexp(S, b, t)) @ q3
    second = p2 @ hexp(S, a, -s) @ q2
    third = _untw(S, hexp(S, b, -t))
    return _prod(S, _prod(S, first, second), third)


def omega_product(S: TwistedMatrixSpace, A, B, s: float, t: float) -> np.ndarray:
    """The same Omega as ``beta e^{sZ} e^{tW} e^{-sZ} e^{-tW}``, ``Z = A beta^-1``, ``W = B beta^-1``."""
    z, w = _arr(S, A) @ S.binv, _arr(S, B) @ S.binv
    return S.b @ expm_array(s * z) @ expm_array(t * w) @ expm_array(-s * z) @ expm_array(-t * w)


def omega_deviation(S: TwistedMatrixSpace, A, B, s: float, t: float, dtype=np.float64) -> np.ndarray:
    """``Omega(s, t) - beta`` assembled from ``exp - I`` blocks.

    Subtracting ``beta`` from a computed Omega loses all leading digits once
    ``s, t`` are small, which swamps a second difference divided by ``h^2``.
    Writing each factor as ``I + E`` keeps the small terms at full precision.
    ``dtype`` selects the working precision (``np.longdouble`` for stencils).
    """
    binv = S.binv.astype(dtype)
    z, w = _arr(S, A).astype(dtype) @ binv, _arr(S, B).astype(dtype) @ binv
    s, t = dtype(s), dtype(t)
    a, b = expm1_array(s * z), expm1_array(t * w)
    c, d = expm1_array(-s * z), expm1_array(-t * w)
    p1 = a + b + a @ b
    p2 = c + d + c @ d
    return S.b.astype(dtype) @ (p1 + p2 + p1 @ p2)


@dataclass
class CommutatorCheck:
    fd: np.ndarray
    closed: np.ndarray
    residual: float
    step: float
    form_gap: float = 0.0

    def to_json(self) -> dict:
        from .exactnum import matrix_to_json

        return {
            "residual": self.residual,
            "step": self.step,
            "fd": matrix_to_json(Matrix.from_array(self.fd)),
            "closed": matrix_to_json(Matrix.from_array(self.closed)),
        }


def commutator_fd_verify(S: TwistedMatrixSpace, A, B, h: float = 1e-4) -> CommutatorCheck:
    """Mixed central difference of Omega at the origin, compared with ``[A, B]_beta``.

    Raises :class:`ConsistencyError` if the nested and product forms of Omega
    disagree by more than ``TAU_RES`` at any stencil point.
    """
    if not 0 < h <= 0.1:
        raise BadParameter("step must lie in (0, 0.1]")
    a, b = _arr(S, A), _arr(S, B)
    gap = 0.0
    stencil = {}
    for s in (h, -h):
        for t in (h, -h):
            gap = max(gap, float(np.max(np.abs(omega_nested(S, a, b, s, t) - omega_product(S, a, b, s, t)))))
            # float64 roundoff here is about eps/h, which would hide the h^2 term
            stencil[s, t] = omega_deviation(S, a, b, s, t, np.longdouble)
    if gap > TAU_RES:
        raise ConsistencyError(f"nested and product forms of Omega differ by {gap:.3e}")
    hh = np.longdouble(h)
    fd = (stencil[h, h] - stencil[h, -h] - stencil[-h, h] + stencil[-h, -h]) / (4 * hh * hh)
    fd = fd.astype(np.float64)
    closed = gl_bracket(S, a, b)
    return CommutatorCheck(fd, closed, float(np.max(np.abs(fd - closed))), h, gap)


# -- adjoint actions -------------------------------------------------------------


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).flatten(order="F")


def unvec(v: np.ndarray, m: int) -> np.ndarray:
    return np.asarray(v).reshape((m, m), order="F")


def elementary(m: int, k: int) -> np.ndarray:
    """The ``k``-th column-major elementary matrix."""
    e = np.zeros((m, m))
    e[k % m, k // m] = 1.0
    return e


def tilde_ad(S: TwistedMatrixSpace, a, b):
    """Twisted conjugation: untwist ``a * b``, then Hom-multiply by the Hom-inverse of ``a``."""
    x, y = _arr(S, a), _arr(S, b)
    _require_invertible(x)
    _require_invertible(y)
    return _out(a, _prod(S, _untw(S, _prod(S, x, y)), _hinv(S, x)))


def tilde_ad_check(S: TwistedMatrixSpace, samples: Sequence, tol: float = 1e-8) -> HomGroupReport:
    """Action axioms: the unit acts as the twist, and the compatibility with products."""
    xs = [_arr(S, x) for x in samples]
    res = {"unit_acts_as_twist": 0.0, "action_compatible": 0.0}
    for x in xs:
        res["unit_acts_as_twist"] = max(res["unit_acts_as_twist"], float(np.max(np.abs(tilde_ad(S, S.b, x) - _tw(S, x)))))
    for a in xs:
        for b in xs:
            ab = _prod(S, a, b)
            for x in xs:
                lhs = tilde_ad(S, ab, x)
                rhs = tilde_ad(S, _tw(S, a), _untw(S, tilde_ad(S, _tw(S, b), x)))
                res["action_compatible"] = max(res["action_compatible"], float(np.max(np.abs(lhs - rhs))))
    return HomGroupReport(res, tol)


def push_weak(f, S_src: TwistedMatrixSpace, S_dst: TwistedMatrixSpace, x, h: float = H_AD) -> np.ndarray:
    """Linearize a group map ``f`` at the Hom-unit and pull back through the target twist.

    The curve ``t -> hexp(t x)`` leaves the unit with velocity ``Ad_beta x``;
    its image under ``f`` is differenced centrally and then untwisted by
    ``Ad_beta^-1`` of the target.
    """
    xa = _arr(S_src, x)
    d = (np.asarray(f(hexp(S_src, xa, h))) - np.asarray(f(hexp(S_src, xa, -h)))) / (2 * h)
    return S_dst.binv @ d @ S_dst.b


def ad_hat(S: TwistedMatrixSpace, a, h: float = H_AD) -> np.ndarray:
    """Linearization of ``b -> tilde_ad(a, b)`` as an ``m^2 x m^2`` array."""
    x = _arr(S, a)
    _require_invertible(x)
    cols = [vec(push_weak(lambda b: tilde_ad(S, x, b), S, S, elementary(S.m, k), h)) for k in range(S.m**2)]
    return np.column_stack(cols)


def ad_beta_map(S: TwistedMatrixSpace) -> np.ndarray:
    """Matrix of ``E -> beta E beta^-1`` on flattened matrices."""
    return np.kron(S.binv.T, S.b)


def bracket_map(S: TwistedMatrixSpace, X) -> np.ndarray:
    """Matrix of ``Y -> [X, Y]_beta`` on flattened matrices."""
    x = _arr(S, X)
    return np.column_stack([vec(gl_bracket(S, x, elementary(S.m, k))) for k in range(S.m**2)])


def infinitesimal_action(S: TwistedMatrixSpace, X, Y, h: float = H_OUTER) -> np.ndarray:
    """``d/ds`` at 0 of ``ad_hat(hexp(sX))`` applied to ``Y``."""
    x, y = _arr(S, X), vec(_arr(S, Y))
    plus = ad_hat(S, hexp(S, x, h)) @ y
    minus = ad_hat(S, hexp(S, x, -h)) @ y
    return unvec((plus - minus) / (2 * h), S.m)


def ad_small(S: TwistedMatrixSpace, X, h: float = H_OUTER) -> np.ndarray:
    """Infinitesimal adjoint on ``gl(V)``, linearizing ``s -> ad_hat(hexp(sX))``.

    The target is the twisted group of linear maps on ``gl(V)`` whose twist is
    :func:`ad_beta_map`, so the derivative is untwisted by that map.
    """
    x = _arr(S, X)
    P = ad_beta_map(S)
    d = (ad_hat(S, hexp(S, x, h)) - ad_hat(S, hexp(S, x, -h))) / (2 * h)
    return np.linalg.solve(P, d @ P)


def adhat_hexp_check(S: TwistedMatrixSpace, X, tol: float = 1e-4) -> ResidualReport:
    """``ad_hat(hexp X)`` against the Hom-exponential of ``ad_small(X)`` twisted by ``ad_beta_map``."""
    x = _arr(S, X)
    P = ad_beta_map(S)
    lhs = ad_hat(S, hexp(S, x))
    rhs = P @ expm_array(ad_small(S, x) @ np.linalg.inv(P))
    return ResidualReport(float(np.max(np.abs(lhs - rhs))), tol, 1)


# -- exact algebra ---------------------------------------------------------------


def gl_to_algebra(S: TwistedMatrixSpace) -> HomLieAlgebra:
    """``gl(V)`` with bracket ``[.,.]_beta`` and twist ``Ad_beta`` on the elementary basis."""
    if not S.exact:
        raise ModeError("gl_to_algebra needs a rational twist")
    m = S.m
    n = m * m

    def E(k):
        return Matrix.from_rows([[1 if (i == k % m and j == k // m) else 0 for j in range(m)] for i in range(m)])

    def flat(M: Matrix) -> tuple:
        return tuple(M[k % m, k // m] for k in range(n))

    basis = [E(k) for k in range(n)]
    brackets = {(a, b): flat(gl_bracket(S, basis[a], basis[b])) for a in range(n) for b in range(a + 1, n)}
    phi = Matrix.from_columns([flat(gl_ad_beta(S, basis[k])) for k in range(n)], n)
    labels = [f"E{k % m + 1}{k // m + 1}" for k in range(n)]
    return HomLieAlgebra(n, brackets, phi, labels)

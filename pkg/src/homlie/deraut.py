"""Derivations and automorphisms of a Hom-Lie algebra, and the flow linking them.

Twisted conjugation is ``T -> phi^-1 T phi`` throughout.  A derivation satisfies
``D[x, y] = [phi x, T y] + [T x, phi y]`` and an automorphism satisfies
``A[x, y] = [T' x, T' y]`` where ``T`` and ``T'`` are the twisted conjugates of
``D`` and ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    HomLieAlgebra,
    Witness,
    induced_lie,
    require_multiplicative,
    require_regular,
    vadd,
    vsub,
)
from .errors import DimensionMismatch, ModeError, NotAutomorphism, NotDerivation, SingularMatrix
from .exactnum import (
    APPROX,
    EXACT,
    TAU_RES,
    Matrix,
    expm_array,
    inverse,
    matrix_to_json,
    nullspace,
    pivot_columns,
    rank,
    to_scalar,
)

TAU_AUT = 1e-8


@dataclass
class Verdict:
    ok: bool
    witness: Witness | None = None
    residual: float = 0.0

    def __bool__(self):
        return self.ok


def _check_square(alg: HomLieAlgebra, M: Matrix, what: str):
    if M.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"{what} must be {alg.dim}x{alg.dim}, got {M.shape}")


def _twisted(alg: HomLieAlgebra, M: Matrix) -> Matrix:
    return alg.phi_inv @ M @ alg.phi


def _derivation_defect(alg: HomLieAlgebra, D: Matrix, i: int, j: int) -> tuple[tuple, tuple]:
    Dt = _twisted(alg, D)
    return _derivation_sides(alg, D, Dt, i, j)


def _derivation_sides(alg, D, Dt, i, j):
    lhs = D.apply(alg.structure(i, j))
    rhs = vadd(
        alg.bracket(alg.phi.col(i), Dt.col(j)),
        alg.bracket(Dt.col(i), alg.phi.col(j)),
    )
    return lhs, rhs


def is_derivation(alg: HomLieAlgebra, D: Matrix, tol: float = TAU_RES) -> Verdict:
    """Exhaustive basis-pair test of the twisted Leibniz rule."""
    _check_square(alg, D, "D")
    require_regular(alg)
    if D.mode != alg.mode:
        raise ModeError("D and the algebra must share a mode")
    Dt = _twisted(alg, D)
    worst = 0.0
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs, rhs = _derivation_sides(alg, D, Dt, i, j)
            gap = max((abs(float(a - b)) for a, b in zip(lhs, rhs)), default=0.0)
            worst = max(worst, gap)
            if not alg.close(lhs, rhs, tol):
                return Verdict(False, alg.witness((i, j), lhs, rhs), gap)
    return Verdict(True, None, worst)


@dataclass
class DerivationSpace:
    alg: HomLieAlgebra
    basis: list[Matrix]
    inner_basis: list[Matrix]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def inner_dim(self) -> int:
        return len(self.inner_basis)

    @property
    def outer_dim(self) -> int:
        return self.dim - self.inner_dim

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "inner": self.inner_dim,
            "outer": self.outer_dim,
            "basis": [matrix_to_json(b) for b in self.basis],
        }


def _flatten(M: Matrix) -> tuple:
    return M.entries


def _unflatten(v, n: int, mode: str) -> Matrix:
    return Matrix.from_rows([list(v[r * n : (r + 1) * n]) for r in range(n)], mode)


def derivation_space(alg: HomLieAlgebra) -> DerivationSpace:
    """Solve the derivation identity as one linear system in the ``n^2`` entries of ``D``."""
    require_multiplicative(alg)
    n, mode = alg.dim, alg.mode
    if n == 0:
        return DerivationSpace(alg, [], [])
    one, zero = to_scalar(1, mode), to_scalar(0, mode)
    columns = []
    for u in range(n * n):
        E = _unflatten([one if w == u else zero for w in range(n * n)], n, mode)
        col = []
        for i in range(n):
            for j in range(i + 1, n):
                lhs, rhs = _derivation_defect(alg, E, i, j)
                col.extend(vsub(lhs, rhs))
        columns.append(col)
    if not columns[0]:
        # no pairs: every linear map is a derivation
        ker = Matrix.identity(n * n, mode)
    else:
        ker = nullspace(Matrix.from_columns(columns, len(columns[0]), mode))
    basis = [_unflatten(ker.col(c), n, mode) for c in range(ker.cols)]
    ads = [alg.ad(alg.basis(i)) for i in range(n)]
    stacked = Matrix.from_columns([_flatten(a) for a in ads], n * n, mode)
    inner = [ads[c] for c in pivot_columns(stacked)]
    return DerivationSpace(alg, basis, inner)


def _twisted_bracket(alg: HomLieAlgebra, D1: Matrix, D2: Matrix) -> Matrix:
    p, pi = alg.phi, alg.phi_inv
    return p @ D1 @ pi @ D2 @ pi - p @ D2 @ pi @ D1 @ pi


@dataclass
class ClosureReport:
    checks: dict[str, Verdict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.checks.values())

    def verdicts(self):
        return [(k, v.ok, v.witness.describe() if v.witness else "") for k, v in self.checks.items()]


def der_algebra_check(alg: HomLieAlgebra, D1: Matrix, D2: Matrix) -> ClosureReport:
    """Closure of derivations under the twisted commutator and under ``Ad_phi``."""
    for name, D in (("D1", D1), ("D2", D2)):
        v = is_derivation(alg, D)
        if not v.ok:
            raise NotDerivation(f"{name} is not a derivation at {v.witness.describe()}", v.witness)
    return ClosureReport(
        {
            "bracket_closed": is_derivation(alg, _twisted_bracket(alg, D1, D2)),
            "twist_closed": is_derivation(alg, alg.phi @ D1 @ alg.phi_inv),
        }
    )


@dataclass
class CorrespondenceReport:
    hom_derivation: bool
    lie_derivation: bool

    @property
    def ok(self) -> bool:
        return self.hom_derivation == self.lie_derivation


def derivation_lie_correspondence(alg: HomLieAlgebra, D: Matrix) -> CorrespondenceReport:
    """``D`` is a derivation iff ``D phi^-1`` is an ordinary derivation of the induced Lie algebra."""
    require_multiplicative(alg)
    lie = induced_lie(alg)
    return CorrespondenceReport(is_derivation(alg, D).ok, is_derivation(lie, D @ alg.phi_inv).ok)


# -- automorphisms ---------------------------------------------------------------


def _aut_residuals(alg: HomLieAlgebra, T: np.ndarray) -> np.ndarray:
    C = alg.tensor_array()
    phi = alg.phi.to_array()
    Tt = np.linalg.solve(phi, T @ phi)
    lhs = np.einsum("kl,ijl->ijk", T, C)
    rhs = np.einsum("ai,bj,abk->ijk", Tt, Tt, C)
    return np.max(np.abs(lhs - rhs), axis=2) if alg.dim else np.zeros((0, 0))


def is_automorphism(alg: HomLieAlgebra, T, tol: float = TAU_AUT) -> Verdict:
    """Exhaustive basis-pair test; exact for exact input, within ``tol`` for floats."""
    require_regular(alg)
    if isinstance(T, Matrix) and T.mode == EXACT and alg.mode == EXACT:
        _check_square(alg, T, "T")
        if rank(T) != alg.dim:
            raise SingularMatrix("automorphism candidate is singular")
        Tt = _twisted(alg, T)
        cols = [Tt.col(i) for i in range(alg.dim)]
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = T.apply(alg.structure(i, j))
                rhs = alg.bracket(cols[i], cols[j])
                if lhs != rhs:
                    gap = max(abs(float(a - b)) for a, b in zip(lhs, rhs))
                    return Verdict(False, alg.witness((i, j), lhs, rhs), gap)
        return Verdict(True)
    arr = T.to_array() if isinstance(T, Matrix) else np.asarray(T, dtype=float)
    if arr.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"T must be {alg.dim}x{alg.dim}")
    s = np.linalg.svd(arr, compute_uv=False) if alg.dim else np.array([1.0])
    if s[-1] <= 1e-12 * max(s[0], 1.0):
        raise SingularMatrix("automorphism candidate is singular")
    res = _aut_residuals(alg, arr)
    worst = float(res.max()) if res.size else 0.0
    if worst <= tol:
        return Verdict(True, None, worst)
    i, j = map(int, np.argwhere(res > tol)[0])
    C = alg.tensor_array()
    phi = alg.phi.to_array()
    Tt = np.linalg.solve(phi, arr @ phi)
    lhs = tuple(arr @ C[i, j])
    rhs = tuple(np.einsum("a,b,abk->k", Tt[:, i], Tt[:, j], C))
    return Verdict(False, Witness((alg.labels[i], alg.labels[j]), lhs, rhs, alg.labels), worst)


@dataclass
class AutGroupResult:
    product: Matrix | np.ndarray
    inverse: Matrix | np.ndarray
    twist: Matrix | np.ndarray
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def aut_group_ops(alg: HomLieAlgebra, T1, T2, tol: float = TAU_AUT) -> AutGroupResult:
    """Twisted product ``phi T1 phi^-1 T2 phi^-1``, Hom-inverse ``phi T1^-1 phi`` and ``Ad_phi T1``.

    Checks that all three are automorphisms and that the unit and inverse
    laws hold with unit ``phi``.
    """
    for name, T in (("T1", T1), ("T2", T2)):
        v = is_automorphism(alg, T, tol)
        if not v.ok:
            raise NotAutomorphism(f"{name} is not an automorphism at {v.witness.describe()}", v.witness)
    exact = isinstance(T1, Matrix) and isinstance(T2, Matrix) and T1.mode == T2.mode == alg.mode == EXACT
    if exact:
        p, pi = alg.phi, alg.phi_inv
        prod = p @ T1 @ pi @ T2 @ pi
        inv = p @ inverse(T1) @ p
        tw = p @ T1 @ pi
        unit = p @ T1 @ pi @ p @ pi == tw
        inv_law = p @ T1 @ pi @ inv @ pi == p
    else:
        p = alg.phi.to_array()
        pi = np.linalg.inv(p)
        a = T1.to_array() if isinstance(T1, Matrix) else np.asarray(T1, dtype=float)
        b = T2.to_array() if isinstance(T2, Matrix) else np.asarray(T2, dtype=float)
        prod = p @ a @ pi @ b @ pi
        inv = p @ np.linalg.inv(a) @ p
        tw = p @ a @ pi
        unit = np.max(np.abs(p @ a @ pi @ p @ pi - tw)) <= tol
        inv_law = np.max(np.abs(p @ a @ pi @ inv @ pi - p)) <= tol
    checks = {
        "product_closed": is_automorphism(alg, prod, tol).ok,
        "inverse_closed": is_automorphism(alg, inv, tol).ok,
        "twist_closed": is_automorphism(alg, tw, tol).ok,
        "unit_law": bool(unit),
        "inverse_law": bool(inv_law),
    }
    return AutGroupResult(prod, inv, tw, checks)


def derivation_flow(alg: HomLieAlgebra, D, t: float) -> np.ndarray:
    """``phi exp(t D phi^-1)`` for any linear ``D``, without checking it."""
    phi = alg.phi.to_array()
    d = D.to_array() if isinstance(D, Matrix) else np.asarray(D, dtype=float)
    return phi @ expm_array(t * d @ np.linalg.inv(phi))


def integrate_derivation(alg: HomLieAlgebra, D, t: float) -> np.ndarray:
    """Hom-exponential of ``tD`` in the automorphism Hom-group."""
    Dm = D if isinstance(D, Matrix) else Matrix.from_array(D)
    if Dm.mode == APPROX and alg.mode == EXACT:
        v = _approx_derivation_check(alg, Dm.to_array())
    else:
        v = is_derivation(alg, Dm)
    if not v.ok:
        where = v.witness.describe() if v.witness else ""
        raise NotDerivation(f"not a derivation {where}".strip(), v.witness)
    return derivation_flow(alg, Dm, t)


def _approx_derivation_check(alg: HomLieAlgebra, D: np.ndarray, tol: float = TAU_RES) -> Verdict:
    C = alg.tensor_array()
    phi = alg.phi.to_array()
    Dt = np.linalg.solve(phi, D @ phi)
    lhs = np.einsum("kl,ijl->ijk", D, C)
    rhs = np.einsum("ai,bj,abk->ijk", phi, Dt, C) + np.einsum("ai,bj,abk->ijk", Dt, phi, C)
    worst = float(np.max(np.abs(lhs - rhs))) if alg.dim else 0.0
    return Verdict(worst <= tol, None, worst)

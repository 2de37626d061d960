"""Representations and the twisted cochain complex.

Cochains of degree k are stored on sorted index tuples ``i1 < ... < ik``; the
coordinate of ``(J, c)`` is the ``c``-th component of ``f(e_J)``.  To evaluate
a cochain on arbitrary (twisted) arguments we expand multilinearly, which for
an alternating form is a determinant of the coordinate minor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .algebra import HomLieAlgebra, algebra_from_json, require_multiplicative, require_regular
from .errors import BadParameter, ConsistencyError, DimensionMismatch, ModeError, SchemaError
from .exactnum import EXACT, TAU_RES, Matrix, matrix_from_json, rank


@dataclass
class Representation:
    alg: HomLieAlgebra
    vdim: int
    rho: list[Matrix]
    beta: Matrix

    def __post_init__(self):
        if len(self.rho) != self.alg.dim:
            raise DimensionMismatch(f"need one action matrix per basis vector ({self.alg.dim})")
        for r in list(self.rho) + [self.beta]:
            if r.shape != (self.vdim, self.vdim):
                raise DimensionMismatch(f"action matrices must be {self.vdim}x{self.vdim}")
            if r.mode != self.alg.mode:
                raise ModeError("representation and algebra modes differ")

    def act(self, x: Sequence) -> Matrix:
        """``rho(x) = sum_i x_i rho(e_i)``."""
        out = Matrix.zeros(self.vdim, self.vdim, self.alg.mode)
        for xi, r in zip(x, self.rho):
            if xi:
                out = out + r.scale(xi)
        return out


@dataclass
class RepReport:
    twist_compatible: bool
    bracket_compatible: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.twist_compatible and self.bracket_compatible

    def verdicts(self):
        return [
            ("twist_compatible", self.twist_compatible, self.witnesses.get("twist_compatible", "")),
            ("bracket_compatible", self.bracket_compatible, self.witnesses.get("bracket_compatible", "")),
        ]


def _close(A: Matrix, B: Matrix) -> bool:
    if A.mode == EXACT:
        return A == B
    return (A - B).max_abs() <= TAU_RES


def check_representation(rep: Representation) -> RepReport:
    """``rho(phi x) beta = beta rho(x)`` and ``rho([x, y]) beta = rho(phi x) rho(y) - rho(phi y) rho(x)`` on the basis."""
    alg = rep.alg
    require_regular(alg)
    n = alg.dim
    rho_phi = [rep.act(alg.phi.col(i)) for i in range(n)]
    wit = {}
    twist_ok = True
    for i in range(n):
        if not _close(rho_phi[i] @ rep.beta, rep.beta @ rep.rho[i]):
            twist_ok = False
            wit["twist_compatible"] = f"fails at {alg.labels[i]}"
            break
    bracket_ok = True
    for i in range(n):
        for j in range(n):
            lhs = rep.act(alg.structure(i, j)) @ rep.beta
            rhs = rho_phi[i] @ rep.rho[j] - rho_phi[j] @ rep.rho[i]
            if not _close(lhs, rhs):
                bracket_ok = False
                wit["bracket_compatible"] = f"fails at ({alg.labels[i]},{alg.labels[j]})"
                break
        if not bracket_ok:
            break
    return RepReport(twist_ok, bracket_ok, wit)


def adjoint_rep(alg: HomLieAlgebra) -> Representation:
    require_multiplicative(alg)
    return Representation(alg, alg.dim, [alg.ad(alg.basis(i)) for i in range(alg.dim)], alg.phi)


def trivial_rep(alg: HomLieAlgebra, vdim: int = 1) -> Representation:
    zero = Matrix.zeros(vdim, vdim, alg.mode)
    return Representation(alg, vdim, [zero] * alg.dim, Matrix.identity(vdim, alg.mode))


@dataclass(frozen=True)
class CochainSpace:
    n: int
    k: int
    vdim: int

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.n), self.k))

    @property
    def dimension(self) -> int:
        return comb(self.n, self.k) * self.vdim

    def index(self, J: tuple[int, ...], c: int) -> int:
        return self.tuples.index(tuple(J)) * self.vdim + c


def _det(rows: list[list]):
    """Determinant by elimination; works for Fractions and floats alike."""
    k = len(rows)
    if k == 0:
        return 1
    a = [list(r) for r in rows]
    det = 1
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(a[r][col]))
        if not a[piv][col]:
            return 0 * det
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, k):
            if a[r][col]:
                m = a[r][col] / p
                for c in range(col, k):
                    a[r][c] -= m * a[col][c]
    return det


def _minor_dets(args: list[tuple], tuples: list[tuple[int, ...]]) -> list:
    """``f_J(args)`` for the unit alternating form on each index tuple ``J``."""
    return [_det([[w[j] for w in args] for j in J]) for J in tuples]


def coboundary_matrix(rep: Representation, k: int) -> Matrix:
    """Matrix of ``d: C^k -> C^{k+1}`` in the sorted-tuple cochain bases."""
    if k < 0:
        raise BadParameter("degree must be non-negative")
    alg = rep.alg
    require_regular(alg)
    n, v, mode = alg.dim, rep.vdim, alg.mode
    src, dst = CochainSpace(n, k, v), CochainSpace(n, k + 1, v)
    rows, cols = dst.dimension, src.dimension
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols, mode)
    pinv = alg.phi_inv
    pinv2 = pinv @ pinv
    p1 = [pinv.col(i) for i in range(n)]
    p2 = [pinv2.col(i) for i in range(n)]
    src_tuples = src.tuples
    zero = 0 * pinv[0, 0]
    data = [[zero] * cols for _ in range(rows)]

    for ii, I in enumerate(dst.tuples):
        # first sum: rho(x_a) f(phi^-1 x_1, ..., omit a, ...)
        for a in range(k + 1):
            sign = 1 if a % 2 == 0 else -1
            args = [p1[I[b]] for b in range(k + 1) if b != a]
            dets = _minor_dets(args, src_tuples)
            R = rep.rho[I[a]]
            for jj, dJ in enumerate(dets):
                if not dJ:
                    continue
                for r in range(v):
                    for c in range(v):
                        if R[r, c]:
                            data[ii * v + r][jj * v + c] += sign * R[r, c] * dJ
        # second sum: beta f([phi^-2 x_a, phi^-2 x_b], phi^-1 x_1, ..., omit a, b, ...)
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                sign = 1 if (a + b) % 2 == 0 else -1
                br = alg.bracket(p2[I[a]], p2[I[b]])
                args = [br] + [p1[I[c]] for c in range(k + 1) if c not in (a, b)]
                dets = _minor_dets(args, src_tuples)
                for jj, dJ in enumerate(dets):
                    if not dJ:
                        continue
                    for r in range(v):
                        for c in range(v):
                            if rep.beta[r, c]:
                                data[ii * v + r][jj * v + c] += sign * rep.beta[r, c] * dJ
    return Matrix.from_rows(data, mode)


@dataclass
class SquareCheck:
    k: int
    ok: bool
    residual: float


def d_squared_check(rep: Representation, k: int) -> SquareCheck:
    prod = coboundary_matrix(rep, k + 1) @ coboundary_matrix(rep, k)
    if rep.alg.mode == EXACT:
        return SquareCheck(k, prod.is_zero(), float(prod.max_abs()))
    r = prod.max_abs()
    return SquareCheck(k, r <= TAU_RES, r)


@dataclass(frozen=True)
class CohomDims:
    k: int
    Z: int
    B: int
    H: int

    def to_json(self) -> dict:
        return {"k": self.k, "Z": self.Z, "B": self.B, "H": self.H}


def cohomology_dims(rep: Representation, kmax: int) -> list[CohomDims]:
    """Dimensions of cocycles, coboundaries and cohomology in degrees ``0..kmax``.

    Raises :class:`ConsistencyError` if ``d^2 != 0`` in any degree used.
    """
    if rep.alg.mode != EXACT:
        raise ModeError("cohomology dimensions need exact arithmetic")
    n = rep.alg.dim
    if not 0 <= kmax <= n:
        raise BadParameter(f"max degree must lie in 0..{n}")
    report = check_representation(rep)
    if not report.ok:
        raise BadParameter("not a representation: " + "; ".join(w for _, ok, w in report.verdicts() if not ok))
    d = [coboundary_matrix(rep, k) for k in range(kmax + 1)]
    for k in range(kmax):
        if not (d[k + 1] @ d[k]).is_zero():
            raise ConsistencyError(f"d^2 != 0 in degree {k}")
    ranks = [rank(m) for m in d]
    out = []
    for k in range(kmax + 1):
        z = CochainSpace(n, k, rep.vdim).dimension - ranks[k]
        b = ranks[k - 1] if k > 0 else 0
        out.append(CohomDims(k, z, b, z - b))
    return out


def representation_from_json(doc) -> Representation:
    if not isinstance(doc, dict):
        raise SchemaError("representation document must be a JSON object")
    try:
        alg = algebra_from_json(doc["algebra"])
        vdim = doc["vdim"]
        rho = [matrix_from_json(m, alg.mode) for m in doc["rho"]]
        beta = matrix_from_json(doc["beta"], alg.mode)
    except KeyError as exc:
        raise SchemaError(f"representation is missing key {exc}") from exc
    except TypeError as exc:
        raise SchemaError(str(exc)) from exc
    if not isinstance(vdim, int) or vdim < 0:
        raise SchemaError("vdim must be a non-negative integer")
    try:
        return Representation(alg, vdim, rho, beta)
    except (DimensionMismatch, ModeError) as exc:
        raise SchemaError(str(exc)) from exc

"""Regular Hom-Lie algebras on a fixed basis.

An algebra is stored as its structure constants ``[e_i, e_j] = sum_k c_ij^k e_k``
together with the twist matrix ``phi``.  Skew-symmetry is built in when the
constants are entered as pairs; multiplicativity and the Hom-Jacobi identity
are verdicts of :func:`check_axioms`, not construction invariants, so
non-multiplicative data such as :func:`q_sl2` can be represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadParameter,
    DimensionMismatch,
    ModeError,
    NotAutomorphism,
    NotMultiplicative,
    NotRegular,
    SchemaError,
)
from .exactnum import (
    APPROX,
    EXACT,
    MODES,
    TAU_RES,
    Matrix,
    format_scalar,
    inverse,
    matrix_from_json,
    matrix_to_json,
    nullspace,
    rank,
    to_scalar,
)


def zero_vector(n: int, mode: str = EXACT) -> tuple:
    return (Fraction(0),) * n if mode == EXACT else (0.0,) * n


def basis_vector(n: int, i: int, mode: str = EXACT) -> tuple:
    one, zero = (Fraction(1), Fraction(0)) if mode == EXACT else (1.0, 0.0)
    return tuple(one if k == i else zero for k in range(n))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vclose(u: Sequence, v: Sequence, mode: str, tol: float = TAU_RES) -> bool:
    if mode == EXACT:
        return tuple(u) == tuple(v)
    return max((abs(a - b) for a, b in zip(u, v)), default=0.0) <= tol


def format_vector(v: Sequence, labels: Sequence[str]) -> str:
    terms = [f"{format_scalar(c)}*{lab}" for c, lab in zip(v, labels) if c]
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Witness:
    """A basis tuple at which an identity fails, with both sides evaluated."""

    args: tuple[str, ...]
    lhs: tuple
    rhs: tuple
    labels: tuple[str, ...] = field(repr=False, default=())

    def describe(self) -> str:
        labels = self.labels or tuple(f"e{i}" for i in range(len(self.lhs)))
        where = ",".join(self.args)
        return f"({where}): lhs {format_vector(self.lhs, labels)} vs rhs {format_vector(self.rhs, labels)}"

    def to_json(self) -> dict:
        return {
            "at": list(self.args),
            "lhs": [format_scalar(x) for x in self.lhs],
            "rhs": [format_scalar(x) for x in self.rhs],
        }


class HomLieAlgebra:
    """Finite-dimensional Hom-Lie algebra ``(g, [.,.], phi)`` on a fixed basis.

    ``brackets`` maps index pairs ``(i, j)`` to the coefficient vector of
    ``[e_i, e_j]``, either as a length-``dim`` sequence or as a sparse
    ``{k: coeff}`` mapping.  A pair with ``i > j`` is stored as the negated
    ``(j, i)`` entry; ``(i, i)`` entries are kept as given so that bad data is
    caught by :func:`check_axioms` instead of vanishing.
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping[tuple[int, int], Sequence | Mapping[int, object]],
        phi: Matrix | None = None,
        labels: Sequence[str] | None = None,
        mode: str | None = None,
    ):
        if dim < 0:
            raise DimensionMismatch("dimension must be non-negative")
        if phi is None:
            phi = Matrix.identity(dim, mode or EXACT)
        if mode is None:
            mode = phi.mode
        if phi.mode != mode:
            raise ModeError(f"twist is {phi.mode} but algebra mode is {mode}")
        if phi.shape != (dim, dim):
            raise DimensionMismatch(f"twist must be {dim}x{dim}, got {phi.shape}")
        self.dim = dim
        self.mode = mode
        self.phi = phi
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise DimensionMismatch("one label per basis vector required")

        zero = zero_vector(dim, mode)
        table = [[zero] * dim for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"bracket index ({i},{j}) out of range")
            if isinstance(coeffs, Mapping):
                v = list(zero)
                for k, c in coeffs.items():
                    k = int(k)
                    if not 0 <= k < dim:
                        raise DimensionMismatch(f"coefficient index {k} out of range")
                    v[k] += to_scalar(c, mode)
                v = tuple(v)
            else:
                if len(coeffs) != dim:
                    raise DimensionMismatch(f"bracket ({i},{j}) needs {dim} coefficients")
                v = tuple(to_scalar(c, mode) for c in coeffs)
            if i == j:
                table[i][i] = vadd(table[i][i], v)
            else:
                if i > j:
                    i, j, v = j, i, vscale(-1, v)
                table[i][j] = vadd(table[i][j], v)
                table[j][i] = vscale(-1, table[i][j])
        self._table = tuple(tuple(row) for row in table)

    @classmethod
    def from_tensor(cls, dim: int, entries: Iterable[tuple[int, int, int, object]], phi=None, labels=None, mode=None):
        """Build from ``(i, j, k, value)`` entries meaning ``c_ij^k = value``."""
        brackets: dict[tuple[int, int], dict[int, object]] = {}
        m = mode or (phi.mode if phi is not None else EXACT)
        for i, j, k, value in entries:
            slot = brackets.setdefault((i, j), {})
            slot[k] = slot.get(k, 0) + to_scalar(value, m)
        return cls(dim, brackets, phi=phi, labels=labels, mode=mode)

    # -- structure ----------------------------------------------------------

    def structure(self, i: int, j: int) -> tuple:
        """Coefficient vector of ``[e_i, e_j]``."""
        return self._table[i][j]

    def tensor_entries(self) -> list[tuple[int, int, int, object]]:
        """Canonical sparse tensor: ``(i, j, k, c)`` with ``i <= j`` and ``c != 0``."""
        out = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                for k, c in enumerate(self._table[i][j]):
                    if c:
                        out.append((i, j, k, c))
        return out

    def tensor_array(self) -> np.ndarray:
        """Dense float array ``T[i, j, k] = c_ij^k``."""
        n = self.dim
        t = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                t[i, j, :] = [float(c) for c in self._table[i][j]]
        return t

    def basis(self, i: int) -> tuple:
        return basis_vector(self.dim, i, self.mode)

    def vector(self, values: Sequence) -> tuple:
        if len(values) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates")
        return tuple(to_scalar(v, self.mode) for v in values)

    @cached_property
    def phi_inv(self) -> Matrix:
        try:
            return inverse(self.phi)
        except Exception as exc:
            raise NotRegular("twist map is not invertible") from exc

    @property
    def is_regular(self) -> bool:
        return rank(self.phi) == self.dim

    # -- operations ---------------------------------------------------------

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch(f"bracket needs vectors of length {self.dim}")
        self._check_vector_mode(x)
        self._check_vector_mode(y)
        out = list(zero_vector(self.dim, self.mode))
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self._table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, t in enumerate(row[j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def ad(self, x: Sequence) -> Matrix:
        """Matrix of ``y -> [x, y]``; column ``j`` is ``[x, e_j]``."""
        cols = [self.bracket(x, self.basis(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim, self.mode) if cols else Matrix.zeros(0, 0, self.mode)

    def _check_vector_mode(self, v):
        if self.mode == EXACT and any(isinstance(a, float) for a in v):
            raise ModeError("float coordinates given to an exact-mode algebra")

    def close(self, u, v, tol: float = TAU_RES) -> bool:
        return vclose(u, v, self.mode, tol)

    def witness(self, idx: Sequence[int], lhs, rhs) -> Witness:
        return Witness(tuple(self.labels[i] for i in idx), tuple(lhs), tuple(rhs), self.labels)

    def __eq__(self, other):
        if not isinstance(other, HomLieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.phi == other.phi and self._table == other._table

    def __hash__(self):
        return hash((self.dim, self.phi, self._table))

    def __repr__(self):
        return f"HomLieAlgebra(dim={self.dim}, mode={self.mode}, labels={self.labels})"


@dataclass
class AxiomReport:
    skew: bool
    multiplicative: bool
    hom_jacobi: bool
    regular: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.skew and self.multiplicative and self.hom_jacobi and self.regular

    def verdicts(self) -> list[tuple[str, bool, str]]:
        out = []
        for name in ("skew", "multiplicative", "hom_jacobi", "regular"):
            w = self.witnesses.get(name)
            out.append((name, getattr(self, name), w.describe() if w else ""))
        return out


def check_axioms(alg: HomLieAlgebra, tol: float = TAU_RES) -> AxiomReport:
    """Evaluate skew-symmetry, multiplicativity, Hom-Jacobi and regularity.

    Every basis pair and triple is visited in lexicographic order; the first
    failure of each identity is kept as its witness.  Comparisons are exact
    in exact mode and within ``tol`` otherwise.
    """
    n = alg.dim
    e = [alg.basis(i) for i in range(n)]
    zero = zero_vector(n, alg.mode)
    witnesses: dict[str, Witness] = {}

    skew = True
    for i in range(n):
        for j in range(n):
            lhs = alg.structure(i, j)
            rhs = vscale(-1, alg.structure(j, i))
            if not alg.close(lhs, rhs, tol):
                skew = False
                witnesses["skew"] = alg.witness((i, j), lhs, rhs)
                break
        if not skew:
            break

    phi_e = [alg.phi.col(i) for i in range(n)]
    multiplicative = True
    for i in range(n):
        for j in range(n):
            lhs = alg.phi.apply(alg.structure(i, j))
            rhs = alg.bracket(phi_e[i], phi_e[j])
            if not alg.close(lhs, rhs, tol):
                multiplicative = False
                witnesses["multiplicative"] = alg.witness((i, j), lhs, rhs)
                break
        if not multiplicative:
            break

    hom_jacobi = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                total = vadd(
                    vadd(
                        alg.bracket(phi_e[i], alg.structure(j, k)),
                        alg.bracket(phi_e[j], alg.structure(k, i)),
                    ),
                    alg.bracket(phi_e[k], alg.structure(i, j)),
                )
                if not alg.close(total, zero, tol):
                    hom_jacobi = False
                    witnesses["hom_jacobi"] = alg.witness((i, j, k), total, zero)
                    break
            if not hom_jacobi:
                break
        if not hom_jacobi:
            break

    regular = rank(alg.phi) == n
    if not regular:
        ker = nullspace(alg.phi).col(0)
        witnesses["regular"] = Witness((), alg.phi.apply(ker), zero, alg.labels)

    return AxiomReport(skew, multiplicative, hom_jacobi, regular, witnesses)


def require_regular(alg: HomLieAlgebra) -> None:
    if not alg.is_regular:
        raise NotRegular("twist map is not invertible")


def require_multiplicative(alg: HomLieAlgebra) -> None:
    require_regular(alg)
    report = check_axioms(alg)
    if not report.multiplicative:
        raise NotMultiplicative(
            "twist does not preserve the bracket at " + report.witnesses["multiplicative"].describe()
        )


def induced_lie(alg: HomLieAlgebra) -> HomLieAlgebra:
    """The Lie algebra with bracket ``[x, y]_Lie = [phi^-1 x, phi^-1 y]`` and identity twist."""
    require_multiplicative(alg)
    n = alg.dim
    pinv_cols = [alg.phi_inv.col(i) for i in range(n)]
    brackets = {
        (i, j): alg.bracket(pinv_cols[i], pinv_cols[j]) for i in range(n) for j in range(i + 1, n)
    }
    return HomLieAlgebra(n, brackets, Matrix.identity(n, alg.mode), alg.labels, alg.mode)


def automorphism_witness(lie: HomLieAlgebra, phi: Matrix) -> Witness | None:
    """First basis pair where ``phi[x, y] != [phi x, phi y]``, or ``None``."""
    n = lie.dim
    cols = [phi.col(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = phi.apply(lie.structure(i, j))
            rhs = lie.bracket(cols[i], cols[j])
            if not lie.close(lhs, rhs):
                return lie.witness((i, j), lhs, rhs)
    return None


def yau_twist(lie: HomLieAlgebra, phi_new: Matrix) -> HomLieAlgebra:
    """Compose a Lie bracket with an automorphism: ``[x, y]' = phi [x, y]``."""
    n = lie.dim
    if lie.phi != Matrix.identity(n, lie.mode):
        raise BadParameter("yau_twist expects an ordinary Lie algebra (identity twist)")
    if phi_new.shape != (n, n):
        raise DimensionMismatch(f"twist must be {n}x{n}")
    if phi_new.mode != lie.mode:
        raise ModeError("twist and algebra modes differ")
    report = check_axioms(lie)
    if not (report.skew and report.hom_jacobi):
        raise BadParameter("input fails the Jacobi identity")
    if rank(phi_new) != n:
        raise NotRegular("twist is not invertible")
    w = automorphism_witness(lie, phi_new)
    if w is not None:
        raise NotAutomorphism("twist is not a Lie algebra automorphism at " + w.describe(), w)
    brackets = {(i, j): phi_new.apply(lie.structure(i, j)) for i in range(n) for j in range(i + 1, n)}
    return HomLieAlgebra(n, brackets, phi_new, lie.labels, lie.mode)


def center(alg: HomLieAlgebra) -> Matrix:
    """Basis (as columns) of ``{x : [e_j, x] = 0 for all j}``."""
    n = alg.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([alg.structure(j, i)[k] for i in range(n)])
    if not rows:
        return Matrix.zeros(0, 0, alg.mode)
    return nullspace(Matrix.from_rows(rows, alg.mode))


@dataclass
class WeakHomReport:
    weak: bool
    hom: bool
    weak_witness: Witness | None = None
    hom_witness: Witness | None = None

    def verdicts(self) -> list[tuple[str, bool, str]]:
        return [
            ("weak_homomorphism", self.weak, self.weak_witness.describe() if self.weak_witness else ""),
            ("homomorphism", self.hom, self.hom_witness.describe() if self.hom_witness else ""),
        ]


def check_weak_hom(f: Matrix, src: HomLieAlgebra, dst: HomLieAlgebra) -> WeakHomReport:
    """Test ``phi_h f[x, y] = [f phi_g x, f phi_g y]`` and, separately, ``f phi_g = phi_h f``.

    The homomorphism verdict requires both conditions.
    """
    if f.shape != (dst.dim, src.dim):
        raise DimensionMismatch(f"map must be {dst.dim}x{src.dim}, got {f.shape}")
    if not (f.mode == src.mode == dst.mode):
        raise ModeError("map and algebras must share one mode")
    fphi = [f.apply(src.phi.col(i)) for i in range(src.dim)]
    weak_w = None
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = dst.phi.apply(f.apply(src.structure(i, j)))
            rhs = dst.bracket(fphi[i], fphi[j])
            if not dst.close(lhs, rhs):
                weak_w = Witness((src.labels[i], src.labels[j]), lhs, rhs, dst.labels)
                break
        if weak_w:
            break
    commute_w = None
    for i in range(src.dim):
        lhs = fphi[i]
        rhs = dst.phi.apply(f.col(i))
        if not dst.close(lhs, rhs):
            commute_w = Witness((src.labels[i],), lhs, rhs, dst.labels)
            break
    weak = weak_w is None
    hom = weak and commute_w is None
    return WeakHomReport(weak, hom, weak_w, commute_w if weak else weak_w)


def q_sl2(q) -> HomLieAlgebra:
    """The q-deformed sl2 on the basis (h, e, f).

    ``[e, f] = (1+q)/2 h``, ``[h, e] = 2e``, ``[h, f] = -2q f`` with twist
    ``diag(1, (1/q + 1)/2, (q + 1)/2)``.  The twist fails to preserve the
    bracket whenever ``q != 1``.
    """
    q = to_scalar(q, EXACT) if not isinstance(q, float) else q
    mode = EXACT if isinstance(q, Fraction) else APPROX
    if q == 0 or q == -1:
        raise BadParameter("q must differ from 0 and -1")
    one = to_scalar(1, mode)
    two = 2 * one
    brackets = {
        (0, 1): {1: two},
        (0, 2): {2: -two * q},
        (1, 2): {0: (one + q) / two},
    }
    phi = Matrix.diag([one, (one / q + one) / two, (q + one) / two], mode)
    return HomLieAlgebra(3, brackets, phi, ("h", "e", "f"), mode)


# -- JSON ---------------------------------------------------------------------


def algebra_to_json(alg: HomLieAlgebra) -> dict:
    n = alg.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            v = alg.structure(i, j)
            coeffs = {str(k): format_scalar(c) for k, c in enumerate(v) if c}
            if coeffs:
                brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {
        "dim": n,
        "mode": alg.mode,
        "labels": list(alg.labels),
        "brackets": brackets,
        "phi": matrix_to_json(alg.phi),
    }


def algebra_from_json(doc) -> HomLieAlgebra:
    if not isinstance(doc, dict):
        raise SchemaError("algebra document must be a JSON object")
    try:
        n = doc["dim"]
        raw = doc["brackets"]
    except KeyError as exc:
        raise SchemaError(f"algebra is missing key {exc}") from exc
    if not isinstance(n, int) or n < 0:
        raise SchemaError("dim must be a non-negative integer")
    mode = doc.get("mode", EXACT)
    if mode not in MODES:
        raise SchemaError(f"unknown mode {mode!r}")
    if not isinstance(raw, list):
        raise SchemaError("brackets must be a list")
    brackets: dict[tuple[int, int], dict[int, object]] = {}
    for entry in raw:
        try:
            i, j, coeffs = entry["i"], entry["j"], entry["coeffs"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad bracket entry {entry!r}") from exc
        if not (isinstance(i, int) and isinstance(j, int)) or not i < j:
            raise SchemaError(f"bracket indices must be integers with i < j, got ({i}, {j})")
        if not (0 <= i and j < n):
            raise SchemaError(f"bracket index ({i}, {j}) out of range")
        if not isinstance(coeffs, dict):
            raise SchemaError("coeffs must be an object")
        if (i, j) in brackets:
            raise SchemaError(f"duplicate bracket ({i}, {j})")
        slot = {}
        for k, c in coeffs.items():
            try:
                k = int(k)
            except ValueError as exc:
                raise SchemaError(f"bad coefficient index {k!r}") from exc
            if not 0 <= k < n:
                raise SchemaError(f"coefficient index {k} out of range")
            if isinstance(c, float) and mode != APPROX:
                raise SchemaError("float coefficients require \"mode\": \"approx\"")
            if isinstance(c, bool) or not isinstance(c, (int, float, str)):
                raise SchemaError(f"bad coefficient {c!r}")
            slot[k] = to_scalar(c, mode)
        brackets[(i, j)] = slot
    phi = matrix_from_json(doc["phi"], mode) if "phi" in doc else Matrix.identity(n, mode)
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise SchemaError("labels must be a list with one entry per basis vector")
    try:
        return HomLieAlgebra(n, brackets, phi, labels, mode)
    except (DimensionMismatch, ModeError) as exc:
        raise SchemaError(str(exc)) from exc

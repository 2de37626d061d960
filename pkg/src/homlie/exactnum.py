"""Scalars, dense matrices and the linear-algebra kernel used everywhere else.

Two scalar modes are supported and never mixed inside one matrix:

* ``"exact"`` -- :class:`fractions.Fraction`, always in lowest terms with a
  positive denominator (``Fraction`` normalises on construction);
* ``"approx"`` -- Python ``float``.

Exact mode is the default for structure-constant algebra.  Approximate mode is
required by :func:`mat_exp` and by anything built on finite differences.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, ModeError, SchemaError, SingularMatrix

EXACT = "exact"
APPROX = "approx"
MODES = (EXACT, APPROX)

# pivot threshold, relative to the largest entry of the reduced matrix
TAU_RANK = 1e-10
# residual tolerance for approximate identities
TAU_RES = 1e-9

# scaling-and-squaring parameters
_EXP_NORM = 0.5
_EXP_TERMS = 18


def to_scalar(value, mode: str = EXACT):
    """Coerce ``value`` to a scalar of the given mode.

    Exact mode accepts integers, fractions and rational strings (``"p/q"``);
    floats are refused because they would silently carry rounding error.
    """
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (Integral, Rational)) and not isinstance(value, bool):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"not a rational literal: {value!r}") from exc
        if isinstance(value, (float, np.floating)):
            raise ModeError(f"float {value!r} given to an exact-mode matrix")
        raise ModeError(f"cannot interpret {value!r} as an exact scalar")
    if mode == APPROX:
        if isinstance(value, str):
            try:
                return float(Fraction(value.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"not a numeric literal: {value!r}") from exc
        if isinstance(value, bool):
            raise ModeError(f"cannot interpret {value!r} as a scalar")
        return float(value)
    raise ModeError(f"unknown mode {mode!r}")


def format_scalar(x):
    """JSON representation: ``"p/q"`` / ``"p"`` for exact scalars, float otherwise."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def scalar_mode(x) -> str:
    return EXACT if isinstance(x, Fraction) else APPROX


class Matrix:
    """Immutable dense matrix with entries stored row-major.

    >>> m = Matrix.from_rows([[1, 2], [3, 4]])
    >>> (m @ Matrix.identity(2)) == m
    True
    """

    __slots__ = ("rows", "cols", "entries", "mode")

    def __init__(self, rows: int, cols: int, entries: Iterable, mode: str = EXACT):
        if mode not in MODES:
            raise ModeError(f"unknown mode {mode!r}")
        data = tuple(to_scalar(e, mode) for e in entries)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}"
            )
        self._init(rows, cols, data, mode)

    def _init(self, rows, cols, data, mode):
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, rows, cols, data, mode) -> "Matrix":
        m = cls.__new__(cls)
        m._init(rows, cols, tuple(data), mode)
        return m

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], mode: str = EXACT) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r], mode)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, mode: str = EXACT) -> "Matrix":
        cols = [list(c) for c in columns]
        if any(len(c) != nrows for c in cols):
            raise DimensionMismatch("ragged columns")
        return cls(nrows, len(cols), [cols[j][i] for i in range(nrows) for j in range(len(cols))], mode)

    @classmethod
    def zeros(cls, rows: int, cols: int, mode: str = EXACT) -> "Matrix":
        zero = Fraction(0) if mode == EXACT else 0.0
        return cls._raw(rows, cols, [zero] * (rows * cols), mode)

    @classmethod
    def identity(cls, n: int, mode: str = EXACT) -> "Matrix":
        one, zero = (Fraction(1), Fraction(0)) if mode == EXACT else (1.0, 0.0)
        return cls._raw(n, n, [one if i == j else zero for i in range(n) for j in range(n)], mode)

    @classmethod
    def diag(cls, values: Sequence, mode: str = EXACT) -> "Matrix":
        vals = [to_scalar(v, mode) for v in values]
        n = len(vals)
        zero = Fraction(0) if mode == EXACT else 0.0
        return cls._raw(n, n, [vals[i] if i == j else zero for i in range(n) for j in range(n)], mode)

    @classmethod
    def from_array(cls, arr) -> "Matrix":
        a = np.asarray(arr, dtype=float)
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-d array")
        return cls._raw(a.shape[0], a.shape[1], [float(x) for x in a.ravel()], APPROX)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def to_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    def to_mode(self, mode: str) -> "Matrix":
        """Convert to ``mode``; exact -> approx rounds, approx -> exact is refused."""
        if mode == self.mode:
            return self
        if mode == APPROX:
            return Matrix._raw(self.rows, self.cols, [float(x) for x in self.entries], APPROX)
        raise ModeError("refusing to convert floats to exact rationals")

    # -- algebra ------------------------------------------------------------

    def _check_mode(self, other: "Matrix"):
        if other.mode != self.mode:
            raise ModeError(f"cannot combine {self.mode} and {other.mode} matrices")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.mode == other.mode and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.mode, self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)], self.mode)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._raw(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)], self.mode)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, [-a for a in self.entries], self.mode)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c, self.mode)
        return Matrix._raw(self.rows, self.cols, [c * a for a in self.entries], self.mode)

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_mode(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        zero = Fraction(0) if self.mode == EXACT else 0.0
        ocols = other.columns()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), zero))
        return Matrix._raw(self.rows, other.cols, out, self.mode)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product; ``v`` must already hold scalars of this mode."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"{self.shape} applied to length {len(v)}")
        zero = Fraction(0) if self.mode == EXACT else 0.0
        return tuple(sum((a * b for a, b in zip(self.row(i), v) if a and b), zero) for i in range(self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)], self.mode)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def max_abs(self) -> float:
        return max((abs(float(x)) for x in self.entries), default=0.0)

    def __repr__(self):
        body = "; ".join(" ".join(str(format_scalar(x)) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix<{self.mode} {self.rows}x{self.cols}>[{body}]"


# -- elimination --------------------------------------------------------------


def _rref(M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns.

    Exact mode uses plain zero tests.  Approximate mode uses partial pivoting
    and treats a candidate pivot as zero when it is below ``TAU_RANK`` times
    the largest entry of the matrix.
    """
    rows = [list(M.row(i)) for i in range(M.rows)]
    exact = M.mode == EXACT
    thresh = 0.0 if exact else TAU_RANK * M.max_abs()
    pivots = []
    r = 0
    for c in range(M.cols):
        if r == len(rows):
            break
        if exact:
            p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        else:
            p = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
            if abs(rows[p][c]) <= thresh:
                p = None
        if p is None:
            if not exact:
                for i in range(r, len(rows)):
                    rows[i][c] = 0.0
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def _bareiss_rank(M: Matrix) -> int:
    # fraction-free: clear denominators row by row, then integer Bareiss
    rows = []
    for i in range(M.rows):
        r = M.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in r]
        if any(ints):
            rows.append(ints)
    rank = 0
    prev = 1
    ncols = M.cols
    for c in range(ncols):
        p = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        piv = rows[rank][c]
        for i in range(rank + 1, len(rows)):
            a = rows[i][c]
            rows[i] = [(piv * rows[i][k] - a * rows[rank][k]) // prev for k in range(ncols)]
        prev = piv
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank(M: Matrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.mode == EXACT:
        return _bareiss_rank(M)
    return len(_rref(M)[1])


def pivot_columns(M: Matrix) -> list[int]:
    """Indices of a maximal linearly independent subset of the columns."""
    if M.rows == 0 or M.cols == 0:
        return []
    return _rref(M)[1]


def nullspace(M: Matrix) -> Matrix:
    """Kernel basis, returned as the columns of a ``cols x (cols - rank)`` matrix.

    Each basis vector has a 1 in one free coordinate and 0 in the others.
    """
    n = M.cols
    one, zero = (Fraction(1), Fraction(0)) if M.mode == EXACT else (1.0, 0.0)
    if M.rows == 0:
        pivots, red = [], []
    else:
        red, pivots = _rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return Matrix.from_columns(basis, n, M.mode) if basis else Matrix._raw(n, 0, (), M.mode)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square:
        raise DimensionMismatch(f"inverse of non-square {M.shape}")
    n = M.rows
    aug = Matrix._raw(
        n, 2 * n,
        [x for i in range(n) for x in M.row(i) + Matrix.identity(n, M.mode).row(i)],
        M.mode,
    )
    if M.mode == APPROX:
        # threshold must refer to M itself, not to the identity block
        red, pivots = _rref_with_scale(aug, M.max_abs(), n)
    else:
        red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix(f"matrix of shape {M.shape} is singular")
    return Matrix._raw(n, n, [x for r in red for x in r[n:]], M.mode)


def _rref_with_scale(aug: Matrix, scale: float, ncheck: int):
    rows = [list(aug.row(i)) for i in range(aug.rows)]
    thresh = TAU_RANK * scale
    pivots = []
    r = 0
    for c in range(ncheck):
        p = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
        if abs(rows[p][c]) <= thresh:
            return rows, pivots
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


# -- exponential --------------------------------------------------------------


def expm1_array(a) -> np.ndarray:
    """``exp(a) - I`` for a square float array, computed without cancellation.

    Scaling and squaring on the shifted quantity ``E = exp(X) - I``: the
    argument is halved until its infinity norm is at most 0.5, a Taylor
    series through degree 18 gives ``E``, and each squaring step uses
    ``exp(2X) - I = E @ E + 2E``.  Keeping ``-I`` out of the recurrence means
    small arguments return small results with full relative accuracy.
    """
    a = np.asarray(a)
    # extended-precision input stays extended; everything else becomes float64
    a = a.astype(np.result_type(a.dtype, np.float64), copy=False)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expm of non-square shape {a.shape}")
    norm = np.abs(a).sum(axis=1).max() if a.size else 0.0
    s = 0
    if norm > _EXP_NORM:
        s = int(math.ceil(math.log2(norm / _EXP_NORM)))
    x = a / (2.0 ** s)
    term = x.copy()
    e = x.copy()
    for k in range(2, _EXP_TERMS + 1):
        term = term @ x / k
        e = e + term
    for _ in range(s):
        e = e @ e + 2.0 * e
    return e


def expm_array(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.eye(a.shape[0]) + expm1_array(a)


def mat_exp(M: Matrix) -> Matrix:
    """Matrix exponential of an approximate-mode square matrix."""
    if M.mode != APPROX:
        raise ModeError("mat_exp needs an approx-mode matrix; convert with to_mode('approx')")
    if not M.is_square:
        raise DimensionMismatch(f"mat_exp of non-square {M.shape}")
    return Matrix.from_array(expm_array(M.to_array()))


# -- JSON ---------------------------------------------------------------------


def matrix_to_json(M: Matrix) -> dict:
    doc = {
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[format_scalar(x) for x in M.row(i)] for i in range(M.rows)],
    }
    if M.mode == APPROX:
        doc["mode"] = APPROX
    return doc


def matrix_from_json(doc, mode: str | None = None) -> Matrix:
    """Parse the matrix JSON form.

    ``mode`` is the enclosing document's mode; a ``"mode"`` key on the matrix
    itself is honoured when no enclosing mode is given.  Entries may be nested
    rows or a flat row-major list.
    """
    if not isinstance(doc, dict):
        raise SchemaError("matrix must be a JSON object")
    try:
        rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    except KeyError as exc:
        raise SchemaError(f"matrix is missing key {exc}") from exc
    if not isinstance(rows, int) or not isinstance(cols, int) or not isinstance(entries, list):
        raise SchemaError("matrix rows/cols must be integers and entries a list")
    mode = mode or doc.get("mode", EXACT)
    if mode not in MODES:
        raise SchemaError(f"unknown mode {mode!r}")
    if entries and all(isinstance(r, list) for r in entries):
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise SchemaError(f"entries do not form a {rows}x{cols} array")
        flat = [x for r in entries for x in r]
    else:
        flat = entries
    for x in flat:
        if isinstance(x, bool) or not isinstance(x, (int, float, str)):
            raise SchemaError(f"bad matrix entry {x!r}")
        if isinstance(x, float) and mode != APPROX:
            raise SchemaError("float entries require \"mode\": \"approx\"")
    try:
        return Matrix(rows, cols, flat, mode)
    except DimensionMismatch as exc:
        raise SchemaError(str(exc)) from exc

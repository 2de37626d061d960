"""Named algebras and finite groups used by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .algebra import HomLieAlgebra, yau_twist
from .exactnum import EXACT, Matrix, to_scalar


def abelian(n: int, phi: Matrix | None = None) -> HomLieAlgebra:
    return HomLieAlgebra(n, {}, phi, mode=phi.mode if phi is not None else EXACT)


def sl2() -> HomLieAlgebra:
    # basis (h, e, f)
    return HomLieAlgebra(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, labels=("h", "e", "f"))


def nonabelian2() -> HomLieAlgebra:
    """The two-dimensional Lie algebra with ``[x, y] = y``."""
    return HomLieAlgebra(2, {(0, 1): {1: 1}}, labels=("x", "y"))


def direct_sum(a: HomLieAlgebra, b: HomLieAlgebra) -> HomLieAlgebra:
    if a.mode != b.mode:
        raise ValueError("summands must share a mode")
    n, m = a.dim, b.dim
    brackets = {}
    for (i, j, k, c) in a.tensor_entries():
        brackets.setdefault((i, j), {})[k] = c
    for (i, j, k, c) in b.tensor_entries():
        brackets.setdefault((n + i, n + j), {})[n + k] = c
    zero = to_scalar(0, a.mode)
    rows = [list(a.phi.row(i)) + [zero] * m for i in range(n)]
    rows += [[zero] * n + list(b.phi.row(i)) for i in range(m)]
    phi = Matrix.from_rows(rows, a.mode) if rows else None
    return HomLieAlgebra(n + m, brackets, phi, a.labels + b.labels, a.mode)


def sl2_plus_line() -> HomLieAlgebra:
    return direct_sum(sl2(), HomLieAlgebra(1, {}, labels=("z",)))


def sl2_torus(lam) -> Matrix:
    """Diagonal automorphism ``(h, e, f) -> (h, lam e, f / lam)`` of sl2."""
    lam = to_scalar(lam, EXACT) if not isinstance(lam, float) else lam
    mode = EXACT if isinstance(lam, Fraction) else "approx"
    one = to_scalar(1, mode)
    return Matrix.diag([one, lam, one / lam], mode)


def yau_sl2(lam) -> HomLieAlgebra:
    return yau_twist(sl2(), sl2_torus(lam))


def nonabelian2_automorphism(a, b) -> Matrix:
    """Automorphisms of ``[x, y] = y``: ``x -> x + b y``, ``y -> a y`` with ``a != 0``."""
    a, b = Fraction(a), Fraction(b)
    return Matrix.from_rows([[1, 0], [b, a]])


def multiplicative_corpus() -> dict[str, HomLieAlgebra]:
    from .matgrp import TwistedMatrixSpace, gl_to_algebra

    out = {
        "abelian2": abelian(2),
        "abelian2_twisted": abelian(2, Matrix.diag([1, 2])),
        "nonabelian2": nonabelian2(),
        "nonabelian2_twisted": yau_twist(nonabelian2(), nonabelian2_automorphism(3, 1)),
        "sl2": sl2(),
        "sl2_plus_line": sl2_plus_line(),
    }
    for lam in (Fraction(2), Fraction(3), Fraction(1, 2)):
        out[f"yau_sl2_{lam}"] = yau_sl2(lam)
    out["gl2_diag12"] = gl_to_algebra(TwistedMatrixSpace(Matrix.diag([1, 2])))
    out["gl2_jordan"] = gl_to_algebra(TwistedMatrixSpace(Matrix.from_rows([[1, 1], [0, 1]])))
    return out


# -- finite groups --------------------------------------------------------------


def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def cyclic_automorphism(n: int, u: int) -> list[int]:
    return [(u * x) % n for x in range(n)]


def symmetric3() -> tuple[list[list[int]], list[tuple[int, ...]]]:
    """Cayley table of S3 with elements listed in lexicographic permutation order.

    The product is composition ``(p q)(i) = p(q(i))``.
    """
    elems = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[q[i]] for i in range(3))] for q in elems] for p in elems]
    return table, elems


def conjugation(table: list[list[int]], g: int) -> list[int]:
    """The inner automorphism ``x -> g x g^-1`` as an index permutation."""
    m = len(table)
    unit = next(e for e in range(m) if all(table[e][x] == x for x in range(m)))
    ginv = next(y for y in range(m) if table[g][y] == unit)
    return [table[table[g][x]][ginv] for x in range(m)]


def dihedral4() -> list[list[int]]:
    """D4 with ``r^a s^b`` stored at index ``a + 4 b``."""

    def mul(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        return ((a + (c if b == 0 else -c)) % 4) + 4 * ((b + d) % 2)

    return [[mul(x, y) for y in range(8)] for x in range(8)]


def dihedral4_outer() -> list[int]:
    """Outer automorphism fixing ``r`` and sending ``s`` to ``r s``."""
    return [((x % 4) + (x // 4)) % 4 + 4 * (x // 4) for x in range(8)]

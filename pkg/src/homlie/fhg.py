"""Finite Hom-groups given by Cayley tables over the indices ``0..m-1``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidHomGroup, NotAGroup, NotAutomorphism, SchemaError


@dataclass(frozen=True)
class GroupWitness:
    at: tuple[int, ...]
    lhs: object
    rhs: object

    def describe(self) -> str:
        return f"({','.join(map(str, self.at))}): lhs {self.lhs} vs rhs {self.rhs}"

    def to_json(self) -> dict:
        return {"at": list(self.at), "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class FiniteHomGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    twist: tuple[int, ...]
    unit: int

    def __post_init__(self):
        m = self.order
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        object.__setattr__(self, "twist", tuple(self.twist))
        if m < 1:
            raise InvalidHomGroup("order must be positive")
        if len(self.table) != m or any(len(r) != m for r in self.table):
            raise InvalidHomGroup(f"table must be {m}x{m}")
        if any(not isinstance(v, int) or not 0 <= v < m for r in self.table for v in r):
            raise InvalidHomGroup("table entries out of range")
        if sorted(self.twist) != list(range(m)):
            raise InvalidHomGroup("twist is not a permutation")
        if not isinstance(self.unit, int) or not 0 <= self.unit < m:
            raise InvalidHomGroup("unit out of range")
        e = self.unit
        for x in range(m):
            if self.table[x][e] != self.twist[x] or self.table[e][x] != self.twist[x]:
                raise InvalidHomGroup(f"unit law fails at {x}")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def tw(self, a: int) -> int:
        return self.twist[a]

    @property
    def untwist(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for x, y in enumerate(self.twist):
            inv[y] = x
        return tuple(inv)

    def inverses(self, x: int) -> list[int]:
        e = self.unit
        return [y for y in range(self.order) if self.table[x][y] == e and self.table[y][x] == e]

    def inverse(self, x: int) -> int:
        inv = self.inverses(x)
        if len(inv) != 1:
            raise InvalidHomGroup(f"element {x} has {len(inv)} inverses")
        return inv[0]

    def tilde_ad(self, a: int, b: int) -> int:
        """Untwisted ``a * b`` multiplied by the inverse of ``a``."""
        return self.mul(self.untwist[self.mul(a, b)], self.inverse(a))

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table], "twist": list(self.twist), "unit": self.unit}


def _group_unit(table) -> int | None:
    m = len(table)
    for e in range(m):
        if all(table[e][x] == x and table[x][e] == x for x in range(m)):
            return e
    return None


def check_group(table: Sequence[Sequence[int]]) -> None:
    """Raise :class:`NotAGroup` unless ``table`` is the Cayley table of a group."""
    m = len(table)
    if m == 0 or any(len(r) != m for r in table):
        raise NotAGroup("table must be square and non-empty")
    if any(not isinstance(v, int) or not 0 <= v < m for r in table for v in r):
        raise NotAGroup("table entries out of range")
    for a in range(m):
        for b in range(m):
            for c in range(m):
                lhs, rhs = table[table[a][b]][c], table[a][table[b][c]]
                if lhs != rhs:
                    raise NotAGroup("not associative", GroupWitness((a, b, c), lhs, rhs))
    e = _group_unit(table)
    if e is None:
        raise NotAGroup("no identity element")
    for a in range(m):
        if not any(table[a][b] == e and table[b][a] == e for b in range(m)):
            raise NotAGroup(f"element {a} has no inverse", GroupWitness((a,), None, e))


def from_automorphism(cayley: Sequence[Sequence[int]], phi: Sequence[int]) -> FiniteHomGroup:
    """Hom-group with product ``phi(a b)`` built from a group and one of its automorphisms."""
    check_group(cayley)
    m = len(cayley)
    if sorted(phi) != list(range(m)):
        raise NotAutomorphism("map is not a bijection of the group")
    for a in range(m):
        for b in range(m):
            lhs, rhs = phi[cayley[a][b]], cayley[phi[a]][phi[b]]
            if lhs != rhs:
                raise NotAutomorphism(f"map does not preserve the product at ({a},{b})", GroupWitness((a, b), lhs, rhs))
    table = [[phi[cayley[a][b]] for b in range(m)] for a in range(m)]
    return FiniteHomGroup(m, table, tuple(phi), _group_unit(cayley))


@dataclass
class GroupReport:
    verdicts_: dict[str, tuple[bool, GroupWitness | None]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.verdicts_.values())

    def __getitem__(self, key) -> bool:
        return self.verdicts_[key][0]

    def witness(self, key) -> GroupWitness | None:
        return self.verdicts_[key][1]

    def verdicts(self):
        return [(k, ok, w.describe() if w else "") for k, (ok, w) in self.verdicts_.items()]


def _first(pairs):
    """First ``(at, lhs, rhs)`` with ``lhs != rhs``, as a witness."""
    for at, lhs, rhs in pairs:
        if lhs != rhs:
            return GroupWitness(at, lhs, rhs)
    return None


def check_axioms(H: FiniteHomGroup) -> GroupReport:
    """Each Hom-group axiom and each derived property, exhaustively, with a first failing witness."""
    m, mul, tw, e = H.order, H.mul, H.tw, H.unit
    rng = range(m)
    out = {}

    w = _first(((x, y), tw(mul(x, y)), mul(tw(x), tw(y))) for x in rng for y in rng)
    out["twist_multiplicative"] = (w is None, w)

    w = _first(((x, y, z), mul(tw(x), mul(y, z)), mul(mul(x, y), tw(z))) for x in rng for y in rng for z in rng)
    out["hom_associative"] = (w is None, w)

    w = _first(((x,), (mul(x, e), mul(e, x)), (tw(x), tw(x))) for x in rng)
    if w is None:
        others = [u for u in rng if u != e and all(mul(x, u) == tw(x) == mul(u, x) for x in rng)]
        if others:
            w = GroupWitness((others[0],), "second unit", e)
    out["hom_unit"] = (w is None, w)

    inv = {x: H.inverses(x) for x in rng}
    missing = [x for x in rng if not inv[x]]
    out["inverses"] = (not missing, GroupWitness((missing[0],), None, e) if missing else None)

    out["unit_fixed"] = (tw(e) == e, None if tw(e) == e else GroupWitness((e,), tw(e), e))

    multi = [x for x in rng if len(inv[x]) != 1]
    out["unique_inverse"] = (
        not multi,
        GroupWitness((multi[0],), len(inv[multi[0]]), 1) if multi else None,
    )

    if multi:
        out["inverse_of_product"] = (False, GroupWitness((multi[0],), "no unique inverse", None))
    else:
        one = {x: inv[x][0] for x in rng}
        w = _first(((x, y), one[mul(x, y)], mul(one[y], one[x])) for x in rng for y in rng)
        out["inverse_of_product"] = (w is None, w)
    return GroupReport(out)


def check_weak_hom(f: Sequence[int], G: FiniteHomGroup, H: FiniteHomGroup) -> GroupReport:
    """Weak-homomorphism, homomorphism and twist-commuting verdicts for an index map ``f``."""
    if len(f) != G.order or any(not isinstance(v, int) or not 0 <= v < H.order for v in f):
        raise InvalidHomGroup("map must send every element of the source into the target")
    rng = range(G.order)
    out = {}
    unit_ok = f[G.unit] == H.unit
    unit_w = None if unit_ok else GroupWitness((G.unit,), f[G.unit], H.unit)
    out["unit_preserved"] = (unit_ok, unit_w)
    w = _first(((x, y), H.tw(f[G.mul(x, y)]), H.mul(f[G.tw(x)], f[G.tw(y)])) for x in rng for y in rng)
    out["weak_homomorphism"] = (unit_ok and w is None, unit_w or w)
    w = _first(((x, y), f[G.mul(x, y)], H.mul(f[x], f[y])) for x in rng for y in rng)
    out["homomorphism"] = (unit_ok and w is None, unit_w or w)
    w = _first(((x,), H.tw(f[x]), f[G.tw(x)]) for x in rng)
    out["twist_commutes"] = (w is None, w)
    return GroupReport(out)


def tilde_ad_check(H: FiniteHomGroup) -> GroupReport:
    """Action axioms of the twisted conjugation, over every element, pair and triple."""
    rng = range(H.order)
    ad, tw, untw = H.tilde_ad, H.tw, H.untwist
    out = {}
    w = _first(((x,), ad(H.unit, x), tw(x)) for x in rng)
    out["unit_acts_as_twist"] = (w is None, w)
    w = _first(
        ((a, b, x), ad(H.mul(a, b), x), ad(tw(a), untw[ad(tw(b), x)]))
        for a in rng
        for b in rng
        for x in rng
    )
    out["action_compatible"] = (w is None, w)
    return GroupReport(out)


def group_from_json(doc) -> FiniteHomGroup:
    if not isinstance(doc, dict):
        raise SchemaError("group document must be a JSON object")
    try:
        order, table, twist, unit = doc["order"], doc["table"], doc["twist"], doc["unit"]
    except KeyError as exc:
        raise SchemaError(f"group is missing key {exc}") from exc
    if not isinstance(order, int) or not isinstance(table, list) or not isinstance(twist, list):
        raise SchemaError("order must be an integer; table and twist must be lists")
    if len(twist) != order or any(not isinstance(v, int) for v in twist):
        raise SchemaError("twist must list one integer per element")
    if any(not isinstance(r, list) for r in table):
        raise SchemaError("table rows must be lists")
    return FiniteHomGroup(order, table, tuple(twist), unit)


def map_from_json(doc) -> list[int]:
    if not isinstance(doc, dict) or not isinstance(doc.get("map"), list):
        raise SchemaError('map document must look like {"map": [...]}')
    f = doc["map"]
    if any(not isinstance(v, int) for v in f):
        raise SchemaError("map entries must be integers")
    return f

"""Join/meet constraints and the least qn-lattice they determine.

A qn-lattice here is a poset with two partial operations stored as tables
keyed on unordered *incomparable* pairs.  Comparable pairs are never
stored: their join and meet are the larger and the smaller element and
are resolved on lookup.
"""
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from . import errors
from .poset import maximal_lower_bounds, minimal_upper_bounds


class Kind(Enum):
    JOIN = "join"
    MEET = "meet"

    @property
    def dual(self):
        return Kind.MEET if self is Kind.JOIN else Kind.JOIN


@dataclass(frozen=True)
class JmConstraint:
    kind: Kind
    left: str
    right: str
    result: str
    line: int = field(default=None, compare=False)

    @property
    def key(self):
        return self.kind, frozenset((self.left, self.right))

    def format(self, join_symbol="+", meet_symbol="*"):
        op = join_symbol if self.kind is Kind.JOIN else meet_symbol
        return f"{self.left}{op}{self.right}={self.result}"

    def __str__(self):
        return self.format()


def join(x, y, z, line=None):
    return JmConstraint(Kind.JOIN, x, y, z, line)


def meet(x, y, z, line=None):
    return JmConstraint(Kind.MEET, x, y, z, line)


def implied_edges(constraints):
    """Order pairs forced by the constraints themselves: x, y <= x+y and x*y <= x, y."""
    out = []
    for c in constraints:
        if c.kind is Kind.JOIN:
            out += [(c.left, c.result), (c.right, c.result)]
        else:
            out += [(c.result, c.left), (c.result, c.right)]
    return out


def _extremal_bounds(P, kind, x, y):
    if kind is Kind.JOIN:
        return minimal_upper_bounds(P, x, y)
    return maximal_lower_bounds(P, x, y)


def acceptable_value(P, kind, x, y, z):
    """A1 as far as the given order can tell: ``z`` is a minimal upper bound.

    Where a least upper bound exists this means ``z`` is it.  Listed orders
    may omit comparabilities (say between two incomparable upper bounds
    that the ambient structure would order), so a minimal one is accepted.
    Dually for meets.
    """
    return z in _extremal_bounds(P, kind, x, y)


def validate_constraints(P, W):
    """Check ``W`` against ``P`` and return it coherent and deduplicated."""
    seen = {}
    out = []
    for c in W:
        labels = {c.left, c.right, c.result}
        if len(labels) != 3:
            raise errors.DegenerateConstraint(
                f"constraint {c} does not involve three distinct elements", c.line)
        for lab in (c.left, c.right, c.result):
            if lab not in P.labels:
                raise errors.UnknownLabel(f"unknown element {lab!r} in constraint {c}", c.line)
        prev = seen.get(c.key)
        if prev is not None:
            if prev.result != c.result:
                raise errors.Incoherent(
                    f"incoherent {c.kind.value}: {prev} and {c}", c.line)
            continue
        seen[c.key] = c
        x, y, z = P.index(c.left), P.index(c.right), P.index(c.result)
        if not acceptable_value(P, c.kind, x, y, z):
            found = ",".join(P.labels[b] for b in _extremal_bounds(P, c.kind, x, y)) or "none"
            if c.kind is Kind.JOIN:
                raise errors.NotSupremum(
                    f"{c}: minimal upper bounds of {c.left},{c.right}: {found}", c.line)
            raise errors.NotInfimum(
                f"{c}: maximal lower bounds of {c.left},{c.right}: {found}", c.line)
        out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class QnLattice:
    poset: object
    joins: dict
    meets: dict

    @property
    def n(self):
        return self.poset.n

    def table(self, kind):
        return self.joins if kind is Kind.JOIN else self.meets

    def lookup(self, kind, x, y):
        return op_lookup(self, kind, x, y)

    def entries(self):
        """Stored entries as ``(kind, x, y, z)`` with ``x < y`` as ids."""
        for kind in Kind:
            for (x, y), z in sorted(self.table(kind).items()):
                yield kind, x, y, z

    def constraints(self):
        lab = self.poset.labels
        return [JmConstraint(k, lab[x], lab[y], lab[z]) for k, x, y, z in self.entries()]


def _key(x, y):
    return (x, y) if x < y else (y, x)


def op_lookup(Q, kind, x, y):
    P = Q.poset
    if P.le(x, y):
        return y if kind is Kind.JOIN else x
    if P.le(y, x):
        return x if kind is Kind.JOIN else y
    return Q.table(kind).get(_key(x, y))


class _Closure:
    def __init__(self, P, rng=None):
        self.P = P
        self.rng = rng
        self.tables = {Kind.JOIN: {}, Kind.MEET: {}}
        self.pending = [] if rng is not None else deque()

    def lookup(self, kind, x, y):
        P = self.P
        if P.le(x, y):
            return y if kind is Kind.JOIN else x
        if P.le(y, x):
            return x if kind is Kind.JOIN else y
        return self.tables[kind].get(_key(x, y))

    def put(self, kind, x, y, z, why):
        P = self.P
        lab = P.labels
        if P.comparable(x, y):
            want = y if P.le(x, y) == (kind is Kind.JOIN) else x
            if z != want:
                raise errors.DerivedConflict(
                    f"{why} forces {lab[x]},{lab[y]} -> {lab[z]} but the pair is comparable "
                    f"with value {lab[want]}")
            return
        table = self.tables[kind]
        key = _key(x, y)
        old = table.get(key)
        if old is not None:
            if old != z:
                raise errors.DerivedConflict(
                    f"{why} forces {kind.value}({lab[x]},{lab[y]}) = {lab[z]}, "
                    f"already {lab[old]}")
            return
        if not acceptable_value(P, kind, x, y, z):
            cls = errors.DerivedNotSupremum if kind is Kind.JOIN else errors.DerivedNotInfimum
            raise cls(f"{why} forces {kind.value}({lab[x]},{lab[y]}) = {lab[z]}, "
                      "which is not the bound in the order")
        table[key] = z
        self.pending.append((kind, x, y, z))

    def pop(self):
        if self.rng is None:
            return self.pending.popleft()
        i = self.rng.randrange(len(self.pending))
        self.pending[i], self.pending[-1] = self.pending[-1], self.pending[i]
        return self.pending.pop()

    def run(self):
        P = self.P
        n = P.n
        le = P.le
        while self.pending:
            kind, x, y, z = self.pop()
            is_join = kind is Kind.JOIN
            for a, b in ((x, y), (y, x)):
                # entry as the first premise of A4
                for u in range(n):
                    if le(b, u) if is_join else le(u, b):
                        v = self.lookup(kind, z, u)
                        if v is not None:
                            self.put(kind, a, u, v, "A4")
                # entry as the second premise of A4: (a, b) -> z plays (z', u) -> v
                for y2 in range(n):
                    if le(y2, b) if is_join else le(b, y2):
                        for x2 in range(n):
                            if self.lookup(kind, x2, y2) == a:
                                self.put(kind, x2, b, z, "A4")
                # A5
                for u in range(n):
                    if (le(a, u) and le(u, z)) if is_join else (le(z, u) and le(u, a)):
                        self.put(kind, u, b, z, "A5")


def close(P, W, rng=None):
    """Least qn-lattice over ``P`` in which every constraint of ``W`` holds.

    ``W`` must already be validated.  Passing ``rng`` (a ``random.Random``)
    fires pending rules in random order; the result does not depend on it.
    """
    c = _Closure(P, rng)
    for con in W:
        x, y, z = P.index(con.left), P.index(con.right), P.index(con.result)
        c.put(con.kind, x, y, z, f"constraint {con}")
    c.run()
    return QnLattice(P, c.tables[Kind.JOIN], c.tables[Kind.MEET])


def from_tables(P, joins=(), meets=()):
    """Build a QnLattice directly from label constraints, without closing."""
    tabs = {Kind.JOIN: {}, Kind.MEET: {}}
    for kind, items in ((Kind.JOIN, joins), (Kind.MEET, meets)):
        for x, y, z in items:
            tabs[kind][_key(P.index(x), P.index(y))] = P.index(z)
    return QnLattice(P, tabs[Kind.JOIN], tabs[Kind.MEET])


def assert_axioms(Q):
    """Exhaustive A1-A5 check; returns a list of violation messages."""
    P = Q.poset
    n = P.n
    lab = P.labels
    out = []
    for kind in Kind:
        name = "+" if kind is Kind.JOIN else "*"
        for (x, y), z in Q.table(kind).items():
            if P.comparable(x, y):
                out.append(f"A2: comparable pair {lab[x]}{name}{lab[y]} stored")
            elif not acceptable_value(P, kind, x, y, z):
                out.append(f"A1: {lab[x]}{name}{lab[y]}={lab[z]} is not the bound")
    for kind in Kind:
        is_join = kind is Kind.JOIN
        name = "+" if is_join else "*"

        def check(p, q, r, rule):
            got = op_lookup(Q, kind, p, q)
            if got != r:
                have = "undefined" if got is None else lab[got]
                out.append(f"{rule}: {lab[p]}{name}{lab[q]} should be {lab[r]}, is {have}")

        for x in range(n):
            for y in range(n):
                z = op_lookup(Q, kind, x, y)
                if z is None:
                    continue
                for u in range(n):
                    if le_dir(P, is_join, y, u):
                        v = op_lookup(Q, kind, z, u)
                        if v is not None:
                            check(x, u, v, "A4")
                    if le_dir(P, is_join, x, u) and le_dir(P, is_join, u, z):
                        check(u, y, z, "A5")
    return sorted(set(out))


def le_dir(P, is_join, a, b):
    return P.le(a, b) if is_join else P.le(b, a)

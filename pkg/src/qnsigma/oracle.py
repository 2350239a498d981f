"""Slow reference implementations and random instances for the test suite.

Nothing here is shared with the fast paths in ``qn`` and ``counter``:
the order is re-read into a plain boolean matrix, the closure restarts a
full scan after every single repair, and counting tests every subset
against every pair of its elements.
"""
import itertools
import random
from dataclasses import dataclass

from . import errors
from .poset import build_poset, greatest_lower_bound, least_upper_bound
from .qn import JmConstraint, Kind, QnLattice, validate_constraints


def _order(P):
    n = P.n
    return [[i == j or bool(P.down[j] >> i & 1) for j in range(n)] for i in range(n)]


class _Naive:
    def __init__(self, P, W):
        self.P = P
        self.leq = _order(P)
        self.op = {Kind.JOIN: {}, Kind.MEET: {}}
        for c in W:
            x, y, z = (P.labels.index(c.left), P.labels.index(c.right),
                       P.labels.index(c.result))
            self.op[c.kind][frozenset((x, y))] = z

    def value(self, kind, x, y):
        leq = self.leq
        if leq[x][y]:
            return y if kind is Kind.JOIN else x
        if leq[y][x]:
            return x if kind is Kind.JOIN else y
        return self.op[kind].get(frozenset((x, y)))

    def is_bound(self, kind, x, y, z):
        # z is a minimal common upper bound (maximal lower bound for meets)
        leq, n = self.leq, self.P.n
        if kind is Kind.JOIN:
            common = [w for w in range(n) if leq[x][w] and leq[y][w]]
            return z in common and not any(leq[w][z] and w != z for w in common)
        common = [w for w in range(n) if leq[w][x] and leq[w][y]]
        return z in common and not any(leq[z][w] and w != z for w in common)

    def first_violation(self):
        n, leq = self.P.n, self.leq
        for kind in Kind:
            j = kind is Kind.JOIN
            for x, y, u in itertools.product(range(n), repeat=3):
                z = self.value(kind, x, y)
                if z is None:
                    continue
                # A4
                if (leq[y][u] if j else leq[u][y]):
                    v = self.value(kind, z, u)
                    if v is not None and self.value(kind, x, u) != v:
                        return kind, x, u, v
                # A5
                if (leq[x][u] and leq[u][z]) if j else (leq[z][u] and leq[u][x]):
                    if self.value(kind, u, y) != z:
                        return kind, u, y, z
        return None

    def run(self):
        while True:
            bad = self.first_violation()
            if bad is None:
                return
            kind, x, y, z = bad
            have = self.value(kind, x, y)
            if have is not None:
                raise errors.DerivedConflict(
                    f"{kind.value}({x},{y}) forced to {z}, already {have}")
            if not self.is_bound(kind, x, y, z):
                cls = errors.DerivedNotSupremum if kind is Kind.JOIN else errors.DerivedNotInfimum
                raise cls(f"{kind.value}({x},{y}) forced to {z}")
            self.op[kind][frozenset((x, y))] = z


def naive_close(P, W):
    """Repair one A4/A5 violation at a time, rescanning from scratch."""
    c = _Naive(P, W)
    c.run()
    tables = {}
    for kind in Kind:
        tables[kind] = {tuple(sorted(k)): v for k, v in c.op[kind].items()}
    return QnLattice(P, tables[Kind.JOIN], tables[Kind.MEET])


def naive_count(Q, limit=16):
    """Count subsets closed under every defined join and meet."""
    P = Q.poset
    n = P.n
    if n > limit:
        raise errors.TooLarge(f"naive count limited to {limit} elements")
    leq = _order(P)

    def value(kind, x, y):
        if leq[x][y]:
            return y if kind is Kind.JOIN else x
        if leq[y][x]:
            return x if kind is Kind.JOIN else y
        table = Q.joins if kind is Kind.JOIN else Q.meets
        return table.get((min(x, y), max(x, y)))

    count = 0
    for size in range(n + 1):
        for X in itertools.combinations(range(n), size):
            members = set(X)
            if all(value(k, x, y) in members
                   for k in Kind for x in X for y in X
                   if value(k, x, y) is not None):
                count += 1
    return count


@dataclass(frozen=True)
class RandomInstanceSpec:
    n: int = 6
    edge_density: float = 0.35
    constraint_count: int = 3
    seed: int = 0
    max_tries: int = 200


LABELS = "abcdefghijklmnopqrstuvwxyz"


def random_poset(rng, n, density):
    labels = LABELS[:n]
    order = list(range(n))
    rng.shuffle(order)
    edges = [(labels[order[i]], labels[order[j]])
             for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return build_poset(labels, edges), edges


def random_instance(spec):
    """A random poset with constraints that are true bounds in it.

    Deterministic in ``spec.seed``; returns ``(poset, constraints, edges)``.
    """
    rng = random.Random(spec.seed)
    for _ in range(spec.max_tries):
        P, edges = random_poset(rng, spec.n, spec.edge_density)
        cands = []
        for x, y in itertools.combinations(range(P.n), 2):
            if P.comparable(x, y):
                continue
            lab = P.labels
            z = least_upper_bound(P, x, y)
            if z is not None:
                cands.append(JmConstraint(Kind.JOIN, lab[x], lab[y], lab[z]))
            z = greatest_lower_bound(P, x, y)
            if z is not None:
                cands.append(JmConstraint(Kind.MEET, lab[x], lab[y], lab[z]))
        if len(cands) < spec.constraint_count:
            continue
        W = rng.sample(cands, spec.constraint_count)
        W = [JmConstraint(c.kind, c.right, c.left, c.result) if rng.random() < 0.5 else c
             for c in W]
        return P, validate_constraints(P, W), edges
    raise errors.GenerationExhausted(
        f"no instance with {spec.constraint_count} constraints after {spec.max_tries} draws")

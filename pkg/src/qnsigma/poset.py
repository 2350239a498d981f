"""Finite posets over single-character labels.

Elements are identified by their index in declaration order.  The strict
order is kept as two tables of bitmasks: ``down[i]`` holds every element
strictly below ``i`` and ``up[i]`` every element strictly above it.
"""
from dataclasses import dataclass
from enum import Enum

from .errors import CycleDetected, DuplicateLabel, TooLarge, UnknownLabel

MAX_ELEMENTS = 64
RESERVED = set("=,;%\\")


class Cmp(Enum):
    LESS = "<"
    GREATER = ">"
    EQUAL = "="
    INCOMPARABLE = "||"


def check_label(label, reserved=()):
    return (
        isinstance(label, str)
        and len(label) == 1
        and label.isprintable()
        and not label.isspace()
        and label not in RESERVED
        and label not in reserved
    )


@dataclass(frozen=True)
class Poset:
    labels: tuple
    down: tuple
    up: tuple

    @property
    def n(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    def lt(self, x, y):
        return bool(self.down[y] >> x & 1)

    def le(self, x, y):
        return x == y or bool(self.down[y] >> x & 1)

    def comparable(self, x, y):
        return x == y or bool((self.down[y] | self.up[y]) >> x & 1)

    def pairs(self):
        """All strict pairs ``(x, y)`` with ``x < y``."""
        return [(x, y) for y in range(self.n) for x in _bits(self.down[y])]

    def covers(self):
        out = []
        for x, y in self.pairs():
            if not self.up[x] & self.down[y]:
                out.append((x, y))
        return out

    def label_pairs(self):
        return [self.labels[x] + self.labels[y] for x, y in self.pairs()]


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def build_poset(labels, edge_pairs=()):
    """Build the poset whose order is the transitive closure of ``edge_pairs``.

    ``edge_pairs`` holds pairs ``(x, y)`` (or two-character strings ``"xy"``)
    meaning ``x < y``.  The first edge that closes a cycle raises
    :class:`CycleDetected`; the error carries that edge's position in
    ``edge_index``.
    """
    labels = tuple(labels)
    if len(labels) > MAX_ELEMENTS:
        raise TooLarge(f"{len(labels)} elements exceed the limit of {MAX_ELEMENTS}")
    seen = {}
    for i, lab in enumerate(labels):
        if lab in seen:
            raise DuplicateLabel(f"element {lab!r} declared twice")
        seen[lab] = i
    n = len(labels)
    down = [0] * n
    up = [0] * n
    for k, (a, b) in enumerate(edge_pairs):
        if a not in seen or b not in seen:
            bad = a if a not in seen else b
            err = UnknownLabel(f"unknown element {bad!r} in edge {a}{b}")
            err.edge_index = k
            raise err
        x, y = seen[a], seen[b]
        if x == y or down[x] >> y & 1:
            err = CycleDetected(f"edge {a}{b} creates a cycle ({b} <= {a} already holds)")
            err.edge_index = k
            raise err
        if down[y] >> x & 1:
            continue
        lower = down[x] | (1 << x)
        upper = up[y] | (1 << y)
        for u in _bits(upper):
            down[u] |= lower
        for d in _bits(lower):
            up[d] |= upper
    return Poset(labels, tuple(down), tuple(up))


def comparability(P, x, y):
    if x == y:
        return Cmp.EQUAL
    if P.lt(x, y):
        return Cmp.LESS
    if P.lt(y, x):
        return Cmp.GREATER
    return Cmp.INCOMPARABLE


def least_upper_bound(P, x, y):
    """Least common upper bound of ``x`` and ``y``, or None."""
    common = (P.up[x] | 1 << x) & (P.up[y] | 1 << y)
    for z in _bits(common):
        # z is least iff every common upper bound lies above or at z
        if common & ~(P.up[z] | 1 << z) == 0:
            return z
    return None


def greatest_lower_bound(P, x, y):
    common = (P.down[x] | 1 << x) & (P.down[y] | 1 << y)
    for z in _bits(common):
        if common & ~(P.down[z] | 1 << z) == 0:
            return z
    return None


def minimal_upper_bounds(P, x, y):
    common = (P.up[x] | 1 << x) & (P.up[y] | 1 << y)
    return [z for z in _bits(common) if not P.down[z] & common]


def maximal_lower_bounds(P, x, y):
    common = (P.down[x] | 1 << x) & (P.down[y] | 1 << y)
    return [z for z in _bits(common) if not P.up[z] & common]

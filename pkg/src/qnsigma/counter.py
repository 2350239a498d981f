"""Subuniverse enumeration and the relative number of subuniverses.

A subset X (an int bitmask over element ids) is closed when every stored
table entry with both operands in X has its value in X.  Comparable pairs
impose nothing since their join and meet are one of the operands.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np

from .errors import TooLarge

MAX_COUNT_BITS = 24
MAX_LIST_BITS = 20
_CHUNK_BITS = 20


@total_ordering
@dataclass(frozen=True)
class SigmaValue:
    """Exact ``sub_count * 2**(subtrahend - n)``."""

    sub_count: int
    n: int
    subtrahend: int = 8

    @property
    def value(self):
        return Fraction(self.sub_count) * Fraction(2) ** (self.subtrahend - self.n)

    def __eq__(self, other):
        if isinstance(other, SigmaValue):
            other = other.value
        try:
            return self.value == other
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        if isinstance(other, SigmaValue):
            other = other.value
        return self.value < other

    def __hash__(self):
        return hash(self.value)

    def decimal(self, digits=16):
        return format_dyadic(self.value, digits)

    def __str__(self):
        return format_dyadic(self.value, None)


def format_dyadic(value, digits=16):
    """Exact decimal rendering of a dyadic rational.

    With ``digits=None`` the shortest exact form is produced.
    """
    value = Fraction(value)
    den = value.denominator
    k = den.bit_length() - 1
    if den != 1 << k:
        raise ValueError(f"{value} is not dyadic")
    sign = "-" if value < 0 else ""
    num = abs(value.numerator)
    # num / 2**k == num * 5**k / 10**k exactly
    scaled = num * 5**k
    whole, frac = divmod(scaled, 10**k)
    frac_digits = str(frac).rjust(k, "0") if k else ""
    if digits is None:
        frac_digits = frac_digits.rstrip("0")
        return sign + str(whole) + ("." + frac_digits if frac_digits else "")
    if len(frac_digits) > digits:
        raise ValueError(f"{value} needs {len(frac_digits)} fractional digits")
    return f"{sign}{whole}.{frac_digits.ljust(digits, '0')}"


def parse_dyadic(text):
    value = Fraction(text.strip())
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{text!r} is not a dyadic rational")
    return value


def sigma(sub_count, n, subtrahend=8):
    return SigmaValue(sub_count, n, subtrahend)


def entry_masks(Q):
    """Stored entries as ``(operand_mask, result_bit)`` pairs, deduplicated."""
    seen = set()
    for _, x, y, z in Q.entries():
        seen.add(((1 << x) | (1 << y), 1 << z))
    return sorted(seen)


def is_closed_subset(Q, X):
    for pair, res in entry_masks(Q):
        if X & pair == pair and not X & res:
            return False
    return True


def _closed_flags(Q, start, stop):
    masks = np.arange(start, stop, dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for pair, res in entry_masks(Q):
        ok &= ((masks & pair) != pair) | ((masks & res) != 0)
    return masks, ok


def count_subuniverses(Q):
    n = Q.n
    if n > MAX_COUNT_BITS:
        raise TooLarge(f"{n} elements: enumeration limited to {MAX_COUNT_BITS}")
    total = 0
    step = 1 << _CHUNK_BITS
    for start in range(0, 1 << n, step):
        _, ok = _closed_flags(Q, start, min(start + step, 1 << n))
        total += int(ok.sum())
    return total


def enumerate_subuniverses(Q):
    n = Q.n
    if n > MAX_LIST_BITS:
        raise TooLarge(f"{n} elements: listing limited to {MAX_LIST_BITS}")
    masks, ok = _closed_flags(Q, 0, 1 << n)
    return [int(m) for m in masks[ok]]


def mask_labels(P, X):
    return "".join(lab for i, lab in enumerate(P.labels) if X >> i & 1)

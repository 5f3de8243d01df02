"""Eventually periodic subsets of the naturals.

Every Nat set in the grammar (finite, cofinite, arithmetic progressions and
finite unions of them) is eventually periodic, and the family is a Boolean
algebra, so all Nat decisions reduce to this class.  A set is stored as

    {n < threshold : n in head} | {n >= threshold : n % period in residues}

and kept canonical (minimal period, then minimal threshold), which makes
structural equality coincide with extensional equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from ._hashing import memo_hash


def _lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=4096)
def _repunit(width, count):
    """Bitmask with bit k*width set for k < count (replicates a width-bit pattern)."""
    return sum(1 << (k * width) for k in range(count))


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


@lru_cache(maxsize=4096)
def _prime_factors(n):
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@memo_hash
@dataclass(frozen=True)
class EPSet:
    threshold: int
    period: int
    residues: frozenset
    head: frozenset

    @staticmethod
    def make(threshold, period, residues, head):
        mask = 0
        for r in residues:
            mask |= 1 << (r % period)
        return EPSet._from_mask(threshold, period, mask, head)

    @staticmethod
    def _from_mask(threshold, period, mask, head):
        """Canonical set from a residue bitmask (bit r set iff r is a residue)."""
        head = frozenset(n for n in head if 0 <= n < threshold)
        # the shifts fixing the residues form a subgroup; peel prime factors
        for q in _prime_factors(period):
            while period % q == 0:
                d = period // q
                low = mask & ((1 << d) - 1)
                if mask != low * _repunit(d, q):
                    break
                mask, period = low, d
        while threshold > 0:
            n = threshold - 1
            if (n in head) != bool(mask >> (n % period) & 1):
                break
            threshold = n
            head = head - {n}
        return EPSet(threshold, period, _bits(mask), head)

    @staticmethod
    def finite(elems):
        elems = frozenset(elems)
        top = max(elems) + 1 if elems else 0
        return EPSet.make(top, 1, (), elems)

    @staticmethod
    def cofinite(excluded):
        excluded = frozenset(excluded)
        top = max(excluded) + 1 if excluded else 0
        return EPSet.make(top, 1, (0,), frozenset(range(top)) - excluded)

    @staticmethod
    def progression(offset, stride):
        return EPSet.make(offset, stride, (offset % stride,), ())

    @staticmethod
    def empty():
        return EPSet(0, 1, frozenset(), frozenset())

    @staticmethod
    def full():
        return EPSet(0, 1, frozenset((0,)), frozenset())

    def __contains__(self, n):
        if n < 0:
            return False
        if n < self.threshold:
            return n in self.head
        return (n % self.period) in self.residues

    def _combine(self, other, op):
        t = max(self.threshold, other.threshold)
        p = _lcm(self.period, other.period)
        # beyond both thresholds membership depends on n % p only
        mine, theirs = self._lift(p), other._lift(p)
        mask = _BITOPS[op](mine, theirs, (1 << p) - 1)
        head = [n for n in range(t) if _OPS[op](n in self, n in other)]
        return EPSet._from_mask(t, p, mask, head)

    def _mask(self):
        mask = 0
        for r in self.residues:
            mask |= 1 << r
        return mask

    def _lift(self, p):
        """Residue bitmask of this set with respect to a multiple ``p`` of its period."""
        q = self.period
        return self._mask() * _repunit(q, p // q)

    def __or__(self, other):
        return _cached(self, other, "or")

    def __and__(self, other):
        return _cached(self, other, "and")

    def __sub__(self, other):
        return _cached(self, other, "sub")

    def complement(self):
        return EPSet(self.threshold, self.period,
                     frozenset(range(self.period)) - self.residues,
                     frozenset(range(self.threshold)) - self.head)

    def is_empty(self):
        return not self.residues and not self.head

    def is_finite(self):
        return not self.residues

    def is_full(self):
        return self.complement().is_empty()

    def issubset(self, other):
        return (self - other).is_empty()

    def elements(self):
        """Members of a finite set, ascending."""
        if self.residues:
            raise ValueError("infinite set has no finite element list")
        return sorted(self.head)

    def min(self):
        if self.head:
            return min(self.head)
        if not self.residues:
            raise ValueError("empty set has no minimum")
        t = self.threshold
        return min(t + ((r - t) % self.period) for r in self.residues)

    def max(self):
        return max(self.elements())

    def iter_upto(self, bound):
        return (n for n in range(bound) if n in self)

    def preimage_affine(self, a, b):
        """{n : a*n + b in self} for naturals a, b."""
        if a == 0:
            return EPSet.full() if b in self else EPSet.empty()
        t = max(0, -((b - self.threshold) // a))
        p = self.period
        res = set()
        for r in range(p):
            n = t + ((r - t) % p)
            if a * n + b in self:
                res.add(r)
        head = [n for n in range(t) if a * n + b in self]
        return EPSet.make(t, p, res, head)

    def progressions(self):
        """(offsets, stride) describing the periodic tail as progressions."""
        t, p = self.threshold, self.period
        return sorted(t + ((r - t) % p) for r in self.residues), p


_OPS = {"or": lambda a, b: a or b,
        "and": lambda a, b: a and b,
        "sub": lambda a, b: a and not b}


_BITOPS = {"or": lambda a, b, full: a | b,
           "and": lambda a, b, full: a & b,
           "sub": lambda a, b, full: a & ~b & full}


@lru_cache(maxsize=1 << 18)
def _cached(a, b, name):
    return a._combine(b, name)


def union_many(sets):
    """Union of several sets in one pass (common threshold and period)."""
    sets = list(sets)
    if not sets:
        return EPSet.empty()
    t = max(e.threshold for e in sets)
    p = 1
    for e in sets:
        p = _lcm(p, e.period)
    mask = 0
    for e in sets:
        mask |= e._lift(p)
    head = [n for n in range(t) if any(n in e for e in sets)]
    return EPSet._from_mask(t, p, mask, head)

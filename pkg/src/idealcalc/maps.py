"""Index maps between domains and their set preimages.

Every map carries a source and a target domain and is total on its source.
``preimage(h, A)`` returns the symbolic set {p : h(p) in A} over the source
domain; it raises ``NotClosed`` when the preimage leaves the grammar (the
only such case is ``PairDecode`` applied to an infinite set).
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import NAT, RAT, Prod, Rat, pair, unpair
from .errors import DomainMismatch, NotClosed
from .eventual import EPSet
from .sets import (Cols, Patch, column_trace, difference, from_ep, is_finite,
                   normalize, points_set, reverse_rationals, to_ep, enumerate_prefix,
                   union, contains, Union)
from ._hashing import memo_hash


@memo_hash
@dataclass(frozen=True)
class Identity:
    domain: object = NAT

    @property
    def source(self):
        return self.domain

    @property
    def target(self):
        return self.domain

    bijective = True

    def __call__(self, p):
        return p


@memo_hash
@dataclass(frozen=True)
class FinPerm:
    """Finite permutation given as ``((i, h(i)), ...)``; identity elsewhere."""
    table: tuple
    domain: object = NAT

    def __post_init__(self):
        keys = [i for i, _ in self.table]
        vals = [j for _, j in self.table]
        if len(set(keys)) != len(keys) or set(keys) != set(vals):
            raise ValueError("permutation table must be a bijection of a finite set")
        object.__setattr__(self, "table", tuple(sorted(self.table)))

    @property
    def source(self):
        return self.domain

    @property
    def target(self):
        return self.domain

    bijective = True

    def __call__(self, p):
        return dict(self.table).get(p, p)


@memo_hash
@dataclass(frozen=True)
class PairEncode:
    """(n, m) -> Cantor code of (n, m), from Prod(Nat) onto Nat."""
    source = Prod(NAT)
    target = NAT
    bijective = True

    def __call__(self, p):
        return pair(*p)


@memo_hash
@dataclass(frozen=True)
class PairDecode:
    """k -> (n, m) with pair(n, m) = k, from Nat onto Prod(Nat)."""
    source = NAT
    target = Prod(NAT)
    bijective = True
    finite_preimages_only = True

    def __call__(self, k):
        return unpair(k)


@memo_hash
@dataclass(frozen=True)
class BlockEmbed:
    """t -> (n0, t), from D into block n0 of Prod(D)."""
    block: int
    inner: object = NAT

    @property
    def source(self):
        return self.inner

    @property
    def target(self):
        return Prod(self.inner)

    bijective = False

    def __call__(self, t):
        return (self.block, t)


@memo_hash
@dataclass(frozen=True)
class NegateRat:
    source = RAT
    target = RAT
    bijective = True

    def __call__(self, q):
        return -q


@memo_hash
@dataclass(frozen=True)
class Compose:
    """``Compose((h1, ..., hk))`` is h1 o ... o hk (hk is applied first)."""
    maps: tuple

    def __post_init__(self):
        if not self.maps:
            raise ValueError("compose needs at least one map")
        for outer, inner in zip(self.maps, self.maps[1:]):
            if inner.target != outer.source:
                raise DomainMismatch("cannot compose %s -> %s after %s -> %s" % (
                    outer.source, outer.target, inner.source, inner.target))

    @property
    def source(self):
        return self.maps[-1].source

    @property
    def target(self):
        return self.maps[0].target

    @property
    def bijective(self):
        return all(m.bijective for m in self.maps)

    @property
    def finite_preimages_only(self):
        return any(finite_preimages_only(m) for m in self.maps)

    def __call__(self, p):
        for m in reversed(self.maps):
            p = m(p)
        return p


def finite_preimages_only(h):
    """True when preimages are closed only for finite sets."""
    return bool(getattr(h, "finite_preimages_only", False))


def preimage(h, a):
    """{p in source(h) : h(p) in a}."""
    if a.domain != h.target:
        raise DomainMismatch("set over %s, map targets %s" % (a.domain, h.target))
    if isinstance(h, Identity):
        return normalize(a)
    if isinstance(h, FinPerm):
        moved = points_set(h.domain, [i for i, _ in h.table])
        hits = points_set(h.domain, [i for i, j in h.table if contains(a, j)])
        return union(difference(a, moved), hits)
    if isinstance(h, PairEncode):
        return _encode_preimage(to_ep(a))
    if isinstance(h, PairDecode):
        if not is_finite(a):
            raise NotClosed("preimage under pairing decode of an infinite set")
        return points_set(NAT, [pair(*p) for p in _finite_points(a)])
    if isinstance(h, BlockEmbed):
        return column_trace(a, h.block)
    if isinstance(h, NegateRat):
        return reverse_rationals(a)
    if isinstance(h, Compose):
        for m in h.maps:
            a = preimage(m, a)
        return a
    raise TypeError("unknown index map %r" % (h,))


def _finite_points(a):
    """Points of a finite Prod(Nat) set."""
    from .sets import column_summary
    out = []
    for cell in column_summary(a):
        for n in cell.region.elements():
            out.extend((n, m) for m in to_ep(cell.at(n)).elements())
    return out


def _encode_preimage(e):
    """{(n, m) : pair(n, m) in e} for an eventually periodic e.

    pair(n, m) >= n, and for fixed n the residue of pair(n, m) modulo the
    period p depends only on m modulo 2p, so columns n >= threshold fall into
    2p residue classes with periodic traces, and the columns below the
    threshold are listed explicitly.
    """
    t, p = e.threshold, e.period
    q = 2 * p
    d = Prod(NAT)
    parts = []
    entries = []
    for n in range(t):
        # pair(n, m) >= t as soon as m >= t, so the trace is periodic from t on
        res = [r for r in range(q) if pair(n, t + ((r - t) % q)) in e]
        head = [m for m in range(t) if pair(n, m) in e]
        entries.append((n, from_ep(EPSet.make(t, q, res, head))))
    parts.append(Patch(d, tuple(entries)))
    for r in range(q):
        rep = t + ((r - t) % q)
        trace = EPSet.make(0, q, [m for m in range(q) if pair(rep, m) in e], ())
        cols = EPSet.make(t, q, [r], ())
        parts.append(Cols(from_ep(cols), from_ep(trace)))
    return normalize(Union(d, tuple(parts)))


def map_text(h):
    if isinstance(h, Identity):
        return "id" if h.domain == NAT else "id[%s]" % h.domain
    if isinstance(h, FinPerm):
        body = ",".join("%d>%d" % (i, j) for i, j in h.table)
        return "perm(%s)" % body
    if isinstance(h, PairEncode):
        return "encode"
    if isinstance(h, PairDecode):
        return "decode"
    if isinstance(h, BlockEmbed):
        return "embed(%d)" % h.block if h.inner == NAT else "embed(%d)[%s]" % (h.block, h.inner)
    if isinstance(h, NegateRat):
        return "negate"
    if isinstance(h, Compose):
        return "compose(%s)" % ",".join(map_text(m) for m in h.maps)
    raise TypeError("unknown index map %r" % (h,))

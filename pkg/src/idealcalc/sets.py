"""Symbolic subsets of countable domains.

The grammar is positive: unions of basic constructors, with complement only
at the leaf level (``CoFin``).  Every constructor supports a total
containment test and a structural finiteness certificate; Boolean
operations stay inside the grammar or raise ``NotClosed``.

Nat sets are always normalized through ``EPSet`` so that equal sets print
identically.  Other domains are normalized structurally (flat unions,
sorted, empty parts dropped).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

from .domains import (NAT, RAT, Nat, Prod, Rat, Sigma, base_point, block_domain,
                      format_point, in_domain, is_blocked, point_at)
from .errors import DomainMismatch, NotClosed
from .eventual import EPSet, union_many
from ._hashing import memo_hash


# -- constructors ------------------------------------------------------------

@memo_hash
@dataclass(frozen=True)
class FinSet:
    elems: tuple = ()
    domain = NAT


@memo_hash
@dataclass(frozen=True)
class CoFin:
    excluded: tuple = ()
    domain = NAT


@memo_hash
@dataclass(frozen=True)
class AP:
    offset: int
    stride: int
    domain = NAT

    def __post_init__(self):
        if self.offset < 0 or self.stride < 1:
            raise ValueError("ap needs offset >= 0 and stride >= 1")


@memo_hash
@dataclass(frozen=True)
class FinPoints:
    """Finite set of points of a blocked domain."""
    domain: object
    points: tuple = ()


@memo_hash
@dataclass(frozen=True)
class Cols:
    """{(n, t) : n in cols, t in trace} over Prod(D)."""
    cols: object
    trace: object

    @property
    def domain(self):
        return Prod(self.trace.domain)


@memo_hash
@dataclass(frozen=True)
class Patch:
    """Explicit traces on finitely many columns: ((n, T), ...).

    Used over both Prod and Sigma domains.
    """
    domain: object
    entries: tuple


@memo_hash
@dataclass(frozen=True)
class Graph:
    """{(n, a*n + b) : n in cols} over Prod(Nat)."""
    a: int
    b: int
    cols: object
    domain = Prod(NAT)

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("graph coefficients must be natural numbers")

    def at(self, n):
        return self.a * n + self.b


@memo_hash
@dataclass(frozen=True)
class BlockFull:
    """Every block n in ``cols`` taken whole (Sigma domains)."""
    domain: object
    cols: object


@memo_hash
@dataclass(frozen=True)
class BlockDiag:
    """The base point of every block n in ``cols`` (Sigma domains)."""
    domain: object
    cols: object


@memo_hash
@dataclass(frozen=True)
class FinRat:
    elems: tuple = ()
    domain = RAT


class _MonoSeq:
    """Shared validation for the monotone rational sequences.

    The n-th point is ``limit + sign * scale / (a*n + b)`` for n >= 0; the
    plain form of the grammar is a = b = 1.  Parameters are stored with
    gcd(a, b) = 1 so that each progression of denominators has one spelling.
    """

    def __post_init__(self):
        limit, scale = Fraction(self.limit), Fraction(self.scale)
        a, b = int(self.a), int(self.b)
        if scale <= 0:
            raise ValueError("sequence scale must be positive")
        if a < 1 or b < 1:
            raise ValueError("sequence denominators need a >= 1 and b >= 1")
        g = gcd(a, b)
        object.__setattr__(self, "limit", limit)
        object.__setattr__(self, "scale", scale / g)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)


@memo_hash
@dataclass(frozen=True)
class AscSeq(_MonoSeq):
    """{limit - scale/(a*n+b) : n >= 0}, strictly increasing to ``limit``."""
    limit: Fraction
    scale: Fraction
    a: int = 1
    b: int = 1
    domain = RAT
    sign = -1


@memo_hash
@dataclass(frozen=True)
class DescSeq(_MonoSeq):
    """{limit + scale/(a*n+b) : n >= 0}, strictly decreasing to ``limit``."""
    limit: Fraction
    scale: Fraction
    a: int = 1
    b: int = 1
    domain = RAT
    sign = 1


@memo_hash
@dataclass(frozen=True)
class OrdSum:
    """Ordered sum of rational sets lying in disjoint open intervals.

    ``parts`` is a tuple of ``(lo, hi, SetExpr)`` sorted by interval.
    """
    parts: tuple
    domain = RAT


@memo_hash
@dataclass(frozen=True)
class Union:
    domain: object
    parts: tuple


SEQS = (AscSeq, DescSeq)


def fin(*elems):
    return FinSet(tuple(sorted(set(elems))))


def cofin(*excluded):
    return CoFin(tuple(sorted(set(excluded))))


def ap(a, b):
    return AP(a, b)


def empty(domain):
    if isinstance(domain, Nat):
        return FinSet(())
    if isinstance(domain, Rat):
        return FinRat(())
    return FinPoints(domain, ())


def points_set(domain, points):
    """Finite set from an iterable of points of ``domain``."""
    pts = tuple(sorted(set(points), key=_point_key))
    if isinstance(domain, Nat):
        return FinSet(pts)
    if isinstance(domain, Rat):
        return FinRat(tuple(Fraction(p) for p in pts))
    return FinPoints(domain, pts)


def full_set(domain):
    """The whole domain as a SetExpr, or None when the grammar lacks it."""
    if isinstance(domain, Nat):
        return CoFin(())
    if isinstance(domain, Prod):
        inner = full_set(domain.inner)
        return None if inner is None else Cols(CoFin(()), inner)
    if isinstance(domain, Sigma):
        return BlockFull(domain, CoFin(()))
    return None


def _point_key(p):
    if isinstance(p, tuple):
        return (p[0], _point_key(p[1]))
    return (p,)


def domain_of(a):
    return a.domain


def _same_domain(a, b):
    if a.domain != b.domain:
        raise DomainMismatch("%s vs %s" % (a.domain, b.domain))
    return a.domain


# -- Nat via eventually periodic sets -----------------------------------------

@lru_cache(maxsize=65536)
def to_ep(a):
    if isinstance(a, FinSet):
        return EPSet.finite(a.elems)
    if isinstance(a, CoFin):
        return EPSet.cofinite(a.excluded)
    if isinstance(a, AP):
        return EPSet.progression(a.offset, a.stride)
    if isinstance(a, Union) and isinstance(a.domain, Nat):
        return union_many(to_ep(p) for p in a.parts)
    raise DomainMismatch("not a Nat set: %r" % (a,))


@lru_cache(maxsize=65536)
def from_ep(e):
    if e.is_finite():
        return FinSet(tuple(sorted(e.head)))
    if e.period == 1:
        return CoFin(tuple(n for n in range(e.threshold) if n not in e.head))
    offsets, stride = e.progressions()
    parts = []
    if e.head:
        parts.append(FinSet(tuple(sorted(e.head))))
    parts.extend(AP(o, stride) for o in offsets)
    return parts[0] if len(parts) == 1 else Union(NAT, tuple(parts))


# -- normalization -----------------------------------------------------------

def _flat_parts(a):
    if isinstance(a, Union):
        out = []
        for p in a.parts:
            out.extend(_flat_parts(p))
        return out
    return [a]


def _is_empty_form(a):
    return isinstance(a, (FinSet, FinPoints, FinRat)) and not (
        a.elems if isinstance(a, (FinSet, FinRat)) else a.points)


@lru_cache(maxsize=65536)
def normalize(a):
    d = a.domain
    if isinstance(d, Nat):
        return from_ep(to_ep(a))
    parts = []
    for p in _flat_parts(a):
        q = _normalize_basic(p)
        parts.extend(_flat_parts(q))
    parts = [p for p in parts if not _is_empty_form(p)]
    return _assemble(d, parts)


def _assemble(d, parts):
    finite_pts = set()
    patch = {}
    rest = []
    for p in parts:
        if isinstance(p, (FinPoints,)):
            finite_pts.update(p.points)
        elif isinstance(p, FinRat):
            finite_pts.update(p.elems)
        elif isinstance(p, Patch):
            for n, t in p.entries:
                patch[n] = union(patch[n], t) if n in patch else t
        else:
            rest.append(p)
    if patch:
        rest.append(Patch(d, tuple(sorted(patch.items()))))
    if finite_pts:
        rest.append(points_set(d, finite_pts))
    uniq = {}
    for p in rest:
        uniq.setdefault(to_text(p), p)
    rest = [uniq[k] for k in sorted(uniq)]
    if not rest:
        return empty(d)
    if len(rest) == 1:
        return rest[0]
    return Union(d, tuple(rest))


def _normalize_basic(p):
    if isinstance(p, FinPoints):
        for q in p.points:
            if not in_domain(p.domain, q):
                raise DomainMismatch("point %s not in %s" % (format_point(q), p.domain))
        return FinPoints(p.domain, tuple(sorted(set(p.points), key=_point_key)))
    if isinstance(p, FinRat):
        return FinRat(tuple(sorted(set(Fraction(x) for x in p.elems))))
    if isinstance(p, Cols):
        s, t = normalize(p.cols), normalize(p.trace)
        if is_empty(s) or is_empty(t):
            return empty(p.domain)
        return Cols(s, t)
    if isinstance(p, Patch):
        entries = {}
        for n, t in p.entries:
            inner = block_domain(p.domain, n)
            if t.domain != inner:
                raise DomainMismatch("patch trace over %s, expected %s" % (t.domain, inner))
            entries[n] = union(entries[n], t) if n in entries else normalize(t)
        entries = tuple(sorted((n, t) for n, t in entries.items() if not is_empty(t)))
        return Patch(p.domain, entries) if entries else empty(p.domain)
    if isinstance(p, Graph):
        s = normalize(p.cols)
        if is_empty(s):
            return empty(p.domain)
        if p.a == 0:
            return Cols(s, FinSet((p.b,)))
        return Graph(p.a, p.b, s)
    if isinstance(p, (BlockFull, BlockDiag)):
        s = normalize(p.cols)
        return type(p)(p.domain, s) if not is_empty(s) else empty(p.domain)
    if isinstance(p, SEQS):
        return p
    if isinstance(p, OrdSum):
        parts = []
        for lo, hi, s in p.parts:
            s = normalize(s)
            if not is_empty(s):
                parts.append((Fraction(lo), Fraction(hi), s))
        _check_ordsum(parts)
        if not parts:
            return empty(RAT)
        if len(parts) == 1:
            return parts[0][2]
        return OrdSum(tuple(sorted(parts, key=lambda x: x[0])))
    raise TypeError("unknown set constructor %r" % (p,))


def _check_ordsum(parts):
    ivs = sorted((lo, hi) for lo, hi, _ in parts)
    for lo, hi in ivs:
        if not lo < hi:
            raise ValueError("empty interval (%s,%s)" % (lo, hi))
    for (_, h1), (l2, _) in zip(ivs, ivs[1:]):
        if l2 < h1:
            raise ValueError("ordered-sum intervals overlap")
    for lo, hi, s in parts:
        lo_s, hi_s = rat_bounds(s)
        if lo_s is not None and not (lo_s[0] > lo or (lo_s[0] == lo and lo_s[1])):
            raise ValueError("part %s leaves interval (%s,%s)" % (to_text(s), lo, hi))
        if hi_s is not None and not (hi_s[0] < hi or (hi_s[0] == hi and hi_s[1])):
            raise ValueError("part %s leaves interval (%s,%s)" % (to_text(s), lo, hi))


def rat_bounds(s):
    """((inf, inf_excluded), (sup, sup_excluded)) of a nonempty rational set."""
    leaves = rat_leaves(s)
    if not leaves:
        return None, None
    lows, highs = [], []
    for leaf in leaves:
        if isinstance(leaf, FinRat):
            lows.append((min(leaf.elems), False))
            highs.append((max(leaf.elems), False))
        elif isinstance(leaf, AscSeq):
            lows.append((seq_point(leaf, 0), False))
            highs.append((leaf.limit, True))
        else:
            lows.append((leaf.limit, True))
            highs.append((seq_point(leaf, 0), False))
    lo = min(lows, key=lambda x: (x[0], not x[1]))
    hi = max(highs, key=lambda x: (x[0], not x[1]))
    return lo, hi


def rat_leaves(s):
    """FinRat / AscSeq / DescSeq leaves of a rational set (OrdSum flattened)."""
    out = []
    for p in _flat_parts(s):
        if isinstance(p, OrdSum):
            for _, _, q in p.parts:
                out.extend(rat_leaves(q))
        elif isinstance(p, FinRat):
            if p.elems:
                out.append(p)
        else:
            out.append(p)
    return out


def is_empty(a):
    return _is_empty_form(normalize(a))


# -- printing ----------------------------------------------------------------

def _affine_text(a, b):
    if a == 0:
        return str(b)
    head = "n" if a == 1 else "%dn" % a
    return head if b == 0 else "%s+%d" % (head, b)


def _q(x):
    return str(Fraction(x))


def to_text(a):
    """Canonical textual form of a SetExpr."""
    if isinstance(a, FinSet):
        return "fin{%s}" % ",".join(map(str, a.elems))
    if isinstance(a, CoFin):
        return "cofin{%s}" % ",".join(map(str, a.excluded))
    if isinstance(a, AP):
        return "ap(%d,%d)" % (a.offset, a.stride)
    if isinstance(a, FinPoints):
        return "fin{%s}" % ",".join(format_point(p) for p in a.points)
    if isinstance(a, Cols):
        return "cols(%s,%s)" % (to_text(a.cols), to_text(a.trace))
    if isinstance(a, Patch):
        return "patch{%s}" % ",".join("%d:%s" % (n, to_text(t)) for n, t in a.entries)
    if isinstance(a, Graph):
        return "graph(%s,%s)" % (_affine_text(a.a, a.b), to_text(a.cols))
    if isinstance(a, BlockFull):
        return "full(%s)" % to_text(a.cols)
    if isinstance(a, BlockDiag):
        return "diag(%s)" % to_text(a.cols)
    if isinstance(a, FinRat):
        return "rfin{%s}" % ",".join(map(_q, a.elems))
    if isinstance(a, SEQS):
        name = "asc" if isinstance(a, AscSeq) else "desc"
        if (a.a, a.b) == (1, 1):
            return "%s(%s,%s)" % (name, _q(a.limit), _q(a.scale))
        return "%s(%s,%s,%d,%d)" % (name, _q(a.limit), _q(a.scale), a.a, a.b)
    if isinstance(a, OrdSum):
        return "osum[%s]" % ",".join("(%s,%s):%s" % (_q(lo), _q(hi), to_text(s))
                                     for lo, hi, s in a.parts)
    if isinstance(a, Union):
        return "U[%s]" % ",".join(to_text(p) for p in a.parts)
    raise TypeError("unknown set constructor %r" % (a,))


# -- containment and finiteness ----------------------------------------------

def contains(a, p):
    """True iff point ``p`` lies in ``a``."""
    if not in_domain(a.domain, p):
        raise DomainMismatch("point %s is not in %s" % (format_point(p), a.domain))
    return _contains(a, p)


def _contains(a, p):
    if isinstance(a, FinSet):
        return p in a.elems
    if isinstance(a, CoFin):
        return p not in a.excluded
    if isinstance(a, AP):
        return p >= a.offset and (p - a.offset) % a.stride == 0
    if isinstance(a, FinPoints):
        return p in a.points
    if isinstance(a, Cols):
        return _contains(a.cols, p[0]) and _contains(a.trace, p[1])
    if isinstance(a, Patch):
        return any(n == p[0] and _contains(t, p[1]) for n, t in a.entries)
    if isinstance(a, Graph):
        return _contains(a.cols, p[0]) and p[1] == a.at(p[0])
    if isinstance(a, BlockFull):
        return _contains(a.cols, p[0])
    if isinstance(a, BlockDiag):
        return (_contains(a.cols, p[0])
                and p[1] == base_point(block_domain(a.domain, p[0])))
    if isinstance(a, FinRat):
        return Fraction(p) in a.elems
    if isinstance(a, SEQS):
        return seq_index(a, p) is not None
    if isinstance(a, OrdSum):
        return any(_contains(s, p) for _, _, s in a.parts)
    if isinstance(a, Union):
        return any(_contains(s, p) for s in a.parts)
    raise TypeError("unknown set constructor %r" % (a,))


def is_finite(a):
    """Structural finiteness certificate."""
    a = normalize(a)
    if isinstance(a.domain, Nat):
        return to_ep(a).is_finite()
    return all(_basic_finite(p) for p in _flat_parts(a))


def _basic_finite(p):
    if isinstance(p, (FinPoints, FinRat)):
        return True
    if isinstance(p, Cols):
        return is_finite(p.cols) and is_finite(p.trace)
    if isinstance(p, Patch):
        return all(is_finite(t) for _, t in p.entries)
    if isinstance(p, (Graph, BlockDiag)):
        return is_finite(p.cols)
    if isinstance(p, BlockFull):
        return False
    if isinstance(p, SEQS):
        return False
    if isinstance(p, OrdSum):
        return all(is_finite(s) for _, _, s in p.parts)
    raise TypeError("unknown set constructor %r" % (p,))


def enumerate_prefix(a, n):
    """Members of ``a`` among the first ``n`` enumerated points (brute force)."""
    d = a.domain
    out = []
    for i in range(n):
        p = point_at(d, i)
        if _contains(a, p):
            out.append(p)
    return out


# -- rational sequences ------------------------------------------------------

def seq_point(s, n):
    return s.limit + s.sign * s.scale / (s.a * n + s.b)


def seq_index(s, x):
    """Index n with seq_point(s, n) == x, or None."""
    gap = s.sign * (Fraction(x) - s.limit)
    if gap <= 0:
        return None
    k = s.scale / gap
    if k.denominator != 1:
        return None
    k = int(k)
    if k < s.b or (k - s.b) % s.a:
        return None
    return (k - s.b) // s.a


def _seq_seq_hits(s1, s2):
    """Eventually periodic set of indices n with seq_point(s1, n) in s2."""
    if s1.limit == s2.limit:
        if s1.sign != s2.sign:
            return EPSet.empty()
        # the s2-denominator of point n is rho*(a1*n + b1); shifting n by
        # w*a2 keeps both its integrality and its residue modulo a2
        rho = s2.scale / s1.scale
        period = rho.denominator * s2.a
        t = 0
        while rho * (s1.a * t + s1.b) < s2.b:
            t += 1
        res = [r for r in range(period)
               if seq_index(s2, seq_point(s1, t + ((r - t) % period))) is not None]
        return EPSet.make(t, period, res, ())
    gap = abs(s1.limit - s2.limit)
    hits = set()
    for n in range(int(2 * s1.scale / gap) + 1):
        if seq_index(s2, seq_point(s1, n)) is not None:
            hits.add(n)
    for m in range(int(2 * s2.scale / gap) + 1):
        i = seq_index(s1, seq_point(s2, m))
        if i is not None:
            hits.add(i)
    return EPSet.finite(hits)


def seq_hits(s, b):
    """Eventually periodic set of indices n with seq_point(s, n) in b."""
    out = EPSet.empty()
    for p in _flat_parts(b):
        if isinstance(p, FinRat):
            idx = (seq_index(s, x) for x in p.elems)
            out = out | EPSet.finite(i for i in idx if i is not None)
        elif isinstance(p, SEQS):
            out = out | _seq_seq_hits(s, p)
        elif isinstance(p, OrdSum):
            for _, _, q in p.parts:
                out = out | seq_hits(s, q)
        else:
            raise DomainMismatch("not a rational set: %r" % (p,))
    return out


def seq_restrict(s, keep):
    """The points of ``s`` whose index lies in the EPSet ``keep``.

    Each residue class n = start + p*k of the periodic tail is again a
    monotone sequence with denominators (a*p)*k + (a*start + b).
    """
    parts = []
    if keep.head:
        parts.append(FinRat(tuple(sorted(seq_point(s, n) for n in keep.head))))
    t, p = keep.threshold, keep.period
    for r in sorted(keep.residues):
        start = t + ((r - t) % p)
        parts.append(type(s)(s.limit, s.scale, s.a * p, s.a * start + s.b))
    return normalize(Union(RAT, tuple(parts)))


def reverse_rationals(a):
    """Pointwise negation x -> -x of a rational set."""
    if not isinstance(a.domain, Rat):
        raise DomainMismatch("reverse_rationals needs a rational set")
    return normalize(_reverse(a))


def _reverse(a):
    if isinstance(a, FinRat):
        return FinRat(tuple(sorted(-x for x in a.elems)))
    if isinstance(a, AscSeq):
        return DescSeq(-a.limit, a.scale, a.a, a.b)
    if isinstance(a, DescSeq):
        return AscSeq(-a.limit, a.scale, a.a, a.b)
    if isinstance(a, OrdSum):
        return OrdSum(tuple(sorted(((-hi, -lo, _reverse(s)) for lo, hi, s in a.parts),
                                   key=lambda x: x[0])))
    if isinstance(a, Union):
        return Union(RAT, tuple(_reverse(p) for p in a.parts))
    raise TypeError("unknown rational set %r" % (a,))


# -- Boolean operations ------------------------------------------------------

def union(a, b):
    d = _same_domain(a, b)
    return normalize(Union(d, (a, b)))


def union_all(domain, sets):
    sets = list(sets)
    for s in sets:
        if s.domain != domain:
            raise DomainMismatch("%s vs %s" % (s.domain, domain))
    return normalize(Union(domain, tuple(sets)))


def intersect(a, b):
    d = _same_domain(a, b)
    if isinstance(d, Nat):
        return from_ep(to_ep(a) & to_ep(b))
    pa, pb = _flat_parts(normalize(a)), _flat_parts(normalize(b))
    out = [_meet(p, q) for p in pa for q in pb]
    return normalize(Union(d, tuple(out)))


def _nat_and(*sets):
    e = EPSet.full()
    for s in sets:
        e = e & (s if isinstance(s, EPSet) else to_ep(s))
    return from_ep(e)


_RANK = {FinPoints: 0, FinRat: 0, Patch: 1, Graph: 2, BlockDiag: 2, Cols: 3,
         BlockFull: 3, AscSeq: 4, DescSeq: 4, OrdSum: 5}


def _meet(p, q):
    d = p.domain
    if _RANK[type(p)] > _RANK[type(q)]:
        p, q = q, p
    if isinstance(p, FinPoints):
        return FinPoints(d, tuple(x for x in p.points if _contains(q, x)))
    if isinstance(p, FinRat):
        return FinRat(tuple(x for x in p.elems if _contains(q, x)))
    if isinstance(q, OrdSum):
        return OrdSum(tuple((lo, hi, intersect(s, p)) for lo, hi, s in q.parts))
    if isinstance(p, SEQS):
        return seq_restrict(p, _seq_seq_hits(p, q))
    if isinstance(p, Patch):
        return _meet_patch(p, q)
    if isinstance(p, Graph):
        if isinstance(q, Graph):
            return _meet_graphs(p, q)
        pre = to_ep(q.trace).preimage_affine(p.a, p.b)
        return Graph(p.a, p.b, _nat_and(p.cols, q.cols, pre))
    if isinstance(p, Cols):
        return Cols(_nat_and(p.cols, q.cols), intersect(p.trace, q.trace))
    if isinstance(p, BlockDiag):
        return BlockDiag(d, _nat_and(p.cols, q.cols))
    if isinstance(p, BlockFull):
        return BlockFull(d, _nat_and(p.cols, q.cols))
    raise NotClosed("no intersection rule for %s and %s" % (type(p).__name__, type(q).__name__))


def _meet_patch(p, q):
    d = p.domain
    if isinstance(q, Patch):
        other = dict(q.entries)
        return Patch(d, tuple((n, intersect(t, other[n])) for n, t in p.entries if n in other))
    if isinstance(q, Graph):
        pts = [(n, q.at(n)) for n, t in p.entries
               if _contains(q.cols, n) and _contains(t, q.at(n))]
        return FinPoints(d, tuple(pts))
    if isinstance(q, Cols):
        return Patch(d, tuple((n, intersect(t, q.trace)) for n, t in p.entries
                              if _contains(q.cols, n)))
    if isinstance(q, BlockDiag):
        pts = []
        for n, t in p.entries:
            b = base_point(block_domain(d, n))
            if _contains(q.cols, n) and _contains(t, b):
                pts.append((n, b))
        return FinPoints(d, tuple(pts))
    if isinstance(q, BlockFull):
        return Patch(d, tuple((n, t) for n, t in p.entries if _contains(q.cols, n)))
    raise NotClosed("no intersection rule for Patch and %s" % type(q).__name__)


def _meet_graphs(p, q):
    if (p.a, p.b) == (q.a, q.b):
        return Graph(p.a, p.b, _nat_and(p.cols, q.cols))
    if p.a == q.a:
        return empty(p.domain)
    num, den = q.b - p.b, p.a - q.a
    if num % den or num // den < 0:
        return empty(p.domain)
    n = num // den
    if _contains(p.cols, n) and _contains(q.cols, n):
        return FinPoints(p.domain, ((n, p.at(n)),))
    return empty(p.domain)


# -- column structure of blocked domains -------------------------------------

@memo_hash
@dataclass(frozen=True)
class ColumnCell:
    """Uniform description of the columns in ``region`` (an EPSet).

    In every column n of the region the trace is ``trace`` (over the block
    domain) plus the graph points a*n+b, plus the whole block when ``full``
    and the block's base point when ``diag``.  ``trace`` is None only on
    Sigma domains.
    """
    domain: object
    region: EPSet
    trace: object = None
    graphs: tuple = ()
    full: bool = False
    diag: bool = False

    def region_set(self):
        return from_ep(self.region)

    def at(self, n):
        inner = block_domain(self.domain, n)
        pieces = [] if self.trace is None else [self.trace]
        if self.graphs:
            pieces.append(points_set(inner, [a * n + b for a, b in self.graphs]))
        if self.full:
            pieces.append(full_set(inner))
        if self.diag:
            pieces.append(points_set(inner, [base_point(inner)]))
        return union_all(inner, pieces)

    def fixed_trace(self):
        """The column-independent part of the trace (graphs excluded)."""
        if self.trace is None:
            return None
        return self.trace


def _contribs(a):
    d = a.domain
    out = []
    for p in _flat_parts(normalize(a)):
        if isinstance(p, FinPoints):
            cols = {}
            for n, t in p.points:
                cols.setdefault(n, []).append(t)
            for n, ts in cols.items():
                out.append((EPSet.finite((n,)), "trace", points_set(block_domain(d, n), ts)))
        elif isinstance(p, Cols):
            out.append((to_ep(p.cols), "trace", p.trace))
        elif isinstance(p, Patch):
            for n, t in p.entries:
                out.append((EPSet.finite((n,)), "trace", t))
        elif isinstance(p, Graph):
            out.append((to_ep(p.cols), "graph", (p.a, p.b)))
        elif isinstance(p, BlockFull):
            out.append((to_ep(p.cols), "full", None))
        elif isinstance(p, BlockDiag):
            out.append((to_ep(p.cols), "diag", None))
        else:
            raise DomainMismatch("%r is not a blocked-domain set" % (p,))
    return out


def _refine(regions):
    """Atoms of the Boolean algebra generated by ``regions``, with members.

    Beyond the largest threshold, membership in every region depends only on
    n modulo the lcm of the periods, so the atoms are read off by grouping
    the head points and the residue classes by their membership signature.
    """
    regions = list(regions)
    if not regions:
        return []
    top = max(r.threshold for r in regions)
    period = reduce(lambda u, v: u * v // gcd(u, v), (r.period for r in regions), 1)
    heads, tails = {}, {}
    for n in range(top):
        sig = tuple(i for i, r in enumerate(regions) if n in r)
        if sig:
            heads.setdefault(sig, []).append(n)
    for res in range(period):
        n = top + ((res - top) % period)
        sig = tuple(i for i, r in enumerate(regions) if n in r)
        if sig:
            tails.setdefault(sig, []).append(res)
    return [(EPSet.make(top, period, tails.get(sig, ()), heads.get(sig, ())), list(sig))
            for sig in sorted(set(heads) | set(tails))]


def _make_cell(d, region, contribs):
    traces, graphs, full, diag = [], [], False, False
    for _, kind, payload in contribs:
        if kind == "trace":
            traces.append(payload)
        elif kind == "graph":
            graphs.append(payload)
        elif kind == "full":
            full = True
        else:
            diag = True
    if isinstance(d, Prod):
        trace = union_all(d.inner, traces)
    elif traces:
        n = region.elements()[0]
        trace = union_all(block_domain(d, n), traces)
    else:
        trace = None
    return ColumnCell(d, region, trace, tuple(sorted(set(graphs))), full, diag)


def column_summary(a):
    """Disjoint column regions covering the support of ``a``, with traces."""
    d = a.domain
    if not is_blocked(d):
        raise DomainMismatch("column summary needs a blocked domain, got %s" % d)
    contribs = _contribs(a)
    atoms = _refine([c[0] for c in contribs])
    return [_make_cell(d, reg, [contribs[i] for i in members]) for reg, members in atoms]


def _joint_cells(a, b):
    d = _same_domain(a, b)
    ca, cb = _contribs(a), _contribs(b)
    allc = [(c, 0) for c in ca] + [(c, 1) for c in cb]
    atoms = _refine([c[0][0] for c in allc])
    out = []
    for reg, members in atoms:
        sides = ([], [])
        for i in members:
            c, side = allc[i]
            sides[side].append(c)
        cell_a = _make_cell(d, reg, sides[0]) if sides[0] else None
        cell_b = _make_cell(d, reg, sides[1]) if sides[1] else None
        out.append((reg, cell_a, cell_b))
    return out


def column_trace(a, n):
    """The trace of ``a`` on column ``n``, as a set over the block domain."""
    d = a.domain
    if not is_blocked(d):
        raise DomainMismatch("column_trace needs a blocked domain, got %s" % d)
    inner = block_domain(d, n)
    pieces = [empty(inner)]
    for reg, kind, payload in _contribs(a):
        if n not in reg:
            continue
        if kind == "trace":
            pieces.append(payload)
        elif kind == "graph":
            pieces.append(points_set(inner, [payload[0] * n + payload[1]]))
        elif kind == "full":
            pieces.append(full_set(inner))
        else:
            pieces.append(points_set(inner, [base_point(inner)]))
    return union_all(inner, pieces)


def _graph_coincide(g1, g2):
    """EPSet of n where the two affine maps agree."""
    (a1, b1), (a2, b2) = g1, g2
    if (a1, b1) == (a2, b2):
        return EPSet.full()
    if a1 == a2:
        return EPSet.empty()
    num, den = b2 - b1, a1 - a2
    if num % den or num // den < 0:
        return EPSet.empty()
    return EPSet.finite((num // den,))


def _graph_covered(g, region, cell_b):
    """EPSet of n in region whose graph point g(n) lies in cell_b's column."""
    if cell_b is None:
        return EPSet.empty()
    covered = to_ep(cell_b.trace).preimage_affine(*g)
    for g2 in cell_b.graphs:
        covered = covered | _graph_coincide(g, g2)
    return covered & region


def difference(a, b):
    """a minus b, when expressible in the grammar."""
    d = _same_domain(a, b)
    if isinstance(d, Nat):
        return from_ep(to_ep(a) - to_ep(b))
    if isinstance(d, Rat):
        return normalize(Union(RAT, tuple(_rat_minus(p, b) for p in _flat_parts(normalize(a)))))
    out = []
    for reg, ca, cb in _joint_cells(a, b):
        if ca is None:
            continue
        if reg.is_finite():
            entries = []
            for n in reg.elements():
                tb = cb.at(n) if cb else empty(block_domain(d, n))
                entries.append((n, difference(ca.at(n), tb)))
            out.append(Patch(d, tuple(entries)))
            continue
        if isinstance(d, Prod):
            tb = cb.trace if cb else empty(d.inner)
            rest = difference(ca.trace, tb)
            hit = EPSet.empty()
            if cb and not is_empty(rest):
                for g in cb.graphs:
                    hit = hit | (to_ep(rest).preimage_affine(*g) & reg)
            if not hit.is_finite():
                raise NotClosed("column set minus a graph is not expressible")
            if not hit.is_empty():
                # columns where a removed graph point lands inside the trace
                out.append(Patch(d, tuple((n, difference(ca.at(n), cb.at(n)))
                                          for n in hit.elements())))
                reg = reg - hit
                if reg.is_empty():
                    continue
            rs = from_ep(reg)
            if not is_empty(rest):
                out.append(Cols(rs, rest))
            for g in ca.graphs:
                keep = reg - _graph_covered(g, reg, cb)
                if not keep.is_empty():
                    out.append(Graph(g[0], g[1], from_ep(keep)))
        else:
            rs = from_ep(reg)
            b_full = bool(cb and cb.full)
            b_diag = bool(cb and cb.diag)
            if ca.full:
                if b_diag and not b_full:
                    raise NotClosed("whole blocks minus base points are not expressible")
                if not b_full:
                    out.append(BlockFull(d, rs))
            elif ca.diag and not (b_full or b_diag):
                out.append(BlockDiag(d, rs))
    return normalize(Union(d, tuple(out)))


def _rat_minus(p, b):
    if isinstance(p, FinRat):
        return FinRat(tuple(x for x in p.elems if not _contains(b, x)))
    if isinstance(p, SEQS):
        return seq_restrict(p, seq_hits(p, b).complement())
    if isinstance(p, OrdSum):
        return OrdSum(tuple((lo, hi, difference(s, b)) for lo, hi, s in p.parts))
    raise TypeError("unknown rational set %r" % (p,))


def complement(a):
    full = full_set(a.domain)
    if full is None:
        raise NotClosed("the grammar has no complement on %s" % a.domain)
    return difference(full, a)


def is_subset(a, b):
    """Exact decision of a <= b."""
    d = _same_domain(a, b)
    if isinstance(d, Nat):
        return to_ep(a).issubset(to_ep(b))
    if isinstance(d, Rat):
        for leaf in rat_leaves(normalize(a)):
            if isinstance(leaf, FinRat):
                if not all(_contains(b, x) for x in leaf.elems):
                    return False
            elif not seq_hits(leaf, b).is_full():
                return False
        return True
    for reg, ca, cb in _joint_cells(a, b):
        if ca is None:
            continue
        if reg.is_finite():
            for n in reg.elements():
                tb = cb.at(n) if cb else empty(block_domain(d, n))
                if not is_subset(ca.at(n), tb):
                    return False
            continue
        if cb is None:
            return False
        if isinstance(d, Prod):
            if not is_subset(ca.trace, cb.trace):
                return False
            for g in ca.graphs:
                if not reg.issubset(_graph_covered(g, reg, cb)):
                    return False
        else:
            if ca.full and not cb.full:
                return False
            if ca.diag and not (cb.full or cb.diag):
                return False
    return True


def set_equal(a, b):
    """Extensional equality."""
    return is_subset(a, b) and is_subset(b, a)

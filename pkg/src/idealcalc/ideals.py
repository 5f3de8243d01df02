"""Ideal expressions, exact membership decisions and classification.

Every ideal contains all finite subsets of its domain.  ``member`` decides
membership of a symbolic set by structural recursion; block ideals (sums,
Fubini products and their orthogonals) are decided on the finite column
summary of the set, whose cells are exactly the atoms those rules inspect.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .domains import NAT, RAT, Nat, Prod, Rat, Sigma, catalog_domain
from .errors import DomainMismatch, NoMetadata, NotClosed, Undecidable
from .eventual import EPSet
from .ordinals import Ordinal
from .sets import (AscSeq, BlockDiag, BlockFull, Cols, DescSeq, FinRat, Graph, Patch,
                   Union, column_summary, difference, empty, from_ep, full_set, intersect,
                   is_empty, is_finite, is_subset, normalize, rat_leaves, to_ep, to_text,
                   union_all, _flat_parts)
from ._hashing import memo_hash


# -- expression nodes --------------------------------------------------------

@memo_hash
@dataclass(frozen=True)
class Fin:
    domain: object = NAT


@memo_hash
@dataclass(frozen=True)
class Pow:
    domain: object = NAT


@memo_hash
@dataclass(frozen=True)
class Restrict:
    """The ideal I restricted to the subsets of ``base``."""
    ideal: object
    base: object

    def __post_init__(self):
        if self.ideal.domain != self.base.domain:
            raise DomainMismatch("restriction set over %s, ideal over %s"
                                 % (self.base.domain, self.ideal.domain))
        object.__setattr__(self, "base", normalize(self.base))

    @property
    def domain(self):
        return self.ideal.domain


@memo_hash
@dataclass(frozen=True)
class Join:
    left: object
    right: object

    def __post_init__(self):
        if self.left.domain != self.right.domain:
            raise DomainMismatch("join of ideals over %s and %s"
                                 % (self.left.domain, self.right.domain))

    @property
    def domain(self):
        return self.left.domain


@memo_hash
@dataclass(frozen=True)
class OmegaSum:
    """Countable sum of copies of ``block`` over Nat x D."""
    block: object

    @property
    def domain(self):
        return Prod(self.block.domain)

    def block_at(self, n):
        return self.block


@memo_hash
@dataclass(frozen=True)
class DirectSumList:
    """Sum whose first blocks are ``heads`` and every later block ``tail``."""
    heads: tuple
    tail: object

    def __post_init__(self):
        object.__setattr__(self, "heads", tuple(self.heads))
        for h in self.heads:
            if h.domain != self.tail.domain:
                raise DomainMismatch("direct sum blocks over different domains")

    @property
    def domain(self):
        return Prod(self.tail.domain)

    def block_at(self, n):
        return self.heads[n] if n < len(self.heads) else self.tail


@memo_hash
@dataclass(frozen=True)
class LimitSum:
    """Sum over the blocks of Sigma(alpha); block n carries Q at the n-th
    term of the fundamental sequence of ``alpha``."""
    alpha: Ordinal

    def __post_init__(self):
        if not self.alpha.is_limit:
            raise ValueError("block sums are indexed by limit ordinals")

    @property
    def domain(self):
        return Sigma(self.alpha)

    def block_at(self, n):
        return _ref_q(self.alpha.fundamental(n))


@memo_hash
@dataclass(frozen=True)
class Fubini:
    outer: object
    inner: object

    def __post_init__(self):
        if self.outer.domain != NAT:
            raise DomainMismatch("the outer Fubini factor must live on nat")

    @property
    def domain(self):
        return Prod(self.inner.domain)


@memo_hash
@dataclass(frozen=True)
class Perp:
    ideal: object

    @property
    def domain(self):
        return self.ideal.domain


@memo_hash
@dataclass(frozen=True)
class WO:
    domain = RAT


@memo_hash
@dataclass(frozen=True)
class WORev:
    domain = RAT


@memo_hash
@dataclass(frozen=True)
class CatalogP:
    alpha: Ordinal

    @property
    def domain(self):
        return catalog_domain(self.alpha)


@memo_hash
@dataclass(frozen=True)
class CatalogQ:
    alpha: Ordinal

    @property
    def domain(self):
        return catalog_domain(self.alpha)


SUMS = (OmegaSum, DirectSumList, LimitSum)


@memo_hash
@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None


@memo_hash
@dataclass(frozen=True)
class Equivalence:
    kind: str            # "equal" | "distinguished" | "unknown"
    witness: object = None


EQUAL, DISTINGUISHED, UNKNOWN = "equal", "distinguished", "unknown"


# -- the hierarchy -----------------------------------------------------------

def _ref_p(beta):
    return Pow(NAT) if beta.is_zero else CatalogP(beta)


def _ref_q(beta):
    return Fin(NAT) if beta.is_zero else CatalogQ(beta)


@lru_cache(maxsize=None)
def expand_p(alpha):
    """One-step unfolding of P at ``alpha``."""
    if alpha.is_zero:
        return Pow(NAT)
    if alpha.is_successor:
        return OmegaSum(_ref_q(alpha.pred()))
    return LimitSum(alpha)


@lru_cache(maxsize=None)
def catalog(alpha):
    """``(P, Q)`` at ``alpha``: P unfolded once, Q as its normalized orthogonal."""
    p = expand_p(alpha)
    return p, perp_normalize(Perp(p))


# -- orthogonal normalization ------------------------------------------------

_CATALOG = (Fin, Pow, WO, WORev, CatalogP, CatalogQ)


def _children_map(i, f):
    if isinstance(i, Restrict):
        return Restrict(f(i.ideal), i.base)
    if isinstance(i, Join):
        return Join(f(i.left), f(i.right))
    if isinstance(i, OmegaSum):
        return OmegaSum(f(i.block))
    if isinstance(i, DirectSumList):
        return DirectSumList(tuple(f(h) for h in i.heads), f(i.tail))
    if isinstance(i, Fubini):
        return Fubini(f(i.outer), f(i.inner))
    if isinstance(i, Perp):
        return Perp(f(i.ideal))
    return i


def _fold(i):
    """Recognize catalog shapes at the root."""
    if isinstance(i, CatalogP) and i.alpha.is_zero:
        return Pow(NAT)
    if isinstance(i, CatalogQ) and i.alpha.is_zero:
        return Fin(NAT)
    if isinstance(i, LimitSum):
        return CatalogP(i.alpha)
    if isinstance(i, OmegaSum):
        b = _fold(i.block)
        if b == Fin(NAT):
            return CatalogP(Ordinal.of(1))
        if isinstance(b, CatalogQ):
            return CatalogP(b.alpha.succ())
    return i


def _perp_step(x):
    """The orthogonal of ``x`` when a rewrite rule applies, else None."""
    x = _fold(x)
    if isinstance(x, Fin):
        return Pow(x.domain)
    if isinstance(x, Pow):
        return Fin(x.domain)
    if isinstance(x, WO):
        return WORev()
    if isinstance(x, WORev):
        return WO()
    if isinstance(x, CatalogP):
        return _ref_q(x.alpha)
    if isinstance(x, CatalogQ):
        return _ref_p(x.alpha)
    if isinstance(x, Perp):
        inner = _fold(x.ideal)
        if isinstance(inner, _CATALOG):
            return inner
    return None


def _pn(i):
    i = _children_map(i, _pn)
    if isinstance(i, Perp):
        r = _perp_step(i.ideal)
        if r is not None:
            return r
    return i


def perp_normalize(i):
    """Rewrite orthogonal nodes to a fixpoint; unmatched nodes stay."""
    prev = None
    while i != prev:
        prev, i = i, _pn(i)
    return i


def _key(i):
    return ideal_text(i) + "@" + str(i.domain)


def canonical(i):
    """Normal form used for structural equality certificates."""
    i = perp_normalize(_children_map(i, canonical))
    if isinstance(i, Join):
        a, b = sorted((i.left, i.right), key=_key)
        i = Join(a, b)
    return _fold(i)


# -- membership --------------------------------------------------------------

def member(ideal, a):
    """Decide whether the set ``a`` belongs to ``ideal``."""
    if a.domain != ideal.domain:
        raise DomainMismatch("set over %s, ideal over %s" % (a.domain, ideal.domain))
    return _member(ideal, normalize(a))


def _member(i, a):
    if isinstance(i, Fin):
        return Verdict(is_finite(a))
    if isinstance(i, Pow):
        return Verdict(True)
    if isinstance(i, Restrict):
        if not is_subset(a, i.base):
            raise DomainMismatch("%s is not inside the restriction set %s"
                                 % (to_text(a), to_text(i.base)))
        return _member(i.ideal, a)
    if isinstance(i, Join):
        return _member_join(i, a)
    if isinstance(i, SUMS):
        return _member_sum(i, a)
    if isinstance(i, Fubini):
        return _member_fubini(i, a)
    if isinstance(i, Perp):
        return _member_perp(i.ideal, a)
    if isinstance(i, (WO, WORev)):
        good = FinRat, (AscSeq if isinstance(i, WO) else DescSeq)
        for leaf in rat_leaves(a):
            if not isinstance(leaf, good):
                return Verdict(False, {"leaf": leaf})
        return Verdict(True)
    if isinstance(i, CatalogP):
        return _member(expand_p(i.alpha), a)
    if isinstance(i, CatalogQ):
        if i.alpha.is_zero:
            return _member(Fin(NAT), a)
        return _member_perp(expand_p(i.alpha), a)
    raise TypeError("unknown ideal %r" % (i,))


def _member_sum(i, a):
    for cell in column_summary(a):
        reg = cell.region
        if reg.is_finite():
            cols = reg.elements()
        elif isinstance(i, LimitSum):
            # traces on infinite regions are whole blocks or base points, and
            # every block ideal is proper, so the first column decides
            cols = [reg.min()]
        else:
            heads = len(i.heads) if isinstance(i, DirectSumList) else 0
            cols = [n for n in range(heads) if n in reg]
            # graph points are finite per column, so the fixed trace decides
            block = i.tail if isinstance(i, DirectSumList) else i.block
            if cell.trace is not None and not _member(block, cell.trace).holds:
                n = (reg - EPSet.finite(range(heads))).min()
                return Verdict(False, {"column": n})
        for n in cols:
            if not _member(i.block_at(n), cell.at(n)).holds:
                return Verdict(False, {"column": n})
    return Verdict(True)


def _member_fubini(i, a):
    exc = EPSet.empty()
    for cell in column_summary(a):
        reg = cell.region
        if reg.is_finite():
            bad = [n for n in reg.elements() if not _member(i.inner, cell.at(n)).holds]
            exc = exc | EPSet.finite(bad)
        elif not _member(i.inner, cell.trace).holds:
            exc = exc | reg
    e = from_ep(exc)
    return Verdict(_member(i.outer, e).holds, {"exceptional": e})


def _member_perp(x, a):
    folded = _fold(x)
    if isinstance(folded, CatalogP) and not folded.alpha.is_zero:
        x = x if isinstance(x, SUMS) else expand_p(folded.alpha)
    elif not isinstance(x, SUMS):
        r = _perp_step(x)
        if r is None:
            r = _perp_step(perp_normalize(x))
        if r is None:
            raise Undecidable("no orthogonal rule for %s" % type(x).__name__)
        return _member(r, a)
    # a set is orthogonal to a sum iff it meets finitely many blocks and each
    # trace is orthogonal to the block ideal
    top = 0
    for cell in column_summary(a):
        reg = cell.region
        if not reg.is_finite():
            return Verdict(False, {"columns": from_ep(reg)})
        for n in reg.elements():
            if not _member_perp(x.block_at(n), cell.at(n)).holds:
                return Verdict(False, {"column": n})
            top = max(top, n)
    return Verdict(True, {"N": top})


# -- join witnesses ----------------------------------------------------------

def _top_level(i):
    """Nodes reachable through joins, restrictions and orthogonals."""
    out = [i]
    for child in (getattr(i, "left", None), getattr(i, "right", None)):
        if child is not None:
            out.extend(_top_level(child))
    if isinstance(i, (Restrict, Perp)):
        out.extend(_top_level(i.ideal))
    return out


def _restrict_bases(i):
    return [n.base for n in _top_level(i) if isinstance(n, Restrict)]


def _head_cols(i):
    return max([len(n.heads) for n in _top_level(i) if isinstance(n, DirectSumList)],
               default=0)


def disjoint_cells(a, head_cols=0):
    """Pairwise disjoint pieces of ``a`` that are the atoms of membership."""
    a = normalize(a)
    d = a.domain
    if is_empty(a):
        return []
    if isinstance(d, Nat):
        return _flat_parts(a)
    if isinstance(d, Rat):
        return _group_overlaps(d, rat_leaves(a))
    out = []
    for cell in column_summary(a):
        reg = cell.region
        if not reg.is_finite():
            low = EPSet.finite(range(head_cols)) & reg
            rest = reg - low
        else:
            low, rest = reg, EPSet.empty()
        for n in low.elements():
            for c in disjoint_cells(cell.at(n)):
                out.append(Patch(d, ((n, c),)))
        if rest.is_empty():
            continue
        r = from_ep(rest)
        if isinstance(d, Sigma):
            if cell.full:
                out.append(BlockFull(d, r))
            elif cell.diag:
                out.append(BlockDiag(d, r))
            continue
        if cell.trace is not None:
            out.extend(Cols(r, c) for c in disjoint_cells(cell.trace))
        seen = []
        for g in cell.graphs:
            keep = rest
            if cell.trace is not None:
                keep = keep - to_ep(cell.trace).preimage_affine(*g)
            for g2 in seen:
                keep = keep - _coincide(g, g2)
            seen.append(g)
            if not keep.is_empty():
                out.append(Graph(g[0], g[1], from_ep(keep)))
    return [normalize(c) for c in out]


def _coincide(g1, g2):
    from .sets import _graph_coincide
    return _graph_coincide(g1, g2)


def _group_overlaps(d, pieces):
    """Disjoint pieces covering ``pieces``: each leaf minus the earlier ones.

    Every output piece lies inside a single leaf, so a monotone sequence is
    never glued to a sequence running the other way.
    """
    out = []
    seen = []
    for p in pieces:
        rest = difference(p, union_all(d, seen)) if seen else p
        seen.append(p)
        out.extend(q for q in rat_leaves(rest) if not is_empty(q))
    return [normalize(q) for q in out]


def join_cells(a, bases=(), head_cols=0):
    cells = disjoint_cells(a, head_cols)
    for b in bases:
        new = []
        for c in cells:
            try:
                pieces = (intersect(c, b), difference(c, b))
            except NotClosed:
                new.append(c)
                continue
            new.extend(p for p in pieces if not is_empty(p))
        cells = new
    return cells


def _accepts(i, c):
    try:
        return _member(i, c).holds
    except DomainMismatch:
        return False


def _member_join(i, a):
    d = a.domain
    cells = join_cells(a, _restrict_bases(i), _head_cols(i))
    left, right = [], []
    for c in cells:
        if _accepts(i.left, c):
            left.append(c)
        elif _accepts(i.right, c):
            right.append(c)
        else:
            return Verdict(False, {"cell": c})
    return Verdict(True, {"left": union_all(d, left), "right": union_all(d, right)})


# -- classification ----------------------------------------------------------

def equivalent(i, j, corpus=None):
    """Extensional comparison on a corpus plus a structural certificate."""
    if i.domain != j.domain:
        raise DomainMismatch("ideals over %s and %s" % (i.domain, j.domain))
    if corpus is None:
        from .corpus import set_corpus
        corpus = set_corpus(i.domain)
    for a in corpus:
        try:
            x, y = member(i, a).holds, member(j, a).holds
        except DomainMismatch:
            continue
        if x != y:
            return Equivalence(DISTINGUISHED, a)
    if _certified(canonical(i), canonical(j)):
        return Equivalence(EQUAL)
    return Equivalence(UNKNOWN)


def _certified(ci, cj):
    if ci == cj:
        return True
    return _fubini_identity(ci, cj) or _fubini_identity(cj, ci)


def _fubini_identity(f, j):
    """Fin x K equals the join of K^omega and the orthogonal of Fin^omega."""
    if not (isinstance(f, Fubini) and isinstance(j, Join)):
        return False
    if canonical(f.outer) != Fin(NAT):
        return False
    k = f.inner
    expected = {canonical(OmegaSum(k)), canonical(Perp(OmegaSum(Fin(k.domain))))}
    return {j.left, j.right} == expected


def is_tall(i):
    r = equivalent(perp_normalize(Perp(i)), Fin(i.domain))
    if r.kind == UNKNOWN:
        raise Undecidable("cannot certify the orthogonal of %s" % ideal_text(i))
    if r.kind == EQUAL:
        return Verdict(True)
    return Verdict(False, {"infinite_orthogonal_set": r.witness})


def is_frechet(i):
    r = equivalent(perp_normalize(Perp(Perp(i))), i)
    if r.kind == UNKNOWN:
        raise Undecidable("cannot certify the double orthogonal of %s" % ideal_text(i))
    if r.kind == EQUAL:
        return Verdict(True)
    return Verdict(False, {"separating_set": r.witness})


_FIN_NOTES = {
    "meager": (True, "a proper ideal containing all finite sets with the Baire "
                     "property is meager; Fin is F-sigma"),
    "borel": (True, "countable union of finite-dimensional closed sets (F-sigma)"),
    "frechet": (True, "the orthogonal of Fin is the power set, whose orthogonal is Fin"),
    "tall": (False, "the orthogonal is the power set, which has infinite members"),
    "contains_fin": (True, "every ideal here contains the finite sets"),
}
_POW_NOTES = {
    "meager": (False, "the power set is the whole Cantor space, which is not meager"),
    "borel": (True, "the whole Cantor space is closed"),
    "frechet": (True, "the orthogonal is Fin, whose orthogonal is the power set"),
    "tall": (True, "every infinite set is itself a member"),
    "contains_fin": (True, "every ideal here contains the finite sets"),
}
_WO_NOTES = {
    "meager": (True, "a proper ideal containing the finite sets with the Baire "
                     "property is meager; coanalytic sets have the Baire property"),
    "borel": (False, "the family of well-ordered sets of rationals is complete "
                     "coanalytic, hence not Borel"),
    "frechet": (True, "the orthogonal consists of the reversely well-ordered sets, "
                      "and negation of the rationals swaps the two ideals"),
    "tall": (False, "a strictly monotone sequence of the reverse type is infinite "
                    "and has no infinite member below it"),
    "contains_fin": (True, "every ideal here contains the finite sets"),
}
_HIER_NOTES = {
    "meager": (True, "a proper Borel ideal containing the finite sets is meager"),
    "borel": (True, "built from Fin and the power set by countable sums and "
                    "orthogonals of sums, which stay Borel"),
    "frechet": (True, "orthogonal normalization swaps P and Q at each index"),
    "tall": (False, "the orthogonal contains a whole block or column, an infinite set"),
    "contains_fin": (True, "every ideal here contains the finite sets"),
}


def metadata(i):
    """Documented flags for catalog ideals, each with a justification."""
    c = canonical(i)
    if isinstance(c, Fin):
        notes = _FIN_NOTES
    elif isinstance(c, Pow):
        notes = _POW_NOTES
    elif isinstance(c, (WO, WORev)):
        notes = _WO_NOTES
    elif isinstance(c, (CatalogP, CatalogQ)):
        notes = _HIER_NOTES
    else:
        raise NoMetadata("%s is not a catalog ideal" % ideal_text(i))
    return {k: {"value": v, "justification": why} for k, (v, why) in notes.items()}


# -- printing ----------------------------------------------------------------

def ideal_text(i):
    if isinstance(i, Fin):
        return "FIN"
    if isinstance(i, Pow):
        return "POW"
    if isinstance(i, WO):
        return "WO"
    if isinstance(i, WORev):
        return "WOREV"
    if isinstance(i, CatalogP):
        return "P[%s]" % i.alpha
    if isinstance(i, CatalogQ):
        return "Q[%s]" % i.alpha
    if isinstance(i, LimitSum):
        return "BLOCKSUM[%s]" % i.alpha
    if isinstance(i, Restrict):
        return "RESTRICT(%s,%s)" % (ideal_text(i.ideal), to_text(i.base))
    if isinstance(i, Join):
        return "JOIN(%s,%s)" % (ideal_text(i.left), ideal_text(i.right))
    if isinstance(i, OmegaSum):
        return "SUM(%s)" % ideal_text(i.block)
    if isinstance(i, DirectSumList):
        return "DSUM(%s)" % ",".join(ideal_text(x) for x in i.heads + (i.tail,))
    if isinstance(i, Fubini):
        return "FUBINI(%s,%s)" % (ideal_text(i.outer), ideal_text(i.inner))
    if isinstance(i, Perp):
        return "PERP(%s)" % ideal_text(i.ideal)
    raise TypeError("unknown ideal %r" % (i,))

"""Deterministic corpora of sets, ideals and simple sequences.

The corpora drive extensional comparisons and the property suites.  Set
corpora list every basic constructor with small parameters first (finite
sets before infinite ones, so the first infinite member of the Nat corpus is
``cofin{}``) and then unions of two and three basics drawn with a fixed seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .domains import NAT, RAT, Nat, Prod, Rat, Sigma, base_point, block_domain
from .errors import NotClosed
from .sets import (AP, AscSeq, BlockDiag, BlockFull, Cols, DescSeq, FinPoints, FinRat,
                   Graph, OrdSum, Patch, Union, cofin, difference, fin, is_empty,
                   normalize, to_text, union, union_all, empty)

_SEED = 20240611
Q = Fraction


def _nat_basics():
    out = [fin(), fin(0), fin(1), fin(3), fin(0, 1, 2, 3), fin(1, 5, 8), fin(2, 4, 6, 7),
           cofin(), cofin(0), cofin(1, 2), cofin(0, 3, 8)]
    out += [AP(a, b) for b in range(2, 9) for a in range(0, 9) if a < b + 2][:40]
    return out


def _rat_basics():
    return [FinRat(()), FinRat((Q(0),)), FinRat((Q(-1), Q(1, 2))), FinRat((Q(1, 3), Q(2), Q(5, 2))),
            AscSeq(0, 1), AscSeq(1, Q(1, 2)), AscSeq(2, 1), AscSeq(0, Q(1, 3)),
            DescSeq(0, 1), DescSeq(1, Q(1, 2)), DescSeq(-1, 1), DescSeq(0, Q(1, 2)),
            OrdSum(((Q(0), Q(1), AscSeq(1, Q(1, 2))), (Q(1), Q(2), DescSeq(1, Q(1, 2))))),
            OrdSum(((Q(-2), Q(-1), FinRat((Q(-3, 2),))), (Q(3), Q(5), AscSeq(4, Q(1, 2)))))]


def _small(domain):
    """A short list of sets used as traces when nesting."""
    if isinstance(domain, Nat):
        return [fin(), fin(0), fin(0, 1, 2, 3), cofin(), cofin(1), AP(0, 2), AP(1, 3)]
    if isinstance(domain, Rat):
        return [FinRat((Q(1, 2),)), AscSeq(0, 1), DescSeq(0, 1)]
    out = [normalize(s) for s in _basics(domain)[:6]]
    if isinstance(domain, Prod):
        # infinite sets with finite columns: a row and, over nat, the diagonal
        out.append(Cols(cofin(), _small(domain.inner)[1]))
        if domain.inner == NAT:
            out.append(Graph(1, 0, cofin()))
    if isinstance(domain, Sigma):
        # one point in every block
        out.append(BlockDiag(domain, cofin()))
    return out


def _prod_basics(d):
    inner = _small(d.inner)
    cols = [fin(0), fin(1), fin(0, 1), fin(3), cofin(), cofin(0), AP(0, 2), AP(1, 3)]
    out = [empty(d)]
    pts = [(0, p) for p in _points(d.inner, 2)] + [(3, p) for p in _points(d.inner, 1)]
    out.append(FinPoints(d, tuple(pts)))
    for s in cols:
        for t in inner:
            out.append(Cols(s, t))
    if d.inner == NAT:
        for a, b in ((1, 0), (2, 1), (1, 3), (3, 0)):
            for s in (cofin(), AP(0, 2), fin(0, 1, 2), cofin(1)):
                out.append(Graph(a, b, s))
    for t in inner[1:4]:
        out.append(Patch(d, ((1, t),)))
        out.append(Patch(d, ((0, t), (2, inner[-1]))))
    return out


def _points(domain, k):
    from .domains import point_at
    return [point_at(domain, i) for i in range(k)]


def _sigma_basics(d):
    out = [empty(d), FinPoints(d, tuple((n, base_point(d.block(n))) for n in range(3)))]
    for s in (fin(0), fin(1, 2), cofin(), cofin(0), AP(0, 2), AP(1, 3)):
        out.append(BlockFull(d, s))
        out.append(BlockDiag(d, s))
    for n in range(3):
        small = _small(d.block(n))
        for t in small[1:5] + small[6:]:
            out.append(Patch(d, ((n, t),)))
    return out


def _basics(domain):
    if isinstance(domain, Nat):
        return _nat_basics()
    if isinstance(domain, Rat):
        return _rat_basics()
    if isinstance(domain, Prod):
        return _prod_basics(domain)
    if isinstance(domain, Sigma):
        return _sigma_basics(domain)
    raise TypeError("unknown domain %r" % (domain,))


@lru_cache(maxsize=None)
def set_corpus(domain, unions=60):
    """Basics then ``unions`` deterministic unions of two or three basics."""
    basics = [normalize(b) for b in _basics(domain)]
    rng = random.Random(_SEED)
    out = list(basics)
    nonempty = [b for b in basics if not is_empty(b)]
    for _ in range(unions):
        k = rng.choice((2, 2, 3))
        out.append(union_all(domain, rng.sample(nonempty, k)))
    seen, uniq = set(), []
    for s in out:
        key = to_text(s)
        if key not in seen:
            seen.add(key)
            uniq.append(s)
    return tuple(uniq)


# -- ideals ------------------------------------------------------------------

def ideal_corpus(domain):
    """Representative shipped ideals over ``domain``."""
    from . import ideals as I
    from .ordinals import Ordinal
    one, two = Ordinal.of(1), Ordinal.of(2)
    if isinstance(domain, Nat):
        return [I.Fin(), I.Pow(), I.Perp(I.Fin()), I.CatalogP(Ordinal()), I.CatalogQ(Ordinal()),
                I.Join(I.Fin(), I.Restrict(I.Pow(), AP(0, 2))),
                I.Join(I.Restrict(I.Pow(), AP(1, 2)), I.Restrict(I.Pow(), AP(0, 2))),
                I.Restrict(I.Fin(), cofin())]
    if isinstance(domain, Rat):
        return [I.WO(), I.WORev(), I.Perp(I.WO()), I.Fin(RAT), I.Pow(RAT),
                I.Join(I.WO(), I.WORev()), I.Join(I.WO(), I.Fin(RAT))]
    if isinstance(domain, Sigma):
        return [I.CatalogP(domain.alpha), I.CatalogQ(domain.alpha), I.Fin(domain),
                I.Pow(domain), I.Join(I.CatalogP(domain.alpha), I.CatalogQ(domain.alpha))]
    inner = domain.inner
    fin_in, pow_in = I.Fin(inner), I.Pow(inner)
    out = [I.OmegaSum(fin_in), I.Perp(I.OmegaSum(fin_in)), I.Fin(domain), I.Pow(domain),
           I.DirectSumList((pow_in,), fin_in), I.Perp(I.DirectSumList((pow_in, fin_in), fin_in)),
           I.Join(I.OmegaSum(fin_in), I.Perp(I.OmegaSum(fin_in)))]
    if inner == NAT:
        out += [I.Fubini(I.Fin(), I.Fin()), I.Fubini(I.Pow(), I.Fin()), I.Fubini(I.Fin(), I.Pow()),
                I.CatalogP(one), I.CatalogQ(one), I.OmegaSum(I.Pow())]
    elif inner == Prod(NAT):
        out += [I.CatalogP(two), I.CatalogQ(two), I.OmegaSum(I.CatalogQ(one)),
                I.Fubini(I.Fin(), I.CatalogP(one))]
    elif inner == RAT:
        out += [I.OmegaSum(I.WO()), I.Perp(I.OmegaSum(I.WO())), I.Fubini(I.Fin(), I.WO())]
    elif isinstance(inner, Sigma):
        out += [I.CatalogP(inner.alpha.succ()), I.CatalogQ(inner.alpha.succ())]
    return out


CORPUS_DOMAINS = (NAT, RAT, Prod(NAT), Prod(Prod(NAT)), Prod(RAT))


# -- simple sequences --------------------------------------------------------

COEFFS = (Q(1), Q(1, 2), Q(-1), Q(3, 4), Q(2), Q(-1, 3), Q(1, 4), Q(5, 2))


def _atoms(domain):
    """Pairwise disjoint sets whose unions are closed under the set operations.

    Unions of these atoms never hit the inexpressible differences of the
    grammar (columns minus a graph meeting infinitely many columns, whole
    blocks minus base points), so sequences built from them combine exactly.
    """
    if domain == Prod(NAT):
        d = domain
        return [Graph(2, 0, cofin(1, 3)),
                Cols(cofin(), AP(1, 4)),
                Cols(AP(0, 2), AP(3, 4)),
                Patch(d, ((1, AP(0, 2)), (3, AP(0, 2)))),
                Cols(AP(5, 2), fin(0)),
                Graph(2, 2, AP(0, 4)),
                FinPoints(d, ((4, 6), (6, 0)))]
    if isinstance(domain, Sigma):
        d = domain
        return [BlockFull(d, AP(0, 2)),
                BlockDiag(d, AP(1, 4)),
                FinPoints(d, ((7, base_point(d.block(7))),)),
                Patch(d, ((3, _small(d.block(3))[1]),))]
    return None


def _finite_sets(domain):
    from .sets import is_finite
    return [s for s in set_corpus(domain) if is_finite(s) and not is_empty(s)]


def seq_corpus(domain, count=120, seed=_SEED, signed=True, finite_only=False, max_period=None):
    """Deterministic simple sequences with up to three disjoint regions.

    Where the grammar is closed under differences, regions are carved out of
    corpus sets; on the remaining domains they are unions of disjoint atoms.
    ``finite_only`` restricts every region to a finite set; ``max_period``
    keeps only Nat sets whose eventual period is at most that bound.
    """
    from .seqspace import SimpleSeq
    rng = random.Random(seed)
    coeffs = COEFFS if signed else tuple(c for c in COEFFS if c > 0)
    out = [SimpleSeq(domain, ())]
    atoms = None if finite_only else _atoms(domain)
    if atoms is not None:
        while len(out) < count:
            picked = rng.sample(atoms, rng.randint(1, len(atoms)))
            k = rng.randint(1, min(3, len(picked)))
            groups = [picked[g::k] for g in range(k)]
            terms = tuple((rng.choice(coeffs), union_all(domain, g)) for g in groups)
            out.append(SimpleSeq.trusted(domain, terms))
        return out
    sets = _finite_sets(domain) if finite_only else [s for s in set_corpus(domain) if not is_empty(s)]
    if max_period is not None:
        from .sets import to_ep
        sets = [s for s in sets if to_ep(s).period <= max_period]
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        k = rng.choice((1, 1, 2, 2, 3))
        picks = rng.sample(sets, min(k, len(sets)))
        terms, covered = [], empty(domain)
        try:
            for s in picks:
                r = difference(s, covered)
                if not is_empty(r):
                    terms.append((rng.choice(coeffs), r))
                    covered = union(covered, r)
        except NotClosed:
            continue
        out.append(SimpleSeq(domain, tuple(terms)))
    return out

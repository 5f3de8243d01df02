"""Representable operators on sequence spaces and their verification harnesses.

An ``IndexOp`` acts by (T x)(n) = sign(n) * x(h(n)), where h maps the output
domain into the input domain and sign is -1 on a symbolic set and +1
elsewhere; on indicators it gives T chi_A = sign * chi_{h^-1(A)}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .domains import Prod, Sigma, block_domain, point_at
from .errors import DomainMismatch, MembershipRequired, NotClosed
from .eventual import EPSet
from .ideals import Fubini, OmegaSum, Perp, SUMS, CatalogP, expand_p, member
from .maps import finite_preimages_only, preimage
from .seqspace import (ADD, MEET, SimpleSeq, VecSimpleSeq, char_fn, combine, common_refinement,
                       in_c0I, map_scalar, quotient_norm, restrict_seq, seq_equal, sup_norm,
                       Scale)
from .sets import (BlockDiag, BlockFull, Cols, Graph, Patch, _contribs, _make_cell, _refine,
                   contains, difference, enumerate_prefix, from_ep, intersect, is_empty,
                   is_finite, points_set, set_equal, union_all)

DEFAULT_SEED = 0x1DEA_1CA1_C0DE_0001


# -- operators ---------------------------------------------------------------

@dataclass(frozen=True)
class IndexOp:
    """x -> sign * (x o h); ``negative`` is the set where the sign is -1."""
    map: object
    negative: object = None

    def __post_init__(self):
        if self.negative is not None:
            if self.negative.domain != self.map.source:
                raise DomainMismatch("sign set over %s, operator outputs over %s"
                                     % (self.negative.domain, self.map.source))
            if is_empty(self.negative):
                object.__setattr__(self, "negative", None)

    @property
    def input_domain(self):
        return self.map.target

    @property
    def output_domain(self):
        return self.map.source


@dataclass(frozen=True)
class RestrictionOp:
    """Extension by zero from the subsets of ``base``: x -> chi_base * x."""
    base: object

    @property
    def input_domain(self):
        return self.base.domain

    @property
    def output_domain(self):
        return self.base.domain


def apply(op, x):
    if x.domain != op.input_domain:
        raise DomainMismatch("sequence over %s, operator reads %s" % (x.domain, op.input_domain))
    if isinstance(op, RestrictionOp):
        return restrict_seq(x, op.base)
    terms = []
    for c, r in x.terms:
        pre = preimage(op.map, r)
        if op.negative is None:
            terms.append((c, pre))
        else:
            terms.append((-c, intersect(pre, op.negative)))
            terms.append((c, difference(pre, op.negative)))
    return SimpleSeq.trusted(op.output_domain, tuple(terms))


def restriction_embed(ideal, a):
    if a.domain != ideal.domain:
        raise DomainMismatch("restriction set over %s, ideal over %s" % (a.domain, ideal.domain))
    return RestrictionOp(a)


# -- reports -----------------------------------------------------------------

@dataclass
class Report:
    verdict: str                   # "pass" | "fail"
    trials: int
    seed: int
    counterexample: object = None
    laws: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"


def _first_difference(x, y, prefix=1000):
    d = x.domain
    for i in range(prefix):
        p = point_at(d, i)
        if x.value(p) != y.value(p):
            return p
    return None


def _law_failure(law, op, i, j, x, y):
    """None when ``law`` holds on (x, y), else a dict describing the failure."""
    if law == "norm":
        a, b = sup_norm(apply(op, x)), sup_norm(x)
        return None if a == b else {"lhs": a, "rhs": b}
    if law in ("additive", "meet"):
        kind = ADD if law == "additive" else MEET
        lhs = apply(op, combine(kind, x, y))
        rhs = combine(kind, apply(op, x), apply(op, y))
        if seq_equal(lhs, rhs):
            return None
        return {"lhs": lhs, "rhs": rhs, "point": _first_difference(lhs, rhs)}
    if law == "transport":
        if not in_c0I(i, x).holds or in_c0I(j, apply(op, x)).holds:
            return None
        return {"image": apply(op, x)}
    raise ValueError(law)


def _shrink_candidates(x):
    d = x.domain
    for k in range(len(x.terms)):
        yield SimpleSeq.trusted(d, x.terms[:k] + x.terms[k + 1:])
    for k, (c, r) in enumerate(x.terms):
        first = enumerate_prefix(r, 64)[:2]
        for pts in (first[:1], first[1:], first):
            small = points_set(d, pts)
            if pts and not set_equal(small, r):
                yield SimpleSeq.trusted(d, x.terms[:k] + ((c, small),) + x.terms[k + 1:])


def shrink(fails, x, y):
    """Greedy shrinking: drop terms, then shrink regions to a few points."""
    progress = True
    while progress:
        progress = False
        for which in (0, 1):
            cur = (x, y)[which]
            for cand in _shrink_candidates(cur):
                nx, ny = (cand, y) if which == 0 else (x, cand)
                try:
                    bad = fails(nx, ny)
                except NotClosed:
                    bad = None
                if bad is not None:
                    x, y = nx, ny
                    progress = True
                    break
            if progress:
                break
    return x, y


def _trial_pairs(corpus, trials, seed):
    rng = random.Random(seed)
    n = len(corpus)
    for t in range(trials):
        if t < n:
            yield corpus[t], corpus[(3 * t + 1) % n]
        else:
            yield rng.choice(corpus), rng.choice(corpus)


def _uses_encode(h):
    from .maps import Compose, PairEncode
    if isinstance(h, Compose):
        return any(_uses_encode(m) for m in h.maps)
    return isinstance(h, PairEncode)


def operator_corpus(op, count=120):
    """Input sequences suited to ``op``.

    Maps that decode pairs only have closed preimages on finite sets, and
    preimages under pair encoding grow with the square of the period, so
    those operators draw from finite or short-period corpora.
    """
    from .corpus import seq_corpus
    if isinstance(op, IndexOp) and finite_preimages_only(op.map):
        return seq_corpus(op.input_domain, count, finite_only=True)
    if isinstance(op, IndexOp) and _uses_encode(op.map):
        return seq_corpus(op.input_domain, count, max_period=4)
    return seq_corpus(op.input_domain, count)


def check_isometry_lattice(op, i, j, trials=500, seed=DEFAULT_SEED, corpus=None):
    """Norm, additivity, meet preservation and c0 transport over a corpus."""
    if corpus is None:
        corpus = operator_corpus(op)
    laws = ["norm", "additive", "meet", "transport"]
    status = {law: "pass" for law in laws}
    counter = None
    for x, y in _trial_pairs(corpus, trials, seed):
        for law in laws:
            if status[law] == "fail":
                continue
            bad = _law_failure(law, op, i, j, x, y)
            if bad is None:
                continue
            status[law] = "fail"
            if counter is None:
                sx, sy = shrink(lambda a, b: _law_failure(law, op, i, j, a, b), x, y)
                counter = {"law": law, "x": sx, "y": sy,
                           **_law_failure(law, op, i, j, sx, sy)}
    signed = isinstance(op, IndexOp) and op.negative is not None
    law_list = [{"name": law, "status": status[law],
                 "expected_failure": law == "meet" and signed} for law in laws]
    verdict = "fail" if counter is not None else "pass"
    return Report(verdict, trials, seed, counter, law_list)


def check_katetov(h, i, j, corpus=None, seed=DEFAULT_SEED):
    """Check h^-1(A) in J for every corpus A in I (h maps J's domain to I's)."""
    from .corpus import set_corpus
    if h.source != j.domain or h.target != i.domain:
        raise DomainMismatch("map %s -> %s, ideals over %s and %s"
                             % (h.source, h.target, i.domain, j.domain))
    corpus = set_corpus(i.domain) if corpus is None else corpus
    checked = skipped = 0
    counter = None
    for a in corpus:
        if not member(i, a).holds:
            continue
        try:
            pre = preimage(h, a)
        except NotClosed:
            skipped += 1
            continue
        checked += 1
        if not member(j, pre).holds:
            counter = {"set": a, "preimage": pre}
            break
    info = {"bijective": h.bijective, "image_is_ideal": h.bijective, "skipped": skipped}
    laws = [{"name": "katetov", "status": "fail" if counter else "pass"}]
    return Report("fail" if counter else "pass", checked, seed, counter, laws, info)


def check_ht_conditions(op, ideal, sample_n, families, prefix=1000, seed=DEFAULT_SEED):
    """Hypotheses (1) and (2) of the lattice-isometry characterization."""
    counter = None
    ok1 = True
    for n in sample_n:
        if isinstance(op, IndexOp):
            a = points_set(op.input_domain, [op.map(n)])
            good = member(ideal, a).holds and apply(op, char_fn(a)).value(n) == 1
        else:
            a = points_set(op.input_domain, [n]) if contains(op.base, n) else None
            good = a is not None and apply(op, char_fn(a)).value(n) == 1
        if not good:
            ok1 = False
            counter = counter or {"condition": 1, "n": n}
    ok2, applicable = True, 0
    for fam in families:
        if not fam:
            continue
        inter = reduce(intersect, fam)
        if not is_empty(inter):
            continue
        applicable += 1
        meet = reduce(lambda u, v: combine(MEET, u, v), [apply(op, char_fn(a)) for a in fam])
        pre_zero = all(v == 0 for v in (meet.value(point_at(meet.domain, k))
                                        for k in range(prefix)))
        if meet.terms or not pre_zero:
            ok2 = False
            counter = counter or {"condition": 2, "family": list(fam), "meet": meet}
    laws = [{"name": "condition1", "status": "pass" if ok1 else "fail"},
            {"name": "condition2", "status": "pass" if ok2 else "fail",
             "families_checked": applicable}]
    verdict = "pass" if ok1 and ok2 else "fail"
    return Report(verdict, len(sample_n) + applicable, seed, counter, laws)


# -- block decompositions ----------------------------------------------------

@dataclass(frozen=True)
class BlockFamily:
    """Columns in ``region`` share one description of the block sequence."""
    domain: object
    region: EPSet
    cells: tuple          # ((coeff, ColumnCell), ...)

    def columns(self):
        return from_ep(self.region)

    def at(self, n):
        inner = block_domain(self.domain, n)
        return SimpleSeq.trusted(inner, tuple((c, cell.at(n)) for c, cell in self.cells))

    def norm(self):
        return max((abs(c) for c, _ in self.cells), default=Fraction(0))

    def fixed_block(self):
        """Column-independent part of the block (graph points dropped)."""
        inner = self.domain.inner
        return SimpleSeq.trusted(inner, tuple((c, cell.trace) for c, cell in self.cells
                                              if cell.trace is not None))


def directsum_iso(x):
    """Block decomposition of x over a blocked domain, as block families."""
    d = x.domain
    contribs = []
    for k, (c, r) in enumerate(x.terms):
        contribs.extend((reg, kind, payload, k) for reg, kind, payload in _contribs(r))
    out = []
    for reg, members in _refine([cb[0] for cb in contribs]):
        by_term = {}
        for m in members:
            by_term.setdefault(contribs[m][3], []).append(contribs[m][:3])
        cells = tuple((x.terms[k][0], _make_cell(d, reg, cs)) for k, cs in sorted(by_term.items()))
        out.append(BlockFamily(d, reg, cells))
    return out


def _cell_set(d, reg, cell):
    r = from_ep(reg)
    if reg.is_finite():
        return Patch(d, tuple((n, cell.at(n)) for n in reg.elements()))
    if isinstance(d, Sigma):
        return BlockFull(d, r) if cell.full else BlockDiag(d, r)
    parts = [Cols(r, cell.trace)] + [Graph(a, b, r) for a, b in cell.graphs]
    return union_all(d, parts)


def directsum_inverse(domain, families):
    terms = [(c, _cell_set(domain, f.region, cell)) for f in families for c, cell in f.cells]
    return SimpleSeq.trusted(domain, tuple(terms))


def block_norm_sup(families):
    return max((f.norm() for f in families), default=Fraction(0))


def _sum_shape(ideal):
    if isinstance(ideal, SUMS):
        return ideal
    if isinstance(ideal, CatalogP) and not ideal.alpha.is_zero:
        return expand_p(ideal.alpha)
    raise DomainMismatch("expected a block-sum ideal")


@dataclass(frozen=True)
class OmegaPerpResult:
    families: tuple
    bound: int
    certified: bool


def omegaperp_iso(x, ideal):
    """Block decomposition of x in c0 of the orthogonal of a block sum.

    Every family is supported on columns <= bound, so the block norms vanish
    beyond the bound.
    """
    sum_ideal = _sum_shape(ideal)
    if not in_c0I(Perp(sum_ideal), x).holds:
        raise MembershipRequired("the sequence is not in c0 of the orthogonal")
    fams = directsum_iso(x)
    cols = [n for f in fams for n in f.region.elements()]
    bound = max(cols, default=0)
    certified = all(f.region.issubset(EPSet.finite(range(bound + 1))) for f in fams)
    return OmegaPerpResult(tuple(fams), bound, certified)


@dataclass(frozen=True)
class FubiniResult:
    quotient: SimpleSeq
    kernel: bool
    in_outer: bool


def fubini_quotient(x, outer, inner):
    """Column-wise quotient norms q(n) = ||column n + c0,J|| as a sequence on nat."""
    ideal = Fubini(outer, inner)
    if not in_c0I(ideal, x).holds:
        raise MembershipRequired("the sequence is not in c0 of the Fubini product")
    terms = []
    for fam in directsum_iso(x):
        if fam.region.is_finite():
            for n in fam.region.elements():
                terms.append((quotient_norm(inner, fam.at(n)), points_set(outer.domain, [n])))
        else:
            # finitely many graph points per column do not change a quotient norm
            terms.append((quotient_norm(inner, fam.fixed_block()), fam.columns()))
    q = SimpleSeq.trusted(outer.domain, tuple(terms))
    return FubiniResult(q, not q.terms, in_c0I(outer, q).holds)


# -- injective tensor products with max-norm coordinates ----------------------

def _check_tensor(u):
    if not u:
        raise ValueError("empty tensor")
    d = len(u[0][1])
    dom = u[0][0].domain
    for x, y in u:
        if len(y) != d or x.domain != dom:
            raise DomainMismatch("tensor factors must share a domain and a dimension")
    return dom, d


def tensor_injective_norm(u):
    """sup over the functionals +-e_i of the sup norm of sum_j e_i(y_j) x^j."""
    dom, d = _check_tensor(u)
    best = Fraction(0)
    for i in range(d):
        acc = SimpleSeq.trusted(dom, ())
        for x, y in u:
            acc = combine(ADD, acc, map_scalar(Scale(Fraction(y[i])), x))
        best = max(best, sup_norm(acc))
    return best


def tensor_embed(u):
    """The vector sequence n -> sum_j x^j_n y_j."""
    dom, d = _check_tensor(u)
    cells = common_refinement(dom, [x for x, _ in u])
    terms = []
    for region, vals in cells:
        vec = tuple(sum(Fraction(y[i]) * v for (_, y), v in zip(u, vals)) for i in range(d))
        terms.append((vec, region))
    obj = object.__new__(VecSimpleSeq)
    from .seqspace import _canon_terms
    object.__setattr__(obj, "domain", dom)
    object.__setattr__(obj, "dim", d)
    object.__setattr__(obj, "terms", _canon_terms(dom, terms, vector=True))
    return obj

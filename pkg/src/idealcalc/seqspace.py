"""Exact simple sequences: finite rational combinations of disjoint indicators.

A ``SimpleSeq`` is the bounded sequence equal to ``c`` on each region of its
term list and 0 elsewhere.  Level sets of such a sequence only change at the
finitely many coefficient levels, so c0-membership, I-limsup and quotient
norms reduce to finitely many ideal-membership decisions.

Sufficiency of the level check: for eps between two consecutive levels
l_{j+1} < eps <= l_j the level set {|x| >= eps} equals {|x| >= l_j}, and for
eps above the top level it is empty; so every level set is one of the finitely
many sets {|x| >= l_j}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domains import Prod, Rat, point_at
from .errors import (DomainMismatch, MembershipRequired, NonpositiveEpsilon, NotClosed,
                     RefinementNotClosed, ValidationError, WitnessUnavailable)
from .ideals import Join, Verdict, join_cells, member, _accepts, _head_cols, _restrict_bases
from .sets import (contains, difference, empty, full_set, intersect, is_empty, is_subset,
                   normalize, set_equal, to_text, union_all)
from ._hashing import memo_hash

NEG_INF = float("-inf")


def _check_disjoint(terms):
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            if not is_empty(intersect(terms[i][1], terms[j][1])):
                raise ValidationError("regions %s and %s overlap"
                                      % (to_text(terms[i][1]), to_text(terms[j][1])))


def _canon_terms(domain, terms, vector=False):
    out = []
    for c, r in terms:
        if r.domain != domain:
            raise DomainMismatch("term over %s in a sequence over %s" % (r.domain, domain))
        c = tuple(Fraction(v) for v in c) if vector else Fraction(c)
        r = normalize(r)
        if (not any(c) if vector else c == 0) or is_empty(r):
            continue
        out.append((c, r))
    out.sort(key=lambda t: (to_text(t[1]), t[0]))
    return tuple(out)


@memo_hash
@dataclass(frozen=True)
class SimpleSeq:
    domain: object
    terms: tuple = ()

    def __post_init__(self):
        terms = _canon_terms(self.domain, self.terms)
        _check_disjoint(terms)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def trusted(cls, domain, terms):
        """Build from terms already known to be pairwise disjoint."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "domain", domain)
        object.__setattr__(obj, "terms", _canon_terms(domain, terms))
        return obj

    def value(self, p):
        for c, r in self.terms:
            if contains(r, p):
                return c
        return Fraction(0)

    def support(self):
        return union_all(self.domain, [r for _, r in self.terms])


@memo_hash
@dataclass(frozen=True)
class VecSimpleSeq:
    domain: object
    dim: int
    terms: tuple = ()

    def __post_init__(self):
        terms = _canon_terms(self.domain, self.terms, vector=True)
        for c, _ in terms:
            if len(c) != self.dim:
                raise ValidationError("coefficient %s is not of dimension %d" % (c, self.dim))
        _check_disjoint(terms)
        object.__setattr__(self, "terms", terms)

    def value(self, p):
        for c, r in self.terms:
            if contains(r, p):
                return c
        return (Fraction(0),) * self.dim


def zero(domain):
    return SimpleSeq(domain, ())


def char_fn(a):
    return SimpleSeq.trusted(a.domain, ((Fraction(1), a),))


def level_set(x, eps):
    eps = Fraction(eps)
    if eps <= 0:
        raise NonpositiveEpsilon("level sets need eps > 0, got %s" % eps)
    return union_all(x.domain, [r for c, r in x.terms if abs(c) >= eps])


def sup_norm(x):
    if isinstance(x, VecSimpleSeq):
        return max((max(abs(v) for v in c) for c, _ in x.terms), default=Fraction(0))
    return max((abs(c) for c, _ in x.terms), default=Fraction(0))


def levels(x):
    return sorted({abs(c) for c, _ in x.terms}, reverse=True)


def in_c0I(ideal, x):
    """x is I-convergent to 0 iff every level set lies in the ideal."""
    if ideal.domain != x.domain:
        raise DomainMismatch("ideal over %s, sequence over %s" % (ideal.domain, x.domain))
    for lv in levels(x):
        s = level_set(x, lv)
        if not member(ideal, s).holds:
            return Verdict(False, {"level": lv, "set": s})
    return Verdict(True)


def covers_domain(x):
    """True iff the support of x is the whole domain."""
    full = full_set(x.domain)
    if full is None:
        return False
    return is_subset(full, x.support())


def _member_cocomplement(ideal, removed):
    """Membership of (domain minus ``removed``) in ``ideal``."""
    full = full_set(ideal.domain)
    if full is not None:
        try:
            return member(ideal, difference(full, removed)).holds
        except NotClosed:
            pass
    if _rat_based(ideal.domain):
        # every grammar set misses a whole rational interval in each column, so
        # its complement is in the ideal exactly when the ideal contains
        # everything
        from .ideals import canonical
        return _contains_everything_rat(canonical(ideal))
    # the complement of a member of a proper ideal is never a member
    if member(ideal, removed).holds:
        return full is not None and member(ideal, full).holds
    raise RefinementNotClosed("complement of %s is not expressible" % to_text(removed))


def _has_infinite_member(i):
    """Whether an ideal on an infinite domain holds an infinite set (None: unknown)."""
    from . import ideals as I
    if isinstance(i, I.Fin):
        return False
    if isinstance(i, (I.Pow, I.WO, I.WORev)):
        return True
    if isinstance(i, (I.OmegaSum, I.DirectSumList, I.Fubini, I.LimitSum)):
        # one point in each column: every column finite, infinitely many columns
        return True
    if isinstance(i, I.Join):
        left, right = _has_infinite_member(i.left), _has_infinite_member(i.right)
        if left or right:
            return True
        return None if None in (left, right) else False
    return None


def _rat_based(domain):
    while isinstance(domain, Prod):
        domain = domain.inner
    return isinstance(domain, Rat)


def _contains_everything_any(i):
    from .ideals import canonical
    full = full_set(i.domain)
    if full is not None:
        return member(i, full).holds
    return _contains_everything_rat(canonical(i))


def _contains_everything_rat(i):
    from . import ideals as I
    if isinstance(i, I.Pow):
        return True
    if isinstance(i, I.Join):
        return _contains_everything_rat(i.left) or _contains_everything_rat(i.right)
    if isinstance(i, (I.Fin, I.WO, I.WORev)):
        return False
    if isinstance(i, I.Restrict):
        return False
    # block constructions hold everything exactly when every column does
    if isinstance(i, I.OmegaSum):
        return _contains_everything_any(i.block)
    if isinstance(i, I.DirectSumList):
        return all(_contains_everything_any(h) for h in i.heads + (i.tail,))
    if isinstance(i, I.Fubini):
        return (_contains_everything_any(i.inner)
                or _contains_everything_any(i.outer))
    # an orthogonal holds everything exactly when the ideal has no infinite set
    if isinstance(i, I.Perp):
        has = _has_infinite_member(i.ideal)
        if has is not None:
            return not has
    raise RefinementNotClosed("cannot decide the whole rational line for this ideal")


def ideal_limsup(ideal, x):
    """sup{b : {k : x_k > b} not in I}, as an exact rational or -inf."""
    if ideal.domain != x.domain:
        raise DomainMismatch("ideal over %s, sequence over %s" % (ideal.domain, x.domain))
    values = {c for c, _ in x.terms}
    if not covers_domain(x):
        values.add(Fraction(0))
    for v in sorted(values, reverse=True):
        if v > 0:
            s = union_all(x.domain, [r for c, r in x.terms if c >= v])
            inside = member(ideal, s).holds
        else:
            below = union_all(x.domain, [r for c, r in x.terms if c < v])
            inside = _member_cocomplement(ideal, below)
        if not inside:
            return v
    return NEG_INF


def quotient_norm(ideal, x):
    """Distance from x to c0,I: the I-limsup of |x|, and 0 when I holds everything."""
    v = ideal_limsup(ideal, map_scalar(ABS, x))
    return max(Fraction(0), v) if v != NEG_INF else Fraction(0)


# -- pointwise operations ----------------------------------------------------

ADD, MEET, JOIN = "add", "meet", "join"
ABS = "abs"


@memo_hash
@dataclass(frozen=True)
class Scale:
    factor: Fraction


def common_refinement(domain, seqs):
    """Disjoint cells (region, values) on which every sequence is constant.

    Only the support union is covered; outside it every value is 0.
    """
    cells = []
    k = len(seqs)
    for idx, x in enumerate(seqs):
        if x.domain != domain:
            raise DomainMismatch("sequence over %s, expected %s" % (x.domain, domain))
        for c, r in x.terms:
            new = []
            try:
                left = r
                for region, vals in cells:
                    inter = intersect(region, r)
                    if is_empty(inter):
                        new.append((region, vals))
                        continue
                    new.append((inter, vals[:idx] + (c,) + vals[idx + 1:]))
                    rest = difference(region, r)
                    if not is_empty(rest):
                        new.append((rest, vals))
                    left = difference(left, region)
                if not is_empty(left):
                    vals = [Fraction(0)] * k
                    vals[idx] = c
                    new.append((left, tuple(vals)))
            except NotClosed as e:
                raise RefinementNotClosed(str(e)) from e
            cells = new
    return cells


def combine(op, x, y):
    f = {ADD: lambda a, b: a + b, MEET: min, JOIN: max}[op]
    if f(Fraction(0), Fraction(0)) != 0:
        raise ValueError("operation must fix 0")
    cells = common_refinement(x.domain, [x, y])
    return SimpleSeq.trusted(x.domain, tuple((f(a, b), r) for r, (a, b) in cells))


def map_scalar(op, x):
    if op == ABS:
        return SimpleSeq.trusted(x.domain, tuple((abs(c), r) for c, r in x.terms))
    if isinstance(op, Scale):
        return SimpleSeq.trusted(x.domain, tuple((op.factor * c, r) for c, r in x.terms))
    raise ValueError("unknown scalar map %r" % (op,))


def restrict_seq(x, a):
    """x * chi_A."""
    return SimpleSeq.trusted(x.domain, tuple((c, intersect(r, a)) for c, r in x.terms))


def seq_equal(x, y):
    """Extensional equality, compared value by value."""
    if x.domain != y.domain:
        return False
    vals = {c for c, _ in x.terms} | {c for c, _ in y.terms}
    for v in vals:
        a = union_all(x.domain, [r for c, r in x.terms if c == v])
        b = union_all(y.domain, [r for c, r in y.terms if c == v])
        if not set_equal(a, b):
            return False
    return True


def prefix_values(x, n):
    """Values of x at the first n enumerated points (brute force)."""
    return [x.value(point_at(x.domain, i)) for i in range(n)]


# -- join decomposition and disjointness -------------------------------------

def decompose_join(i, j, x):
    """Split x in c0 of I join J into y in c0,I and z in c0,J with y + z = x."""
    ideal = Join(i, j)
    if not in_c0I(ideal, x).holds:
        raise MembershipRequired("the sequence is not in c0 of the join")
    bases, heads = _restrict_bases(ideal), _head_cols(ideal)
    ys, zs = [], []
    for c, r in x.terms:
        for cell in join_cells(r, bases, heads):
            if _accepts(i, cell):
                ys.append((c, cell))
            elif _accepts(j, cell):
                zs.append((c, cell))
            else:
                raise WitnessUnavailable("no witness for the piece %s" % to_text(cell))
    return SimpleSeq.trusted(x.domain, tuple(ys)), SimpleSeq.trusted(x.domain, tuple(zs))


def c0_disjoint(x, y):
    from .ideals import Fin
    meet = combine(MEET, map_scalar(ABS, x), map_scalar(ABS, y))
    return in_c0I(Fin(x.domain), meet).holds


# -- printing ----------------------------------------------------------------

def seq_text(x):
    body = "+".join("%s*chi(%s)" % (c, to_text(r)) for c, r in x.terms)
    return "seq[%s]" % body

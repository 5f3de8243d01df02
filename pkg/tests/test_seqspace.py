"""Sequence layer: documented examples plus pointwise checks of the operations."""

from fractions import Fraction as Q

import pytest

from refeval import prefix_points

from idealcalc import ideals as I
from idealcalc.corpus import CORPUS_DOMAINS, seq_corpus
from idealcalc.domains import NAT, Prod
from idealcalc.dsl import parse_seq, parse_set
from idealcalc.errors import MembershipRequired, ValidationError
from idealcalc.seqspace import (ABS, ADD, JOIN, MEET, NEG_INF, Scale, SimpleSeq, c0_disjoint,
                                char_fn, combine, decompose_join, ideal_limsup, in_c0I,
                                level_set, map_scalar, quotient_norm, seq_equal, sup_norm, zero)
from idealcalc.sets import AP, empty, fin, is_empty, set_equal

P2 = Prod(NAT)


def X(text, domain=None):
    return parse_seq(text, domain)


def test_char_fn_and_norm_examples():
    assert seq_equal(char_fn(empty(NAT)), zero(NAT))
    assert sup_norm(char_fn(fin(5))) == 1
    assert sup_norm(zero(NAT)) == 0
    assert sup_norm(X("seq[3*chi(fin{1})+-5*chi(fin{2})]")) == 5


def test_level_set_examples():
    assert is_empty(level_set(zero(NAT), Q(1, 2)))
    x = X("seq[1*chi(ap(0,2))+1/2*chi(ap(1,2))]")
    lv = level_set(x, Q(3, 4))
    assert set_equal(lv, AP(0, 2))
    brute = [n for n in range(200) if abs(x.value(n)) >= Q(3, 4)]
    assert brute == [n for n in range(200) if lv and n % 2 == 0]


def test_overlapping_regions_are_rejected():
    with pytest.raises(ValidationError):
        SimpleSeq(NAT, ((Q(1), AP(0, 2)), (Q(2), AP(0, 3))))


def test_in_c0I_examples():
    assert not in_c0I(I.Fin(), char_fn(AP(0, 2))).holds
    assert in_c0I(I.Pow(), X("seq[7*chi(cofin{})]")).holds
    g = char_fn(parse_set("graph(n,cofin{})", P2))
    assert in_c0I(I.OmegaSum(I.Fin()), g).holds


def test_limsup_examples():
    x = X("seq[1*chi(ap(0,2))]")
    assert ideal_limsup(I.Pow(), x) == NEG_INF
    assert ideal_limsup(I.Fin(), char_fn(fin(1, 2))) == 0
    y = X("seq[1*chi(cols(fin{1},cofin{}))+1/2*chi(graph(n,cofin{1}))]", P2)
    assert ideal_limsup(I.OmegaSum(I.Fin()), y) == 1


def test_quotient_norm_examples():
    assert quotient_norm(I.Fin(), char_fn(AP(0, 2))) == 1
    assert quotient_norm(I.Pow(), X("seq[3*chi(cofin{})]")) == 0
    assert quotient_norm(I.Fin(), X("seq[3*chi(fin{0,1})+1/2*chi(ap(2,2))]")) == Q(1, 2)


def test_combine_examples():
    x = X("seq[2*chi(ap(1,3))]")
    assert seq_equal(combine(ADD, x, zero(NAT)), x)
    assert seq_equal(map_scalar(ABS, X("seq[-3*chi(ap(0,2))]")), X("seq[3*chi(ap(0,2))]"))
    m = combine(MEET, char_fn(AP(0, 2)), char_fn(AP(0, 3)))
    assert seq_equal(m, char_fn(AP(0, 6)))


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_pointwise_operations_match_values(domain):
    xs = seq_corpus(domain, count=12)
    pts = prefix_points(domain, 60)
    half = Scale(Q(1, 2))
    for x in xs[:6]:
        for y in xs[6:]:
            for op, f in ((ADD, lambda a, b: a + b), (MEET, min), (JOIN, max)):
                z = combine(op, x, y)
                for p in pts:
                    assert z.value(p) == f(x.value(p), y.value(p))
        h = map_scalar(half, x)
        a = map_scalar(ABS, x)
        for p in pts:
            assert h.value(p) == x.value(p) / 2
            assert a.value(p) == abs(x.value(p))


def test_decompose_join_examples():
    i, j = I.Fin(), I.Restrict(I.Pow(), AP(0, 2))
    y, z = decompose_join(i, j, zero(NAT))
    assert seq_equal(y, zero(NAT)) and seq_equal(z, zero(NAT))
    x = X("seq[1*chi(ap(0,2))+2*chi(fin{1,3})]")
    y, z = decompose_join(i, j, x)
    assert in_c0I(i, y).holds and in_c0I(j, z).holds
    assert seq_equal(combine(ADD, y, z), x)
    with pytest.raises(MembershipRequired):
        decompose_join(i, j, char_fn(AP(1, 2)))


def test_c0_disjoint_examples():
    x = X("seq[1*chi(ap(0,2))]")
    assert c0_disjoint(x, zero(NAT))
    assert c0_disjoint(char_fn(AP(0, 2)), char_fn(AP(1, 2)))
    assert not c0_disjoint(char_fn(AP(0, 2)), char_fn(AP(0, 4)))


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_limsup_is_monotone_and_positively_homogeneous(domain):
    xs = seq_corpus(domain, count=10, signed=False)
    for i in [I.Fin(domain), I.Pow(domain)]:
        for x in xs:
            a = ideal_limsup(i, x)
            b = ideal_limsup(i, map_scalar(Scale(Q(3)), x))
            assert b == (a if a in (NEG_INF, 0) else 3 * a)

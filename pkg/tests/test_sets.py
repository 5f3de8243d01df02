"""Set layer: documented examples plus property tests against the reference evaluator."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refeval import prefix_points, ref_contains, ref_members

from idealcalc.corpus import CORPUS_DOMAINS, set_corpus
from idealcalc.domains import NAT, RAT, Prod, pair
from idealcalc.errors import DomainMismatch, NotClosed
from idealcalc.eventual import EPSet
from idealcalc.maps import FinPerm, Identity, PairDecode, preimage
from idealcalc.sets import (AP, AscSeq, Cols, DescSeq, FinRat, FinSet, Graph, column_trace,
                            contains, difference, empty, enumerate_prefix, fin, cofin, from_ep,
                            intersect, is_empty, is_finite, is_subset, reverse_rationals,
                            set_equal, to_ep, to_text, union)
from idealcalc.dsl import parse_set

P2 = Prod(NAT)


# -- documented examples -----------------------------------------------------

def test_contains_examples():
    assert contains(AP(0, 2), 4)
    assert not contains(cofin(1, 2), 2)
    c = Cols(fin(3), cofin())
    assert contains(c, (3, 17))
    assert [p for p in prefix_points(P2, 33 * 33) if contains(c, p)] == \
        [p for p in prefix_points(P2, 33 * 33) if ref_contains(c, p)]


def test_union_examples():
    assert set_equal(union(fin(1), fin(2)), fin(1, 2))
    a = AP(3, 5)
    assert set_equal(union(a, empty(NAT)), a)
    u = union(AP(0, 2), AP(1, 2))
    assert set_equal(u, cofin())
    assert enumerate_prefix(u, 1000) == list(range(1000))


def test_intersect_examples():
    assert set_equal(intersect(AP(0, 2), AP(0, 3)), AP(0, 6))
    assert is_empty(intersect(AP(0, 2), AP(1, 2)))
    r = intersect(Cols(cofin(), fin(*range(6))), Cols(fin(3), cofin()))
    assert set_equal(r, Cols(fin(3), fin(*range(6))))
    pts = prefix_points(P2, 64 * 64)
    assert [p for p in pts if contains(r, p)] == [p for p in pts if ref_contains(r, p)]


def test_is_finite_examples():
    assert is_finite(fin(1, 2, 3))
    assert not is_finite(AP(5, 7))
    g = Graph(1, 0, cofin())
    assert not is_finite(g)
    for n in (10, 50, 200):
        assert len(ref_members(g, pair(n, n) + 1)) >= n


def test_preimage_examples():
    a = fin(0, 4, 9)
    assert set_equal(preimage(Identity(), a), a)
    assert set_equal(preimage(FinPerm(((0, 1), (1, 0))), fin(0)), fin(1))
    pre = preimage(PairDecode(), Cols(fin(0), fin(0, 1)))
    assert set_equal(pre, fin(pair(0, 0), pair(0, 1)))


def test_column_trace_examples():
    t = AP(1, 3)
    assert set_equal(column_trace(Cols(fin(3), t), 3), t)
    assert is_empty(column_trace(Cols(fin(3), t), 4))
    assert set_equal(column_trace(Graph(2, 0, cofin()), 5), fin(10))


def test_column_trace_needs_blocked_domain():
    with pytest.raises(DomainMismatch):
        column_trace(fin(1), 0)


def test_reverse_rationals_examples():
    assert set_equal(reverse_rationals(FinRat((Q(1, 2),))), FinRat((Q(-1, 2),)))
    r = reverse_rationals(AscSeq(Q(1), Q(1)))
    assert isinstance(r, DescSeq) and r.limit == -1
    assert set_equal(reverse_rationals(r), AscSeq(Q(1), Q(1)))


def test_enumerate_prefix_examples():
    assert enumerate_prefix(empty(NAT), 100) == []
    assert enumerate_prefix(AP(0, 2), 7) == [0, 2, 4, 6]
    assert enumerate_prefix(cofin(0), 4) == [1, 2, 3]


def test_rat_sequences_general_form():
    s = AscSeq(Q(0), Q(1), 2, 4)
    # parameters are reduced so that gcd(a, b) = 1
    assert (s.scale, s.a, s.b) == (Q(1, 2), 1, 2)
    # points -1/(2n+4) = -1/4, -1/6, ...
    assert contains(s, Q(-1, 4)) and contains(s, Q(-1, 6)) and not contains(s, Q(-1, 2))
    d = difference(AscSeq(Q(0), Q(1)), FinRat((Q(-1, 2),)))
    assert not contains(d, Q(-1, 2)) and contains(d, Q(-1)) and contains(d, Q(-1, 3))


def test_dsl_set_round_trip():
    for text in ["fin{1,2,3}", "cofin{0}", "ap(2,5)", "cols(fin{3},cofin{})",
                 "graph(2n+1,cofin{})"]:
        s = parse_set(text)
        assert to_text(s) == text
        assert set_equal(parse_set(to_text(s)), s)


# -- properties ----------------------------------------------------------------

def _brute(a, n):
    return [p for p in prefix_points(a.domain, n) if ref_contains(a, p)]


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_contains_and_prefix_match_reference(domain):
    for a in set_corpus(domain)[:30]:
        assert enumerate_prefix(a, 300) == _brute(a, 300), a


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_boolean_ops_match_reference(domain):
    sets = set_corpus(domain)[:10]
    pts = prefix_points(domain, 150)
    for a in sets:
        for b in sets:
            u, m = union(a, b), intersect(a, b)
            try:
                d = difference(a, b)
            except NotClosed:
                d = None
            for p in pts:
                ia, ib = ref_contains(a, p), ref_contains(b, p)
                assert contains(u, p) == (ia or ib)
                assert contains(m, p) == (ia and ib)
                if d is not None:
                    assert contains(d, p) == (ia and not ib)
            if d is not None:
                assert is_subset(m, a) and is_subset(d, a)


eps_sets = st.builds(
    lambda t, p, res, head: EPSet.make(t, p, tuple(r % p for r in res),
                                       tuple(h for h in head if h < t)),
    st.integers(0, 12), st.integers(1, 12),
    st.lists(st.integers(0, 50), max_size=6), st.lists(st.integers(0, 12), max_size=6))


def _members(e, n=80):
    return set(e.iter_upto(n))


@settings(max_examples=200, deadline=None)
@given(eps_sets, eps_sets)
def test_eventually_periodic_boolean_algebra(a, b):
    assert _members(a | b) == _members(a) | _members(b)
    assert _members(a & b) == _members(a) & _members(b)
    assert _members(a - b) == _members(a) - _members(b)
    # canonical form: extensionally equal sets compare equal
    assert (a | b) == (b | a)
    assert ((a - b) | (a & b)) == a


@settings(max_examples=200, deadline=None)
@given(eps_sets)
def test_grammar_round_trip_through_eventual_form(e):
    assert to_ep(from_ep(e)) == e


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 20), st.integers(1, 9), st.integers(0, 20), st.integers(1, 9))
def test_ap_intersection_is_crt(a, p, b, q):
    m = intersect(AP(a, p), AP(b, q))
    want = [k for k in range(200) if k >= a and k >= b and (k - a) % p == 0 and (k - b) % q == 0]
    assert [k for k in range(200) if contains(m, k)] == want

"""Ideal layer: documented membership, normalization, catalog and classification examples."""

import pytest

from idealcalc import ideals as I
from idealcalc.corpus import CORPUS_DOMAINS, ideal_corpus, set_corpus
from idealcalc.domains import NAT, RAT, Prod, Sigma, catalog_domain
from idealcalc.dsl import parse_set
from idealcalc.errors import DomainMismatch, NotClosed, Undecidable
from idealcalc.ordinals import Ordinal, parse_ordinal
from idealcalc.sets import AP, Cols, cofin, fin, intersect, is_finite, set_equal, union

P2 = Prod(NAT)


def S(text, domain=NAT):
    return parse_set(text, domain)


def test_membership_examples():
    assert I.member(I.Fin(), fin(1, 2, 3)).holds
    col3 = S("cols(fin{3},cofin{})", P2)
    r = I.member(I.OmegaSum(I.Fin()), col3)
    assert not r.holds and r.witness["column"] == 3
    r = I.member(I.Fubini(I.Fin(), I.Fin()), col3)
    assert r.holds and set_equal(r.witness["exceptional"], fin(3))
    r = I.member(I.Perp(I.OmegaSum(I.Fin())), S("cols(fin{0,1},cofin{})", P2))
    assert r.holds and r.witness["N"] == 1
    assert not I.member(I.WO(), S("desc(0,1)", RAT)).holds
    assert I.member(I.WO(), S("asc(0,1)", RAT)).holds
    assert I.member(I.WORev(), S("desc(0,1)", RAT)).holds


def test_restrict_requires_subset():
    r = I.Restrict(I.Pow(), AP(0, 2))
    assert I.member(r, AP(4, 2)).holds
    with pytest.raises(DomainMismatch):
        I.member(r, cofin())
    # inside a join an outside set is simply not accepted by that side
    j = I.Join(I.Fin(), r)
    assert I.member(j, union(AP(0, 2), fin(1, 3))).holds
    assert not I.member(j, cofin()).holds


def test_join_witness_splits_the_set():
    j = I.Join(I.WO(), I.WORev())
    a = S("U[asc(0,1/3),desc(0,1),osum[(0,1):asc(1,1/2),(1,2):desc(1,1/2)]]", RAT)
    r = I.member(j, a)
    assert r.holds
    left, right = r.witness["left"], r.witness["right"]
    assert I.member(I.WO(), left).holds and I.member(I.WORev(), right).holds
    assert set_equal(union(left, right), a)


def test_perp_normalize_examples():
    assert I.perp_normalize(I.Perp(I.Fin())) == I.Pow()
    assert I.perp_normalize(I.Perp(I.Pow())) == I.Fin()
    assert I.perp_normalize(I.Perp(I.Perp(I.WO()))) == I.WO()
    assert I.perp_normalize(I.Perp(I.WO())) == I.WORev()
    f = I.Perp(I.Fubini(I.Fin(), I.Fin()))
    assert I.perp_normalize(f) == f


def test_perp_without_rule_is_undecidable():
    with pytest.raises(Undecidable):
        I.member(I.Perp(I.Fubini(I.Fin(), I.Fin())), S("cols(fin{0},cofin{})", P2))


def test_catalog_examples():
    assert I.catalog(Ordinal.of(0)) == (I.Pow(), I.Fin())
    p1, _ = I.catalog(Ordinal.of(1))
    assert p1 == I.OmegaSum(I.Fin())
    p2, _ = I.catalog(Ordinal.of(2))
    assert p2 == I.OmegaSum(I.CatalogQ(Ordinal.of(1)))
    assert p2.domain == Prod(Prod(NAT)) == catalog_domain(Ordinal.of(2))


def test_catalog_limit_index_lives_on_block_domain():
    w = parse_ordinal("w")
    assert catalog_domain(w) == Sigma(w)
    assert I.CatalogP(w).domain == Sigma(w)


@pytest.mark.parametrize("text", ["0", "1", "2", "w", "w+1"])
def test_catalog_p_q_are_orthogonal_pairs(text):
    a = parse_ordinal(text)
    p, q = I.CatalogP(a), I.CatalogQ(a)
    assert I.perp_normalize(I.Perp(p)) == I.canonical(q)
    for s in set_corpus(p.domain)[:40]:
        # every set in both P and Q is finite (P and Q are orthogonal)
        try:
            both = I.member(p, s).holds and I.member(q, s).holds
        except (Undecidable, NotClosed, DomainMismatch):
            continue
        if both:
            assert is_finite(s)


def test_tall_and_frechet_examples():
    assert I.is_tall(I.Pow()).holds
    assert not I.is_tall(I.Fin()).holds
    r = I.is_tall(I.OmegaSum(I.Fin()))
    assert not r.holds and not is_finite(r.witness["infinite_orthogonal_set"])
    assert not I.is_tall(I.WO()).holds
    assert I.is_frechet(I.Fin()).holds
    assert I.is_frechet(I.WO()).holds
    assert I.is_frechet(I.CatalogP(Ordinal.of(1))).holds


def test_equivalence_examples():
    assert I.equivalent(I.Fin(), I.Fin()).kind == I.EQUAL
    r = I.equivalent(I.Fin(), I.Pow())
    assert r.kind == I.DISTINGUISHED and set_equal(r.witness, cofin())
    r = I.equivalent(I.Fubini(I.Fin(), I.Fin()),
                     I.Join(I.OmegaSum(I.Fin()), I.Perp(I.OmegaSum(I.Fin()))))
    assert r.kind == I.EQUAL


def test_metadata_examples():
    assert I.metadata(I.CatalogP(Ordinal.of(1)))["meager"]["value"] is True
    assert I.metadata(I.WO())["meager"]["value"] is True
    assert I.metadata(I.Pow())["contains_fin"]["value"] is True
    for entry in I.metadata(I.WO()).values():
        assert entry["justification"]


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_membership_is_hereditary_and_additive(domain):
    sets = set_corpus(domain)[:25]
    for i in ideal_corpus(domain):
        for a in sets:
            for b in sets[:8]:
                try:
                    ma, mb = I.member(i, a).holds, I.member(i, b).holds
                    mu = I.member(i, union(a, b)).holds
                    mi = I.member(i, intersect(a, b)).holds
                except (Undecidable, NotClosed, DomainMismatch):
                    continue
                assert mu == (ma and mb), (i, a, b)
                if ma or mb:
                    assert mi, (i, a, b)


@pytest.mark.parametrize("domain", CORPUS_DOMAINS, ids=str)
def test_every_ideal_contains_finite_sets(domain):
    finite = [s for s in set_corpus(domain) if is_finite(s)]
    for i in ideal_corpus(domain):
        for s in finite:
            try:
                assert I.member(i, s).holds, (i, s)
            except DomainMismatch:
                pass

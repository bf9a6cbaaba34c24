import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlqfa.automata import AlphabetError, accept_prob, empty_language_moqfa
from mlqfa.generate import random_mmqfa, random_qfa
from mlqfa.languages import CutpointQuery, bounded_language_relation, cutpoint_member, find_witness

from conftest import identity_qfa
from oracles import all_words, prob


def test_cutpoint_query_range():
    with pytest.raises(ValueError):
        CutpointQuery(1.2)
    with pytest.raises(ValueError):
        CutpointQuery(-0.1, strict=True)
    assert CutpointQuery(0.0).symbol == ">="


def test_cutpoint_member_examples():
    assert cutpoint_member(identity_qfa(), "ab", CutpointQuery(0.5, strict=True))
    E = empty_language_moqfa(0.5, 0.25)
    assert not cutpoint_member(E, "ab", CutpointQuery(0.5))
    # probability exactly at the cut-point
    assert cutpoint_member(E, "a", CutpointQuery(0.25))
    assert not cutpoint_member(E, "a", CutpointQuery(0.25, strict=True))
    assert CutpointQuery(0.25).ambiguous(0.25 + 1e-12)


def test_find_witness_examples(corpus):
    r = find_witness(identity_qfa(), CutpointQuery(0.5, strict=True), 3)
    assert r.found and r.word == "" and r.probability == pytest.approx(1)
    r = find_witness(empty_language_moqfa(0.5, 0.25), CutpointQuery(0.5), 5)
    assert not r.found and r.examined == 2 ** 6 - 1 and r.max_len == 5
    r = find_witness(corpus, CutpointQuery(0.9, strict=True), 3)
    assert r.found and r.word == "a" and r.probability == pytest.approx(1)
    with pytest.raises(ValueError):
        find_witness(corpus, CutpointQuery(0.5), -1)


def test_find_witness_mmqfa_uses_accept_probability():
    A = random_mmqfa(3, 2, 2, 4)
    lam = sorted(prob(A, w) for w in all_words("ab", 3))[-3]
    r = find_witness(A, CutpointQuery(lam), 3)
    assert r.found and prob(A, r.word) >= lam - 1e-9
    earlier = list(all_words("ab", 3))
    assert all(prob(A, w) < lam - 1e-9 for w in earlier[:earlier.index(r.word)])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 1), st.booleans(), st.integers(0, 4))
def test_find_witness_monotone_in_max_len(seed, lam, strict, t):
    A = random_qfa(2, 2, 2, seed)
    q = CutpointQuery(lam, strict)
    r = find_witness(A, q, t)
    for extra in (1, 3):
        r2 = find_witness(A, q, t + extra)
        if r.found:
            assert r2.found and r2.word == r.word
    if r.found:
        p = accept_prob(A, r.word)
        assert (p > lam + 1e-9) if strict else (p >= lam - 1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_member_agrees_with_direct_comparison(seed):
    A = random_qfa(3, 2, 2, seed)
    q = CutpointQuery(0.4)
    for w in all_words("ab", 4):
        assert cutpoint_member(A, w, q) == (prob(A, w) >= 0.4 - 1e-9)


def test_relation_examples(corpus, corpus_complement):
    q = CutpointQuery(0.5)
    assert bounded_language_relation(corpus, corpus, q, "equal", 4).consistent
    r = bounded_language_relation(corpus, corpus_complement, q, "equal", 2)
    assert not r.consistent
    # the empty word is the first refutation: it belongs to the complement only
    assert (r.word, r.member1, r.member2) == ("", False, True)
    r = bounded_language_relation(corpus_complement, corpus, q, "subset", 2)
    assert (r.word, r.member1, r.member2) == ("", True, False)
    r = bounded_language_relation(corpus, corpus_complement, q, "subset", 2)
    assert (r.word, r.member1, r.member2) == ("a", True, False)
    E1, E2 = empty_language_moqfa(0.5, 0.25), empty_language_moqfa(0.5, 0.1)
    assert bounded_language_relation(E1, E2, q, "equal", 5).consistent


def test_proper_subset():
    E = empty_language_moqfa(0.5, 0.25)
    full = identity_qfa()
    r = bounded_language_relation(E, full, CutpointQuery(0.5), "proper-subset", 3)
    assert r.consistent and r.strictness_witness == ""
    r = bounded_language_relation(full, E, CutpointQuery(0.5), "proper-subset", 3)
    assert not r.consistent
    assert "not a proof" in bounded_language_relation(E, E, CutpointQuery(0.5), "subset", 2).to_dict()["note"]


def test_relation_errors(corpus):
    with pytest.raises(ValueError):
        bounded_language_relation(corpus, corpus, CutpointQuery(0.5), "superset", 2)
    with pytest.raises(AlphabetError):
        bounded_language_relation(corpus, random_qfa(2, 1, 3, 0), CutpointQuery(0.5), "equal", 2)


@pytest.mark.parametrize("seed", range(4))
def test_refutations_are_sound(seed):
    A1, A2 = random_qfa(2, 2, 2, seed), random_qfa(2, 1, 2, 99 + seed)
    q = CutpointQuery(0.5, strict=bool(seed % 2))
    for rel in ("equal", "subset"):
        r = bounded_language_relation(A1, A2, q, rel, 6)
        if not r.consistent:
            m1 = prob(A1, r.word) > 0.5 if q.strict else prob(A1, r.word) >= 0.5
            m2 = prob(A2, r.word) > 0.5 if q.strict else prob(A2, r.word) >= 0.5
            assert m1 != m2 and (m1, m2) == (r.member1, r.member2)

import logging
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from woafs.corpus import (NEGATIVE, POSITIVE, Document, Vocabulary, WordList, apply_frequency_filter,
                          build_candidate_pools, build_vocabulary, load_corpus, load_documents,
                          load_word_list, tokenize)
from woafs.errors import IngestionError, PoolError


def doc(tokens, label=POSITIVE, i=0):
    return Document(tuple(tokens), label, i)


@pytest.mark.parametrize("text, expected", [
    ("Awesome RECEPTION!", ["awesome", "reception!"]),
    ("", []),
    ("a  b\tc", ["a", "b", "c"]),
    ("  Forever.  ", ["forever."]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


@given(st.text())
def test_tokens_have_no_whitespace_or_uppercase(text):
    for tok in tokenize(text):
        assert tok
        assert not any(c.isspace() for c in tok)
        assert tok == tok.lower()


def test_load_documents(tmp_path):
    p = tmp_path / "pos.txt"
    p.write_text("Great phone!\nbad battery\n", encoding="utf-8")
    docs = load_documents(p, POSITIVE)
    assert [d.tokens for d in docs] == [("great", "phone!"), ("bad", "battery")]
    assert [d.id for d in docs] == [0, 1]
    assert {d.label for d in docs} == {POSITIVE}


def test_load_documents_empty_and_blank_lines(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("", encoding="utf-8")
    assert load_documents(empty, NEGATIVE) == []

    gappy = tmp_path / "gappy.txt"
    gappy.write_text("one review\n\nanother one\n", encoding="utf-8")
    assert len(load_documents(gappy, NEGATIVE)) == 2


def test_load_documents_errors(tmp_path):
    missing = tmp_path / "nope.txt"
    with pytest.raises(IngestionError, match="nope.txt"):
        load_documents(missing, POSITIVE)

    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"fine line\nalso fine\nbroken \xff byte\n")
    with pytest.raises(IngestionError, match=":3:"):
        load_documents(bad, POSITIVE)


def test_load_corpus_ids_are_unique(tmp_path):
    (tmp_path / "p.txt").write_text("a b\nc\n", encoding="utf-8")
    (tmp_path / "n.txt").write_text("d\n", encoding="utf-8")
    docs = load_corpus(tmp_path / "p.txt", tmp_path / "n.txt")
    assert [d.id for d in docs] == [0, 1, 2]
    assert [d.label for d in docs] == [POSITIVE, POSITIVE, NEGATIVE]


def test_word_list_comments_and_case(tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("# seed words\nGood\ngood\n\n  Easy \n", encoding="utf-8")
    assert load_word_list(p, POSITIVE).words == {"good", "easy"}


def test_build_vocabulary():
    v = build_vocabulary([doc(["good", "good"]), doc(["bad"], NEGATIVE, 1)])
    assert v.entries == {"good": 2, "bad": 1}
    assert v.record_count == 2
    assert build_vocabulary([]) == Vocabulary({}, 0)


def test_build_vocabulary_against_stream_count():
    docs = [doc(["the", "x", "the"], i=i) for i in range(3)]
    stream = [t for d in docs for t in d.tokens]
    oracle = {t: sum(1 for s in stream if s == t) for t in set(stream)}
    assert build_vocabulary(docs).entries == oracle
    assert oracle["the"] == 6


@pytest.mark.parametrize("entries, records, expected", [
    ({"rare": 1, "ok": 3, "the": 60}, 100, {"ok": 3}),
    ({"rare": 1, "ok": 3, "the": 60}, 120, {"ok": 3, "the": 60}),
    ({"ok": 3, "the": 60}, 119, {"ok": 3}),
    ({"x": 2}, 1000, {}),
    ({"y": 3}, 4, {}),
    ({"y": 3}, 5, {}),
    ({"y": 3}, 6, {"y": 3}),
])
def test_frequency_filter(entries, records, expected):
    # oracle: remove iff count <= 2 or 2 * count > records
    oracle = {t: c for t, c in entries.items() if not (c <= 2 or 2 * c > records)}
    assert oracle == expected
    assert apply_frequency_filter(Vocabulary(entries, records)).entries == expected


def test_frequency_filter_empty_records():
    assert apply_frequency_filter(Vocabulary({"a": 5}, 0)).entries == {}


vocabs = st.builds(
    Vocabulary,
    st.dictionaries(st.text(min_size=1, max_size=4), st.integers(1, 60), max_size=20),
    st.integers(1, 100),
)


@given(vocabs)
def test_frequency_filter_idempotent_and_bounded(v):
    once = apply_frequency_filter(v)
    assert apply_frequency_filter(once) == once
    for c in once.entries.values():
        assert 3 <= c <= v.record_count // 2


def test_candidate_pools():
    v = Vocabulary({"good": 5, "bad": 4, "the": 9}, 20)
    pools = build_candidate_pools(v, WordList(POSITIVE, frozenset({"good"})), WordList(NEGATIVE, frozenset({"bad"})))
    assert pools.positive_pool == ("good",)
    assert pools.negative_pool == ("bad",)


def test_candidate_pools_neutral_only():
    v = Vocabulary({"see": 7}, 20)
    with pytest.raises(PoolError, match="candidate pool empty: positive and negative"):
        build_candidate_pools(v, WordList(POSITIVE, frozenset({"good"})), WordList(NEGATIVE, frozenset({"bad"})))


def test_candidate_pools_overlap_warns(caplog):
    v = Vocabulary({"cheap": 5, "good": 4, "bad": 3}, 20)
    pos = WordList(POSITIVE, frozenset({"cheap", "good"}))
    neg = WordList(NEGATIVE, frozenset({"cheap", "bad"}))
    with caplog.at_level(logging.WARNING):
        pools = build_candidate_pools(v, pos, neg)
    assert "cheap" in caplog.text
    assert "cheap" in pools.positive_pool and "cheap" in pools.negative_pool
    assert set(pools.positive_pool) == set(v.entries) & pos.words
    assert set(pools.negative_pool) == set(v.entries) & neg.words


@given(vocabs, st.sets(st.text(min_size=1, max_size=4)), st.sets(st.text(min_size=1, max_size=4)))
def test_pools_sorted_subset_of_vocabulary(v, pos, neg):
    try:
        pools = build_candidate_pools(v, WordList(POSITIVE, frozenset(pos)), WordList(NEGATIVE, frozenset(neg)))
    except PoolError:
        return
    for pool in (pools.positive_pool, pools.negative_pool):
        assert list(pool) == sorted(pool)
        assert set(pool) <= set(v.entries)


def test_pipeline_is_deterministic(fixtures_dir):
    d = fixtures_dir / "smoke"
    results = []
    for _ in range(2):
        docs = load_corpus(d / "reviews-positive.txt", d / "reviews-negative.txt")
        pos = load_word_list(d / "words-positive.txt", POSITIVE)
        neg = load_word_list(d / "words-negative.txt", NEGATIVE)
        pools = build_candidate_pools(apply_frequency_filter(build_vocabulary(docs)), pos, neg)
        results.append(repr(pools).encode())
    assert results[0] == results[1]

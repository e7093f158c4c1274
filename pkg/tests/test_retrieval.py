import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmbench import (
    DuplicateEntryError,
    add_entry,
    build_index,
    ir_query,
    parse_tm_file,
    retrieve_matches,
    segment,
    similarity,
)

from conftest import make_entry, random_text, synthetic_corpus
from oracles import cosine_tfidf


class TestBuildIndex:
    def test_empty_corpus(self):
        index = build_index([])
        assert index.doc_count == 0
        assert index.postings == {}

    def test_term_counting(self):
        index = build_index([make_entry("e1", "a b a", "x")])
        assert index.postings["a"] == [("e1", 2)]
        assert index.postings["b"] == [("e1", 1)]
        assert index.doc_frequency == {"a": 1, "b": 1}
        assert index.lengths == {"e1": 3}

    def test_document_frequency(self):
        index = build_index(
            [make_entry("e1", "the cat", "x"), make_entry("e2", "the dog", "y")]
        )
        assert index.doc_frequency["the"] == 2
        assert index.doc_frequency["cat"] == 1

    def test_duplicate_id_rejected(self):
        with pytest.raises(DuplicateEntryError) as err:
            build_index([make_entry("e1", "a", "x"), make_entry("e1", "b", "y")])
        assert err.value.entry_id == "e1"

    def test_rebuild_is_identical(self):
        entries = [make_entry(f"e{i}", random_text(random.Random(i)), "t") for i in range(20)]
        assert build_index(entries) == build_index(entries)


class TestAddEntry:
    def test_add_to_empty_equals_build(self):
        entry = make_entry("e1", "a b", "x")
        index = add_entry(build_index([]), entry)
        assert index == build_index([entry])

    def test_order_independent(self):
        e1, e2, e3 = (
            make_entry("e1", "a b", "x"),
            make_entry("e2", "b c", "y"),
            make_entry("e3", "c a", "z"),
        )
        left = build_index([e1])
        add_entry(left, e2)
        add_entry(left, e3)
        right = build_index([e1])
        add_entry(right, e3)
        add_entry(right, e2)
        assert left == right == build_index([e1, e2, e3])

    def test_doc_count_increments(self):
        index = build_index([])
        for i in range(5):
            assert index.doc_count == i
            add_entry(index, make_entry(f"e{i}", f"word{i}", "t"))
        assert index.doc_count == 5

    def test_duplicate_rejected(self):
        index = build_index([make_entry("e1", "a", "x")])
        with pytest.raises(DuplicateEntryError):
            add_entry(index, make_entry("e1", "b", "y"))

    @given(st.permutations(list(range(6))))
    @settings(max_examples=30, deadline=None)
    def test_permutation_equivalence(self, order):
        entries = [make_entry(f"e{i}", f"w{i} shared tok{i % 3}", "t") for i in range(6)]
        index = build_index([])
        for i in order:
            add_entry(index, entries[i])
        assert index == build_index(entries)


class TestIrQuery:
    def test_no_shared_terms(self):
        index = build_index([make_entry("e1", "alpha bravo", "x")])
        assert ir_query(index, segment("zulu yankee"), 5) == []

    def test_k_zero(self):
        index = build_index([make_entry("e1", "alpha", "x")])
        assert ir_query(index, segment("alpha"), 0) == []

    def test_single_entry_overlap(self):
        index = build_index([make_entry("e1", "alpha bravo", "x")])
        result = ir_query(index, segment("alpha charlie"), 5)
        assert [c.entry_id for c in result] == ["e1"]

    def test_verbatim_ranks_first_and_matches_brute_cosine(self, rng):
        entries = synthetic_corpus(rng, 50)
        index = build_index(entries)
        docs = [list(e.source.norms()) for e in entries]
        for probe in (entries[0], entries[17], entries[49]):
            query = segment(probe.source.raw)
            result = ir_query(index, query, 10)
            assert result[0].entry_id == probe.id
            # every reported score equals a brute-force dense cosine
            by_id = {e.id: list(e.source.norms()) for e in entries}
            for cand in result:
                expected = cosine_tfidf(list(query.norms()), by_id[cand.entry_id], docs)
                assert cand.ir_score == pytest.approx(expected, abs=1e-12)

    def test_deterministic(self, rng):
        entries = synthetic_corpus(rng, 30)
        index = build_index(entries)
        query = segment(entries[3].source.raw + " bravo alpha")
        first = ir_query(index, query, 10)
        second = ir_query(index, query, 10)
        assert first == second


class TestRetrieveMatches:
    def test_verbatim_query_is_top1_with_unit_similarity(self, rng):
        entries = synthetic_corpus(rng, 40)
        index = build_index(entries)
        store = {e.id: e for e in entries}
        query = segment(entries[7].source.raw)
        result = retrieve_matches(index, store, query)
        assert result[0].entry_id == entries[7].id
        assert result[0].sim_score == 1.0

    def test_n_greater_than_k_rejected(self):
        index = build_index([])
        with pytest.raises(ValueError):
            retrieve_matches(index, {}, segment("a"), k=2, n=3)

    def test_k_one_is_noop_rerank(self, rng):
        entries = synthetic_corpus(rng, 20)
        index = build_index(entries)
        store = {e.id: e for e in entries}
        query = segment(entries[4].source.raw)
        pruned = ir_query(index, query, 1)
        result = retrieve_matches(index, store, query, k=1, n=1)
        assert [c.entry_id for c in result] == [c.entry_id for c in pruned]

    def test_top1_maximizes_similarity_over_candidates(self, rng):
        entries = synthetic_corpus(rng, 60)
        index = build_index(entries)
        store = {e.id: e for e in entries}
        for _ in range(10):
            query = segment(random_text(rng) + f" mark{rng.randrange(60)}")
            candidates = ir_query(index, query, 20)
            if not candidates:
                continue
            result = retrieve_matches(index, store, query, k=20, n=5)
            best = max(similarity(query, store[c.entry_id].source) for c in candidates)
            assert result[0].sim_score == best

    def test_brute_force_bypass_agrees_on_top1(self, rng):
        entries = synthetic_corpus(rng, 30)
        index = build_index(entries)
        store = {e.id: e for e in entries}
        query = segment(entries[11].source.raw)
        pruned = retrieve_matches(index, store, query, k=20, n=3)
        brute = retrieve_matches(index, store, query, k=20, n=3, brute_force=True)
        assert pruned[0].entry_id == brute[0].entry_id
        assert pruned[0].sim_score == brute[0].sim_score


class TestTmFileParsing:
    def test_basic_with_alignment(self):
        entries, warnings = parse_tm_file("the cat\tdie Katze\t0-0 1-1\n")
        assert warnings == []
        assert len(entries) == 1
        assert entries[0].alignment == {(0, 0), (1, 1)}

    def test_comments_and_blank_lines_ignored(self):
        entries, warnings = parse_tm_file("# a comment\n\nsrc\ttgt\n")
        assert len(entries) == 1
        assert warnings == []

    def test_missing_tab_reported_with_line_number(self):
        entries, warnings = parse_tm_file("good\tline\nbad line\nalso\tgood\n")
        assert len(entries) == 2
        assert len(warnings) == 1
        assert "line 2" in warnings[0]

    def test_bad_alignment_token_drops_alignment_only(self):
        entries, warnings = parse_tm_file("a b\tx y\tx-y\n")
        assert len(entries) == 1
        assert entries[0].alignment == frozenset()
        assert "line 1" in warnings[0]

    def test_out_of_range_alignment_dropped(self):
        entries, warnings = parse_tm_file("a b\tx\t0-5\n")
        assert entries[0].alignment == frozenset()
        assert len(warnings) == 1

    def test_ids_stable_across_reparses(self):
        text = "a b\tx y\nc d\tz w\n"
        first, _ = parse_tm_file(text)
        second, _ = parse_tm_file(text)
        assert [e.id for e in first] == [e.id for e in second]

from tmbench import (
    Origin,
    SuggestionTables,
    assemble_suggestions,
    build_index,
    retrieve_matches,
    segment,
)

import pytest

from conftest import make_entry


@pytest.fixture
def small_tm():
    entries = [
        make_entry("e1", "the cat sat", "die Katze sass", {(0, 0), (1, 1), (2, 2)}),
        make_entry("e2", "the dog ran", "der Hund lief", {(0, 0), (1, 1), (2, 2)}),
        make_entry("e3", "a black cat", "eine schwarze Katze", {(0, 0), (1, 1), (2, 2)}),
    ]
    return build_index(entries), {e.id: e for e in entries}


class TestIngest:
    def test_counts_records(self):
        tables = SuggestionTables()
        count, warnings = tables.ingest(Origin.MT, "s1\thello\ns2\tworld\n")
        assert count == 2
        assert warnings == []

    def test_empty_input(self):
        tables = SuggestionTables()
        assert tables.ingest(Origin.MT, "") == (0, [])

    def test_malformed_line_reported_and_skipped(self):
        tables = SuggestionTables()
        count, warnings = tables.ingest(Origin.APE, "s1\ta\nno tab here\ns3\tc\n")
        assert count == 2
        assert len(warnings) == 1
        assert "line 2" in warnings[0]
        assert tables.lookup(Origin.APE, "s1") == "a"
        assert tables.lookup(Origin.APE, "s3") == "c"

    def test_last_write_wins(self):
        tables = SuggestionTables()
        tables.ingest(Origin.MT, "s1\tfirst\n")
        tables.ingest(Origin.MT, "s1\tsecond\n")
        assert tables.lookup(Origin.MT, "s1") == "second"

    def test_idempotent_for_identical_payload(self):
        tables = SuggestionTables()
        tables.ingest(Origin.MT, "s1\ttext\n")
        before = tables.snapshot()
        tables.ingest(Origin.MT, "s1\ttext\n")
        assert tables.snapshot() == before

    def test_origins_kept_separate(self):
        tables = SuggestionTables()
        tables.ingest(Origin.MT, "s1\tmt out\n")
        tables.ingest(Origin.APE, "s1\tape out\n")
        assert tables.lookup(Origin.MT, "s1") == "mt out"
        assert tables.lookup(Origin.APE, "s1") == "ape out"

    def test_tm_origin_rejected(self):
        tables = SuggestionTables()
        with pytest.raises(ValueError):
            tables.ingest(Origin.TM, "s1\tx\n")


class TestAssemble:
    def test_verbatim_hit_without_mt(self, small_tm):
        index, entries = small_tm
        got = assemble_suggestions(segment("the cat sat", "s1"), index, entries)
        assert got.tm[0].entry_id == "e1"
        assert got.tm[0].sim_score == 1.0
        assert got.mt is None and got.ape is None

    def test_empty_tm_with_mt_table(self):
        tables = SuggestionTables()
        tables.ingest(Origin.MT, "s1\tmaschinelle Ausgabe\n")
        got = assemble_suggestions(
            segment("anything", "s1"), build_index([]), {}, tables
        )
        assert got.tm == ()
        assert got.mt == "maschinelle Ausgabe"

    def test_deterministic(self, small_tm):
        index, entries = small_tm
        seg = segment("the black cat sat", "s9")
        assert assemble_suggestions(seg, index, entries) == assemble_suggestions(
            seg, index, entries
        )

    def test_order_agrees_with_retrieval(self, small_tm):
        index, entries = small_tm
        seg = segment("the cat ran", "s2")
        got = assemble_suggestions(seg, index, entries)
        ranked = retrieve_matches(index, entries, seg)
        assert [s.entry_id for s in got.tm] == [c.entry_id for c in ranked]
        sims = [s.sim_score for s in got.tm]
        assert sims == sorted(sims, reverse=True)

    def test_min_similarity_gate(self, small_tm):
        index, entries = small_tm
        seg = segment("the cat sat", "s3")
        gated = assemble_suggestions(seg, index, entries, min_similarity=0.9)
        assert [s.entry_id for s in gated.tm] == ["e1"]

    def test_green_target_count(self, small_tm):
        index, entries = small_tm
        got = assemble_suggestions(segment("the cat sat", "s1"), index, entries)
        assert got.tm[0].green_target_count == 3

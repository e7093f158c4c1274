"""Two-stage fuzzy retrieval: TF-IDF pruning, then similarity re-ranking.

Loads the sample TM, queries a few paraphrased inputs, and shows how the
IR stage narrows the memory before the edit-based score ranks what the
translator actually sees.
"""

from pathlib import Path

from tmbench import build_index, ir_query, parse_tm_file, retrieve_matches, segment

DATA = Path(__file__).parent / "data"

entries, warnings = parse_tm_file(
    (DATA / "sample.tm.tsv").read_text("utf-8"), "en", "de"
)
for w in warnings:
    print("warning:", w)
store = {e.id: e for e in entries}
index = build_index(entries)
print(f"indexed {index.doc_count} TM entries, {len(index.postings)} distinct terms\n")

QUERIES = [
    "the cat sat on the mat",          # verbatim hit
    "the weather is lovely today",     # one word changed
    "at noon the train leaves",        # reordered
    "completely unrelated content",    # no usable match
]

for text in QUERIES:
    query = segment(text, lang="en")
    print(f"query: {text!r}")
    pruned = ir_query(index, query, 5)
    print(f"  IR candidates: {[(c.entry_id, round(c.ir_score, 3)) for c in pruned]}")
    ranked = retrieve_matches(index, store, query, k=20, n=3)
    for cand in ranked:
        entry = store[cand.entry_id]
        print(
            f"  sim={cand.sim_score:.3f} ir={cand.ir_score:.3f} "
            f"{entry.source.raw!r} -> {entry.target.raw!r}"
        )
    if not ranked:
        print("  (nothing retrieved)")
    print()

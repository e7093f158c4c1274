"""Green/red coloring of TM suggestions, on both source and target sides.

Matched source words render green and project to the target through the
word alignments; a target word stays green only if all its aligned
source words matched.  The terminal output uses ANSI colors.
"""

from pathlib import Path

from tmbench import (
    GREEN,
    build_index,
    label_source,
    merge_spans,
    parse_tm_file,
    project_to_target,
    retrieve_matches,
    segment,
    ter_align,
)

DATA = Path(__file__).parent / "data"
ANSI = {"G": "\x1b[32m", "R": "\x1b[31m"}
RESET = "\x1b[0m"


def paint(tokens, labels):
    return " ".join(
        f"{ANSI[lbl.color]}{tok}{RESET}" for tok, lbl in zip(tokens, labels)
    )


entries, _ = parse_tm_file((DATA / "sample.tm.tsv").read_text("utf-8"), "en", "de")
store = {e.id: e for e in entries}
index = build_index(entries)

for text in [
    "the cat sat on the mat",
    "the weather is lovely today",
    "the committee rejected the budget",
    "she reads a magazine every evening",
]:
    query = segment(text, lang="en")
    print(f"input: {text!r}")
    for cand in retrieve_matches(index, store, query, n=2):
        entry = store[cand.entry_id]
        script = ter_align(query, entry.source)
        src_labels = label_source(query, entry.source, script)
        tgt_labels = project_to_target(src_labels, entry)
        print(f"  sim={cand.sim_score:.2f}  {paint(entry.source.surfaces(), src_labels)}")
        print(f"           -> {paint(entry.target.surfaces(), tgt_labels)}")
        print(f"     source spans: {merge_spans(src_labels)}")
        print(f"     target spans: {merge_spans(tgt_labels)}")
        green = sum(1 for lbl in tgt_labels if lbl.color == GREEN)
        print(f"     green target words: {green}/{len(tgt_labels)}")
    print()

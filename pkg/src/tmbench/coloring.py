"""Green/red match coloring of TM suggestions.

Matched fragments of a suggestion render green, mismatches red, on both
the source and the target side.  Source labels come straight from the
edit alignment between the input and the TM source; target labels are
projected through the entry's word alignments: a target word is green
only when every source word it links to matched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .retrieval import TMEntry
from .textcore import EditOpKind, EditScript, Segment

GREEN = "G"
RED = "R"


@dataclass(frozen=True)
class TokenLabel:
    index: int
    color: str  # GREEN or RED


@dataclass(frozen=True)
class ColoredSuggestion:
    """A TM candidate with per-token colors on both sides."""

    entry_id: str
    source_labels: Tuple[TokenLabel, ...]
    target_labels: Tuple[TokenLabel, ...]
    sim_score: float
    ir_score: float
    green_target_count: int


def label_source(query: Segment, tm_source: Segment, script: EditScript) -> list[TokenLabel]:
    """Color the TM source against the query: green iff matched.

    `script` must be the alignment of the query (hypothesis) against this
    TM source (reference); anything dimensionally inconsistent is
    rejected.
    """
    n_ref = len(tm_source.tokens)
    if script.matches + script.substitutions + script.insertions != n_ref:
        raise ValueError("edit script does not cover the TM source segment")
    if script.matches + script.substitutions + script.deletions != len(query.tokens):
        raise ValueError("edit script does not cover the query segment")
    green: set[int] = set()
    for op in script.ops:
        if op.ref_index is not None and not (0 <= op.ref_index < n_ref):
            raise ValueError(f"ref index {op.ref_index} out of range")
        if op.kind is EditOpKind.MATCH:
            green.add(op.ref_index)
    return [TokenLabel(i, GREEN if i in green else RED) for i in range(n_ref)]


def diagonal_alignment(n_source: int, n_target: int) -> frozenset[Tuple[int, int]]:
    """Fallback alignment for alignment-free entries: target token j links
    to source token round(j * n_source / n_target), clamped into range."""
    if n_source == 0 or n_target == 0:
        return frozenset()
    links = set()
    for j in range(n_target):
        i = int(j * n_source / n_target + 0.5)
        links.add((min(i, n_source - 1), j))
    return frozenset(links)


def project_to_target(
    source_labels: Sequence[TokenLabel], entry: TMEntry
) -> list[TokenLabel]:
    """Project source colors onto the entry's target side.

    A target token is green iff it has at least one alignment link and
    every linked source token is green; unaligned target tokens are red.
    Entries without alignments use the diagonal fallback.
    """
    n_src = len(entry.source.tokens)
    n_tgt = len(entry.target.tokens)
    covered = sorted(lbl.index for lbl in source_labels)
    if covered != list(range(n_src)):
        raise ValueError("source labels do not cover the entry source segment")
    green_src = {lbl.index for lbl in source_labels if lbl.color == GREEN}
    links = entry.alignment or diagonal_alignment(n_src, n_tgt)
    linked_src: dict[int, list[int]] = {}
    for i, j in links:
        linked_src.setdefault(j, []).append(i)
    labels = []
    for j in range(n_tgt):
        sources = linked_src.get(j)
        ok = bool(sources) and all(i in green_src for i in sources)
        labels.append(TokenLabel(j, GREEN if ok else RED))
    return labels


def merge_spans(labels: Sequence[TokenLabel]) -> list[Tuple[int, int, str]]:
    """Collapse labels into maximal (start, end-exclusive, color) runs."""
    ordered = sorted(labels, key=lambda lbl: lbl.index)
    if [lbl.index for lbl in ordered] != list(range(len(ordered))):
        raise ValueError("labels must cover 0..n-1 without gaps or duplicates")
    spans: list[Tuple[int, int, str]] = []
    for lbl in ordered:
        if spans and spans[-1][2] == lbl.color and spans[-1][1] == lbl.index:
            spans[-1] = (spans[-1][0], lbl.index + 1, lbl.color)
        else:
            spans.append((lbl.index, lbl.index + 1, lbl.color))
    return spans


def expand_spans(spans: Iterable[Tuple[int, int, str]]) -> list[TokenLabel]:
    """Inverse of merge_spans."""
    labels = []
    for start, end, color in spans:
        labels.extend(TokenLabel(i, color) for i in range(start, end))
    return labels


def to_span_json(suggestion: ColoredSuggestion, entry: TMEntry) -> dict:
    """Wire shape consumed by the UI; the entryId/sim/sourceSpans/targetSpans
    field names and span ordering are contractual."""
    return {
        "entryId": suggestion.entry_id,
        "sim": suggestion.sim_score,
        "sourceSpans": [list(span) for span in merge_spans(suggestion.source_labels)],
        "targetSpans": [list(span) for span in merge_spans(suggestion.target_labels)],
        "ir": suggestion.ir_score,
        "greenTargetCount": suggestion.green_target_count,
        "sourceTokens": list(entry.source.surfaces()),
        "targetTokens": list(entry.target.surfaces()),
        "sourceText": entry.source.raw,
        "targetText": entry.target.raw,
    }

"""Per-segment suggestion assembly: colored TM candidates, MT, APE, scratch.

MT and APE output is ingestion-only: third-party system output is uploaded
as tab-separated tables keyed by segment id, then served next to the TM
candidates.  A provider seam (`SuggestionProvider`) keeps the door open
for live engines, but the table provider is the only one shipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Protocol, Tuple

from .coloring import (
    ColoredSuggestion,
    GREEN,
    label_source,
    project_to_target,
)
from .retrieval import (
    DEFAULT_IR_CANDIDATES,
    DEFAULT_SUGGESTIONS,
    Index,
    TMEntry,
    retrieve_matches,
)
from .textcore import Segment, ter_align


class Origin(Enum):
    """Where a post-edited translation started from."""

    TM = "TM"
    MT = "MT"
    APE = "APE"
    SCRATCH = "SCRATCH"


@dataclass(frozen=True)
class SuggestionSet:
    segment_id: str
    tm: Tuple[ColoredSuggestion, ...]
    mt: Optional[str] = None
    ape: Optional[str] = None


class SuggestionProvider(Protocol):
    def lookup(self, origin: Origin, segment_id: str) -> Optional[str]: ...


class SuggestionTables:
    """Uploaded MT/APE translations, last write wins per (origin, segment)."""

    def __init__(self):
        self._tables: dict[Tuple[Origin, str], str] = {}

    def ingest(self, origin: Origin, lines: str) -> Tuple[int, list[str]]:
        """Store one `segmentId TAB translation` record per line.

        Malformed lines are reported with their line number and skipped;
        the rest of the file is still ingested.  Returns (count, warnings).
        """
        if origin not in (Origin.MT, Origin.APE):
            raise ValueError(f"only MT and APE tables can be ingested, got {origin}")
        count = 0
        warnings: list[str] = []
        for lineno, line in enumerate(lines.splitlines(), start=1):
            if not line.strip():
                continue
            seg_id, sep, translation = line.partition("\t")
            if not sep or not seg_id.strip():
                warnings.append(f"line {lineno}: expected 'segmentId<TAB>translation', skipped")
                continue
            self._tables[(origin, seg_id.strip())] = translation
            count += 1
        return count, warnings

    def lookup(self, origin: Origin, segment_id: str) -> Optional[str]:
        return self._tables.get((origin, segment_id))

    def snapshot(self) -> dict[Tuple[str, str], str]:
        return {(o.value, sid): text for (o, sid), text in self._tables.items()}


def assemble_suggestions(
    seg: Segment,
    index: Index,
    entries: Mapping[str, TMEntry],
    tables: Optional[SuggestionTables] = None,
    k: int = DEFAULT_IR_CANDIDATES,
    n: int = DEFAULT_SUGGESTIONS,
    min_similarity: float = 0.0,
) -> SuggestionSet:
    """The full suggestion set for one segment.

    TM candidates are retrieved, aligned, colored on both sides, and kept
    in retrieval order (similarity descending); MT/APE come from the
    ingested tables when they cover the segment.
    """
    colored: list[ColoredSuggestion] = []
    for cand in retrieve_matches(index, entries, seg, k=k, n=n):
        if cand.sim_score < min_similarity:
            continue
        entry = entries[cand.entry_id]
        script = ter_align(seg, entry.source)
        src_labels = label_source(seg, entry.source, script)
        tgt_labels = project_to_target(src_labels, entry)
        colored.append(
            ColoredSuggestion(
                entry_id=cand.entry_id,
                source_labels=tuple(src_labels),
                target_labels=tuple(tgt_labels),
                sim_score=cand.sim_score,
                ir_score=cand.ir_score,
                green_target_count=sum(1 for lbl in tgt_labels if lbl.color == GREEN),
            )
        )
    lookup = tables.lookup if tables is not None else (lambda origin, sid: None)
    return SuggestionSet(
        segment_id=seg.id,
        tm=tuple(colored),
        mt=lookup(Origin.MT, seg.id),
        ape=lookup(Origin.APE, seg.id),
    )

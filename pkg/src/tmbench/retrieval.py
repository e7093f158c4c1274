"""TF-IDF inverted-index candidate generation and similarity re-ranking.

Comparing an input segment against every TM source segment is too slow for
large memories, so retrieval runs in two stages: a cosine ranking over
TF-IDF vectors prunes the memory down to k candidates, and the edit-based
similarity score re-ranks those into the n suggestions actually shown.
"""

from __future__ import annotations

import hashlib
import math
from bisect import insort
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .textcore import Segment, segment, similarity

DEFAULT_IR_CANDIDATES = 20
DEFAULT_SUGGESTIONS = 5


class DuplicateEntryError(ValueError):
    """Raised when an entry id is already present in the index."""

    def __init__(self, entry_id: str):
        super().__init__(f"duplicate TM entry id: {entry_id}")
        self.entry_id = entry_id


@dataclass(frozen=True)
class TMEntry:
    """One TM unit: source segment, its translation, and word alignments.

    `alignment` holds (source index, target index) links; it may be empty,
    in which case downstream consumers fall back to a diagonal alignment.
    """

    id: str
    source: Segment
    target: Segment
    alignment: frozenset[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        for i, j in self.alignment:
            if not (0 <= i < len(self.source.tokens) and 0 <= j < len(self.target.tokens)):
                raise ValueError(
                    f"alignment link ({i},{j}) out of range for entry {self.id!r}"
                )


@dataclass(frozen=True)
class RankedCandidate:
    entry_id: str
    ir_score: float
    sim_score: Optional[float] = None


class Index:
    """Inverted index over the source-side norms of a TM.

    postings: term -> [(entry id, term frequency)] sorted by entry id;
    doc_frequency: term -> number of entries containing it;
    lengths: entry id -> source token count.
    """

    def __init__(self):
        self.postings: dict[str, list[Tuple[str, int]]] = {}
        self.doc_count: int = 0
        self.doc_frequency: dict[str, int] = {}
        self.lengths: dict[str, int] = {}
        self._entry_terms: dict[str, Counter] = {}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Index):
            return NotImplemented
        return (
            self.postings == other.postings
            and self.doc_count == other.doc_count
            and self.doc_frequency == other.doc_frequency
            and self.lengths == other.lengths
        )

    def idf(self, term: str) -> float:
        df = self.doc_frequency.get(term, 0)
        return math.log((self.doc_count + 1) / (df + 1)) + 1.0

    def _doc_norm(self, entry_id: str) -> float:
        counts = self._entry_terms[entry_id]
        return math.sqrt(
            math.fsum((tf * self.idf(t)) ** 2 for t, tf in sorted(counts.items()))
        )


def add_entry(index: Index, entry: TMEntry) -> Index:
    """Add one entry in place; the result equals rebuilding from scratch
    over the union, whatever the insertion order."""
    if entry.id in index.lengths:
        raise DuplicateEntryError(entry.id)
    counts = Counter(entry.source.norms())
    index.doc_count += 1
    index.lengths[entry.id] = len(entry.source.tokens)
    index._entry_terms[entry.id] = counts
    for term, tf in counts.items():
        insort(index.postings.setdefault(term, []), (entry.id, tf))
        index.doc_frequency[term] = index.doc_frequency.get(term, 0) + 1
    return index


def build_index(entries: Iterable[TMEntry]) -> Index:
    """Index the source side of every entry; ids must be unique."""
    index = Index()
    for entry in entries:
        add_entry(index, entry)
    return index


def ir_query(index: Index, query: Segment, k: int) -> list[RankedCandidate]:
    """Top-k entries by cosine similarity between raw-tf TF-IDF vectors.

    idf is the smoothed ln((N+1)/(df+1)) + 1.  Entries sharing no term
    with the query never appear, so fewer than k results are possible.
    Ties break toward the smaller entry id.
    """
    if k <= 0:
        return []
    q_counts = Counter(query.norms())
    if not q_counts:
        return []
    q_weights = {t: tf * index.idf(t) for t, tf in q_counts.items()}
    q_norm = math.sqrt(math.fsum(w * w for _, w in sorted(q_weights.items())))
    if q_norm == 0.0:
        return []

    dots: dict[str, float] = {}
    for term in sorted(q_weights):
        postings = index.postings.get(term)
        if not postings:
            continue
        idf = index.idf(term)
        qw = q_weights[term]
        for entry_id, tf in postings:
            dots[entry_id] = dots.get(entry_id, 0.0) + qw * (tf * idf)

    scored = [
        (eid, dot / (q_norm * index._doc_norm(eid)))
        for eid, dot in dots.items()
        if dot > 0.0
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [RankedCandidate(entry_id=eid, ir_score=s) for eid, s in scored[:k]]


def retrieve_matches(
    index: Index,
    entries: Mapping[str, TMEntry],
    query: Segment,
    k: int = DEFAULT_IR_CANDIDATES,
    n: int = DEFAULT_SUGGESTIONS,
    brute_force: bool = False,
) -> list[RankedCandidate]:
    """IR-prune to k candidates, then re-rank by edit similarity to n.

    Ordering is similarity descending, then IR score descending, then
    entry id.  With `brute_force` the pruning stage is bypassed and every
    indexed entry is scored, which is the oracle path for small TMs.
    """
    if n > k:
        raise ValueError(f"n ({n}) must not exceed k ({k})")
    if brute_force:
        scored = ir_query(index, query, max(len(entries), 1))
        by_ir = {c.entry_id: c.ir_score for c in scored}
        pool = [
            RankedCandidate(entry_id=eid, ir_score=by_ir.get(eid, 0.0))
            for eid in sorted(entries)
        ]
    else:
        pool = ir_query(index, query, k)
    rescored = [
        RankedCandidate(
            entry_id=c.entry_id,
            ir_score=c.ir_score,
            sim_score=similarity(query, entries[c.entry_id].source),
        )
        for c in pool
    ]
    rescored.sort(key=lambda c: (-c.sim_score, -c.ir_score, c.entry_id))
    return rescored[:n]


# --- TM upload format ------------------------------------------------------
#
# UTF-8 text, one entry per line: source TAB target TAB optional alignment
# given as space-separated "i-j" pairs.  Lines starting with "#" ignored.


def _entry_id(source: str, target: str, alignment: str) -> str:
    digest = hashlib.sha1(f"{source}\t{target}\t{alignment}".encode("utf-8")).hexdigest()
    return f"tm-{digest[:12]}"


def parse_alignment_field(text: str) -> frozenset[Tuple[int, int]]:
    links = set()
    for pair in text.split():
        left, sep, right = pair.partition("-")
        if not sep or not left.isdigit() or not right.isdigit():
            raise ValueError(f"bad alignment token {pair!r}")
        links.add((int(left), int(right)))
    return frozenset(links)


def parse_tm_file(
    text: str, source_lang: str = "und", target_lang: str = "und"
) -> Tuple[list[TMEntry], list[str]]:
    """Parse the tab-separated TM upload format.

    Malformed lines are skipped and reported; a bad or out-of-range
    alignment field demotes the entry to an empty alignment with a
    warning instead of dropping it.  Entry ids are content hashes, so
    re-uploading the same file reproduces the same ids.
    """
    entries: list[TMEntry] = []
    warnings: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2 or not fields[0].strip() or not fields[1].strip():
            warnings.append(f"line {lineno}: expected 'source<TAB>target', skipped")
            continue
        source_text, target_text = fields[0], fields[1]
        align_text = fields[2] if len(fields) > 2 else ""
        eid = _entry_id(source_text, target_text, align_text)
        src = segment(source_text, seg_id=f"{eid}.s", lang=source_lang)
        tgt = segment(target_text, seg_id=f"{eid}.t", lang=target_lang)
        alignment: frozenset[Tuple[int, int]] = frozenset()
        if align_text.strip():
            try:
                links = parse_alignment_field(align_text)
                if any(i >= len(src.tokens) or j >= len(tgt.tokens) for i, j in links):
                    raise ValueError("alignment index out of range")
                alignment = links
            except ValueError as exc:
                warnings.append(f"line {lineno}: {exc}; alignment dropped")
        entries.append(TMEntry(id=eid, source=src, target=tgt, alignment=alignment))
    return entries, warnings

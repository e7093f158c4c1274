"""Tokenization, edit alignment with block shifts, and fuzzy-match scoring.

This is the engine behind TM suggestion ranking: segments are compared at
the word level with an edit model that charges one unit for every
insertion, deletion, substitution or block shift, and the resulting edit
script is turned into a normalized similarity in [0, 1] that rewards
matches and penalizes edits.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

# Bounds on the shift search, in the spirit of the classic tercom limits.
# They only matter for pathological inputs; ordinary segments never hit them.
MAX_SHIFTS = 10
MAX_SHIFT_SIZE = 10
MAX_SHIFT_DISTANCE = 50
# Node budget for the branch-and-bound pass that verifies the greedy
# incumbent is optimal; exhausting it keeps the greedy answer.
SHIFT_SEARCH_BUDGET = 20000


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class Token:
    """One word-level token: original surface, lowercased norm, position."""

    surface: str
    norm: str
    index: int


@dataclass(frozen=True)
class Segment:
    """A tokenized piece of text belonging to one language side."""

    id: str
    lang: str
    raw: str
    tokens: Tuple[Token, ...]

    def norms(self) -> Tuple[str, ...]:
        return tuple(t.norm for t in self.tokens)

    def surfaces(self) -> Tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(raw: str, lang: str = "und") -> list[Token]:
    """Split text into word tokens.

    Splits on whitespace, then detaches leading and trailing punctuation
    characters of each chunk into tokens of their own, so "Hello," becomes
    ["Hello", ","].  Word-internal punctuation (hyphens, apostrophes) is
    kept.  `lang` is accepted for interface symmetry; there are no
    language-specific rules.
    """
    pieces: list[str] = []
    for chunk in raw.split():
        i, j = 0, len(chunk)
        lead: list[str] = []
        trail: list[str] = []
        while i < j and _is_punct(chunk[i]):
            lead.append(chunk[i])
            i += 1
        while j > i and _is_punct(chunk[j - 1]):
            trail.append(chunk[j - 1])
            j -= 1
        pieces.extend(lead)
        if i < j:
            pieces.append(chunk[i:j])
        pieces.extend(reversed(trail))
    return [Token(surface=p, norm=p.lower(), index=k) for k, p in enumerate(pieces)]


def segment(text: str, seg_id: str = "", lang: str = "und") -> Segment:
    """Build a Segment whose tokens are exactly tokenize(text)."""
    return Segment(id=seg_id, lang=lang, raw=text, tokens=tuple(tokenize(text, lang)))


class EditOpKind(Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"
    SHIFT = "shift"


@dataclass(frozen=True)
class EditOp:
    """One step of an edit script transforming a hypothesis into a reference.

    Match/Substitute carry both indices, Insert only the reference index,
    Delete only the hypothesis index.  Hypothesis indices always refer to
    the token's position in the *original* hypothesis, even when shifts
    moved it around first.  A Shift carries ``shift_span = (start, length,
    destination)`` where `start` is the block position in the hypothesis
    as it stood when the shift was applied and `destination` is the index
    at which the block is reinserted after removal.
    """

    kind: EditOpKind
    hyp_index: Optional[int] = None
    ref_index: Optional[int] = None
    shift_span: Optional[Tuple[int, int, int]] = None


@dataclass(frozen=True)
class EditScript:
    """Ordered edit operations plus per-kind tallies.

    Invariants: matches + substitutions + deletions == |hyp| and
    matches + substitutions + insertions == |ref|; shifts move tokens
    without consuming them.
    """

    ops: Tuple[EditOp, ...]
    matches: int
    insertions: int
    deletions: int
    substitutions: int
    shifts: int

    @property
    def total_edits(self) -> int:
        return self.insertions + self.deletions + self.substitutions + self.shifts

    @classmethod
    def from_ops(cls, ops: Iterable[EditOp]) -> "EditScript":
        ops = tuple(ops)
        tally = {kind: 0 for kind in EditOpKind}
        for op in ops:
            tally[op.kind] += 1
        return cls(
            ops=ops,
            matches=tally[EditOpKind.MATCH],
            insertions=tally[EditOpKind.INSERT],
            deletions=tally[EditOpKind.DELETE],
            substitutions=tally[EditOpKind.SUBSTITUTE],
            shifts=tally[EditOpKind.SHIFT],
        )


def apply_shift(seq: Sequence, start: int, length: int, destination: int) -> list:
    """Move seq[start:start+length] so the block sits at `destination`
    in the sequence that remains after removing it."""
    block = list(seq[start : start + length])
    rest = list(seq[:start]) + list(seq[start + length :])
    return rest[:destination] + block + rest[destination:]


@lru_cache(maxsize=1 << 17)
def _dp_cost(hyp: Tuple[str, ...], ref: Tuple[str, ...]) -> int:
    """Word-level Levenshtein distance (insert/delete/substitute at cost 1)."""
    n, m = len(hyp), len(ref)
    if n == 0:
        return m
    if m == 0:
        return n
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        h = hyp[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (h != ref[j - 1])
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        prev = cur
    return prev[m]


# Traceback cell codes.
_DIAG_MATCH, _DIAG_SUB, _INS, _DEL = 0, 1, 2, 3


def _dp_trace(hyp: Tuple[str, ...], ref: Tuple[str, ...]) -> list[int]:
    """Full DP with traceback; returns the op codes left to right.

    Tie preference at equal cost: diagonal first, then insert, then delete,
    so the trace is deterministic.
    """
    n, m = len(hyp), len(ref)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    back = [[_DEL] * (m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        cost[0][j] = j
        back[0][j] = _INS
    for i in range(1, n + 1):
        cost[i][0] = i
        back[i][0] = _DEL
        for j in range(1, m + 1):
            if hyp[i - 1] == ref[j - 1]:
                best, op = cost[i - 1][j - 1], _DIAG_MATCH
            else:
                best, op = cost[i - 1][j - 1] + 1, _DIAG_SUB
            ins = cost[i][j - 1] + 1
            if ins < best:
                best, op = ins, _INS
            dele = cost[i - 1][j] + 1
            if dele < best:
                best, op = dele, _DEL
            cost[i][j] = best
            back[i][j] = op
    trace: list[int] = []
    i, j = n, m
    while i > 0 or j > 0:
        op = back[i][j]
        trace.append(op)
        if op in (_DIAG_MATCH, _DIAG_SUB):
            i -= 1
            j -= 1
        elif op == _INS:
            j -= 1
        else:
            i -= 1
    trace.reverse()
    return trace


def _matching_blocks(hyp: Sequence[str], ref: Sequence[str]) -> list[Tuple[int, int]]:
    """All (start, length) hypothesis blocks that equal some reference
    subsequence, the precondition for a block shift."""
    blocks: set[Tuple[int, int]] = set()
    n, m = len(hyp), len(ref)
    for sh in range(n):
        for sr in range(m):
            if abs(sh - sr) > MAX_SHIFT_DISTANCE:
                continue
            length = 0
            while (
                sh + length < n
                and sr + length < m
                and length < MAX_SHIFT_SIZE
                and hyp[sh + length] == ref[sr + length]
            ):
                length += 1
                blocks.add((sh, length))
    return sorted(blocks)


def _shift_spans(state: Tuple[Tuple[str, int], ...], ref: Tuple[str, ...]) -> list[Tuple[int, int, int]]:
    """Every legal (start, length, destination) shift from `state`, in a
    fixed order so the search stays deterministic."""
    norms = [item[0] for item in state]
    spans: list[Tuple[int, int, int]] = []
    for start, length in _matching_blocks(norms, ref):
        for dest in range(len(norms) - length + 1):
            if dest != start:
                spans.append((start, length, dest))
    return spans


def _norms_of(state: Tuple[Tuple[str, int], ...]) -> Tuple[str, ...]:
    return tuple(item[0] for item in state)


def _bag_bound(hyp: Sequence[str], ref: Sequence[str]) -> int:
    """Lower bound on the edit distance of *any* reordering of hyp against
    ref: tokens missing from the shared bag must be edited no matter how
    blocks move."""
    overlap = sum((Counter(hyp) & Counter(ref)).values())
    return max(len(hyp), len(ref)) - overlap


def _find_shifts(
    start_state: Tuple[Tuple[str, int], ...], ref: Tuple[str, ...]
) -> Tuple[list[Tuple[int, int, int]], Tuple[Tuple[str, int], ...]]:
    """Shift sequence minimizing total cost (#shifts + edit distance).

    A greedy descent (repeatedly take the shift that most reduces the
    remaining edit distance) supplies the incumbent; a budgeted
    branch-and-bound sweep over shift sequences then replaces it whenever
    a strictly cheaper sequence exists, so the reported cost is optimal
    within MAX_SHIFTS and the node budget.  Returns the chosen spans in
    application order plus the resulting state.

    Shifts only permute the hypothesis, so the bag-distance lower bound
    holds at every depth and prunes most of the space: once a sequence
    reaches it, nothing deeper can be cheaper.
    """
    base = _dp_cost(_norms_of(start_state), ref)
    best_total, best_seq, best_state = base, [], start_state
    floor = _bag_bound(_norms_of(start_state), ref)
    # A shift costs 1 and no reordering beats the bag floor, so segments
    # already at the floor (identical, disjoint, pure-length cases) are done.
    if base <= floor + 1:
        return best_seq, best_state

    # Greedy incumbent.
    state, cost, seq = start_state, base, []
    while len(seq) < MAX_SHIFTS and cost > floor:
        best_key = None
        step = None
        for span in _shift_spans(state, ref):
            shifted = tuple(apply_shift(state, *span))
            c = _dp_cost(_norms_of(shifted), ref)
            delta = cost - c
            if delta <= 0:
                continue
            key = (delta, span[1], -span[0], -span[2])
            if best_key is None or key > best_key:
                best_key, step = key, (span, shifted, c)
        if step is None:
            break
        span, state, cost = step
        seq = seq + [span]
        if len(seq) + cost < best_total:
            best_total, best_seq, best_state = len(seq) + cost, seq, state

    # Branch-and-bound confirmation: expand only nodes whose children
    # could still undercut the incumbent.
    budget = SHIFT_SEARCH_BUDGET
    visited = {start_state: 0}
    stack: list[Tuple[Tuple[Tuple[str, int], ...], int, list[Tuple[int, int, int]]]] = [
        (start_state, 0, [])
    ]
    while stack and budget > 0:
        state, depth, seq = stack.pop()
        if depth + 1 + floor >= best_total or depth >= MAX_SHIFTS:
            continue
        for span in _shift_spans(state, ref):
            child = tuple(apply_shift(state, *span))
            prev = visited.get(child)
            if prev is not None and prev <= depth + 1:
                continue
            visited[child] = depth + 1
            budget -= 1
            if budget <= 0:
                break
            c = _dp_cost(_norms_of(child), ref)
            total = depth + 1 + c
            child_seq = seq + [span]
            if total < best_total:
                best_total, best_seq, best_state = total, child_seq, child
            stack.append((child, depth + 1, child_seq))
    return best_seq, best_state


def ter_align(hyp: Segment, ref: Segment) -> EditScript:
    """Minimum-cost edit script turning `hyp` into `ref`.

    Insert, delete, substitute and block shift cost one each; matches are
    free.  Shifts move a contiguous hypothesis block that equals (by norm)
    some reference subsequence; the search greedily applies the shift that
    most reduces the remaining word-level edit distance and then settles
    what is left with the DP alignment.  Comparison is on token norms, so
    matching is case-insensitive.
    """
    ref_norms = ref.norms()
    # Each working item is (norm, original hyp index) so shifts keep
    # token identity and the final ops can report original positions.
    start_state: Tuple[Tuple[str, int], ...] = tuple((t.norm, t.index) for t in hyp.tokens)

    ops: list[EditOp] = []
    work: Sequence[Tuple[str, int]] = start_state
    if _norms_of(start_state) != ref_norms:
        spans, work = _find_shifts(start_state, ref_norms)
        ops.extend(EditOp(kind=EditOpKind.SHIFT, shift_span=span) for span in spans)

    trace = _dp_trace(tuple(w[0] for w in work), ref_norms)
    i = j = 0
    for code in trace:
        if code == _DIAG_MATCH:
            ops.append(EditOp(EditOpKind.MATCH, hyp_index=work[i][1], ref_index=j))
            i += 1
            j += 1
        elif code == _DIAG_SUB:
            ops.append(EditOp(EditOpKind.SUBSTITUTE, hyp_index=work[i][1], ref_index=j))
            i += 1
            j += 1
        elif code == _INS:
            ops.append(EditOp(EditOpKind.INSERT, ref_index=j))
            j += 1
        else:
            ops.append(EditOp(EditOpKind.DELETE, hyp_index=work[i][1]))
            i += 1
    return EditScript.from_ops(ops)


def similarity(query: Segment, tm_source: Segment) -> float:
    """Needleman-Wunsch-flavored score over the edit alignment.

    Each match rewards +1, each edit operation (including shifts) costs
    -1, normalized by the longer side and clamped to [0, 1].  Two empty
    segments are vacuously identical (1.0).
    """
    if len(query) == 0 and len(tm_source) == 0:
        return 1.0
    script = ter_align(query, tm_source)
    raw = (script.matches - script.total_edits) / max(len(query), len(tm_source))
    return min(1.0, max(0.0, raw))

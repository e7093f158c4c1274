"""Post-editing session logs: recording, XML export/import, alignments.

Every submitted segment becomes one record carrying the chosen suggestion
origin, the initial and final texts, wall-clock editing time, and the
insertion/deletion/substitution/shift counts recomputed from the texts.
Sessions serialize to a strict XML format that round-trips exactly.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Optional, Tuple
from xml.sax.saxutils import escape, quoteattr

from .coloring import diagonal_alignment
from .retrieval import TMEntry
from .suggestions import Origin
from .textcore import EditOpKind, Segment, segment, ter_align


class DuplicateRecordError(ValueError):
    """A (segment, translator) pair was already recorded in this session."""


class LogFormatError(ValueError):
    """The XML log violates the schema; `path` names the offending element."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class EditLogRecord:
    segment_id: str
    translator_id: str
    origin: Origin
    initial_text: str
    final_text: str
    edit_time_ms: int
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    started_at: datetime
    finished_at: datetime


@dataclass
class Session:
    session_id: str
    project_id: str
    translator_id: str
    records: list[EditLogRecord] = field(default_factory=list)


def _to_utc_ms(ts: datetime) -> datetime:
    """Canonicalize to UTC at millisecond precision (naive means UTC)."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=(ts.microsecond // 1000) * 1000)


def format_timestamp(ts: datetime) -> str:
    ts = _to_utc_ms(ts)
    return ts.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ts.microsecond // 1000:03d}Z"


def parse_timestamp(text: str) -> datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ValueError(f"bad RFC 3339 timestamp {text!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return _to_utc_ms(ts)


def count_edits(initial_text: str, final_text: str) -> Tuple[int, int, int, int]:
    """(insertions, deletions, substitutions, shifts) turning initial into final."""
    script = ter_align(segment(initial_text, "initial"), segment(final_text, "final"))
    return script.insertions, script.deletions, script.substitutions, script.shifts


def record_postedit(
    session: Session,
    segment_id: str,
    origin: Origin,
    initial_text: str,
    final_text: str,
    started_at: datetime,
    finished_at: datetime,
) -> EditLogRecord:
    """Compute timing and edit counts, then append the record to the session.

    Records stay ordered by finish time; one record per (segment,
    translator) per session; a Scratch record must start from empty text.
    """
    origin = Origin(origin)
    started = _to_utc_ms(started_at)
    finished = _to_utc_ms(finished_at)
    if finished < started:
        raise ValueError("finishedAt precedes startedAt")
    if origin is Origin.SCRATCH and initial_text != "":
        raise ValueError("initialText must be empty when translating from scratch")
    for rec in session.records:
        if rec.segment_id == segment_id and rec.translator_id == session.translator_id:
            raise DuplicateRecordError(
                f"segment {segment_id!r} already recorded by {session.translator_id!r}"
            )
    ins, dele, sub, shift = count_edits(initial_text, final_text)
    record = EditLogRecord(
        segment_id=segment_id,
        translator_id=session.translator_id,
        origin=origin,
        initial_text=initial_text,
        final_text=final_text,
        edit_time_ms=(finished - started) // timedelta(milliseconds=1),
        insertions=ins,
        deletions=dele,
        substitutions=sub,
        shifts=shift,
        started_at=started,
        finished_at=finished,
    )
    pos = bisect_right([r.finished_at for r in session.records], record.finished_at)
    session.records.insert(pos, record)
    return record


# --- XML log format ---------------------------------------------------------
#
# <session id project translator> wrapping <records> of <record segment
# origin timeMs ins del sub shift started finished> with <initial> and
# <final> children.  Attribute order is fixed, timestamps are RFC 3339
# UTC with millisecond precision, and export is byte-deterministic.


def export_xml(session: Session) -> bytes:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        f"<session id={quoteattr(session.session_id)}"
        f" project={quoteattr(session.project_id)}"
        f" translator={quoteattr(session.translator_id)}>"
    )
    if not session.records:
        lines.append("  <records/>")
    else:
        lines.append("  <records>")
        for rec in session.records:
            lines.append(
                "    <record"
                f" segment={quoteattr(rec.segment_id)}"
                f" origin={quoteattr(rec.origin.value)}"
                f' timeMs="{rec.edit_time_ms}"'
                f' ins="{rec.insertions}"'
                f' del="{rec.deletions}"'
                f' sub="{rec.substitutions}"'
                f' shift="{rec.shifts}"'
                f" started={quoteattr(format_timestamp(rec.started_at))}"
                f" finished={quoteattr(format_timestamp(rec.finished_at))}>"
            )
            lines.append(f"      <initial>{escape(rec.initial_text)}</initial>")
            lines.append(f"      <final>{escape(rec.final_text)}</final>")
            lines.append("    </record>")
        lines.append("  </records>")
    lines.append("</session>")
    return ("\n".join(lines) + "\n").encode("utf-8")


_SESSION_ATTRS = ("id", "project", "translator")
_RECORD_ATTRS = ("segment", "origin", "timeMs", "ins", "del", "sub", "shift", "started", "finished")


def _require_attrs(elem: ET.Element, allowed: Tuple[str, ...], path: str) -> dict:
    for name in allowed:
        if name not in elem.attrib:
            raise LogFormatError(path, f"missing required attribute {name!r}")
    for name in elem.attrib:
        if name not in allowed:
            raise LogFormatError(path, f"unknown attribute {name!r}")
    return dict(elem.attrib)


def _int_attr(value: str, name: str, path: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise LogFormatError(path, f"attribute {name!r} is not an integer: {value!r}")
    if parsed < 0:
        raise LogFormatError(path, f"attribute {name!r} must be non-negative")
    return parsed


def import_xml(data: bytes) -> Session:
    """Strict inverse of export_xml: import_xml(export_xml(s)) == s.

    Unknown elements or attributes and missing required ones are rejected
    with the path of the offending element.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise LogFormatError("/", f"not well-formed XML: {exc}")
    if root.tag != "session":
        raise LogFormatError(f"/{root.tag}", "root element must be <session>")
    attrs = _require_attrs(root, _SESSION_ATTRS, "/session")
    session = Session(
        session_id=attrs["id"], project_id=attrs["project"], translator_id=attrs["translator"]
    )
    children = list(root)
    if len(children) != 1 or children[0].tag != "records":
        raise LogFormatError("/session", "expected exactly one <records> child")
    records_elem = children[0]
    _require_attrs(records_elem, (), "/session/records")
    for i, rec_elem in enumerate(records_elem, start=1):
        path = f"/session/records/record[{i}]"
        if rec_elem.tag != "record":
            raise LogFormatError(
                f"/session/records/{rec_elem.tag}[{i}]", "unknown element"
            )
        attrs = _require_attrs(rec_elem, _RECORD_ATTRS, path)
        parts = list(rec_elem)
        if [p.tag for p in parts] != ["initial", "final"]:
            raise LogFormatError(path, "expected exactly <initial> then <final>")
        for part in parts:
            _require_attrs(part, (), f"{path}/{part.tag}")
            if len(part) != 0:
                raise LogFormatError(f"{path}/{part.tag}", "unexpected child elements")
        try:
            origin = Origin(attrs["origin"])
        except ValueError:
            raise LogFormatError(path, f"unknown origin {attrs['origin']!r}")
        try:
            started = parse_timestamp(attrs["started"])
            finished = parse_timestamp(attrs["finished"])
        except ValueError as exc:
            raise LogFormatError(path, str(exc))
        session.records.append(
            EditLogRecord(
                segment_id=attrs["segment"],
                translator_id=session.translator_id,
                origin=origin,
                initial_text=parts[0].text or "",
                final_text=parts[1].text or "",
                edit_time_ms=_int_attr(attrs["timeMs"], "timeMs", path),
                insertions=_int_attr(attrs["ins"], "ins", path),
                deletions=_int_attr(attrs["del"], "del", path),
                substitutions=_int_attr(attrs["sub"], "sub", path),
                shifts=_int_attr(attrs["shift"], "shift", path),
                started_at=started,
                finished_at=finished,
            )
        )
    return session


def export_alignments(
    record: EditLogRecord,
    chosen_entry: Optional[TMEntry] = None,
    source_segment: Optional[Segment] = None,
) -> list[Tuple[int, int]]:
    """Source-to-final-text word alignment for a post-edited record.

    For TM records the chosen entry's stored alignment is remapped through
    the edit script between initial and final text: links to deleted
    target tokens are dropped, substituted tokens keep theirs, inserted
    tokens get none.  Everything else falls back to the diagonal between
    the source segment and the final text.
    """
    final_seg = segment(record.final_text, "final")
    if record.origin is Origin.TM:
        if chosen_entry is None:
            raise ValueError("TM records need the chosen TM entry")
        initial_seg = segment(record.initial_text, "initial")
        if chosen_entry.alignment and len(chosen_entry.target.tokens) != len(initial_seg.tokens):
            raise ValueError(
                "chosen entry target does not match the record's initial text"
            )
        script = ter_align(initial_seg, final_seg)
        moved = {
            op.hyp_index: op.ref_index
            for op in script.ops
            if op.kind in (EditOpKind.MATCH, EditOpKind.SUBSTITUTE)
        }
        links = chosen_entry.alignment or diagonal_alignment(
            len(chosen_entry.source.tokens), len(initial_seg.tokens)
        )
        remapped = {
            (i, moved[j]) for i, j in links if j in moved
        }
        return sorted(remapped)
    if source_segment is None:
        raise ValueError("non-TM records need the project source segment")
    return sorted(diagonal_alignment(len(source_segment.tokens), len(final_seg.tokens)))

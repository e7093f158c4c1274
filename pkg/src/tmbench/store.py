"""Durable workbench state: projects, TM entries, tables, sessions.

Persistence is an append-only journal of domain events plus a periodic
snapshot.  Every acknowledged write is fsynced to the journal first;
recovery loads the latest snapshot and replays the journal tail.  The
TF-IDF index is derived state and is rebuilt from the entries on load.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .editlog import (
    EditLogRecord,
    Session,
    export_xml,
    format_timestamp,
    parse_timestamp,
    record_postedit,
)
from .retrieval import (
    DEFAULT_IR_CANDIDATES,
    DEFAULT_SUGGESTIONS,
    Index,
    TMEntry,
    add_entry,
    build_index,
    parse_tm_file,
)
from .suggestions import Origin, SuggestionSet, SuggestionTables, assemble_suggestions
from .textcore import Segment, segment


class UnknownProjectError(KeyError):
    def __init__(self, project_id: str):
        super().__init__(project_id)
        self.project_id = project_id


class UnknownSegmentError(KeyError):
    def __init__(self, segment_id: str):
        super().__init__(segment_id)
        self.segment_id = segment_id


class UnknownSessionError(KeyError):
    def __init__(self, session_id: str):
        super().__init__(session_id)
        self.session_id = session_id


class DuplicateProjectError(ValueError):
    pass


@dataclass
class Project:
    project_id: str
    name: str
    source_lang: str
    target_lang: str
    segments: dict[str, Segment] = field(default_factory=dict)
    entries: dict[str, TMEntry] = field(default_factory=dict)
    index: Index = field(default_factory=Index)
    tables: SuggestionTables = field(default_factory=SuggestionTables)
    sessions: dict[str, Session] = field(default_factory=dict)


class Workbench:
    """The service's state machine, one instance per data directory."""

    def __init__(
        self,
        data_dir: str | Path,
        ir_candidates: int = DEFAULT_IR_CANDIDATES,
        suggestions: int = DEFAULT_SUGGESTIONS,
        min_similarity: float = 0.0,
        snapshot_every: int = 200,
    ):
        self.ir_candidates = ir_candidates
        self.suggestions = suggestions
        self.min_similarity = min_similarity
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._journal_path = self._dir / "journal.jsonl"
        self._snapshot_path = self._dir / "snapshot.json"
        self._snapshot_every = snapshot_every
        self._lock = threading.RLock()
        self._projects: dict[str, Project] = {}
        self._applied = 0
        self._load()

    # ------------------------------------------------------------------
    # recovery

    def _load(self) -> None:
        start = 0
        if self._snapshot_path.exists():
            snap = json.loads(self._snapshot_path.read_text("utf-8"))
            start = snap["applied"]
            self._restore_snapshot(snap)
            self._applied = start
        if self._journal_path.exists():
            with self._journal_path.open("r", encoding="utf-8") as fh:
                for i, line in enumerate(fh):
                    if i < start or not line.strip():
                        continue
                    self._apply(json.loads(line))
                    self._applied += 1

    def _append_journal(self, event: dict) -> None:
        with self._journal_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _commit(self, event: dict) -> None:
        """Make an event durable, then visible."""
        self._append_journal(event)
        self._apply(event)
        self._applied += 1
        if self._snapshot_every and self._applied % self._snapshot_every == 0:
            self._write_snapshot()

    # ------------------------------------------------------------------
    # event application (shared by live calls and replay)

    def _apply(self, event: dict) -> None:
        op = event["op"]
        if op == "create_project":
            self._projects[event["projectId"]] = Project(
                project_id=event["projectId"],
                name=event["name"],
                source_lang=event["sourceLang"],
                target_lang=event["targetLang"],
            )
        elif op == "add_segments":
            project = self._projects[event["projectId"]]
            for item in event["segments"]:
                project.segments[item["id"]] = segment(
                    item["text"], seg_id=item["id"], lang=project.source_lang
                )
        elif op == "add_tm_entries":
            project = self._projects[event["projectId"]]
            for item in event["entries"]:
                entry = TMEntry(
                    id=item["id"],
                    source=segment(item["source"], f"{item['id']}.s", project.source_lang),
                    target=segment(item["target"], f"{item['id']}.t", project.target_lang),
                    alignment=frozenset((i, j) for i, j in item["alignment"]),
                )
                project.entries[entry.id] = entry
                add_entry(project.index, entry)
        elif op == "ingest_table":
            project = self._projects[event["projectId"]]
            origin = Origin(event["origin"])
            for seg_id, text in event["records"]:
                project.tables._tables[(origin, seg_id)] = text
        elif op == "create_session":
            project = self._projects[event["projectId"]]
            project.sessions[event["sessionId"]] = Session(
                session_id=event["sessionId"],
                project_id=project.project_id,
                translator_id=event["translatorId"],
            )
        elif op == "add_record":
            project = self._projects[event["projectId"]]
            session = project.sessions[event["sessionId"]]
            record_postedit(
                session,
                segment_id=event["segmentId"],
                origin=Origin(event["origin"]),
                initial_text=event["initialText"],
                final_text=event["finalText"],
                started_at=parse_timestamp(event["startedAt"]),
                finished_at=parse_timestamp(event["finishedAt"]),
            )
        else:
            raise ValueError(f"unknown journal event {op!r}")

    # ------------------------------------------------------------------
    # snapshots

    def _write_snapshot(self) -> None:
        snap = {
            "applied": self._applied,
            "projects": [
                {
                    "projectId": p.project_id,
                    "name": p.name,
                    "sourceLang": p.source_lang,
                    "targetLang": p.target_lang,
                    "segments": [
                        {"id": s.id, "text": s.raw} for s in p.segments.values()
                    ],
                    "entries": [
                        {
                            "id": e.id,
                            "source": e.source.raw,
                            "target": e.target.raw,
                            "alignment": sorted(e.alignment),
                        }
                        for e in p.entries.values()
                    ],
                    "tables": [
                        [origin, seg_id, text]
                        for (origin, seg_id), text in sorted(p.tables.snapshot().items())
                    ],
                    "sessions": [
                        {
                            "sessionId": s.session_id,
                            "translatorId": s.translator_id,
                            "records": [
                                {
                                    "segmentId": r.segment_id,
                                    "origin": r.origin.value,
                                    "initialText": r.initial_text,
                                    "finalText": r.final_text,
                                    "startedAt": format_timestamp(r.started_at),
                                    "finishedAt": format_timestamp(r.finished_at),
                                }
                                for r in s.records
                            ],
                        }
                        for s in p.sessions.values()
                    ],
                }
                for p in self._projects.values()
            ],
        }
        tmp = self._snapshot_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(snap, ensure_ascii=False, sort_keys=True), "utf-8")
        os.replace(tmp, self._snapshot_path)

    def _restore_snapshot(self, snap: dict) -> None:
        for p in snap["projects"]:
            project = Project(
                project_id=p["projectId"],
                name=p["name"],
                source_lang=p["sourceLang"],
                target_lang=p["targetLang"],
            )
            for s in p["segments"]:
                project.segments[s["id"]] = segment(
                    s["text"], seg_id=s["id"], lang=project.source_lang
                )
            entries = []
            for e in p["entries"]:
                entry = TMEntry(
                    id=e["id"],
                    source=segment(e["source"], f"{e['id']}.s", project.source_lang),
                    target=segment(e["target"], f"{e['id']}.t", project.target_lang),
                    alignment=frozenset((i, j) for i, j in e["alignment"]),
                )
                entries.append(entry)
                project.entries[entry.id] = entry
            project.index = build_index(entries)
            for origin, seg_id, text in p["tables"]:
                project.tables._tables[(Origin(origin), seg_id)] = text
            for s in p["sessions"]:
                sess = Session(
                    session_id=s["sessionId"],
                    project_id=project.project_id,
                    translator_id=s["translatorId"],
                )
                for r in s["records"]:
                    record_postedit(
                        sess,
                        segment_id=r["segmentId"],
                        origin=Origin(r["origin"]),
                        initial_text=r["initialText"],
                        final_text=r["finalText"],
                        started_at=parse_timestamp(r["startedAt"]),
                        finished_at=parse_timestamp(r["finishedAt"]),
                    )
                project.sessions[sess.session_id] = sess
            self._projects[project.project_id] = project

    # ------------------------------------------------------------------
    # project management

    def create_project(self, name: str, source_lang: str, target_lang: str) -> str:
        if not name:
            raise ValueError("project name must be non-empty")
        with self._lock:
            if any(p.name == name for p in self._projects.values()):
                raise DuplicateProjectError(f"project named {name!r} already exists")
            project_id = f"p{len(self._projects) + 1}"
            self._commit(
                {
                    "op": "create_project",
                    "projectId": project_id,
                    "name": name,
                    "sourceLang": source_lang,
                    "targetLang": target_lang,
                }
            )
            return project_id

    def list_projects(self) -> list[Project]:
        with self._lock:
            return list(self._projects.values())

    def project(self, project_id: str) -> Project:
        try:
            return self._projects[project_id]
        except KeyError:
            raise UnknownProjectError(project_id) from None

    def find_project(self, ref: str) -> Project:
        """Look up by id, falling back to unique name match (CLI nicety)."""
        with self._lock:
            if ref in self._projects:
                return self._projects[ref]
            named = [p for p in self._projects.values() if p.name == ref]
            if len(named) == 1:
                return named[0]
            raise UnknownProjectError(ref)

    def add_segments(self, project_id: str, texts: Iterable[str]) -> list[str]:
        with self._lock:
            project = self.project(project_id)
            start = len(project.segments)
            items = [
                {"id": f"s{start + i + 1}", "text": text}
                for i, text in enumerate(texts)
            ]
            if not items:
                return []
            self._commit(
                {"op": "add_segments", "projectId": project_id, "segments": items}
            )
            return [item["id"] for item in items]

    # ------------------------------------------------------------------
    # TM and suggestion tables

    def upload_tm(self, project_id: str, text: str) -> tuple[int, list[str]]:
        """Parse, store and index a TM upload; returns (added, warnings).

        Line-level problems and duplicate entries become warnings; the
        upload itself is all-or-nothing with respect to hard failures.
        """
        with self._lock:
            project = self.project(project_id)
            entries, warnings = parse_tm_file(
                text, project.source_lang, project.target_lang
            )
            fresh: list[TMEntry] = []
            seen: set[str] = set()
            for entry in entries:
                if entry.id in project.entries or entry.id in seen:
                    warnings.append(f"duplicate entry {entry.id} skipped")
                    continue
                seen.add(entry.id)
                fresh.append(entry)
            if fresh:
                self._commit(
                    {
                        "op": "add_tm_entries",
                        "projectId": project_id,
                        "entries": [
                            {
                                "id": e.id,
                                "source": e.source.raw,
                                "target": e.target.raw,
                                "alignment": sorted(e.alignment),
                            }
                            for e in fresh
                        ],
                    }
                )
            return len(fresh), warnings

    def ingest_table(self, project_id: str, origin: Origin, text: str) -> tuple[int, list[str]]:
        with self._lock:
            project = self.project(project_id)
            # Parse on a scratch table first so a bad origin cannot half-apply.
            scratch = SuggestionTables()
            count, warnings = scratch.ingest(origin, text)
            records = [
                [seg_id, value]
                for (orig, seg_id), value in sorted(scratch.snapshot().items())
            ]
            if records:
                self._commit(
                    {
                        "op": "ingest_table",
                        "projectId": project_id,
                        "origin": origin.value,
                        "records": records,
                    }
                )
            return count, warnings

    # ------------------------------------------------------------------
    # suggestions and sessions

    def get_suggestions(self, project_id: str, segment_id: str) -> SuggestionSet:
        with self._lock:
            project = self.project(project_id)
            if segment_id not in project.segments:
                raise UnknownSegmentError(segment_id)
            return assemble_suggestions(
                project.segments[segment_id],
                project.index,
                project.entries,
                project.tables,
                k=self.ir_candidates,
                n=self.suggestions,
                min_similarity=self.min_similarity,
            )

    def create_session(self, project_id: str, translator_id: str) -> str:
        if not translator_id:
            raise ValueError("translatorId must be non-empty")
        with self._lock:
            project = self.project(project_id)
            session_id = f"sess{len(project.sessions) + 1}"
            self._commit(
                {
                    "op": "create_session",
                    "projectId": project_id,
                    "sessionId": session_id,
                    "translatorId": translator_id,
                }
            )
            return session_id

    def session(self, project_id: str, session_id: str) -> Session:
        project = self.project(project_id)
        try:
            return project.sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def submit_postedit(
        self,
        project_id: str,
        session_id: str,
        segment_id: str,
        origin: Origin,
        initial_text: str,
        final_text: str,
        started_at,
        finished_at,
    ) -> EditLogRecord:
        with self._lock:
            project = self.project(project_id)
            if segment_id not in project.segments:
                raise UnknownSegmentError(segment_id)
            session = self.session(project_id, session_id)
            # Validate and compute on a scratch session so the journal is
            # written before any visible state changes.
            scratch = Session(
                session_id=session.session_id,
                project_id=session.project_id,
                translator_id=session.translator_id,
                records=list(session.records),
            )
            record = record_postedit(
                scratch, segment_id, origin, initial_text, final_text, started_at, finished_at
            )
            self._commit(
                {
                    "op": "add_record",
                    "projectId": project_id,
                    "sessionId": session_id,
                    "segmentId": segment_id,
                    "origin": record.origin.value,
                    "initialText": initial_text,
                    "finalText": final_text,
                    "startedAt": format_timestamp(record.started_at),
                    "finishedAt": format_timestamp(record.finished_at),
                }
            )
            return record

    def export_log(self, project_id: str, session_id: str) -> bytes:
        with self._lock:
            return export_xml(self.session(project_id, session_id))

    def close(self) -> None:
        with self._lock:
            self._write_snapshot()

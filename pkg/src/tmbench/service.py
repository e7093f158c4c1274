"""HTTP surface over the workbench store.

JSON over HTTP; read endpoints are deterministic for a fixed store state.
Raw-text uploads (TM files, MT/APE tables) are posted as UTF-8 bodies.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .coloring import to_span_json
from .editlog import DuplicateRecordError, parse_timestamp
from .retrieval import DuplicateEntryError
from .store import (
    DuplicateProjectError,
    UnknownProjectError,
    UnknownSegmentError,
    UnknownSessionError,
    Workbench,
)
from .suggestions import Origin, SuggestionSet


class ProjectCreate(BaseModel):
    name: str
    sourceLang: str
    targetLang: str


class SegmentsAdd(BaseModel):
    texts: list[str]


class SessionCreate(BaseModel):
    translatorId: str


class RecordSubmit(BaseModel):
    segmentId: str
    origin: str
    initialText: str
    finalText: str
    startedAt: str
    finishedAt: str


def suggestion_set_json(workbench: Workbench, project_id: str, s: SuggestionSet) -> dict:
    project = workbench.project(project_id)
    seg = project.segments[s.segment_id]
    return {
        "segmentId": s.segment_id,
        "sourceText": seg.raw,
        "sourceTokens": list(seg.surfaces()),
        "tm": [to_span_json(cs, project.entries[cs.entry_id]) for cs in s.tm],
        "mt": s.mt,
        "ape": s.ape,
    }


def create_app(workbench: Workbench) -> FastAPI:
    app = FastAPI(title="tmbench", docs_url=None, redoc_url=None)

    @app.exception_handler(UnknownProjectError)
    async def _unknown_project(request, exc):
        return JSONResponse(
            {"error": "unknown project", "projectId": exc.project_id}, status_code=404
        )

    @app.exception_handler(UnknownSegmentError)
    async def _unknown_segment(request, exc):
        return JSONResponse(
            {"error": "unknown segment", "segmentId": exc.segment_id}, status_code=404
        )

    @app.exception_handler(UnknownSessionError)
    async def _unknown_session(request, exc):
        return JSONResponse(
            {"error": "unknown session", "sessionId": exc.session_id}, status_code=404
        )

    @app.exception_handler(DuplicateProjectError)
    async def _dup_project(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(DuplicateRecordError)
    async def _dup_record(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(DuplicateEntryError)
    async def _dup_entry(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(ValueError)
    async def _bad_request(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=400)

    @app.get("/healthz")
    async def healthz():
        return {"ok": True}

    @app.get("/projects")
    async def list_projects():
        return {
            "projects": [
                {
                    "projectId": p.project_id,
                    "name": p.name,
                    "sourceLang": p.source_lang,
                    "targetLang": p.target_lang,
                    "segmentCount": len(p.segments),
                    "tmEntryCount": len(p.entries),
                }
                for p in workbench.list_projects()
            ]
        }

    @app.post("/projects", status_code=201)
    async def create_project(body: ProjectCreate):
        pid = workbench.create_project(body.name, body.sourceLang, body.targetLang)
        return {"projectId": pid}

    @app.get("/projects/{pid}/segments")
    async def list_segments(pid: str):
        project = workbench.project(pid)
        return {
            "segments": [
                {"segmentId": s.id, "text": s.raw} for s in project.segments.values()
            ]
        }

    @app.post("/projects/{pid}/segments", status_code=201)
    async def add_segments(pid: str, body: SegmentsAdd):
        ids = workbench.add_segments(pid, body.texts)
        return {"segmentIds": ids}

    @app.post("/projects/{pid}/tm")
    async def upload_tm(pid: str, request: Request):
        text = (await request.body()).decode("utf-8")
        added, warnings = workbench.upload_tm(pid, text)
        return {"added": added, "warnings": warnings}

    @app.post("/projects/{pid}/tables/{origin}")
    async def ingest_table(pid: str, origin: str, request: Request):
        try:
            parsed = Origin(origin.upper())
        except ValueError:
            return JSONResponse(
                {"error": f"origin must be mt or ape, got {origin!r}"}, status_code=400
            )
        text = (await request.body()).decode("utf-8")
        count, warnings = workbench.ingest_table(pid, parsed, text)
        return {"ingested": count, "warnings": warnings}

    @app.get("/projects/{pid}/segments/{sid}/suggestions")
    async def get_suggestions(pid: str, sid: str):
        suggestion_set = workbench.get_suggestions(pid, sid)
        return suggestion_set_json(workbench, pid, suggestion_set)

    @app.post("/projects/{pid}/sessions", status_code=201)
    async def create_session(pid: str, body: SessionCreate):
        sid = workbench.create_session(pid, body.translatorId)
        return {"sessionId": sid}

    @app.get("/projects/{pid}/sessions")
    async def list_sessions(pid: str):
        project = workbench.project(pid)
        return {
            "sessions": [
                {
                    "sessionId": s.session_id,
                    "translatorId": s.translator_id,
                    "recordCount": len(s.records),
                }
                for s in project.sessions.values()
            ]
        }

    @app.post("/projects/{pid}/sessions/{sessid}/records", status_code=201)
    async def submit_record(pid: str, sessid: str, body: RecordSubmit):
        try:
            origin = Origin(body.origin.upper())
        except ValueError:
            return JSONResponse(
                {"error": f"unknown origin {body.origin!r}"}, status_code=400
            )
        record = workbench.submit_postedit(
            pid,
            sessid,
            segment_id=body.segmentId,
            origin=origin,
            initial_text=body.initialText,
            final_text=body.finalText,
            started_at=parse_timestamp(body.startedAt),
            finished_at=parse_timestamp(body.finishedAt),
        )
        return {
            "segmentId": record.segment_id,
            "translatorId": record.translator_id,
            "origin": record.origin.value,
            "initialText": record.initial_text,
            "finalText": record.final_text,
            "timeMs": record.edit_time_ms,
            "ins": record.insertions,
            "del": record.deletions,
            "sub": record.substitutions,
            "shift": record.shifts,
        }

    @app.get("/projects/{pid}/sessions/{sessid}/log.xml")
    async def download_log(pid: str, sessid: str):
        data = workbench.export_log(pid, sessid)
        return Response(content=data, media_type="application/xml")

    return app

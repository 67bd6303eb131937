"""HTTP surface for the annotation workflow.

Sessions are in-memory only: restarting the process discards every token.
Request bodies are parsed by hand so malformed JSON and unknown fields come
back as 400s in the same error shape as every other failure.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from mcforge.config import EngineConfig
from mcforge.errors import (
    FetchError,
    McforgeError,
    NotFoundError,
    ParseFailure,
    PreconditionError,
    ValidationError,
)
from mcforge.fetch import fetch_ontology
from mcforge.ontology import class_annotations
from mcforge.rdf.serialize import FILE_EXTENSIONS, MEDIA_TYPES, format_for_token
from mcforge.reasoner import subclasses_of
from mcforge.report import (
    ReportSession,
    add_snippet,
    encode,
    export,
    list_snippets,
    open_session,
    remove_snippet,
)

TOKEN_BYTES = 32  # 256 bits of entropy per session token


@dataclass
class _Entry:
    session: ReportSession
    created_at: float
    lock: threading.Lock


class SessionRegistry:
    """Token-keyed session store with TTL eviction."""

    def __init__(self, ttl_hours: float, clock: Callable[[], float] = time.monotonic):
        self._ttl_seconds = ttl_hours * 3600.0
        self._clock = clock
        self._entries: dict[str, _Entry] = {}
        self._guard = threading.Lock()

    def _sweep(self, now: float) -> None:
        expired = [
            token
            for token, entry in self._entries.items()
            if now - entry.created_at > self._ttl_seconds
        ]
        for token in expired:
            del self._entries[token]

    def create(self, session: ReportSession) -> str:
        token = secrets.token_urlsafe(TOKEN_BYTES)
        with self._guard:
            now = self._clock()
            self._sweep(now)
            self._entries[token] = _Entry(session, now, threading.Lock())
        return token

    def get(self, token: str) -> _Entry:
        with self._guard:
            self._sweep(self._clock())
            entry = self._entries.get(token)
        if entry is None:
            raise NotFoundError("unknown or expired session token")
        return entry

    def __len__(self) -> int:
        with self._guard:
            self._sweep(self._clock())
            return len(self._entries)


def _status_for(exc: McforgeError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, PreconditionError):
        return 409
    if isinstance(exc, (FetchError, ParseFailure)):
        return 502
    return 400


def _error_response(exc: McforgeError) -> JSONResponse:
    payload: dict = {"code": exc.code, "message": str(exc)}
    details = getattr(exc, "details", None)
    if details is not None:
        payload["details"] = details
    diagnostics = getattr(exc, "diagnostics", None)
    if diagnostics:
        payload["details"] = [str(d) for d in diagnostics]
    return JSONResponse(status_code=_status_for(exc), content=payload)


async def _read_json_object(request: Request, allowed: set[str], required: set[str]) -> dict:
    raw = await request.body()
    try:
        data = json.loads(raw) if raw else {}
    except ValueError as exc:
        raise ValidationError(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("request body must be a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValidationError(f"unknown field(s): {', '.join(unknown)}")
    missing = sorted(required - set(data))
    if missing:
        raise ValidationError(f"missing field(s): {', '.join(missing)}")
    return data


def _require_string(data: dict, key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        raise ValidationError(f"field {key!r} must be a non-empty string")
    return value


def _annotation_row(session: ReportSession, iri: str) -> dict:
    ann = class_annotations(session.model, iri)
    return {"iri": iri, "label": ann.label, "comment": ann.comment}


def category_iris(session: ReportSession) -> list[str]:
    """Root class, its direct subclasses, then auxiliary category classes."""
    root = session.root_class
    ordered: list[str] = [root]
    ordered.extend(
        c for c in subclasses_of(session.closure, root, direct=True) if c not in ordered
    )
    if session.config.aux_category_iris is not None:
        aux = list(session.config.aux_category_iris)
    else:
        aux = sorted(
            c
            for c in session.model.classes
            if not session.closure.direct_superclasses.get(c) and c != root
        )
    ordered.extend(c for c in aux if c not in ordered)
    return ordered


def create_app(
    config: Optional[EngineConfig] = None,
    ui_dir: Optional[str] = None,
    registry: Optional[SessionRegistry] = None,
) -> FastAPI:
    config = config or EngineConfig()
    registry = registry or SessionRegistry(ttl_hours=config.session_ttl_hours)
    app = FastAPI(title="mcforge", docs_url=None, redoc_url=None)

    @app.exception_handler(McforgeError)
    async def _handle_mcforge_error(request: Request, exc: McforgeError):
        return _error_response(exc)

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        data = await _read_json_object(request, {"ontology", "baseIri"}, {"ontology"})
        origin = _require_string(data, "ontology")
        base_iri = data.get("baseIri")
        if base_iri is not None and (not isinstance(base_iri, str) or not base_iri):
            raise ValidationError("field 'baseIri' must be a non-empty string")
        handle = fetch_ontology(origin, cache_dir=config.cache_dir)
        session = open_session(handle, config, base_iri=base_iri)
        token = registry.create(session)
        return {"token": token}

    @app.get("/sessions/{token}/categories")
    async def get_categories(token: str):
        entry = registry.get(token)
        with entry.lock:
            return [_annotation_row(entry.session, iri) for iri in category_iris(entry.session)]

    @app.get("/sessions/{token}/classes")
    async def get_classes(token: str, category: Optional[str] = None):
        if not category:
            raise ValidationError("query parameter 'category' is required")
        entry = registry.get(token)
        with entry.lock:
            session = entry.session
            if category not in session.model.classes:
                raise NotFoundError(f"unknown class <{category}>")
            members = [category] + subclasses_of(session.closure, category)
            return [_annotation_row(session, iri) for iri in members]

    @app.post("/sessions/{token}/snippets", status_code=201)
    async def post_snippet(token: str, request: Request):
        data = await _read_json_object(request, {"text", "class"}, {"text", "class"})
        text = data.get("text")
        if not isinstance(text, str):
            raise ValidationError("field 'text' must be a string")
        class_iri = _require_string(data, "class")
        entry = registry.get(token)
        with entry.lock:
            sid = add_snippet(entry.session, text, class_iri)
        return {"id": sid}

    @app.get("/sessions/{token}/snippets")
    async def get_snippets(token: str):
        entry = registry.get(token)
        with entry.lock:
            return list_snippets(entry.session)

    @app.delete("/sessions/{token}/snippets/{snippet_id}", status_code=204)
    async def delete_snippet(token: str, snippet_id: str):
        entry = registry.get(token)
        with entry.lock:
            remove_snippet(entry.session, snippet_id)
        return Response(status_code=204)

    @app.post("/sessions/{token}/encode")
    async def post_encode(token: str):
        entry = registry.get(token)
        with entry.lock:
            result = encode(entry.session)
        return {
            "pairs": [
                {"parent": p.parent, "child": p.child, "property": p.property}
                for p in result.pairs
            ],
            "orphans": list(result.orphans),
            "warnings": list(result.warnings),
        }

    @app.get("/sessions/{token}/export")
    async def get_export(token: str, format: Optional[str] = None):
        if not format:
            raise ValidationError("query parameter 'format' is required")
        fmt = format_for_token(format)
        entry = registry.get(token)
        with entry.lock:
            body = export(entry.session, fmt)
        extension = FILE_EXTENSIONS[fmt]
        return Response(
            content=body,
            media_type=MEDIA_TYPES[fmt],
            headers={
                "Content-Disposition": f'attachment; filename="report{extension}"'
            },
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

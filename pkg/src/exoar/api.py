"""HTTP service for the review UI and scripted clients.

Error responses always carry a machine code from the closed enumeration
in :mod:`exoar.errors` (plus ``validation`` for malformed requests), so
clients never have to parse messages. Per-session API keys arrive in the
``X-Api-Key`` header at session creation, live in memory only, and are
never persisted or logged.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, File, Form, Header, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from .backends import Backend, KeyedBackend, LiveBackend, backend_from_spec
from .edits import EditAction, EditKind
from .errors import ExoarError, InvalidEdit
from .ocel import (
    build_ocel_for_session,
    export_manifest,
    propagate,
    serialize_ocel,
)
from .session import (
    EngineConfig,
    SessionEngine,
    SessionStore,
    session_to_document,
    _item_to_json,
)

STATUS_BY_CODE = {
    "not_found": 404,
    "busy": 409,
    "step_order_violation": 409,
    "nothing_confirmed": 409,
    "malformed_row": 400,
    "empty_file": 400,
    "empty_profession": 400,
    "edit_script": 400,
    "unknown_target": 400,
    "duplicate_add": 400,
    "invalid_edit": 400,
    "negative_count": 400,
    "empty_label": 400,
    "missing_context": 409,
    "missing_price_table": 400,
    "transport": 502,
    "auth_rejected": 502,
    "budget_exceeded": 502,
    "parse_failed": 502,
    "no_json_found": 502,
    "empty_list": 502,
    "all_records_invalid": 502,
    "corrupt_session": 500,
    "invalid_document": 500,
    "internal": 500,
}


def _error_response(code: str, message: str, details: dict | None = None) -> JSONResponse:
    body = {"code": code, "message": message}
    if details:
        body["details"] = details
    return JSONResponse(status_code=STATUS_BY_CODE.get(code, 500), content=body)


def create_app(
    store_dir: str | Path,
    backend: Backend | None = None,
    llm_spec: str = "live",
    base_url: str | None = None,
    model_id: str = "gpt-4.1",
    price_table: dict | None = None,
    config: EngineConfig | None = None,
    cors_origin: str | None = None,
) -> FastAPI:
    if backend is None:
        backend = backend_from_spec(llm_spec, base_url=base_url) if llm_spec != "live" \
            else backend_from_spec("live", base_url=base_url)
    engine = SessionEngine(
        store=SessionStore(store_dir),
        backend=backend,
        config=config or EngineConfig(model_id=model_id),
        price_table=price_table,
    )
    app = FastAPI(title="exoar", version="0.1.0")
    app.state.engine = engine
    app.state.api_keys = {}  # session id -> key, memory only

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ExoarError)
    async def _exoar_error(request: Request, exc: ExoarError) -> JSONResponse:
        return _error_response(exc.code, exc.message, exc.details or None)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error_response("validation", "request does not match the API contract")

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        code = "not_found" if exc.status_code == 404 else "validation"
        return JSONResponse(status_code=exc.status_code, content={"code": code, "message": str(exc.detail)})

    @app.exception_handler(Exception)
    async def _unhandled(request: Request, exc: Exception) -> JSONResponse:
        return _error_response("internal", "unexpected server error")

    def _session_backend(session_id: str) -> Backend:
        key = app.state.api_keys.get(session_id)
        if key and isinstance(engine.backend, LiveBackend):
            return KeyedBackend(engine.backend, key)
        return engine.backend

    @app.post("/sessions", status_code=201)
    def create_session(
        profession: str = Form(...),
        file: UploadFile = File(...),
        x_api_key: str | None = Header(default=None),
    ):
        data = file.file.read()
        session = engine.create(profession, data)
        if x_api_key:
            app.state.api_keys[session.id] = x_api_key
        return {
            "id": session.id,
            "title_summary": engine.title_summary(session.id),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = engine.get(session_id)
        return {
            "session": session_to_document(session),
            "title_summary": engine.title_summary(session_id),
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        engine.delete(session_id)
        app.state.api_keys.pop(session_id, None)
        return Response(status_code=204)

    @app.post("/sessions/{session_id}/steps/{step}/generate")
    def generate(session_id: str, step: int):
        outcome = engine.generate(session_id, step, backend=_session_backend(session_id))
        return {
            "step": step,
            "status": "generated",
            "candidates": [_item_to_json(step, item) for item in outcome.items],
            "review_sample": (
                None
                if outcome.review_sample is None
                else [_item_to_json(4, a) for a in outcome.review_sample]
            ),
            "records": [
                {
                    "attempts": record.attempts,
                    "prompt_tokens": record.prompt_tokens,
                    "completion_tokens": record.completion_tokens,
                    "model_id": record.request.model_id,
                }
                for record in outcome.records
            ],
            "warnings": outcome.warnings,
        }

    @app.post("/sessions/{session_id}/steps/{step}/review")
    async def review(session_id: str, step: int, request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error_response("validation", "request body must be JSON")
        if not isinstance(payload, dict) or not isinstance(payload.get("edits"), list):
            return _error_response("validation", 'body must be {"edits": [...]}')
        edits = []
        for entry in payload["edits"]:
            if not isinstance(entry, dict):
                raise InvalidEdit(f"malformed edit entry: {entry!r}")
            kind = entry.get("kind")
            if kind not in (k.value for k in EditKind):
                raise InvalidEdit(f"unknown edit kind: {kind!r}")
            edits.append(
                EditAction(
                    kind=EditKind(kind),
                    step=int(entry.get("step", step)),
                    target=entry.get("target", ""),
                    replacement=entry.get("replacement"),
                )
            )
        confirmed = engine.review(session_id, step, edits)
        return {
            "step": step,
            "status": "confirmed",
            "confirmed": [_item_to_json(step, item) for item in confirmed],
            "metrics": [row.as_dict() for row in engine.metrics(session_id)],
        }

    @app.get("/sessions/{session_id}/metrics")
    def metrics(session_id: str):
        rows = engine.metrics(session_id)
        session = engine.get(session_id)
        cost = None
        if session.price_table:
            cost = engine.estimate_cost(session_id)
        return {"rows": [row.as_dict() for row in rows], "estimated_cost": cost}

    def _export(session_id: str, include_body: bool) -> Response:
        session = engine.get(session_id)
        events = engine.parsed_log(session_id).events
        doc = build_ocel_for_session(session, events)
        enriched = propagate(events, session.step(4).confirmed_items)
        manifest = export_manifest(doc, total_events=len(events), enriched_count=len(enriched))
        headers = {
            "Content-Disposition": f'attachment; filename="ocel-{session_id}.json"',
            "X-Export-Events": str(manifest["events"]),
            "X-Export-Objects": str(manifest["objects"]),
            "X-Export-Object-Types": str(manifest["object_types"]),
            "X-Export-Event-Types": str(manifest["event_types"]),
            "X-Export-Excluded-Source-Events": str(manifest["excluded_source_events"]),
        }
        body = serialize_ocel(doc) if include_body else None
        return Response(content=body, headers=headers, media_type="application/json")

    @app.get("/sessions/{session_id}/export/ocel")
    def export_ocel(session_id: str):
        return _export(session_id, include_body=True)

    @app.head("/sessions/{session_id}/export/ocel")
    def export_ocel_head(session_id: str):
        return _export(session_id, include_body=False)

    @app.get("/sessions/{session_id}/export/manifest")
    def export_manifest_endpoint(session_id: str):
        session = engine.get(session_id)
        events = engine.parsed_log(session_id).events
        doc = build_ocel_for_session(session, events)
        enriched = propagate(events, session.step(4).confirmed_items)
        return export_manifest(doc, total_events=len(events), enriched_count=len(enriched))

    @app.get("/healthz")
    def health():
        return {"status": "ok"}

    return app

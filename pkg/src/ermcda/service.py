"""HTTP façade over the pipeline for the interactive workbench.

Sessions live in memory with explicit save-to-disk.  What-if runs apply a
sparse patch to a copy of the draft, re-validate, and recompute only the
stages downstream of the touched paths; the draft itself is never mutated.
"""

from __future__ import annotations

import copy
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import ErmcdaError, FrameModeError, ScenarioError
from .pipeline import (
    DOWNSTREAM,
    STAGES,
    Scenario,
    assemble_report,
    load_scenario,
    rule_mode_error,
    scenario_schema,
    scenario_to_doc,
    stage_decision,
    stage_mapping,
    stage_step1,
    stage_step2,
    stage_weights,
)


@dataclass
class Session:
    """One scenario draft with its latest run artifacts."""

    id: str
    doc: dict
    scenario: Scenario | None = None
    errors: list[tuple[str, str]] | None = None
    artifacts: dict | None = None
    report: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory sessions; saved scenarios persist as JSON files."""

    def __init__(self, data_dir: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir and self.data_dir.is_dir():
            for path in sorted(self.data_dir.glob("*.json")):
                try:
                    doc = json.loads(path.read_text(encoding="utf-8"))
                except (OSError, json.JSONDecodeError):
                    continue
                session = Session(id=path.stem, doc=doc)
                _revalidate(session)
                self._sessions[session.id] = session

    def create(self, doc: dict) -> Session:
        with self._lock:
            session = Session(id=uuid.uuid4().hex[:12], doc=doc)
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(session_id)

    def save(self, session: Session) -> Path:
        if self.data_dir is None:
            raise ErmcdaError("no data directory configured; start with --data-dir")
        self.data_dir.mkdir(parents=True, exist_ok=True)
        path = self.data_dir / f"{session.id}.json"
        path.write_text(
            json.dumps(session.doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return path


def _revalidate(session: Session) -> None:
    try:
        session.scenario = load_scenario(session.doc)
        session.doc = scenario_to_doc(session.scenario)
        session.errors = None
    except ScenarioError as exc:
        session.scenario = None
        session.errors = exc.errors
    session.artifacts = None
    session.report = None


def _error_body(errors: list[tuple[str, str]]) -> dict:
    return {"errors": [{"path": p, "message": m} for p, m in errors]}


def _apply_patch(doc: dict, assignments: dict) -> list[tuple[str, str]]:
    """Set dotted paths on a document in place; returns path errors."""
    errors = []
    for path in sorted(assignments):
        value = assignments[path]
        parts = path.split(".")
        target = doc
        ok = True
        for i, part in enumerate(parts[:-1]):
            if isinstance(target, list):
                if not part.isdigit() or int(part) >= len(target):
                    errors.append((path, f"no list index {part!r}"))
                    ok = False
                    break
                target = target[int(part)]
            elif isinstance(target, dict):
                if part not in target:
                    target[part] = {}
                target = target[part]
            else:
                errors.append((path, f"cannot descend into {'.'.join(parts[: i + 1])}"))
                ok = False
                break
        if not ok:
            continue
        leaf = parts[-1]
        if isinstance(target, list):
            if not leaf.isdigit() or int(leaf) >= len(target):
                errors.append((path, f"no list index {leaf!r}"))
                continue
            target[int(leaf)] = value
        elif isinstance(target, dict):
            target[leaf] = value
        else:
            errors.append((path, "cannot assign into a scalar"))
    return errors


def _dirty_stages(paths: list[str]) -> set[str]:
    """Stages whose inputs a set of patch paths can touch, with downstream."""
    dirty: set[str] = set()
    for path in paths:
        head = path.split(".", 1)[0]
        if head == "hierarchy":
            roots = ("weights",)
        elif head in ("mappings", "evaluations", "options"):
            roots = ("mapping",)
        elif head == "sources":
            roots = ("step1",) if path.endswith(".reliability") else STAGES
        elif head == "fusion":
            roots = ("step1",)
        elif head == "decision":
            roots = ("decision",)
        else:
            roots = STAGES
        for root in roots:
            dirty.update(DOWNSTREAM[root])
    return dirty


def _compute(scenario: Scenario, base: dict | None, dirty: set[str], lean=False):
    """Run the pipeline, reusing clean stage artifacts from a previous run."""
    arts = {}
    if base is None:
        dirty = set(STAGES)
    def need(stage):
        return stage in dirty or base is None
    arts["weights"] = stage_weights(scenario) if need("weights") else base["weights"]
    arts["mapping"] = stage_mapping(scenario) if need("mapping") else base["mapping"]
    arts["step1"] = (
        stage_step1(scenario, arts["mapping"]) if need("step1") else base["step1"]
    )
    arts["step2"] = (
        stage_step2(scenario, arts["weights"], arts["step1"])
        if need("step2")
        else base["step2"]
    )
    arts["decision"] = (
        stage_decision(scenario, arts["step2"]) if need("decision") else base["decision"]
    )
    report = assemble_report(
        scenario,
        arts["weights"],
        arts["mapping"],
        arts["step1"],
        arts["step2"],
        arts["decision"],
        lean=lean,
    )
    return report, arts


def _overridden_doc(doc: dict, rule: str | None, strategy: str | None) -> dict:
    out = copy.deepcopy(doc)
    if rule:
        out.setdefault("fusion", {})["rule"] = rule
    if strategy:
        out.setdefault("decision", {})["strategy"] = strategy
    return out


def _mode_conflict(doc: dict) -> None:
    """Raise the 409-mapped error when the rule cannot run on the frame mode."""
    rule = doc.get("fusion", {}).get("rule", "pcr6")
    mode = doc.get("frame", {}).get("mode")
    if mode in ("DST", "DSmT"):
        msg = rule_mode_error(rule, mode)
        if msg:
            raise FrameModeError(f"rule {rule!r}: {msg}")


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ermcda service", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(data_dir)
    app.state.store = store

    def _ermcda_status(exc: ErmcdaError) -> int:
        cause = exc
        while cause is not None:
            if isinstance(cause, FrameModeError):
                return 409
            cause = cause.__cause__ if isinstance(cause.__cause__, Exception) else None
        return 422

    @app.exception_handler(ErmcdaError)
    async def _handle_ermcda(request, exc: ErmcdaError):
        if isinstance(exc, ScenarioError):
            return JSONResponse(status_code=422, content=_error_body(exc.errors))
        return JSONResponse(
            status_code=_ermcda_status(exc),
            content=_error_body([("runtime", str(exc))]),
        )

    def _get_or_404(session_id: str) -> Session | JSONResponse:
        session = store.get(session_id)
        if session is None:
            return JSONResponse(
                status_code=404,
                content=_error_body([("id", f"unknown scenario {session_id!r}")]),
            )
        return session

    @app.post("/api/scenarios", status_code=201)
    async def create_scenario(doc: dict = Body(...)):
        try:
            scenario = load_scenario(doc)
        except ScenarioError as exc:
            return JSONResponse(status_code=422, content=_error_body(exc.errors))
        session = store.create(scenario_to_doc(scenario))
        session.scenario = scenario
        return {"id": session.id}

    @app.get("/api/scenarios/{session_id}")
    async def get_scenario(session_id: str):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            body = dict(session.doc)
            if session.errors:
                return JSONResponse(
                    status_code=200,
                    content={"scenario": body, **_error_body(session.errors)},
                )
            return body

    @app.put("/api/scenarios/{session_id}")
    async def put_scenario(session_id: str, doc: dict = Body(...)):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            session.doc = doc
            _revalidate(session)
            if session.errors is not None:
                return JSONResponse(
                    status_code=422, content=_error_body(session.errors)
                )
            return {"id": session.id, "valid": True}

    @app.post("/api/scenarios/{session_id}/run")
    async def run_scenario(session_id: str, body: dict = Body(default=None)):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        body = body or {}
        with session.lock:
            if session.errors is not None:
                return JSONResponse(
                    status_code=422, content=_error_body(session.errors)
                )
            rule = body.get("rule")
            strategy = body.get("strategy")
            doc = _overridden_doc(session.doc, rule, strategy)
            _mode_conflict(doc)
            scenario = load_scenario(doc)
            report, arts = _compute(scenario, None, set(STAGES))
            session.report = report
            if not rule and not strategy:
                session.artifacts = {
                    "doc": json.dumps(session.doc, sort_keys=True),
                    **arts,
                }
            return report

    @app.post("/api/scenarios/{session_id}/whatif")
    async def whatif_scenario(session_id: str, body: dict = Body(default=None)):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        body = body or {}
        with session.lock:
            if session.errors is not None:
                return JSONResponse(
                    status_code=422, content=_error_body(session.errors)
                )
            assignments = body.get("set", {})
            patched = _overridden_doc(
                session.doc, body.get("rule"), body.get("strategy")
            )
            patch_errors = _apply_patch(patched, assignments)
            if patch_errors:
                return JSONResponse(
                    status_code=422, content=_error_body(patch_errors)
                )
            _mode_conflict(patched)
            scenario = load_scenario(patched)
            paths = list(assignments)
            if body.get("rule"):
                paths.append("fusion.rule")
            if body.get("strategy"):
                paths.append("decision.strategy")
            base = None
            if (
                session.artifacts is not None
                and session.artifacts.get("doc")
                == json.dumps(session.doc, sort_keys=True)
            ):
                base = session.artifacts
            report, _ = _compute(scenario, base, _dirty_stages(paths))
            return report

    @app.get("/api/scenarios/{session_id}/report")
    async def get_report(session_id: str):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            if session.report is None:
                return JSONResponse(
                    status_code=404,
                    content=_error_body([("report", "no report yet; POST …/run first")]),
                )
            return session.report

    @app.post("/api/scenarios/{session_id}/save")
    async def save_scenario(session_id: str):
        session = _get_or_404(session_id)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            path = store.save(session)
            return {"id": session.id, "path": str(path)}

    @app.get("/api/schema")
    async def get_schema():
        return scenario_schema()

    return app


def serve(host: str = "127.0.0.1", port: int = 8080, data_dir: str | None = None):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port, log_level="info")

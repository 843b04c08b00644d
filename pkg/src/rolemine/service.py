"""HTTP curation API over a pipeline state directory.

The server owns one clustering session: mentions.norm.jsonl is clustered at
startup (honoring pins stored in roleset.json), and every mutation replays
the full session op log over that state, so the exported RoleSet and a
direct apply_curation replay are identical by construction.  Reads are
concurrent; mutations serialize through one lock.  Ops may carry a client
``op_id`` for idempotent retries and an ``if_version`` guard for optimistic
concurrency.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .discovery import (
    ClusterState,
    RoleSet,
    apply_curation,
    cluster,
    graph_to_json,
    to_threshold,
)
from .errors import NameCollision, RolemineError, StateCorrupt, UnknownRole
from .pipeline import load_normalized, write_json


class CurationOp(BaseModel):
    op: Literal["merge", "remove", "rename", "pin"]
    a: str | None = None
    b: str | None = None
    role: str | None = None
    name: str | None = None
    op_id: str | None = Field(default=None, description="idempotency key")
    if_version: int | None = Field(
        default=None, description="reject unless the state version matches"
    )

    def core(self) -> dict:
        body = {"op": self.op}
        for key in ("a", "b", "role", "name"):
            value = getattr(self, key)
            if value is not None:
                body[key] = value
        return body


class RoleView(BaseModel):
    id: str
    name: str
    size: int
    action_label: list[str]
    object_label: list[str]


class ClusterView(BaseModel):
    id: str
    side: str
    label: list[str]
    size: int


class ClustersResponse(BaseModel):
    version: int
    roles: list[RoleView]
    actions: list[ClusterView]
    objects: list[ClusterView]


class CurationResponse(BaseModel):
    version: int
    applied: bool
    roles: list[RoleView]


class ExportResponse(BaseModel):
    path: str
    roles: int
    replay_equal: bool


class CurationSession:
    """All mutable server state; one instance per app."""

    def __init__(self, state_dir: Path, threshold) -> None:
        self.state_dir = state_dir
        self.threshold = to_threshold(threshold)
        norm_path = state_dir / "mentions.norm.jsonl"
        if not norm_path.exists():
            raise StateCorrupt(f"{norm_path} not found; run the normalize stage first")
        if not (state_dir / "rolegraph.json").exists():
            raise StateCorrupt(
                f"{state_dir / 'rolegraph.json'} not found; run the discover stage first"
            )
        try:
            self.mentions = load_normalized(norm_path)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise StateCorrupt(f"cannot load {norm_path}: {exc}")
        self.pins: tuple = ()
        prior_log: list[dict] = []
        roleset_path = state_dir / "roleset.json"
        if roleset_path.exists():
            try:
                prior = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise StateCorrupt(f"cannot load {roleset_path}: {exc}")
            self.pins = tuple(prior.pins)
            prior_log = list(prior.log)
        self.state: ClusterState = cluster(
            self.mentions, threshold=self.threshold, pins=self.pins
        )
        # Resume the exported curation when its op log still replays cleanly
        # (role ids are deterministic for an unchanged mention list).  After a
        # re-discovery over different mentions the ids no longer line up, so
        # the stale log is dropped and only the pins carry over.
        self.ops: list[dict] = []
        if prior_log:
            try:
                apply_curation(self.state, prior_log, pins=self.pins)
            except RolemineError:
                pass
            else:
                self.ops = prior_log
        self.applied_op_ids: set[str] = set()
        self.version = 0
        self.lock = threading.Lock()

    def role_set(self) -> RoleSet:
        return apply_curation(self.state, self.ops, pins=self.pins)

    def role_views(self, role_set: RoleSet) -> list[RoleView]:
        views = []
        for role in role_set.roles:
            a_cid, o_cid = role.source_pairs[0]
            views.append(
                RoleView(
                    id=role.role_id,
                    name=role.name,
                    size=len(role.member_ids),
                    action_label=list(self.state.actions[a_cid].label),
                    object_label=list(self.state.objects[o_cid].label),
                )
            )
        return views

    def apply(self, op: CurationOp) -> tuple[bool, RoleSet]:
        with self.lock:
            if op.op_id is not None and op.op_id in self.applied_op_ids:
                return False, self.role_set()
            if op.if_version is not None and op.if_version != self.version:
                raise _Conflict(
                    f"state is at version {self.version}, op expected {op.if_version}"
                )
            candidate = self.ops + [op.core()]
            role_set = apply_curation(self.state, candidate, pins=self.pins)
            self.ops = candidate
            if op.op_id is not None:
                self.applied_op_ids.add(op.op_id)
            self.version += 1
            return True, role_set


class _Conflict(Exception):
    pass


def create_app(state_dir: Path | str, threshold=0.5) -> FastAPI:
    state_dir = Path(state_dir)
    session = CurationSession(state_dir, threshold)
    app = FastAPI(title="rolemine curation API", version="1")
    app.state.session = session

    @app.exception_handler(RolemineError)
    async def _rolemine_error(request, exc: RolemineError) -> JSONResponse:
        status = 400
        if isinstance(exc, UnknownRole):
            status = 404
        elif isinstance(exc, NameCollision):
            status = 409
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/api/v1/clusters", response_model=ClustersResponse)
    def get_clusters() -> ClustersResponse:
        role_set = session.role_set()
        actions = [
            ClusterView(id=f"a{cid}", side="action", label=list(c.label), size=c.size)
            for cid, c in sorted(session.state.actions.items())
        ]
        objects = [
            ClusterView(id=f"o{cid}", side="object", label=list(c.label), size=c.size)
            for cid, c in sorted(session.state.objects.items())
        ]
        return ClustersResponse(
            version=session.version,
            roles=session.role_views(role_set),
            actions=actions,
            objects=objects,
        )

    @app.get("/api/v1/graph")
    def get_graph() -> dict:
        return graph_to_json(session.state)

    @app.get("/api/v1/mentions")
    def get_mentions(cluster: str = Query(..., min_length=2)) -> dict:
        kind, raw = cluster[0], cluster[1:]
        if kind not in {"a", "o", "r"} or not raw.isdigit():
            raise HTTPException(400, f"bad cluster id {cluster!r}")
        if kind == "r":
            for role in session.role_set().roles:
                if role.role_id == cluster:
                    ids = sorted(role.member_ids)
                    break
            else:
                raise HTTPException(404, f"no cluster {cluster!r}")
        else:
            clusters = session.state.actions if kind == "a" else session.state.objects
            assign = session.state.a_of if kind == "a" else session.state.o_of
            if int(raw) not in clusters:
                raise HTTPException(404, f"no cluster {cluster!r}")
            ids = [i for i in range(len(session.mentions)) if assign[i] == int(raw)]
        rows = []
        for i in ids:
            m = session.mentions[i]
            rows.append(
                {
                    "mention_id": i,
                    "doc_id": m.doc_id,
                    "sentence": m.sentence_index,
                    "subject": m.subject,
                    "action": list(m.action_terms),
                    "object": list(m.object_terms),
                }
            )
        return {"cluster": cluster, "count": len(rows), "mentions": rows}

    @app.post("/api/v1/curation", response_model=CurationResponse)
    def post_curation(op: CurationOp) -> CurationResponse:
        try:
            applied, role_set = session.apply(op)
        except _Conflict as exc:
            raise HTTPException(409, str(exc))
        return CurationResponse(
            version=session.version,
            applied=applied,
            roles=session.role_views(role_set),
        )

    @app.post("/api/v1/export", response_model=ExportResponse)
    def post_export() -> ExportResponse:
        with session.lock:
            role_set = session.role_set()
            replay = apply_curation(session.state, list(session.ops), pins=session.pins)
            path = session.state_dir / "roleset.json"
            write_json(path, role_set.to_json())
        return ExportResponse(
            path=str(path),
            roles=len(role_set.roles),
            replay_equal=replay.to_json() == role_set.to_json(),
        )

    ui_dir = _ui_dir()
    if ui_dir is not None:
        # the bundle uses relative asset paths, so the page must live under /ui/
        @app.get("/", include_in_schema=False)
        def index() -> RedirectResponse:
            return RedirectResponse("/ui/")

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def _ui_dir() -> Path | None:
    """Locate the built curation UI bundle, when present."""
    candidates = [
        Path(__file__).resolve().parent / "data" / "ui",
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ]
    for c in candidates:
        if (c / "index.html").exists():
            return c
    return None

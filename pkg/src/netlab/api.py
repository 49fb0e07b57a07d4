"""HTTP service: sessions, console exec, state views, reports, events.

One process serves many lab sessions. The event endpoint is a
server-sent-event stream resumable by sequence number; everything else
is plain request/response. The companion UI and grading scripts consume
the same surface.
"""

from __future__ import annotations

import asyncio
import json
import uuid
from typing import AsyncIterator, Dict, Optional

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, StreamingResponse
from pydantic import BaseModel

from . import project
from .rib import NonConvergence
from .session import LabSession, SessionManager, UnknownDevice, UnknownSession

__all__ = ["create_app", "app"]

_VIEWS = {"route": "route", "bgp": "bgp", "ospf": "ospf_neighbor", "run": "run"}


class CreateSessionBody(BaseModel):
    scenario: str
    params: Dict[str, int] = {}
    mode: str = "unconfigured"


class ExecBody(BaseModel):
    command: str


def create_app(manager: Optional[SessionManager] = None) -> FastAPI:
    mgr = manager if manager is not None else SessionManager()
    app = FastAPI(title="netlab", version="0.1.0")
    app.state.manager = mgr
    # The web UI is served separately (static files on another port).
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def get_session(session_id: str) -> LabSession:
        try:
            return mgr.get(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    @app.post("/sessions")
    def create_session(body: CreateSessionBody) -> dict:
        groups = body.params.get("groups")
        try:
            session = mgr.create(body.scenario, groups=groups, mode=body.mode)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"id": session.id}

    @app.get("/sessions")
    def list_sessions() -> list:
        return [
            {"id": s.id, "scenario": s.scenario.name, "created_at": s.created_at}
            for s in mgr.list()
        ]

    @app.get("/sessions/{session_id}/topology", response_class=PlainTextResponse)
    def topology(session_id: str) -> str:
        from .topo import render_topology

        return render_topology(get_session(session_id).topology)

    @app.post("/sessions/{session_id}/devices/{device}/exec")
    def exec_command(session_id: str, device: str, body: ExecBody) -> dict:
        session = get_session(session_id)
        try:
            output, appended = session.exec(device, body.command)
        except UnknownDevice:
            raise HTTPException(status_code=404, detail=f"unknown device {device!r}")
        except NonConvergence as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return {"output": output, "events_appended": appended}

    @app.get("/sessions/{session_id}/devices/{device}/state", response_class=PlainTextResponse)
    def device_state(session_id: str, device: str, view: str = Query("route")) -> str:
        if view not in _VIEWS:
            raise HTTPException(status_code=400, detail=f"unknown view {view!r}")
        session = get_session(session_id)
        try:
            return session.state_view(device, _VIEWS[view])
        except UnknownDevice:
            raise HTTPException(status_code=404, detail=f"unknown device {device!r}")

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str, group: int = Query(...)) -> dict:
        session = get_session(session_id)
        try:
            return session.report(group).to_dict()
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str, from_seq: int = Query(0, alias="from")) -> StreamingResponse:
        session = get_session(session_id)

        async def stream() -> AsyncIterator[str]:
            # Async polling keeps the stream cancellable when the client
            # disconnects; a blocking wait in a worker thread would not be.
            next_seq = max(from_seq, 1)
            idle = 0
            while True:
                batch = session.events_since(next_seq)
                if batch:
                    idle = 0
                    for event in batch:
                        yield f"data: {json.dumps(event.to_record(), sort_keys=True)}\n\n"
                        next_seq = event.seq + 1
                else:
                    idle += 1
                    if idle % 50 == 0:
                        yield ": keepalive\n\n"
                    await asyncio.sleep(0.1)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.post("/sessions/restore")
    async def restore(request: Request) -> dict:
        data = await request.body()
        try:
            session = project.restore_project(data, uuid.uuid4().hex[:12])
        except project.ProjectError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        mgr.add(session)
        return {"id": session.id}

    @app.post("/sessions/{session_id}/save")
    def save(session_id: str) -> Response:
        session = get_session(session_id)
        return Response(content=project.save_project(session), media_type="application/zip")

    return app


app = create_app()

"""HTTP/WebSocket service around the simulation loop.

Endpoints:
  GET  /api/attachments       sorted attachment names, read from disk per call
  GET  /api/scene/{name}      X3D document (model/x3d+xml) or ?format=json
                              primitive mesh-list payload for plug-in-free clients
  GET  /api/state             latest snapshot (one-shot)
  POST /api/command           enqueue a control command
  WS   /ws/state              snapshot stream at the publish rate
"""
from __future__ import annotations

import asyncio
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, Response

from .. import linac
from ..simloop import SimulationLoop, UnknownTarget, ValidationFailed
from ..x3d import serialize_x3d
from .models import Command, CommandAck


def create_app(loop: SimulationLoop, run_thread: bool = True) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if run_thread:
            loop.start()
        yield
        if run_thread:
            loop.stop()

    app = FastAPI(title="virtlab", lifespan=lifespan)
    app.state.sim = loop

    @app.get("/api/attachments")
    def attachments() -> list:
        if loop.attachments_dir is None:
            return []
        try:
            return linac.list_attachments(loop.attachments_dir)
        except linac.DirectoryUnreadable as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from None

    @app.get("/api/scene/{name}")
    def scene(name: str, format: str = "x3d"):
        doc = loop.documents.get(name)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"no scene {name!r}")
        if format == "json":
            return JSONResponse(_mesh_list(doc))
        return Response(content=serialize_x3d(doc), media_type="model/x3d+xml")

    @app.get("/api/state")
    def state() -> dict:
        snapshot = loop.latest_snapshot()
        if snapshot is None:
            raise HTTPException(status_code=503, detail="no snapshot yet")
        return snapshot

    @app.post("/api/command", response_model=CommandAck)
    def command(cmd: Command) -> dict:
        try:
            return loop.handle_command(cmd.model_dump())
        except ValidationFailed as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        except UnknownTarget as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.websocket("/ws/state")
    async def ws_state(websocket: WebSocket):
        await websocket.accept()
        interval = 1.0 / loop.publish_hz
        last_tick = -1
        try:
            while True:
                snapshot = loop.latest_snapshot()
                # always the latest snapshot: slow consumers skip ticks
                # instead of accumulating a backlog
                if snapshot is not None and snapshot["tick"] > last_tick:
                    last_tick = snapshot["tick"]
                    await websocket.send_json(snapshot)
                await asyncio.sleep(interval)
        except WebSocketDisconnect:
            pass

    return app


def _mesh_list(doc) -> dict:
    """Flatten a scene into posed primitives so the client needs no X3D parser."""
    import numpy as np

    from ..scene import local_matrix
    from ..x3d import NodeKind

    solids = []

    def visit(node, matrix):
        m = matrix @ local_matrix(node)
        entry = None
        if node.kind is NodeKind.Sphere:
            entry = {"shape": "Sphere", "radius": node.fields["radius"].value}
        elif node.kind is NodeKind.Cylinder:
            entry = {"shape": "Cylinder", "radius": node.fields["radius"].value,
                     "height": node.fields["height"].value}
        elif node.kind is NodeKind.Box:
            s = node.fields["size"]
            entry = {"shape": "Box", "size": [s.x, s.y, s.z]}
        if entry is not None:
            entry["transform"] = [float(v) for v in m.ravel()]
            solids.append(entry)
        for _, child in node.children:
            visit(child, m)

    visit(doc.root, np.eye(4))
    return {"solids": solids}

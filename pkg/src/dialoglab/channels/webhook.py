"""HTTP webhook service speaking the canonical JSON message format.

POST /v1/messages takes one InboundMessage and answers with the ordered
action list for that turn (a typing notification always first). Messages
from the same user are processed strictly in arrival order via a per-user
serialization gate; distinct users run concurrently. Schema violations get
a 400 with the offending field, stale-context races a 409, and unexpected
errors a detail-free 500.
"""

from __future__ import annotations

import logging
import threading
from collections import defaultdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool
from starlette.staticfiles import StaticFiles

from .. import __version__
from ..context import ContextStore, StoreError, VersionConflict
from ..engine.planner import DialogEngine
from ..messages import DecodeError, InboundMessage, action_to_wire, decode_message

log = logging.getLogger("dialoglab.webhook")


class MessageGateway:
    """Engine plus store behind a per-user lock; the webhook's only state."""

    def __init__(self, engine: DialogEngine, store: ContextStore):
        self.engine = engine
        self.store = store
        self._locks: defaultdict[tuple[str, str], threading.Lock] = defaultdict(threading.Lock)
        self._locks_guard = threading.Lock()

    def _lock_for(self, message: InboundMessage) -> threading.Lock:
        slot = (message.key.channel_id, message.key.user_id)
        with self._locks_guard:
            return self._locks[slot]

    def process(self, message: InboundMessage) -> list[dict]:
        with self._lock_for(message):
            ctx = self.store.load_or_create(message.key)
            result = self.engine.run_turn(ctx, message)
            self.store.save(result.context)
        return [action_to_wire(a) for a in result.actions]


def create_app(
    engine: DialogEngine,
    store: ContextStore,
    *,
    static_dir: str | None = None,
    reload_hook=None,
) -> FastAPI:
    """The service; ``reload_hook`` (if given) runs before each turn."""
    app = FastAPI(title="dialoglab webhook", version=__version__)
    gateway = MessageGateway(engine, store)
    app.state.gateway = gateway

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "service": "dialoglab", "version": __version__}

    @app.post("/v1/messages")
    async def messages(request: Request):
        raw = await request.body()
        try:
            message = decode_message(raw)
        except DecodeError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": {"field": exc.field_name, "message": str(exc)}},
            )
        if reload_hook is not None:
            reload_hook()
        try:
            actions = await run_in_threadpool(gateway.process, message)
        except VersionConflict as exc:
            return JSONResponse(status_code=409, content={"error": {"message": str(exc)}})
        except StoreError:
            log.exception("storage failure for %s", message.key)
            return JSONResponse(status_code=500, content={"error": {"message": "internal error"}})
        except Exception:
            log.exception("turn failed for %s", message.key)
            return JSONResponse(status_code=500, content={"error": {"message": "internal error"}})
        return {"actions": actions}

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    return app


def serve(app: FastAPI, host: str, port: int, log_level: str = "info") -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level=log_level)

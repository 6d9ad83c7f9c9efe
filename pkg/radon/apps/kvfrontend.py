# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/kvfrontend.py
# Description:  KVFrontend: REST entry point of the key-value store
#
# Copyright (C) 2026 Dieter J Kybelksties <github@kybelksties.com>
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA  02111-1307, USA.
#
# @date: 2026-04-14
# @author: Dieter J Kybelksties

"""
``PUT /kv/<key>`` stores the request body, ``GET /kv/<key>`` returns it.

Status codes: 200 success, 404 unknown key, 400 malformed request, 414 key too long for the member stores,
500 store error, 503 no topology (coordinator silent on a cold start), 504 no answer from the ring in time.
"""

from __future__ import annotations

from urllib.parse import unquote

from radon.apps import kv_protocol as kv
from radon.apps.coordinator import COORDINATOR_NAME, fetch_topology
from radon.apps.ring import RingView, responsible_set
from radon.atomlib import Inbox, serve_events
from radon.engine import RuntimeContext
from radon.error import UnknownDestinationError
from radon.model import Envelope, Event
from radon.runtime_logger import log_debug, log_warning
from radon.storage import MAX_KEY_BYTES

KV_PREFIX = "/kv/"
TOPOLOGY_TIMEOUT = 2.0
REQUEST_TIMEOUT = 5.0
RETRYABLE = (kv.ROUTING_LOOP, "unknown destination")


def key_from_path(path: str) -> str | None:
    if not path.startswith(KV_PREFIX):
        return None
    key = unquote(path[len(KV_PREFIX):])
    return key if key and "/" not in key else None


def fits_store(ring: RingView, key: str) -> bool:
    """True if every member can store ``key`` under its ``<member>/<key>`` prefix."""
    longest = max((len(member.encode("utf-8")) for member in ring.members), default=0)
    return longest + 1 + len(key.encode("utf-8")) <= MAX_KEY_BYTES


class KvFrontend:
    def __init__(self, ctx: RuntimeContext, coordinator: str = COORDINATOR_NAME,
                 request_timeout: float = REQUEST_TIMEOUT, topology_timeout: float = TOPOLOGY_TIMEOUT):
        self.ctx = ctx
        self.name = ctx.self_name()
        self.coordinator = coordinator
        self.request_timeout = request_timeout
        self.topology_timeout = topology_timeout
        self.inbox = Inbox(ctx)
        self.ring: RingView | None = None

    async def refresh(self) -> bool:
        view = await fetch_topology(self.ctx, self.inbox, self.topology_timeout, self.coordinator)
        if view is None:
            log_warning("coordinator did not answer", atom=self.name)
            return False
        if self.ring is None or view.version >= self.ring.version:
            self.ring = view
        return True

    async def _exchange(self, message: kv.Put | kv.Get) -> kv.KvResponse | None:
        assert self.ring is not None
        primary = responsible_set(self.ring, message.key, 1)[0]
        try:
            self.ctx.send(primary, kv.encode(message))
        except UnknownDestinationError:
            return kv.KvResponse(message.correlation_id, kv.Outcome.ERROR, RETRYABLE[1].encode())
        reply = await self.inbox.receive_match(lambda e: self._answers(e, message.correlation_id),
                                               self.request_timeout)
        if reply is None:
            return None
        response = kv.decode(reply.payload)
        assert isinstance(response, kv.KvResponse)
        return response

    @staticmethod
    def _answers(envelope: Envelope, correlation: bytes) -> bool:
        message = kv.try_decode(envelope.payload)
        return isinstance(message, kv.KvResponse) and message.correlation_id == correlation

    def _request(self, event: Event, key: str) -> kv.Put | kv.Get:
        correlation = self.ctx.random_bytes(16)
        if event.method == "PUT":
            return kv.Put(key, event.body, self.name, correlation)
        return kv.Get(key, self.name, correlation)

    async def handle(self, event: Event) -> None:
        key = key_from_path(event.path)
        if key is None or event.method not in ("GET", "PUT"):
            self.ctx.respond(event, 400, b"expected GET or PUT /kv/<key>")
            return
        if (self.ring is None or not self.ring.points) and not await self.refresh():
            self.ctx.respond(event, 503, b"topology unavailable")
            return
        if not self.ring or not self.ring.points:
            self.ctx.respond(event, 503, b"ring is empty")
            return
        if not fits_store(self.ring, key):
            self.ctx.respond(event, 414, b"key too long")
            return
        response = await self._exchange(self._request(event, key))
        if response is not None and response.outcome == kv.Outcome.ERROR and response.error in RETRYABLE:
            log_debug("kv request failed, retrying with fresh topology", atom=self.name, error=response.error)
            await self.refresh()
            response = await self._exchange(self._request(event, key))
        if response is None:
            self.ctx.respond(event, 504, b"key-value store did not answer")
        elif response.outcome == kv.Outcome.OK:
            self.ctx.respond(event, 200, response.value if event.method == "GET" else b"")
        elif response.outcome == kv.Outcome.NOT_FOUND:
            self.ctx.respond(event, 404, b"")
        else:
            self.ctx.respond(event, 500, response.error.encode("utf-8"))


async def kvfrontend_main(ctx: RuntimeContext, event: Event | None) -> None:
    params = ctx.params
    frontend = KvFrontend(ctx, str(params.get("coordinator", COORDINATOR_NAME)),
                          float(params.get("request_timeout", REQUEST_TIMEOUT)),
                          float(params.get("topology_timeout", TOPOLOGY_TIMEOUT)))
    await frontend.refresh()
    await serve_events(ctx, event, frontend.handle, frontend.inbox)

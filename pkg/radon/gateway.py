# Repository:   https://github.com/PyRadon
# File Name:    radon/gateway.py
# Description:  HTTP ingress turning requests into events for reactive atoms
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
# @date: 2026-04-11
# @author: Dieter J Kybelksties

from __future__ import annotations

import asyncio
from dataclasses import dataclass

from aiohttp import web

from radon.engine import Engine
from radon.error import (InstanceStoppedError, MailboxFullError, PayloadTooLargeError, RouteConflictError,
                         UnknownDefinitionError)
from radon.model import MAX_PAYLOAD_BYTES, AtomConfiguration, Event, split_address
from radon.runtime_logger import log_debug, log_info, log_warning

DEFAULT_RESPONSE_TIMEOUT = 30.0


@dataclass(frozen=True)
class InstalledRoute:
    method: str
    path_prefix: str
    definition: str


def prefix_matches(prefix: str, path: str) -> bool:
    """Prefixes match on segment boundaries: ``/kv`` matches ``/kv`` and ``/kv/a`` but not ``/kvx``."""
    if not path.startswith(prefix):
        return False
    return len(path) == len(prefix) or prefix.endswith("/") or path[len(prefix)] == "/"


class RouteTable:
    """(method, path prefix) to definition; the longest matching prefix wins."""

    def __init__(self) -> None:
        self._routes: dict[tuple[str, str], str] = {}

    def check(self, config: AtomConfiguration) -> None:
        """
        :raises RouteConflictError: a route of the configuration is taken by another definition
        """
        for route in config.routes:
            owner = self._routes.get((route.method, route.path_prefix))
            if owner is not None and owner != config.definition:
                raise RouteConflictError(f"route {route.method} {route.path_prefix} already belongs to '{owner}'")

    def install(self, config: AtomConfiguration) -> None:
        """
        Add every route of a reactive configuration; nothing is installed on a conflict.
        :raises RouteConflictError: a route is taken by another definition
        """
        self.check(config)
        for route in config.routes:
            self._routes[(route.method, route.path_prefix)] = config.definition

    def match(self, method: str, path: str) -> str | None:
        method = method.upper()
        best: tuple[int, str] | None = None
        for (route_method, prefix), definition in self._routes.items():
            if route_method == method and prefix_matches(prefix, path):
                if best is None or len(prefix) > best[0]:
                    best = (len(prefix), definition)
        return None if best is None else best[1]

    def routes(self) -> list[InstalledRoute]:
        return [InstalledRoute(m, p, d) for (m, p), d in sorted(self._routes.items())]

    def __len__(self) -> int:
        return len(self._routes)


class Gateway:
    """
    aiohttp server in front of the engine; exactly one response per request.

    :param engine: dispatch target
    :param routes: the node's installed routes
    :param address: ``host:port`` to bind; port 0 picks a free port
    :param response_timeout: seconds to wait for the guest before answering 504
    """

    def __init__(self, engine: Engine, routes: RouteTable, address: str,
                 response_timeout: float = DEFAULT_RESPONSE_TIMEOUT):
        self.engine = engine
        self.routes = routes
        self.host, self.port = split_address(address)
        self.response_timeout = response_timeout
        self._runner: web.AppRunner | None = None
        self.app = web.Application(client_max_size=MAX_PAYLOAD_BYTES)
        self.app.router.add_route("*", "/{tail:.*}", self._handle)

    @property
    def bound_port(self) -> int:
        if self._runner is not None and self._runner.addresses:
            return int(self._runner.addresses[0][1])
        return self.port

    async def start(self) -> None:
        self._runner = web.AppRunner(self.app, access_log=None)
        await self._runner.setup()
        site = web.TCPSite(self._runner, self.host, self.port)
        await site.start()
        log_info("gateway listening", node=self.engine.node.node_id, address=f"{self.host}:{self.bound_port}")

    async def stop(self) -> None:
        if self._runner is not None:
            await self._runner.cleanup()
            self._runner = None

    async def _handle(self, request: web.Request) -> web.Response:
        definition = self.routes.match(request.method, request.path)
        if definition is None:
            return web.Response(status=404, body=b"no route")
        try:
            body = await request.read()
        except web.HTTPRequestEntityTooLarge:
            return web.Response(status=413, body=b"payload too large")
        loop = asyncio.get_running_loop()
        url = request.rel_url
        event = Event(method=request.method, path=url.raw_path, headers=tuple(request.headers.items()), body=body,
                      query=url.raw_query_string, response=loop.create_future())
        try:
            instance = self.engine.dispatch_event(definition, event)
        except UnknownDefinitionError:
            return web.Response(status=404, body=b"no such atom")
        except (MailboxFullError, InstanceStoppedError) as e:
            log_warning("event rejected", definition=definition, error=str(e))
            return web.Response(status=503, body=str(e).encode("utf-8"))
        except PayloadTooLargeError as e:
            return web.Response(status=413, body=str(e).encode("utf-8"))
        assert event.response is not None
        try:
            status, payload = await asyncio.wait_for(asyncio.shield(event.response), self.response_timeout)
        except asyncio.TimeoutError:
            self.engine.complete_event(event.correlation_id, 504, b"")
            log_warning("event timed out", definition=definition, atom=instance)
            return web.Response(status=504, body=b"atom did not respond in time")
        log_debug("event answered", atom=instance, status=status)
        return web.Response(status=status, body=payload)

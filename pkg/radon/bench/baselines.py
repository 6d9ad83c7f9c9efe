# Repository:   https://github.com/PyRadon
# File Name:    radon/bench/baselines.py
# Description:  The echo and radon-echo reference servers and the baseline runs against them
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
# @date: 2026-04-16
# @author: Dieter J Kybelksties

"""
``echo`` is a plain aiohttp server answering every request with its body. ``radon-echo`` is a one-node
runtime with the echo atom installed as an on-demand-expire reactive atom. Both run on their own event
loop in a background thread so the load generator keeps the calling loop to itself.
"""

from __future__ import annotations

import asyncio
import tempfile
import threading
from collections.abc import Coroutine
from pathlib import Path
from typing import Any, TypeVar

from aiohttp import web
from fundamentals.extended_enum import ExtendedEnum

from radon.apps import echo_app_configs
from radon.bench.runner import RunReport, run_workload
from radon.bench.workload import EchoMapper, WorkloadSpec
from radon.error import BenchError
from radon.model import MAX_PAYLOAD_BYTES, NodeInfo
from radon.node import RadonNode
from radon.runtime_logger import log_info, log_warning
from radon.settings import Durability, NodeSettings

T = TypeVar("T")


class BaselineMode(ExtendedEnum):
    ECHO = "echo"
    RADON_ECHO = "radon-echo"


class BackgroundLoop:
    """An event loop running in a daemon thread."""

    def __init__(self, name: str):
        self.loop = asyncio.new_event_loop()
        self._thread = threading.Thread(target=self._run, name=name, daemon=True)

    def _run(self) -> None:
        asyncio.set_event_loop(self.loop)
        self.loop.run_forever()

    def start(self) -> BackgroundLoop:
        self._thread.start()
        return self

    def call(self, coroutine: Coroutine[Any, Any, T], timeout: float | None = 30.0) -> T:
        return asyncio.run_coroutine_threadsafe(coroutine, self.loop).result(timeout)

    async def call_async(self, coroutine: Coroutine[Any, Any, T]) -> T:
        return await asyncio.wrap_future(asyncio.run_coroutine_threadsafe(coroutine, self.loop))

    def stop(self) -> None:
        self.loop.call_soon_threadsafe(self.loop.stop)
        self._thread.join(5.0)
        if not self._thread.is_alive():
            self.loop.close()


async def _echo(request: web.Request) -> web.Response:
    return web.Response(status=200, body=await request.read())


class EchoServer:
    """Native echo server: every method on every path returns the request body."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.host = host
        self.port = port
        self.app = web.Application(client_max_size=MAX_PAYLOAD_BYTES)
        self.app.router.add_route("*", "/{tail:.*}", _echo)
        self._runner: web.AppRunner | None = None

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"

    async def start(self) -> int:
        self._runner = web.AppRunner(self.app, access_log=None)
        await self._runner.setup()
        site = web.TCPSite(self._runner, self.host, self.port)
        await site.start()
        self.port = int(self._runner.addresses[0][1])
        return self.port

    async def stop(self) -> None:
        if self._runner is not None:
            await self._runner.cleanup()
            self._runner = None


class RadonEchoServer:
    """A single runtime node serving ``POST /echo`` through the echo atom."""

    def __init__(self, data_dir: str | Path, host: str = "127.0.0.1", settings: NodeSettings | None = None):
        self.host = host
        info = NodeInfo("echo", f"{host}:0", http_address=f"{host}:0")
        self.node = RadonNode(info, [info], data_dir,
                              settings or NodeSettings(durability=Durability.ASYNC))

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.node.http_port}"

    async def start(self) -> int:
        await self.node.start()
        for config in echo_app_configs():
            results = self.node.apply(config)
            if not all(result.ok for result in results):
                raise BenchError(f"echo atom not installed: {results}")
        return self.node.http_port

    def expired(self) -> int:
        return self.node.engine.stats.expired

    def spawned(self) -> int:
        return self.node.engine.stats.spawned

    async def stop(self) -> None:
        await self.node.stop()


async def run_baseline(mode: BaselineMode | str, spec: WorkloadSpec, seed: int = 42,
                       data_dir: str | Path | None = None, host: str = "127.0.0.1") -> RunReport:
    """
    Start the reference server in a background loop, drive the workload at it and stop it again.
    The radon-echo report carries the atom instances spawned and expired during the run.
    """
    mode = BaselineMode(mode) if not isinstance(mode, BaselineMode) else mode
    background = BackgroundLoop(f"radon-{mode.value}").start()
    scratch = None
    server: EchoServer | RadonEchoServer | None = None
    try:
        if mode == BaselineMode.ECHO:
            server = EchoServer(host)
        else:
            if data_dir is None:
                scratch = tempfile.TemporaryDirectory(prefix="radon-echo-")
                data_dir = scratch.name
            server = RadonEchoServer(data_dir, host)
        await background.call_async(server.start())
        log_info("baseline server up", mode=mode.value, url=server.url)
        report = await run_workload(spec, [server.url], seed, label=mode.value, mapper=EchoMapper())
        if isinstance(server, RadonEchoServer):
            report.extras["spawned"] = server.spawned()
            report.extras["expired"] = server.expired()
        return report
    finally:
        if server is not None:
            try:
                await background.call_async(server.stop())
            except Exception as e:
                log_warning("baseline server did not stop cleanly", mode=mode.value, error=str(e))
        background.stop()
        if scratch is not None:
            scratch.cleanup()


async def run_baselines(spec: WorkloadSpec, seed: int = 42, data_dir: str | Path | None = None,
                        host: str = "127.0.0.1") -> list[RunReport]:
    """The same workload against echo, then radon-echo."""
    return [await run_baseline(mode, spec, seed, data_dir, host) for mode in BaselineMode]

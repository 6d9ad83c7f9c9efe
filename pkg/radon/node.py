# Repository:   https://github.com/PyRadon
# File Name:    radon/node.py
# Description:  One runtime node: store, registry, router, engine, mesh and gateway wired together
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
# @date: 2026-04-15
# @author: Dieter J Kybelksties

from __future__ import annotations

import asyncio
import concurrent.futures
import signal
import time
from collections.abc import Callable, Coroutine
from pathlib import Path
from typing import Any, TypeVar

from radon.apps import builtin_definitions
from radon.engine import Engine, InProcessModuleEngine, ModuleEngine
from radon.error import AtomFault, RadonError
from radon.frames import SpawnReply, SpawnRequest, SpawnResult
from radon.gateway import Gateway, RouteTable
from radon.messaging import MessageRouter
from radon.model import AtomConfiguration, AtomKind, NodeInfo
from radon.naming import NameRegistry
from radon.runtime_logger import log_error, log_info, log_warning
from radon.settings import NodeSettings
from radon.storage import NodeStore
from radon.transport import Mesh, MeshOptions

T = TypeVar("T")


class RadonNode:
    """
    A complete node. Everything runs on the event loop that calls :meth:`start`; other threads use
    :meth:`submit`.

    :param info: this node
    :param cluster: every node of the deployment (this one may be included)
    :param data_dir: directory of the node store
    :param settings: tuning values, the factory defaults when omitted
    :param modules: definition source, the built-in definitions when omitted
    :param clock: monotonic clock for the engine's idle accounting
    """

    def __init__(self, info: NodeInfo, cluster: list[NodeInfo], data_dir: str | Path,
                 settings: NodeSettings | None = None, modules: ModuleEngine | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.info = info
        self.settings = settings or NodeSettings()
        self.data_dir = Path(data_dir)
        self.store = NodeStore(self.data_dir, self.settings.durability, self.settings.flush_interval,
                               self.settings.compact_min_bytes)
        self.registry = NameRegistry(info.node_id)
        self.router = MessageRouter(info.node_id, self.registry)
        self.modules = modules if modules is not None else InProcessModuleEngine(builtin_definitions())
        self.engine = Engine(info, self.modules, self.registry, self.router, self.store, clock=clock,
                             mailbox_capacity=self.settings.mailbox_capacity,
                             expiry_sweep_interval=self.settings.expiry_sweep_interval or None)
        self.engine.on_escalate = self._escalated
        self.routes = RouteTable()
        options = MeshOptions(self.settings.connect_timeout, self.settings.reconnect_backoff_min,
                              self.settings.reconnect_backoff_max)
        self.mesh = Mesh(info, [peer for peer in cluster if peer.node_id != info.node_id], self.registry,
                         self.router, spawn_handler=self._handle_spawn, options=options)
        self.gateway = Gateway(self.engine, self.routes, info.http, self.settings.response_timeout)
        self.exit_code = 0
        self._loop: asyncio.AbstractEventLoop | None = None
        self._stopped: asyncio.Event | None = None
        self._started = False

    @property
    def node_id(self) -> str:
        return self.info.node_id

    @property
    def http_port(self) -> int:
        return self.gateway.bound_port

    # -- lifecycle -----------------------------------------------------------------------------------

    async def start(self) -> None:
        self._loop = asyncio.get_running_loop()
        self._stopped = asyncio.Event()
        self.engine.start()
        await self.mesh.start()
        await self.gateway.start()
        self._started = True
        log_info("node started", node=self.node_id, listen=self.info.listen_address, http=self.info.http,
                 tags=",".join(sorted(self.info.tags)), definitions=",".join(self.modules.names()))

    async def stop(self) -> None:
        if not self._started:
            return
        self._started = False
        await self.gateway.stop()
        await self.engine.stop()
        await self.mesh.stop()
        self.store.close()
        log_info("node stopped", node=self.node_id, exit_code=self.exit_code)
        if self._stopped is not None:
            self._stopped.set()

    async def wait_stopped(self) -> None:
        assert self._stopped is not None
        await self._stopped.wait()

    def request_stop(self) -> None:
        """Stop from a signal handler or callback on the node's loop."""
        if self._loop is not None and self._started:
            self._loop.create_task(self.stop())

    def submit(self, coroutine: Coroutine[Any, Any, T]) -> concurrent.futures.Future[T]:
        """Run a coroutine on the node's loop from another thread."""
        if self._loop is None:
            raise RuntimeError(f"node {self.node_id} is not running")
        return asyncio.run_coroutine_threadsafe(coroutine, self._loop)

    def _escalated(self, name: str, fault: AtomFault) -> None:
        log_error("node halted by escalated fault", node=self.node_id, atom=name, error=str(fault.cause))
        self.exit_code = 1
        self.request_stop()

    async def serve(self) -> int:
        """
        Start, then run until SIGINT or SIGTERM (or an escalated fault).
        :return: the process exit code
        """
        await self.start()
        loop = asyncio.get_running_loop()
        for signum in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(signum, self.request_stop)
            except (NotImplementedError, RuntimeError):
                pass
        await self.wait_stopped()
        return self.exit_code

    # -- placement -----------------------------------------------------------------------------------

    def apply(self, config: AtomConfiguration) -> list[SpawnResult]:
        """
        Place one configuration on this node: start its daemons or install its reactive definition and
        routes. Every daemon name gets its own result; a failing name does not stop the others.
        """
        if config.kind == AtomKind.DAEMON:
            results = []
            for name in config.expand_names(self.node_id):
                try:
                    self.engine.spawn_daemon_named(config, name)
                    results.append(SpawnResult(name, True))
                except RadonError as e:
                    log_warning("daemon not started", atom=name, node=self.node_id, error=str(e))
                    results.append(SpawnResult(name, False, str(e)))
            return results
        try:
            self.routes.check(config)
            installed = self.engine.install_reactive(config)
            self.routes.install(config)
        except RadonError as e:
            log_warning("reactive atom not installed", definition=config.definition, node=self.node_id,
                        error=str(e))
            return [SpawnResult(config.definition, False, str(e))]
        return [SpawnResult(config.definition, True, "installed" if installed else "already installed")]

    async def _handle_spawn(self, request: SpawnRequest) -> SpawnReply:
        results = self.apply(request.configuration)
        return SpawnReply(request.request_id, self.node_id, tuple(results))

    def status(self) -> dict[str, Any]:
        engine = self.engine.status()
        return {
            "node": self.node_id,
            "listen": self.info.listen_address,
            "http": f"{self.gateway.host}:{self.http_port}",
            "connections": self.mesh.connections(),
            "instances": engine["instances"],
            "reactive": engine["reactive"],
            "routes": [f"{r.method} {r.path_prefix} -> {r.definition}" for r in self.routes.routes()],
            "stats": engine["stats"],
            "drops": self.router.counters.as_dict(),
            "names": len(self.registry.local_names()),
            "store_entries": len(self.store),
            "halted": engine["halted"],
        }

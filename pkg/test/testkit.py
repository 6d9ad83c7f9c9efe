# Repository:   https://github.com/PyRadon
# File Name:    test/testkit.py
# Description:  Shared helpers for the test suite: ports, quiet logging, node wiring, oracles
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
# @date: 2026-04-18
# @author: Dieter J Kybelksties

from __future__ import annotations

import asyncio
import socket
import time
from collections import defaultdict
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from pathlib import Path

from radon.apps import kv_protocol as kv
from radon.apps.coordinator import RING_STORAGE_KEY
from radon.apps.ring import RingView
from radon.engine import AtomDefinition, Engine, InProcessModuleEngine
from radon.log_channel_abc import LogChannelABC
from radon.log_levels import LogLevel
from radon.messaging import MessageRouter
from radon.model import NodeInfo, OnDemand, OnDemandExpire, One, RoundRobin
from radon.naming import NameRegistry
from radon.node import RadonNode
from radon.runtime_logger import configure_logging, get_logger
from radon.settings import Durability, NodeSettings
from radon.storage import NodeStore


def quiet_logging() -> None:
    """Only warnings and worse reach the console while tests run."""
    configure_logging("key_value", LogLevel.WARNING, "plain_text")


class LifecycleRecorder(LogChannelABC):
    """Collects the fields of every lifecycle line."""

    def __init__(self):
        super().__init__()
        self.lines: list[dict] = []

    def do_log(self, log_level, message="", **fields):
        if LogLevel.parse(log_level) == LogLevel.LIFECYCLE:
            self.lines.append(fields)

    def atoms(self, event: str) -> list[str]:
        return [line["atom"] for line in self.lines if line["event"] == event]


def record_lifecycle() -> LifecycleRecorder:
    """Attach a recorder to the global logger; quiet_logging() detaches it again."""
    recorder = LifecycleRecorder()
    get_logger().add_channel(recorder, selector="lifecycle")
    return recorder


def free_ports(count: int) -> list[int]:
    sockets = []
    try:
        for _ in range(count):
            sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            sock.bind(("127.0.0.1", 0))
            sockets.append(sock)
        return [sock.getsockname()[1] for sock in sockets]
    finally:
        for sock in sockets:
            sock.close()


def loopback_cluster(count: int, tags: dict[str, set[str]] | None = None) -> list[NodeInfo]:
    """Nodes n1..n<count> on free loopback ports; each gateway on its own free port."""
    ports = free_ports(2 * count)
    tags = tags or {}
    return [NodeInfo(f"n{i + 1}", f"127.0.0.1:{ports[2 * i]}", frozenset(tags.get(f"n{i + 1}", ())),
                     f"127.0.0.1:{ports[2 * i + 1]}")
            for i in range(count)]


def fast_settings(**overrides) -> NodeSettings:
    values = dict(durability=Durability.ASYNC, connect_timeout=1.0, reconnect_backoff_min=0.02,
                  reconnect_backoff_max=0.2, response_timeout=10.0)
    values.update(overrides)
    return NodeSettings(**values)


async def start_cluster(cluster: list[NodeInfo], root: Path, settings: NodeSettings | None = None,
                        definitions: list[AtomDefinition] | None = None) -> list[RadonNode]:
    """Start every node on the running loop and wait for the full mesh."""
    nodes = []
    for info in cluster:
        modules = None
        if definitions is not None:
            modules = InProcessModuleEngine(definitions)
        nodes.append(RadonNode(info, cluster, root / info.node_id, settings or fast_settings(), modules))
    for node in nodes:
        await node.start()
    for node in nodes:
        if not await node.mesh.wait_connected(10.0):
            raise AssertionError(f"{node.node_id} did not connect to every peer")
    return nodes


async def stop_cluster(nodes: list[RadonNode]) -> None:
    for node in nodes:
        await node.stop()


async def wait_until(predicate: Callable[[], bool], timeout: float = 5.0, interval: float = 0.01) -> bool:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if predicate():
            return True
        await asyncio.sleep(interval)
    return predicate()


class FakeClock:
    def __init__(self, start: float = 0.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


@dataclass
class LocalEngine:
    """An engine with its own registry and router, no transport and no sweep."""
    engine: Engine
    registry: NameRegistry
    router: MessageRouter
    clock: FakeClock


def local_engine(store: NodeStore, definitions: list[AtomDefinition], node: NodeInfo | None = None,
                 clock: FakeClock | None = None, mailbox_capacity: int = 64) -> LocalEngine:
    node = node or NodeInfo("n1", "127.0.0.1:0")
    clock = clock or FakeClock()
    registry = NameRegistry(node.node_id)
    router = MessageRouter(node.node_id, registry)
    engine = Engine(node, InProcessModuleEngine(definitions), registry, router, store, clock=clock,
                    mailbox_capacity=mailbox_capacity, expiry_sweep_interval=None)
    return LocalEngine(engine, registry, router, clock)


def stored_ring(store: NodeStore) -> RingView:
    """The ring the coordinator persisted in ``store``; empty before the first join."""
    raw = store.get(RING_STORAGE_KEY)
    if raw is None:
        return RingView()
    message = kv.decode(raw)
    assert isinstance(message, kv.RingUpdate)
    return message.view


def kv_placement(stores: Iterable[NodeStore]) -> dict[str, list[str]]:
    """Key-value key -> sorted members holding a copy, read straight from the node stores."""
    found: dict[str, list[str]] = defaultdict(list)
    for store in stores:
        for stored, _ in store.dump():
            name = stored.decode("utf-8")
            if name.startswith("kv/") and "#" not in name:
                member, _, key = name.rpartition("/")
                found[key].append(member)
    return {key: sorted(members) for key, members in found.items()}


# -- scheduling oracle -------------------------------------------------------------------------------

@dataclass
class _OracleInstance:
    serial: int
    events: int
    last_activity: float


@dataclass
class PolicyOracle:
    """
    Pure replay of the scheduling rules for handlers that answer at once and go straight back to
    receive. ``assign`` returns the creation serial (1-based) of the chosen instance.
    """
    policy: One | RoundRobin | OnDemand | OnDemandExpire
    instances: list[_OracleInstance] = field(default_factory=list)
    ring: dict[int, _OracleInstance] = field(default_factory=dict)
    cursor: int = 0
    created: int = 0

    def _create(self, now: float) -> _OracleInstance:
        self.created += 1
        instance = _OracleInstance(self.created, 1, now)
        self.instances.append(instance)
        return instance

    def assign(self, now: float) -> int:
        policy = self.policy
        if isinstance(policy, One):
            if self.instances:
                return self.instances[0].serial
            return self._create(now).serial
        if isinstance(policy, RoundRobin):
            index = self.cursor % policy.limit
            self.cursor += 1
            if index in self.ring:
                return self.ring[index].serial
            self.ring[index] = self._create(now)
            return self.ring[index].serial
        if isinstance(policy, OnDemand):
            return self._create(now).serial
        timeout = policy.idle_timeout
        self.instances = [i for i in self.instances
                          if not (timeout is not None and now - i.last_activity >= timeout)]
        if self.instances:
            chosen = min(self.instances, key=lambda i: (i.last_activity, i.serial))
            chosen.events += 1
            chosen.last_activity = now
        else:
            chosen = self._create(now)
        if policy.max_events is not None and chosen.events >= policy.max_events:
            self.instances.remove(chosen)
        return chosen.serial


def brute_force_responsible(points: list[tuple[int, str]], key_hash: int, count: int) -> list[str]:
    """Linear scan over the sorted points: first point at or after the hash, then clockwise."""
    ordered = sorted(points)
    start = 0
    for position, (point, _) in enumerate(ordered):
        if point >= key_hash:
            start = position
            break
    else:
        start = 0
    return [ordered[(start + offset) % len(ordered)][1] for offset in range(count)]

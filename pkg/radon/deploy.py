# Repository:   https://github.com/PyRadon
# File Name:    radon/deploy.py
# Description:  Places atom configurations on the nodes of a cluster
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

"""
The deployer talks to every node over the mesh port, announcing itself with a client-role Hello, and
sends one SpawnRequest per (configuration, eligible node). Nodes answer with a SpawnReply holding one
result per daemon name (or one for the reactive definition).
"""

from __future__ import annotations

import asyncio
import itertools
import json
from dataclasses import asdict, dataclass, field

from radon.error import ProtocolError
from radon.frames import Hello, PeerRole, Refuse, SpawnReply, SpawnRequest, encode_frame, read_frame
from radon.model import AtomConfiguration, NodeInfo, node_eligible
from radon.runtime_logger import log_debug, log_info, log_warning

DEFAULT_DEPLOY_TIMEOUT = 10.0


def eligible_nodes(config: AtomConfiguration, cluster: list[NodeInfo]) -> list[NodeInfo]:
    return [node for node in cluster if node_eligible(config, node)]


@dataclass(frozen=True)
class PlacementRow:
    config: str
    node: str
    name: str
    ok: bool
    detail: str = ""


@dataclass
class PlacementReport:
    rows: list[PlacementRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    @property
    def failures(self) -> list[PlacementRow]:
        return [row for row in self.rows if not row.ok]

    def placed(self, config: str) -> list[str]:
        """Nodes where a configuration was placed successfully."""
        return sorted({row.node for row in self.rows if row.config == config and row.ok})

    def render(self) -> str:
        header = ("config", "node", "name", "result")
        lines = [(row.config, row.node or "-", row.name or "-", "ok" if row.ok else f"error: {row.detail}")
                 for row in self.rows]
        widths = [max(len(str(cell)) for cell in column) for column in zip(header, *lines)]
        return "\n".join("  ".join(str(cell).ljust(width) for cell, width in zip(line, widths)).rstrip()
                         for line in [header, *lines])

    def to_json(self) -> str:
        return json.dumps([asdict(row) for row in self.rows])


class DeployClient:
    """A deploy-role connection to one node."""

    def __init__(self, node: NodeInfo, timeout: float = DEFAULT_DEPLOY_TIMEOUT, client_id: str = "radon-deploy"):
        self.node = node
        self.timeout = timeout
        self.client_id = client_id
        self._reader: asyncio.StreamReader | None = None
        self._writer: asyncio.StreamWriter | None = None
        self._request_ids = itertools.count(1)

    async def connect(self) -> None:
        """
        :raises ProtocolError: the node refused or answered with something other than Hello
        :raises OSError: the node is not reachable
        """
        self._reader, self._writer = await asyncio.wait_for(
            asyncio.open_connection(self.node.host, self.node.port), self.timeout)
        self._writer.write(encode_frame(Hello(self.client_id, "", (), PeerRole.CLIENT)))
        await self._writer.drain()
        reply = await asyncio.wait_for(read_frame(self._reader), self.timeout)
        if isinstance(reply, Refuse):
            raise ProtocolError(f"node {self.node.node_id} refused: {reply.reason}")
        if not isinstance(reply, Hello):
            raise ProtocolError(f"unexpected {type(reply).__name__} during handshake with {self.node.node_id}")

    async def spawn(self, config: AtomConfiguration) -> SpawnReply:
        if self._reader is None or self._writer is None:
            await self.connect()
        assert self._reader is not None and self._writer is not None
        request_id = next(self._request_ids)
        self._writer.write(encode_frame(SpawnRequest(request_id, config)))
        await self._writer.drain()
        reply = await asyncio.wait_for(read_frame(self._reader), self.timeout)
        if not isinstance(reply, SpawnReply) or reply.request_id != request_id:
            raise ProtocolError(f"unexpected reply to spawn request {request_id} from {self.node.node_id}")
        return reply

    async def close(self) -> None:
        if self._writer is not None:
            self._writer.close()
            try:
                await self._writer.wait_closed()
            except (ConnectionError, OSError):
                pass
            self._writer = None
            self._reader = None

    async def __aenter__(self) -> DeployClient:
        await self.connect()
        return self

    async def __aexit__(self, *exc_info: object) -> None:
        await self.close()


async def deploy(configs: list[AtomConfiguration], cluster: list[NodeInfo],
                 timeout: float = DEFAULT_DEPLOY_TIMEOUT) -> PlacementReport:
    """
    Place every configuration on its eligible nodes, in document order.

    A configuration without eligible nodes, an unreachable node or a failed spawn is reported and the
    deployment carries on with the rest.

    :param configs: the configuration document
    :param cluster: the nodes
    :param timeout: per-request timeout in seconds
    :return: one row per started name, installed definition or failure
    """
    report = PlacementReport()
    clients: dict[str, DeployClient] = {}
    broken: dict[str, str] = {}
    try:
        for config in configs:
            targets = eligible_nodes(config, cluster)
            if not targets:
                log_warning("no eligible node", config=config.label)
                report.rows.append(PlacementRow(config.label, "", "", False, "no eligible node"))
                continue
            for node in targets:
                if node.node_id in broken:
                    report.rows.append(PlacementRow(config.label, node.node_id, "", False, broken[node.node_id]))
                    continue
                client = clients.get(node.node_id)
                try:
                    if client is None:
                        client = DeployClient(node, timeout)
                        await client.connect()
                        clients[node.node_id] = client
                    reply = await client.spawn(config)
                except (OSError, asyncio.TimeoutError, asyncio.IncompleteReadError, ProtocolError) as e:
                    detail = f"node unreachable: {e or type(e).__name__}"
                    broken[node.node_id] = detail
                    log_warning("deploy failed", node=node.node_id, config=config.label, error=detail)
                    report.rows.append(PlacementRow(config.label, node.node_id, "", False, detail))
                    continue
                for result in reply.results:
                    report.rows.append(PlacementRow(config.label, node.node_id, result.name, result.ok, result.detail))
                log_debug("placed", config=config.label, node=node.node_id, results=len(reply.results))
    finally:
        for client in clients.values():
            await client.close()
    log_info("deployment finished", rows=len(report.rows), failures=len(report.failures))
    return report

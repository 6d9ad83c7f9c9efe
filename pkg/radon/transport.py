# Repository:   https://github.com/PyRadon
# File Name:    radon/transport.py
# Description:  Full-mesh TCP links between nodes, registry propagation and envelope forwarding
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
# @date: 2026-04-09
# @author: Dieter J Kybelksties

"""
One TCP connection per node pair; the node with the smaller id dials, the other accepts. Each link
has a single writer task fed by a queue, so frames leave in the order they were enqueued. On every
new link both sides send their locally owned registry records as deltas; when a link drops the
peer's names are purged and the dialer reconnects with exponential backoff.

Deploy clients use the same listener: they say Hello with the client role and send SpawnRequests.
"""

from __future__ import annotations

import asyncio
import itertools
import time
from collections.abc import Awaitable, Callable
from dataclasses import dataclass

from radon.error import ProtocolError
from radon.frames import (PROTOCOL_VERSION, Frame, Hello, PeerRole, Ping, Refuse, SpawnReply, SpawnRequest,
                          encode_frame, read_frame)
from radon.messaging import MessageRouter
from radon.model import Envelope, NodeInfo
from radon.naming import AliasDelta, DeregisterDelta, NameRegistry, RegisterDelta, RegistryDelta
from radon.runtime_logger import log_debug, log_info, log_warning

SpawnHandler = Callable[[SpawnRequest], Awaitable[SpawnReply]]


@dataclass(frozen=True)
class MeshOptions:
    connect_timeout: float = 5.0
    backoff_min: float = 0.1
    backoff_max: float = 2.0


class Link:
    """An established connection to one peer."""

    def __init__(self, peer: Hello, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        self.peer = peer
        self.reader = reader
        self.writer = writer
        self._queue: asyncio.Queue[bytes | None] = asyncio.Queue()
        self._writer_task = asyncio.get_running_loop().create_task(self._write_loop())
        self.closed = False

    @property
    def peer_id(self) -> str:
        return self.peer.node_id

    def enqueue(self, frame: Frame) -> None:
        if not self.closed:
            self._queue.put_nowait(encode_frame(frame))

    async def _write_loop(self) -> None:
        try:
            while True:
                data = await self._queue.get()
                if data is None:
                    break
                self.writer.write(data)
                while not self._queue.empty():
                    more = self._queue.get_nowait()
                    if more is None:
                        await self.writer.drain()
                        return
                    self.writer.write(more)
                await self.writer.drain()
        except (ConnectionError, OSError) as e:
            log_debug("link write failed", peer=self.peer_id, error=str(e))
            self.writer.close()

    async def close(self) -> None:
        if self.closed:
            return
        self.closed = True
        self._queue.put_nowait(None)
        try:
            await asyncio.wait_for(self._writer_task, 1.0)
        except (asyncio.TimeoutError, asyncio.CancelledError):
            self._writer_task.cancel()
        self.writer.close()
        try:
            await self.writer.wait_closed()
        except (ConnectionError, OSError):
            pass


class Mesh:
    """
    The node's side of the full mesh.

    :param node: this node
    :param peers: every other configured node
    :param registry: replicated name table; its local deltas are broadcast to all links
    :param router: receives envelopes arriving from peers
    :param spawn_handler: serves SpawnRequests from deploy clients
    """

    def __init__(self, node: NodeInfo, peers: list[NodeInfo], registry: NameRegistry, router: MessageRouter,
                 spawn_handler: SpawnHandler | None = None, options: MeshOptions | None = None):
        self.node = node
        self.peers = {peer.node_id: peer for peer in peers if peer.node_id != node.node_id}
        self.registry = registry
        self.router = router
        self.spawn_handler = spawn_handler
        self.options = options or MeshOptions()
        self.links: dict[str, Link] = {}
        self._server: asyncio.AbstractServer | None = None
        self._tasks: set[asyncio.Task] = set()
        self._loop: asyncio.AbstractEventLoop | None = None
        self._changed: asyncio.Condition | None = None
        self._pings: dict[int, asyncio.Future] = {}
        self._clients: set[asyncio.StreamWriter] = set()
        self._nonces = itertools.count(1)
        self._stopping = False
        router.forwarder = self
        registry.add_listener(self._on_local_delta)

    @property
    def hello(self) -> Hello:
        return Hello(self.node.node_id, self.node.listen_address, tuple(sorted(self.node.tags)))

    def connections(self) -> list[str]:
        return sorted(self.links)

    # -- lifecycle -----------------------------------------------------------------------------------

    async def start(self) -> None:
        """Listen on the node's address and start dialing every peer with a larger id."""
        self._loop = asyncio.get_running_loop()
        self._changed = asyncio.Condition()
        self._server = await asyncio.start_server(self._accept, self.node.host, self.node.port)
        log_info("mesh listening", node=self.node.node_id, address=self.node.listen_address)
        self.connect_mesh()

    def connect_mesh(self) -> None:
        for peer_id in sorted(self.peers):
            if self.node.node_id < peer_id:
                self._spawn(self._dial_loop(self.peers[peer_id]))

    def _spawn(self, coroutine: Awaitable[None]) -> None:
        assert self._loop is not None
        task = self._loop.create_task(coroutine)  # type: ignore[arg-type]
        self._tasks.add(task)
        task.add_done_callback(self._tasks.discard)

    async def stop(self) -> None:
        self._stopping = True
        if self._server is not None:
            self._server.close()
        for task in list(self._tasks):
            task.cancel()
        for link in list(self.links.values()):
            await link.close()
        self.links.clear()
        for client in list(self._clients):
            client.close()
        if self._tasks:
            await asyncio.gather(*self._tasks, return_exceptions=True)
        if self._server is not None:
            await self._server.wait_closed()

    async def wait_connected(self, timeout: float = 10.0, peers: list[str] | None = None) -> bool:
        """Wait until links to all (or the given) peers are up."""
        assert self._changed is not None
        wanted = set(peers if peers is not None else self.peers)

        async def _all_up() -> None:
            async with self._changed:  # type: ignore[union-attr]
                await self._changed.wait_for(lambda: wanted <= set(self.links))  # type: ignore[union-attr]

        try:
            await asyncio.wait_for(_all_up(), timeout)
            return True
        except asyncio.TimeoutError:
            return False

    async def _notify_changed(self) -> None:
        assert self._changed is not None
        async with self._changed:
            self._changed.notify_all()

    # -- connection establishment -------------------------------------------------------------------

    async def _dial_loop(self, peer: NodeInfo) -> None:
        backoff = self.options.backoff_min
        while not self._stopping:
            try:
                reader, writer = await asyncio.wait_for(asyncio.open_connection(peer.host, peer.port),
                                                        self.options.connect_timeout)
            except (OSError, asyncio.TimeoutError):
                await asyncio.sleep(backoff)
                backoff = min(backoff * 2, self.options.backoff_max)
                continue
            try:
                writer.write(encode_frame(self.hello))
                await writer.drain()
                reply = await asyncio.wait_for(read_frame(reader), self.options.connect_timeout)
                if isinstance(reply, Refuse):
                    log_warning("peer refused connection", peer=peer.node_id, reason=reply.reason)
                    raise ProtocolError(reply.reason)
                if not isinstance(reply, Hello) or reply.node_id != peer.node_id:
                    raise ProtocolError(f"unexpected handshake reply from {peer.node_id}")
                if reply.version != PROTOCOL_VERSION:
                    raise ProtocolError(f"protocol version {reply.version} != {PROTOCOL_VERSION}")
            except (OSError, asyncio.TimeoutError, asyncio.IncompleteReadError, ProtocolError) as e:
                log_debug("handshake failed", peer=peer.node_id, error=str(e))
                writer.close()
                await asyncio.sleep(backoff)
                backoff = min(backoff * 2, self.options.backoff_max)
                continue
            backoff = self.options.backoff_min
            await self._run_link(Link(reply, reader, writer))

    async def _accept(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        try:
            hello = await asyncio.wait_for(read_frame(reader), self.options.connect_timeout)
        except (OSError, asyncio.TimeoutError, asyncio.IncompleteReadError, ProtocolError) as e:
            log_debug("inbound handshake failed", error=str(e))
            writer.close()
            return
        if not isinstance(hello, Hello):
            await self._refuse(writer, "expected hello")
            return
        if hello.version != PROTOCOL_VERSION:
            await self._refuse(writer, f"protocol version mismatch: {hello.version} != {PROTOCOL_VERSION}")
            return
        if hello.role == PeerRole.CLIENT:
            writer.write(encode_frame(self.hello))
            await writer.drain()
            await self._serve_client(hello, reader, writer)
            return
        if hello.node_id == self.node.node_id or hello.node_id in self.links:
            await self._refuse(writer, f"duplicate node id '{hello.node_id}'")
            return
        if hello.node_id not in self.peers:
            await self._refuse(writer, f"unknown node id '{hello.node_id}'")
            return
        writer.write(encode_frame(self.hello))
        await writer.drain()
        await self._run_link(Link(hello, reader, writer))

    async def _refuse(self, writer: asyncio.StreamWriter, reason: str) -> None:
        log_warning("refusing connection", node=self.node.node_id, reason=reason)
        try:
            writer.write(encode_frame(Refuse(reason)))
            await writer.drain()
        except (ConnectionError, OSError):
            pass
        writer.close()

    # -- established links ---------------------------------------------------------------------------

    async def _run_link(self, link: Link) -> None:
        peer_id = link.peer_id
        self.links[peer_id] = link
        snapshot = self.registry.snapshot(owner=self.node.node_id)
        for record in snapshot.records:
            link.enqueue(RegisterDelta(record.name, record.node, record.incarnation))
        for alias, members in snapshot.aliases:
            for member in members:
                link.enqueue(AliasDelta(alias, member, True))
        log_info("link up", node=self.node.node_id, peer=peer_id)
        await self._notify_changed()
        try:
            while True:
                frame = await read_frame(link.reader)
                self._handle_peer_frame(link, frame)
        except (asyncio.IncompleteReadError, ConnectionError, OSError):
            pass
        except ProtocolError as e:
            log_warning("protocol error on link", peer=peer_id, error=str(e))
        finally:
            if self.links.get(peer_id) is link:
                del self.links[peer_id]
            await link.close()
            purged = self.registry.purge_node(peer_id)
            if not self._stopping:
                log_warning("link down", node=self.node.node_id, peer=peer_id, purged=len(purged))
                await self._notify_changed()

    def _handle_peer_frame(self, link: Link, frame: Frame) -> None:
        if isinstance(frame, Envelope):
            self.router.deliver_local(frame)
        elif isinstance(frame, (RegisterDelta, DeregisterDelta, AliasDelta)):
            self.registry.apply_remote(frame)
        elif isinstance(frame, Ping):
            if frame.reply:
                waiter = self._pings.pop(frame.nonce, None)
                if waiter is not None and not waiter.done():
                    waiter.set_result(time.perf_counter())
            else:
                link.enqueue(Ping(frame.nonce, reply=True))
        else:
            raise ProtocolError(f"unexpected {type(frame).__name__} frame from peer")

    async def _serve_client(self, hello: Hello, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        log_debug("deploy client connected", client=hello.node_id)
        self._clients.add(writer)
        try:
            while True:
                frame = await read_frame(reader)
                if isinstance(frame, SpawnRequest) and self.spawn_handler is not None:
                    reply = await self.spawn_handler(frame)
                elif isinstance(frame, Ping):
                    writer.write(encode_frame(Ping(frame.nonce, reply=True)))
                    await writer.drain()
                    continue
                else:
                    raise ProtocolError(f"unexpected {type(frame).__name__} frame from client")
                writer.write(encode_frame(reply))
                await writer.drain()
        except (asyncio.IncompleteReadError, ConnectionError, OSError):
            pass
        except ProtocolError as e:
            log_warning("protocol error from client", client=hello.node_id, error=str(e))
        finally:
            self._clients.discard(writer)
            writer.close()

    # -- outbound traffic ----------------------------------------------------------------------------

    def forward_envelope(self, dest_node: str, envelope: Envelope) -> bool:
        """
        Queue an envelope on the link to its node.
        :return: False if there is no live link (the caller counts the drop)
        """
        link = self.links.get(dest_node)
        if link is None or link.closed:
            return False
        link.enqueue(envelope)
        return True

    def broadcast(self, frame: Frame) -> int:
        sent = 0
        for link in list(self.links.values()):
            if not link.closed:
                link.enqueue(frame)
                sent += 1
        return sent

    def _on_local_delta(self, delta: RegistryDelta) -> None:
        if self._loop is None:
            return
        try:
            running = asyncio.get_running_loop()
        except RuntimeError:
            running = None
        if running is self._loop:
            self.broadcast(delta)
        else:
            self._loop.call_soon_threadsafe(self.broadcast, delta)

    async def ping(self, peer_id: str, timeout: float = 2.0) -> float:
        """
        Round trip time to a peer in seconds.
        :raises ProtocolError: no link to the peer
        :raises asyncio.TimeoutError: no reply in time
        """
        link = self.links.get(peer_id)
        if link is None:
            raise ProtocolError(f"no link to '{peer_id}'")
        nonce = next(self._nonces)
        waiter = asyncio.get_running_loop().create_future()
        self._pings[nonce] = waiter
        started = time.perf_counter()
        link.enqueue(Ping(nonce))
        try:
            return await asyncio.wait_for(waiter, timeout) - started
        finally:
            self._pings.pop(nonce, None)

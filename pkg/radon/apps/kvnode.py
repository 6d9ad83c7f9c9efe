# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/kvnode.py
# Description:  KVNodeD: ring member storing and replicating key partitions
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
# @date: 2026-04-13
# @author: Dieter J Kybelksties

"""
A KVNodeD shares the node store with its siblings, so every key it stores is prefixed with its own
name: ``<self>/<key>``. The runtime offers no key scans, so each member also keeps an append-only list
of the keys it ever stored (``<self>#idx/<n>``, count in ``<self>#idxn``) to find them again when the
ring changes.

Puts travel a chain: each responsible member writes, appends itself to ``written`` and passes the Put
on to the next responsible member not yet written; the last one answers the client.
"""

from __future__ import annotations

from radon.apps import kv_protocol as kv
from radon.apps.coordinator import COORDINATOR_NAME, join_ring
from radon.apps.ring import RingView, responsible_set, successor
from radon.atomlib import Inbox
from radon.engine import RuntimeContext
from radon.error import StorageLimitError, UnknownDestinationError
from radon.model import Event
from radon.runtime_logger import log_debug, log_warning


class KeyIndex:
    """The persisted list of keys one member has stored."""

    def __init__(self, ctx: RuntimeContext, owner: str):
        self.ctx = ctx
        self.owner = owner
        self.count_key = f"{owner}#idxn"
        raw = ctx.storage_get(self.count_key)
        self._count = int(raw.decode("ascii")) if raw else 0
        self._keys: set[str] = set()
        for position in range(self._count):
            entry = ctx.storage_get(self._entry_key(position))
            if entry is not None:
                self._keys.add(entry.decode("utf-8"))

    def _entry_key(self, position: int) -> str:
        return f"{self.owner}#idx/{position}"

    def __contains__(self, key: object) -> bool:
        return key in self._keys

    def add(self, key: str) -> None:
        if key in self._keys:
            return
        self.ctx.storage_set(self._entry_key(self._count), key.encode("utf-8"))
        self._count += 1
        self.ctx.storage_set(self.count_key, str(self._count).encode("ascii"))
        self._keys.add(key)

    def discard(self, key: str) -> None:
        self._keys.discard(key)

    def keys(self) -> list[str]:
        return sorted(self._keys)

    def rebuild(self) -> None:
        """Rewrite the list with the keys still held, dropping deleted ones."""
        live = self.keys()
        for position in range(self._count):
            self.ctx.storage_delete(self._entry_key(position))
        for position, key in enumerate(live):
            self.ctx.storage_set(self._entry_key(position), key.encode("utf-8"))
        self._count = len(live)
        self.ctx.storage_set(self.count_key, str(self._count).encode("ascii"))


class KvNode:
    def __init__(self, ctx: RuntimeContext, coordinator: str = COORDINATOR_NAME):
        self.ctx = ctx
        self.name = ctx.self_name()
        self.coordinator = coordinator
        self.inbox = Inbox(ctx)
        self.index = KeyIndex(ctx, self.name)
        self.ring = RingView()

    def storage_key(self, key: str) -> str:
        return f"{self.name}/{key}"

    def responsible(self, key: str, ring: RingView | None = None) -> list[str]:
        ring = ring or self.ring
        return responsible_set(ring, key, ring.effective_replication)

    async def join(self) -> None:
        view = await join_ring(self.ctx, self.inbox, self.name, coordinator=self.coordinator)
        if self.name not in view:
            raise RuntimeError(f"coordinator did not admit '{self.name}' to the ring")
        self.adopt(view)

    async def serve(self) -> None:
        while True:
            envelope = await self.inbox.receive()
            if envelope is None:
                continue
            message = kv.try_decode(envelope.payload)
            if isinstance(message, kv.Put):
                self.on_put(message)
            elif isinstance(message, kv.Get):
                self.on_get(message)
            elif isinstance(message, kv.RingUpdate):
                self.adopt(message.view)
            else:
                log_debug("kv node ignored message", atom=self.name, sender=envelope.sender)

    # -- requests ------------------------------------------------------------------------------------

    def _send(self, destination: str, message: kv.KvMessage) -> bool:
        try:
            self.ctx.send(destination, kv.encode(message))
            return True
        except UnknownDestinationError:
            log_warning("kv message undeliverable", atom=self.name, to=destination)
            return False

    def _reply(self, reply_to: str, correlation: bytes, outcome: kv.Outcome, value: bytes = b"") -> None:
        if reply_to:
            self._send(reply_to, kv.KvResponse(correlation, outcome, value))

    def _forward_along_ring(self, message: kv.Put | kv.Get) -> None:
        if message.hops >= len(self.ring):
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.ERROR, kv.ROUTING_LOOP.encode())
            return
        if isinstance(message, kv.Put):
            forwarded: kv.Put | kv.Get = kv.Put(message.key, message.value, message.reply_to,
                                                message.correlation_id, message.hops + 1, message.written)
        else:
            forwarded = kv.Get(message.key, message.reply_to, message.correlation_id, message.hops + 1)
        if not self._send(successor(self.ring, self.name), forwarded):
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.ERROR, b"successor unreachable")

    def on_put(self, message: kv.Put) -> None:
        if not self.ring.points:
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.ERROR, b"ring not joined")
            return
        members = self.responsible(message.key)
        # a rebalance push may overtake our copy of the ring update that made us responsible
        if self.name not in members and message.reply_to:
            self._forward_along_ring(message)
            return
        # a handoff copy never replaces a client write that got here first
        if not message.reply_to and self.ctx.storage_get(self.storage_key(message.key)) is not None:
            return
        try:
            self.ctx.storage_set(self.storage_key(message.key), message.value)
        except StorageLimitError as e:
            log_warning("kv put rejected by store", atom=self.name, error=str(e))
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.ERROR, str(e).encode("utf-8"))
            return
        self.index.add(message.key)
        written = message.written + ((self.name,) if self.name not in message.written else ())
        for member in members:
            if member not in written:
                if self._send(member, kv.Put(message.key, message.value, message.reply_to,
                                             message.correlation_id, message.hops, written)):
                    return
                written += (member,)
        self._reply(message.reply_to, message.correlation_id, kv.Outcome.OK)

    def on_get(self, message: kv.Get) -> None:
        if not self.ring.points:
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.ERROR, b"ring not joined")
            return
        if self.name not in self.responsible(message.key):
            self._forward_along_ring(message)
            return
        value = self.ctx.storage_get(self.storage_key(message.key))
        if value is None:
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.NOT_FOUND)
        else:
            self._reply(message.reply_to, message.correlation_id, kv.Outcome.OK, value)

    # -- topology ------------------------------------------------------------------------------------

    def adopt(self, view: RingView) -> None:
        """Take a newer view and move the keys whose responsible set changed."""
        if view.version <= self.ring.version and self.ring.points:
            return
        previous, self.ring = self.ring, view
        if previous.points:
            self.rebalance(previous)

    def rebalance(self, previous: RingView) -> None:
        """
        For every held key: the first old holder that stays responsible (or the old primary) pushes the
        value to each new member; holders that are no longer responsible delete their copy.
        """
        moved = dropped = 0
        for key in self.index.keys():
            value = self.ctx.storage_get(self.storage_key(key))
            if value is None:
                self.index.discard(key)
                continue
            before = self.responsible(key, previous)
            after = self.responsible(key)
            newcomers = [member for member in after if member not in before]
            keepers = [member for member in before if member in after]
            pusher = keepers[0] if keepers else before[0]
            if newcomers and pusher == self.name:
                for member in newcomers:
                    others = tuple(m for m in after if m != member)
                    if self._send(member, kv.Put(key, value, "", b"", 0, others)):
                        moved += 1
            if self.name not in after:
                self.ctx.storage_delete(self.storage_key(key))
                self.index.discard(key)
                dropped += 1
        if dropped:
            self.index.rebuild()
        log_debug("rebalanced", atom=self.name, version=self.ring.version, moved=moved, dropped=dropped)


async def kvnode_main(ctx: RuntimeContext, _event: Event | None) -> None:
    node = KvNode(ctx, str(ctx.params.get("coordinator", COORDINATOR_NAME)))
    await node.join()
    await node.serve()

# Repository:   https://github.com/PyRadon
# File Name:    radon/messaging.py
# Description:  Mailboxes and envelope routing with local bypass
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
# @date: 2026-04-06
# @author: Dieter J Kybelksties

"""
Mailboxes and the per-node router.

Everything here runs on the node's event loop: producers are guest tasks, gateway handlers and
transport reader tasks; the single consumer of a mailbox is its instance.
"""

from __future__ import annotations

import asyncio
import dataclasses
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

from radon.error import PayloadTooLargeError, UnknownDestinationError
from radon.model import MAX_PAYLOAD_BYTES, AliasAll, DestinationSelector, Envelope, Exact, NameSet, Ordering
from radon.naming import NameRecord, NameRegistry
from radon.runtime_logger import log_debug

if TYPE_CHECKING:
    from collections.abc import Iterable

DEFAULT_MAILBOX_CAPACITY = 65536


class Mailbox:
    """
    Two-lane bounded mailbox. ``take`` consults the FIFO lane before the unordered lane.
    """

    def __init__(self, capacity: int = DEFAULT_MAILBOX_CAPACITY):
        self.capacity = capacity
        self._fifo: deque[Envelope] = deque()
        self._unordered: deque[Envelope] = deque()
        self._waiter: asyncio.Future | None = None
        self.interrupted = False

    def __len__(self) -> int:
        return len(self._fifo) + len(self._unordered)

    @property
    def pending(self) -> int:
        return len(self)

    def put(self, envelope: Envelope) -> bool:
        """
        Append to the lane matching the envelope's ordering.
        :return: False if the mailbox is full and the envelope was not accepted
        """
        if len(self) >= self.capacity:
            return False
        if envelope.ordering == Ordering.FIFO:
            self._fifo.append(envelope)
        else:
            self._unordered.append(envelope)
        self._wake()
        return True

    def take(self) -> Envelope | None:
        if self._fifo:
            return self._fifo.popleft()
        if self._unordered:
            return self._unordered.popleft()
        return None

    def _wake(self) -> None:
        if self._waiter is not None and not self._waiter.done():
            self._waiter.set_result(None)

    def interrupt(self) -> None:
        """Release a consumer blocked in :meth:`get`; every later ``get`` on an empty mailbox returns None."""
        self.interrupted = True
        self._wake()

    def clear(self) -> int:
        dropped = len(self)
        self._fifo.clear()
        self._unordered.clear()
        return dropped

    async def get(self, timeout: float | None = None) -> Envelope | None:
        """
        Wait for the next envelope.

        :param timeout: seconds to wait; None waits forever, 0 polls
        :return: the envelope, or None on timeout or interruption
        """
        loop = asyncio.get_running_loop()
        deadline = None if timeout is None else loop.time() + timeout
        while True:
            envelope = self.take()
            if envelope is not None or self.interrupted:
                return envelope
            remaining = None if deadline is None else deadline - loop.time()
            if remaining is not None and remaining <= 0:
                return None
            self._waiter = loop.create_future()
            try:
                await asyncio.wait_for(self._waiter, remaining)
            except asyncio.TimeoutError:
                return self.take()
            finally:
                self._waiter = None


@dataclass
class DropCounters:
    sent: int = 0
    delivered: int = 0
    stale: int = 0
    unknown: int = 0
    overflow: int = 0
    link_down: int = 0

    @property
    def dropped(self) -> int:
        return self.stale + self.unknown + self.overflow + self.link_down

    def as_dict(self) -> dict[str, int]:
        return dataclasses.asdict(self)


class EnvelopeForwarder(Protocol):
    def forward_envelope(self, dest_node: str, envelope: Envelope) -> bool: ...


class MessageRouter:
    """
    Routes envelopes by name: local destinations bypass the network, remote ones go to the transport.

    :param node_id: the hosting node
    :param registry: the node's replicated name table
    :param forwarder: the transport; without one every remote destination counts as a link-down drop
    :param max_payload: payload limit checked at send time
    """

    def __init__(self, node_id: str, registry: NameRegistry, forwarder: EnvelopeForwarder | None = None,
                 max_payload: int = MAX_PAYLOAD_BYTES):
        self.node_id = node_id
        self.registry = registry
        self.forwarder = forwarder
        self.max_payload = max_payload
        self.counters = DropCounters()
        self._mailboxes: dict[str, tuple[int, Mailbox]] = {}

    def attach(self, name: str, incarnation: int, mailbox: Mailbox) -> None:
        self._mailboxes[name] = (incarnation, mailbox)

    def detach(self, name: str, incarnation: int | None = None) -> None:
        entry = self._mailboxes.get(name)
        if entry is not None and (incarnation is None or entry[0] == incarnation):
            del self._mailboxes[name]

    def mailbox(self, name: str) -> Mailbox | None:
        entry = self._mailboxes.get(name)
        return entry[1] if entry is not None else None

    def send(self, sender: str, destination: DestinationSelector, ordering: Ordering, payload: bytes,
             correlation_id: bytes | None = None) -> int:
        """
        Non-blocking send.

        :return: the number of destinations the envelope was routed to
        :raises PayloadTooLargeError: payload over the limit
        :raises UnknownDestinationError: an exact destination that is not live anywhere
        """
        if len(payload) > self.max_payload:
            raise PayloadTooLargeError(f"payload of {len(payload)} bytes exceeds {self.max_payload}")
        envelope = Envelope(sender=sender, destination=destination, ordering=ordering, payload=bytes(payload),
                            correlation_id=correlation_id)
        if isinstance(destination, Exact):
            record = self.registry.lookup(destination.name)
            if record is None:
                raise UnknownDestinationError(f"no live atom named '{destination.name}'")
            self._route(record, envelope)
            return 1
        if isinstance(destination, AliasAll):
            names: Iterable[str] = self.registry.alias_members(destination.alias)
        elif isinstance(destination, NameSet):
            names = destination.names
        else:
            raise TypeError(f"unsupported destination {destination!r}")
        routed = 0
        for name in names:
            record = self.registry.lookup(name)
            if record is None:
                self.counters.unknown += 1
                continue
            self._route(record, envelope)
            routed += 1
        return routed

    def _route(self, record: NameRecord, envelope: Envelope) -> None:
        addressed = dataclasses.replace(envelope, target=record.name, incarnation=record.incarnation)
        self.counters.sent += 1
        if record.node == self.node_id:
            self.deliver_local(addressed)
        elif self.forwarder is None or not self.forwarder.forward_envelope(record.node, addressed):
            self.counters.link_down += 1
            log_debug("envelope dropped, no link", target=record.name, node=record.node)

    def deliver_local(self, envelope: Envelope) -> bool:
        """
        Hand an addressed envelope to a local mailbox.
        :return: True if accepted; unknown targets, stale incarnations and full mailboxes are counted drops
        """
        entry = self._mailboxes.get(envelope.target)
        if entry is None:
            self.counters.unknown += 1
            return False
        incarnation, mailbox = entry
        if envelope.incarnation and envelope.incarnation != incarnation:
            self.counters.stale += 1
            return False
        if not mailbox.put(envelope):
            self.counters.overflow += 1
            return False
        self.counters.delivered += 1
        return True

    async def receive_next(self, name: str, timeout: float | None = None) -> Envelope | None:
        mailbox = self.mailbox(name)
        if mailbox is None:
            return None
        return await mailbox.get(timeout)

# Repository:   https://github.com/PyRadon
# File Name:    radon/atomlib.py
# Description:  Guest-side helpers built purely on the runtime interface
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
# @date: 2026-04-12
# @author: Dieter J Kybelksties

from __future__ import annotations

import time
from collections import deque
from collections.abc import Awaitable, Callable

from radon.engine import RuntimeContext
from radon.error import UnknownDestinationError
from radon.model import Envelope, Event

EventHandler = Callable[[Event], Awaitable[None]]


class Inbox:
    """
    Selective receive over an instance mailbox.

    Envelopes that do not match a :meth:`receive_match` predicate are stashed and handed out, in arrival
    order, by later receives.
    """

    def __init__(self, ctx: RuntimeContext):
        self.ctx = ctx
        self._stash: deque[Envelope] = deque()

    def __len__(self) -> int:
        return len(self._stash)

    async def receive(self, timeout: float | None = None) -> Envelope | None:
        if self._stash:
            return self._stash.popleft()
        return await self.ctx.receive(timeout)

    async def receive_match(self, predicate: Callable[[Envelope], bool],
                            timeout: float | None = None) -> Envelope | None:
        """
        Wait for the first envelope satisfying ``predicate``.
        :return: the envelope, or None when the timeout expires first
        """
        for envelope in self._stash:
            if predicate(envelope):
                self._stash.remove(envelope)
                return envelope
        deadline = None if timeout is None else time.monotonic() + timeout
        while True:
            remaining = None if deadline is None else max(0.0, deadline - time.monotonic())
            if remaining == 0.0:
                return None
            envelope = await self.ctx.receive(remaining)
            if envelope is None:
                return None
            if predicate(envelope):
                return envelope
            self._stash.append(envelope)

    async def pause(self, seconds: float) -> None:
        """Let time pass without losing anything that arrives meanwhile."""
        await self.receive_match(lambda _: False, seconds)


async def request(ctx: RuntimeContext, inbox: Inbox, destination: str, payload: bytes,
                  is_reply: Callable[[Envelope], bool], timeout: float, attempts: int = 1,
                  retry_delay: float = 0.1) -> Envelope | None:
    """
    Send with a fresh correlation id and wait for a reply carrying it, resending up to ``attempts`` times.
    A destination that is not yet registered counts as a failed attempt.

    :return: the reply, or None when every attempt failed
    """
    for attempt in range(attempts):
        correlation = ctx.random_bytes(16)
        try:
            ctx.send(destination, payload, correlation_id=correlation)
        except UnknownDestinationError:
            if attempt + 1 < attempts:
                await inbox.pause(retry_delay)
            continue
        reply = await inbox.receive_match(lambda e: e.correlation_id == correlation and is_reply(e), timeout)
        if reply is not None:
            return reply
    return None


async def serve_events(ctx: RuntimeContext, first: Event | None, handler: EventHandler,
                       inbox: Inbox | None = None,
                       on_message: Callable[[Envelope], Awaitable[None]] | None = None) -> None:
    """
    The loop of a reactive atom: handle the activation event, then every event delivered later.
    Plain messages go to ``on_message`` or are dropped.
    """
    inbox = inbox or Inbox(ctx)
    if first is not None:
        await handler(first)
    while True:
        envelope = await inbox.receive()
        if envelope is None:
            continue
        if envelope.event is not None:
            await handler(envelope.event)
        elif on_message is not None:
            await on_message(envelope)

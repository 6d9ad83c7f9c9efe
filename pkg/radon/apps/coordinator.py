# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/coordinator.py
# Description:  CoordinatorD: tracks ring membership and announces topology changes
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

from __future__ import annotations

from radon.apps import kv_protocol as kv
from radon.apps.ring import RingView
from radon.atomlib import Inbox, request
from radon.engine import RuntimeContext
from radon.error import ProtocolError, RingCollisionError, UnknownDestinationError
from radon.model import Envelope, Event, NameSet
from radon.runtime_logger import log_info, log_warning

COORDINATOR_NAME = "coordinator"
RING_STORAGE_KEY = "coordinator#ring"
DEFAULT_REPLICATION = 2


def load_ring(ctx: RuntimeContext, replication: int) -> RingView:
    raw = ctx.storage_get(RING_STORAGE_KEY)
    if raw is None:
        return RingView(replication=replication)
    try:
        message = kv.decode(raw)
    except ProtocolError as e:
        log_warning("stored ring unreadable, starting empty", error=str(e))
        return RingView(replication=replication)
    return message.view if isinstance(message, kv.RingUpdate) else RingView(replication=replication)


def _reply(ctx: RuntimeContext, envelope: Envelope, payload: bytes) -> None:
    try:
        ctx.send(envelope.sender, payload, correlation_id=envelope.correlation_id)
    except UnknownDestinationError:
        log_warning("topology reply undeliverable", to=envelope.sender)


async def coordinator_main(ctx: RuntimeContext, _event: Event | None) -> None:
    """
    Serve ``Join`` and ``Topology``. The ring is persisted in node storage before any reply goes out, so
    a restarted coordinator continues with the same membership and version.
    """
    ring = load_ring(ctx, int(ctx.params.get("replication", DEFAULT_REPLICATION)))
    while True:
        envelope = await ctx.receive()
        if envelope is None:
            continue
        message = kv.try_decode(envelope.payload)
        if isinstance(message, kv.Topology):
            _reply(ctx, envelope, kv.encode(kv.RingUpdate(ring)))
        elif isinstance(message, kv.Join):
            try:
                updated = ring.with_member(message.member)
            except RingCollisionError as e:
                log_warning("ring conflict, join rejected", member=message.member, error=str(e))
                updated = ring
            if updated is not ring:
                ring = updated
                announcement = kv.encode(kv.RingUpdate(ring))
                ctx.storage_set(RING_STORAGE_KEY, announcement)
                log_info("ring member joined", member=message.member, version=ring.version, size=len(ring))
                others = tuple(m for m in ring.members if m != envelope.sender)
                _reply(ctx, envelope, announcement)
                if others:
                    ctx.send(NameSet(others), announcement)
            else:
                _reply(ctx, envelope, kv.encode(kv.RingUpdate(ring)))
        else:
            log_warning("coordinator ignored message", sender=envelope.sender)


def _is_ring_update(envelope: Envelope) -> bool:
    return isinstance(kv.try_decode(envelope.payload), kv.RingUpdate)


async def fetch_topology(ctx: RuntimeContext, inbox: Inbox, timeout: float = 2.0,
                         coordinator: str = COORDINATOR_NAME) -> RingView | None:
    """Ask the coordinator for the current view; None if it does not answer within ``timeout``."""
    reply = await request(ctx, inbox, coordinator, kv.encode(kv.Topology()),
                          lambda e: e.sender == coordinator and _is_ring_update(e), timeout)
    if reply is None:
        return None
    message = kv.decode(reply.payload)
    assert isinstance(message, kv.RingUpdate)
    return message.view


async def join_ring(ctx: RuntimeContext, inbox: Inbox, member: str, timeout: float = 2.0,
                    coordinator: str = COORDINATOR_NAME) -> RingView:
    """
    Register a member with the coordinator, retrying until it answers.
    :return: the view the coordinator replied with
    """
    while True:
        reply = await request(ctx, inbox, coordinator, kv.encode(kv.Join(member)),
                              lambda e: e.sender == coordinator and _is_ring_update(e), timeout)
        if reply is not None:
            message = kv.decode(reply.payload)
            assert isinstance(message, kv.RingUpdate)
            return message.view
        await inbox.pause(0.2)

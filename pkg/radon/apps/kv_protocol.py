# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/kv_protocol.py
# Description:  Message schema spoken between the key-value atoms
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

"""
Payloads start with a one byte tag and use the same primitives as the wire frames::

    Join        member:str
    Topology    -
    RingUpdate  version:u64 replication:u16 count:u32 (hash:u64 member:str)*
    Put         key:str value:blob reply_to:str correlation:blob hops:u16 written:[str]
    Get         key:str reply_to:str correlation:blob hops:u16
    KvResponse  correlation:blob outcome:u8 value:blob
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from fundamentals.extended_enum import ExtendedEnum

from radon.apps.ring import RingView
from radon.error import ProtocolError
from radon.frames import BufferReader, BufferWriter

ROUTING_LOOP = "routing loop"


class Outcome(ExtendedEnum):
    OK = 0
    NOT_FOUND = 1
    ERROR = 2


@dataclass(frozen=True)
class Join:
    member: str


@dataclass(frozen=True)
class Topology:
    pass


@dataclass(frozen=True)
class RingUpdate:
    view: RingView


@dataclass(frozen=True)
class Put:
    key: str
    value: bytes
    reply_to: str
    correlation_id: bytes
    hops: int = 0
    written: tuple[str, ...] = ()


@dataclass(frozen=True)
class Get:
    key: str
    reply_to: str
    correlation_id: bytes
    hops: int = 0


@dataclass(frozen=True)
class KvResponse:
    correlation_id: bytes
    outcome: Outcome
    value: bytes = b""

    @property
    def error(self) -> str:
        return self.value.decode("utf-8", "replace") if self.outcome == Outcome.ERROR else ""


KvMessage = Union[Join, Topology, RingUpdate, Put, Get, KvResponse]

_TAGS: dict[type, int] = {Join: 1, Topology: 2, RingUpdate: 3, Put: 4, Get: 5, KvResponse: 6}


def encode(message: KvMessage) -> bytes:
    writer = BufferWriter().u8(_TAGS[type(message)])
    if isinstance(message, Join):
        writer.text(message.member)
    elif isinstance(message, RingUpdate):
        view = message.view
        writer.u64(view.version).u16(view.replication).u32(len(view.points))
        for point, member in view.points:
            writer.u64(point).text(member)
    elif isinstance(message, Put):
        writer.text(message.key).blob(message.value).text(message.reply_to).blob(message.correlation_id)
        writer.u16(message.hops).texts(list(message.written))
    elif isinstance(message, Get):
        writer.text(message.key).text(message.reply_to).blob(message.correlation_id).u16(message.hops)
    elif isinstance(message, KvResponse):
        writer.blob(message.correlation_id).u8(message.outcome.value).blob(message.value)
    return writer.getvalue()


def decode(payload: bytes) -> KvMessage:
    """
    :raises ProtocolError: unknown tag or malformed body
    """
    reader = BufferReader(payload)
    tag = reader.u8()
    message: KvMessage
    if tag == 1:
        message = Join(reader.text())
    elif tag == 2:
        message = Topology()
    elif tag == 3:
        version, replication, count = reader.u64(), reader.u16(), reader.u32()
        points = tuple((reader.u64(), reader.text()) for _ in range(count))
        try:
            message = RingUpdate(RingView(points, version, replication))
        except ValueError as e:
            raise ProtocolError(f"bad ring view: {e}") from None
    elif tag == 4:
        message = Put(reader.text(), reader.blob(), reader.text(), reader.blob(), reader.u16(), reader.texts())
    elif tag == 5:
        message = Get(reader.text(), reader.text(), reader.blob(), reader.u16())
    elif tag == 6:
        correlation, outcome = reader.blob(), reader.u8()
        try:
            message = KvResponse(correlation, Outcome(outcome), reader.blob())
        except ValueError:
            raise ProtocolError(f"unknown outcome {outcome}") from None
    else:
        raise ProtocolError(f"unknown key-value message tag {tag}")
    reader.finish()
    return message


def try_decode(payload: bytes) -> KvMessage | None:
    try:
        return decode(payload)
    except ProtocolError:
        return None

# Repository:   https://github.com/PyRadon
# File Name:    radon/frames.py
# Description:  Binary wire frames exchanged between nodes and deploy clients
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
# @date: 2026-04-08
# @author: Dieter J Kybelksties

"""
Wire protocol, version 1.

Every frame is ``length:u32 kind:u8 body`` where ``length`` counts the kind byte and the body. All
integers are big-endian. Strings are UTF-8 with a u16 length, byte blobs carry a u32 length, string
lists a u16 count. Bodies per kind:

=================  ================================================================================
Hello              version:u16 role:u8 node_id:str listen:str tags:[str]
Refuse             reason:str
RegisterDelta      name:str node:str incarnation:u64
DeregisterDelta    name:str node:str incarnation:u64
AliasDelta         alias:str name:str add:u8
Envelope           sender:str dest_kind:u8 dest:[str] ordering:u8 correlation:blob payload:blob
                   target:str incarnation:u64
SpawnRequest       request_id:u32 configuration:blob (one JSON atom entry)
SpawnReply         request_id:u32 node:str count:u16 (name:str ok:u8 detail:str)*
Ping               nonce:u64 reply:u8
=================  ================================================================================
"""

from __future__ import annotations

import asyncio
import json
import struct
from dataclasses import dataclass
from typing import Union

from fundamentals.extended_enum import ExtendedEnum

from radon.error import ConfigurationError, ProtocolError
from radon.model import (MAX_PAYLOAD_BYTES, AliasAll, AtomConfiguration, DestinationSelector, Envelope, Exact,
                         NameSet, Ordering, configuration_to_dict, parse_configuration)
from radon.naming import AliasDelta, DeregisterDelta, RegisterDelta

PROTOCOL_VERSION = 1
MAX_FRAME_BYTES = MAX_PAYLOAD_BYTES + 1024


class FrameKind(ExtendedEnum):
    HELLO = 1
    REFUSE = 2
    REGISTER_DELTA = 3
    DEREGISTER_DELTA = 4
    ALIAS_DELTA = 5
    ENVELOPE = 6
    SPAWN_REQUEST = 7
    SPAWN_REPLY = 8
    PING = 9


class PeerRole(ExtendedEnum):
    PEER = 0
    CLIENT = 1


@dataclass(frozen=True)
class Hello:
    node_id: str
    listen_address: str
    tags: tuple[str, ...] = ()
    role: PeerRole = PeerRole.PEER
    version: int = PROTOCOL_VERSION


@dataclass(frozen=True)
class Refuse:
    reason: str


@dataclass(frozen=True)
class SpawnRequest:
    request_id: int
    configuration: AtomConfiguration


@dataclass(frozen=True)
class SpawnResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SpawnReply:
    request_id: int
    node_id: str
    results: tuple[SpawnResult, ...]


@dataclass(frozen=True)
class Ping:
    nonce: int
    reply: bool = False


Frame = Union[Hello, Refuse, RegisterDelta, DeregisterDelta, AliasDelta, Envelope, SpawnRequest, SpawnReply, Ping]


class BufferWriter:
    def __init__(self) -> None:
        self._parts = bytearray()

    def u8(self, value: int) -> BufferWriter:
        self._parts += struct.pack(">B", value)
        return self

    def u16(self, value: int) -> BufferWriter:
        self._parts += struct.pack(">H", value)
        return self

    def u32(self, value: int) -> BufferWriter:
        self._parts += struct.pack(">I", value)
        return self

    def u64(self, value: int) -> BufferWriter:
        self._parts += struct.pack(">Q", value)
        return self

    def blob(self, value: bytes) -> BufferWriter:
        self.u32(len(value))
        self._parts += value
        return self

    def text(self, value: str) -> BufferWriter:
        raw = value.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise ProtocolError("string field longer than 65535 bytes")
        self.u16(len(raw))
        self._parts += raw
        return self

    def texts(self, values: tuple[str, ...] | list[str]) -> BufferWriter:
        self.u16(len(values))
        for value in values:
            self.text(value)
        return self

    def getvalue(self) -> bytes:
        return bytes(self._parts)


class BufferReader:
    def __init__(self, data: bytes):
        self._data = memoryview(data)
        self._offset = 0

    def _take(self, size: int) -> memoryview:
        if self._offset + size > len(self._data):
            raise ProtocolError("frame body truncated")
        chunk = self._data[self._offset:self._offset + size]
        self._offset += size
        return chunk

    def u8(self) -> int:
        return struct.unpack(">B", self._take(1))[0]

    def u16(self) -> int:
        return struct.unpack(">H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self._take(8))[0]

    def blob(self) -> bytes:
        return bytes(self._take(self.u32()))

    def text(self) -> str:
        try:
            return bytes(self._take(self.u16())).decode("utf-8")
        except UnicodeDecodeError:
            raise ProtocolError("string field is not valid UTF-8") from None

    def texts(self) -> tuple[str, ...]:
        return tuple(self.text() for _ in range(self.u16()))

    def finish(self) -> None:
        if self._offset != len(self._data):
            raise ProtocolError(f"{len(self._data) - self._offset} trailing bytes in frame")


_DEST_EXACT, _DEST_ALIAS, _DEST_SET = 0, 1, 2
_ORDERINGS = {Ordering.UNORDERED: 0, Ordering.FIFO: 1}


def _write_destination(writer: BufferWriter, destination: DestinationSelector) -> None:
    if isinstance(destination, Exact):
        writer.u8(_DEST_EXACT).texts([destination.name])
    elif isinstance(destination, AliasAll):
        writer.u8(_DEST_ALIAS).texts([destination.alias])
    elif isinstance(destination, NameSet):
        writer.u8(_DEST_SET).texts(list(destination.names))
    else:
        raise ProtocolError(f"cannot encode destination {destination!r}")


def _read_destination(reader: BufferReader) -> DestinationSelector:
    kind = reader.u8()
    names = reader.texts()
    if kind == _DEST_SET:
        return NameSet(names)
    if len(names) != 1 or kind not in (_DEST_EXACT, _DEST_ALIAS):
        raise ProtocolError(f"malformed destination kind {kind}")
    return Exact(names[0]) if kind == _DEST_EXACT else AliasAll(names[0])


def frame_kind(frame: Frame) -> FrameKind:
    kinds: dict[type, FrameKind] = {
        Hello: FrameKind.HELLO, Refuse: FrameKind.REFUSE, RegisterDelta: FrameKind.REGISTER_DELTA,
        DeregisterDelta: FrameKind.DEREGISTER_DELTA, AliasDelta: FrameKind.ALIAS_DELTA,
        Envelope: FrameKind.ENVELOPE, SpawnRequest: FrameKind.SPAWN_REQUEST, SpawnReply: FrameKind.SPAWN_REPLY,
        Ping: FrameKind.PING,
    }
    try:
        return kinds[type(frame)]
    except KeyError:
        raise ProtocolError(f"not a frame: {type(frame).__name__}") from None


def encode_body(frame: Frame) -> bytes:
    writer = BufferWriter()
    if isinstance(frame, Hello):
        writer.u16(frame.version).u8(frame.role.value).text(frame.node_id).text(frame.listen_address)
        writer.texts(list(frame.tags))
    elif isinstance(frame, Refuse):
        writer.text(frame.reason)
    elif isinstance(frame, (RegisterDelta, DeregisterDelta)):
        writer.text(frame.name).text(frame.node).u64(frame.incarnation)
    elif isinstance(frame, AliasDelta):
        writer.text(frame.alias).text(frame.name).u8(1 if frame.add else 0)
    elif isinstance(frame, Envelope):
        writer.text(frame.sender)
        _write_destination(writer, frame.destination)
        writer.u8(_ORDERINGS[frame.ordering]).blob(frame.correlation_id or b"").blob(frame.payload)
        writer.text(frame.target).u64(frame.incarnation)
    elif isinstance(frame, SpawnRequest):
        writer.u32(frame.request_id).blob(json.dumps(configuration_to_dict(frame.configuration)).encode("utf-8"))
    elif isinstance(frame, SpawnReply):
        writer.u32(frame.request_id).text(frame.node_id).u16(len(frame.results))
        for result in frame.results:
            writer.text(result.name).u8(1 if result.ok else 0).text(result.detail)
    elif isinstance(frame, Ping):
        writer.u64(frame.nonce).u8(1 if frame.reply else 0)
    else:
        raise ProtocolError(f"not a frame: {type(frame).__name__}")
    return writer.getvalue()


def encode_frame(frame: Frame) -> bytes:
    body = encode_body(frame)
    if len(body) + 1 > MAX_FRAME_BYTES:
        raise ProtocolError(f"frame of {len(body) + 1} bytes exceeds {MAX_FRAME_BYTES}")
    return struct.pack(">IB", len(body) + 1, frame_kind(frame).value) + body


def decode_body(kind: FrameKind, body: bytes) -> Frame:
    reader = BufferReader(body)
    frame: Frame
    if kind == FrameKind.HELLO:
        version = reader.u16()
        role = reader.u8()
        node_id = reader.text()
        listen = reader.text()
        tags = reader.texts()
        try:
            peer_role = PeerRole(role)
        except ValueError:
            raise ProtocolError(f"unknown peer role {role}") from None
        frame = Hello(node_id, listen, tags, peer_role, version)
    elif kind == FrameKind.REFUSE:
        frame = Refuse(reader.text())
    elif kind in (FrameKind.REGISTER_DELTA, FrameKind.DEREGISTER_DELTA):
        delta_type = RegisterDelta if kind == FrameKind.REGISTER_DELTA else DeregisterDelta
        frame = delta_type(reader.text(), reader.text(), reader.u64())
    elif kind == FrameKind.ALIAS_DELTA:
        frame = AliasDelta(reader.text(), reader.text(), reader.u8() == 1)
    elif kind == FrameKind.ENVELOPE:
        sender = reader.text()
        destination = _read_destination(reader)
        ordering = Ordering.FIFO if reader.u8() == 1 else Ordering.UNORDERED
        correlation = reader.blob() or None
        payload = reader.blob()
        frame = Envelope(sender=sender, destination=destination, ordering=ordering, payload=payload,
                         correlation_id=correlation, target=reader.text(), incarnation=reader.u64())
    elif kind == FrameKind.SPAWN_REQUEST:
        request_id = reader.u32()
        raw = reader.blob()
        try:
            configuration = parse_configuration('{"atoms": [' + raw.decode("utf-8") + "]}")[0]
        except (UnicodeDecodeError, ConfigurationError, IndexError) as e:
            raise ProtocolError(f"bad configuration in spawn request: {e}") from None
        frame = SpawnRequest(request_id, configuration)
    elif kind == FrameKind.SPAWN_REPLY:
        request_id = reader.u32()
        node_id = reader.text()
        results = tuple(SpawnResult(reader.text(), reader.u8() == 1, reader.text()) for _ in range(reader.u16()))
        frame = SpawnReply(request_id, node_id, results)
    else:
        frame = Ping(reader.u64(), reader.u8() == 1)
    reader.finish()
    return frame


async def read_frame(reader: asyncio.StreamReader) -> Frame:
    """
    Read one frame.

    :raises asyncio.IncompleteReadError: the stream ended
    :raises ProtocolError: oversize frame, unknown kind or malformed body
    """
    header = await reader.readexactly(5)
    length, raw_kind = struct.unpack(">IB", header)
    if length < 1 or length > MAX_FRAME_BYTES:
        raise ProtocolError(f"frame length {length} out of range")
    try:
        kind = FrameKind(raw_kind)
    except ValueError:
        raise ProtocolError(f"unknown frame kind {raw_kind}") from None
    body = await reader.readexactly(length - 1)
    return decode_body(kind, body)

# Repository:   https://github.com/PyRadon
# File Name:    radon/storage.py
# Description:  Per-node persistent key-value store on a single append log
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
# @date: 2026-04-07
# @author: Dieter J Kybelksties

"""
The node store keeps every live entry in memory and persists mutations to ``<data-dir>/store.log``.

Record layout, all integers big-endian::

    crc32:u32  key_len:u32  value_len:u32  flags:u8  key  value

The CRC covers everything after the CRC field. ``flags`` is 0 for a set and 1 for a delete (tombstone,
empty value). On open the log is replayed; a torn or corrupt tail is truncated at the last good record.
The log is compacted (rewritten with live entries only, then atomically swapped in) once it is larger
than ``compact_min_bytes`` and more than twice the size of the live data.
"""

from __future__ import annotations

import os
import struct
import threading
import zlib
from collections.abc import Iterator
from pathlib import Path

from radon.error import StorageIOError, StorageLimitError
from radon.runtime_logger import log_debug, log_info, log_warning
from radon.settings import Durability

MAX_KEY_BYTES = 1024
MAX_VALUE_BYTES = 4 * 1024 * 1024
LOG_FILE_NAME = "store.log"

_HEADER = struct.Struct(">IIIB")
_FLAG_SET = 0
_FLAG_DELETE = 1


def _as_bytes(key: str | bytes) -> bytes:
    return key.encode("utf-8") if isinstance(key, str) else bytes(key)


def encode_record(key: bytes, value: bytes, flags: int = _FLAG_SET) -> bytes:
    body = struct.pack(">IIB", len(key), len(value), flags) + key + value
    return struct.pack(">I", zlib.crc32(body)) + body


class NodeStore:
    """
    Thread-safe, durable key-value store for one node.

    :param data_dir: directory holding ``store.log``; created if missing
    :param durability: ``sync`` fsyncs before every mutation returns, ``async`` fsyncs from a flusher thread
    :param flush_interval: flusher period in seconds (async mode)
    :param compact_min_bytes: never compact logs smaller than this
    """

    def __init__(self, data_dir: str | os.PathLike, durability: Durability | str = Durability.SYNC,
                 flush_interval: float = 0.05, compact_min_bytes: int = 4 * 1024 * 1024):
        self.data_dir = Path(data_dir)
        self.path = self.data_dir / LOG_FILE_NAME
        self.durability = durability if isinstance(durability, Durability) else Durability(str(durability))
        self.flush_interval = flush_interval
        self.compact_min_bytes = compact_min_bytes
        self._lock = threading.Lock()
        self._entries: dict[bytes, bytes] = {}
        self._live_bytes = 0
        self._log_bytes = 0
        self._dirty = False
        self._closed = False
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._replay()
            self._fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        except OSError as e:
            raise StorageIOError(f"cannot open store at {self.path}: {e}") from e
        self._stop = threading.Event()
        self._flusher: threading.Thread | None = None
        if self.durability == Durability.ASYNC:
            self._flusher = threading.Thread(target=self._flush_loop, name="radon-store-flusher", daemon=True)
            self._flusher.start()
        log_debug("store opened", path=str(self.path), entries=len(self._entries), durability=self.durability.value)

    # -- recovery ------------------------------------------------------------------------------------

    def _replay(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        offset = 0
        while offset < len(data):
            if offset + _HEADER.size > len(data):
                break
            crc, key_len, value_len, flags = _HEADER.unpack_from(data, offset)
            end = offset + _HEADER.size + key_len + value_len
            if end > len(data) or zlib.crc32(data[offset + 4:end]) != crc or flags not in (_FLAG_SET, _FLAG_DELETE):
                break
            key_start = offset + _HEADER.size
            key = data[key_start:key_start + key_len]
            if flags == _FLAG_SET:
                self._put_entry(key, data[key_start + key_len:end])
            else:
                self._drop_entry(key)
            offset = end
        if offset < len(data):
            log_warning("store log has a torn tail, truncating", path=str(self.path), at=offset, size=len(data))
            with open(self.path, "r+b") as handle:
                handle.truncate(offset)
                handle.flush()
                os.fsync(handle.fileno())
        self._log_bytes = offset

    def _put_entry(self, key: bytes, value: bytes) -> None:
        previous = self._entries.get(key)
        if previous is not None:
            self._live_bytes -= _HEADER.size + len(key) + len(previous)
        self._entries[key] = value
        self._live_bytes += _HEADER.size + len(key) + len(value)

    def _drop_entry(self, key: bytes) -> None:
        previous = self._entries.pop(key, None)
        if previous is not None:
            self._live_bytes -= _HEADER.size + len(key) + len(previous)

    # -- operations ----------------------------------------------------------------------------------

    def get(self, key: str | bytes) -> bytes | None:
        with self._lock:
            return self._entries.get(_as_bytes(key))

    def set(self, key: str | bytes, value: bytes) -> None:
        """
        Store a value; durable before return in ``sync`` mode.
        :raises StorageLimitError: key over 1 KiB or value over 4 MiB
        :raises StorageIOError: the log could not be written
        """
        raw_key = _as_bytes(key)
        if len(raw_key) > MAX_KEY_BYTES:
            raise StorageLimitError(f"key of {len(raw_key)} bytes exceeds {MAX_KEY_BYTES}")
        if len(value) > MAX_VALUE_BYTES:
            raise StorageLimitError(f"value of {len(value)} bytes exceeds {MAX_VALUE_BYTES}")
        with self._lock:
            self._append(encode_record(raw_key, bytes(value)))
            self._put_entry(raw_key, bytes(value))
            self._maybe_compact()

    def delete(self, key: str | bytes) -> bool:
        """
        Remove a key by appending a tombstone.
        :return: False if the key was absent (nothing is written)
        """
        raw_key = _as_bytes(key)
        with self._lock:
            if raw_key not in self._entries:
                return False
            self._append(encode_record(raw_key, b"", _FLAG_DELETE))
            self._drop_entry(raw_key)
            self._maybe_compact()
            return True

    def keys(self, prefix: str | bytes = b"") -> list[bytes]:
        raw_prefix = _as_bytes(prefix)
        with self._lock:
            return sorted(k for k in self._entries if k.startswith(raw_prefix))

    def dump(self) -> Iterator[tuple[bytes, bytes]]:
        """Snapshot of all entries in key order."""
        with self._lock:
            items = sorted(self._entries.items())
        return iter(items)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    @property
    def log_size(self) -> int:
        return self._log_bytes

    def _append(self, record: bytes) -> None:
        if self._closed:
            raise StorageIOError("store is closed")
        try:
            os.write(self._fd, record)
            if self.durability == Durability.SYNC:
                os.fsync(self._fd)
            else:
                self._dirty = True
        except OSError as e:
            raise StorageIOError(f"write to {self.path} failed: {e}") from e
        self._log_bytes += len(record)

    def _maybe_compact(self) -> None:
        if self._log_bytes >= self.compact_min_bytes and self._log_bytes > 2 * self._live_bytes:
            self._compact()

    def compact(self) -> None:
        with self._lock:
            self._compact()

    def _compact(self) -> None:
        temp = self.path.with_suffix(".compact")
        try:
            with open(temp, "wb") as handle:
                for key, value in sorted(self._entries.items()):
                    handle.write(encode_record(key, value))
                handle.flush()
                os.fsync(handle.fileno())
            os.close(self._fd)
            os.replace(temp, self.path)
            dir_fd = os.open(self.data_dir, os.O_RDONLY)
            try:
                os.fsync(dir_fd)
            finally:
                os.close(dir_fd)
            self._fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        except OSError as e:
            raise StorageIOError(f"compaction of {self.path} failed: {e}") from e
        before = self._log_bytes
        self._log_bytes = self.path.stat().st_size
        self._dirty = False
        log_info("store compacted", path=str(self.path), before=before, after=self._log_bytes)

    # -- flushing ------------------------------------------------------------------------------------

    def flush(self) -> None:
        with self._lock:
            if self._dirty and not self._closed:
                try:
                    os.fsync(self._fd)
                except OSError as e:
                    raise StorageIOError(f"fsync of {self.path} failed: {e}") from e
                self._dirty = False

    def _flush_loop(self) -> None:
        while not self._stop.wait(self.flush_interval):
            try:
                self.flush()
            except StorageIOError as e:
                log_warning("background flush failed", error=str(e))

    def close(self) -> None:
        self._stop.set()
        if self._flusher is not None:
            self._flusher.join(timeout=max(1.0, 2 * self.flush_interval))
        self.flush()
        with self._lock:
            if not self._closed:
                self._closed = True
                os.close(self._fd)

    def __enter__(self) -> NodeStore:
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

# Repository:   https://github.com/PyRadon
# File Name:    radon/naming.py
# Description:  Deployment-wide registry of names and aliases
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
# @date: 2026-04-05
# @author: Dieter J Kybelksties

"""
Every node keeps a full copy of the registry. A name is owned by the node hosting the instance: only
the owner registers or deregisters it, and owners broadcast their changes as deltas. Alias membership
is owned by the node that owns the member name.
"""

from __future__ import annotations

import hashlib
import re
import threading
from collections.abc import Callable
from dataclasses import dataclass
from typing import Union

from radon.error import InvalidQueryError, NameConflictError, UnknownNameError
from radon.log_levels import Lifecycle
from radon.model import NameSpace, validate_name
from radon.runtime_logger import log_debug, log_lifecycle


@dataclass(frozen=True)
class NameRecord:
    name: str
    node: str
    incarnation: int


@dataclass(frozen=True)
class RegisterDelta:
    name: str
    node: str
    incarnation: int


@dataclass(frozen=True)
class DeregisterDelta:
    name: str
    node: str
    incarnation: int


@dataclass(frozen=True)
class AliasDelta:
    alias: str
    name: str
    add: bool


RegistryDelta = Union[RegisterDelta, DeregisterDelta, AliasDelta]


@dataclass(frozen=True)
class RegistrySnapshot:
    records: tuple[NameRecord, ...]
    aliases: tuple[tuple[str, tuple[str, ...]], ...]


class NameRegistry:
    """
    The replicated name table of one node.

    Local mutations notify the listeners (the transport broadcasts them); remote deltas are applied
    through the ``apply_*`` methods and are not re-broadcast.
    """

    def __init__(self, local_node: str):
        self.local_node = local_node
        self._lock = threading.RLock()
        self._records: dict[str, NameRecord] = {}
        self._incarnations: dict[str, int] = {}
        self._aliases: dict[str, set[str]] = {}
        self._listeners: list[Callable[[RegistryDelta], None]] = []
        self.on_conflict_lost: Callable[[str], None] | None = None

    def add_listener(self, listener: Callable[[RegistryDelta], None]) -> None:
        self._listeners.append(listener)

    def _notify(self, delta: RegistryDelta) -> None:
        for listener in list(self._listeners):
            listener(delta)

    # -- local operations ------------------------------------------------------------------------

    def register(self, name: str, node: str | None = None) -> int:
        """
        Register a live name.

        :param name: the atom name
        :param node: owner node, this node when omitted
        :return: the new incarnation, one higher than any incarnation this registry has seen for the name
        :raises NameConflictError: the name is live anywhere in the deployment
        """
        validate_name(name)
        node = node if node is not None else self.local_node
        with self._lock:
            live = self._records.get(name)
            if live is not None:
                raise NameConflictError(name, live.node)
            incarnation = self._incarnations.get(name, 0) + 1
            self._incarnations[name] = incarnation
            self._records[name] = NameRecord(name, node, incarnation)
        self._notify(RegisterDelta(name, node, incarnation))
        return incarnation

    def deregister(self, name: str) -> bool:
        """
        Remove a live name and prune it from every alias.
        :return: False if the name was not live (idempotent no-op)
        """
        with self._lock:
            record = self._records.pop(name, None)
            if record is None:
                log_debug("deregister of unknown name ignored", atom=name)
                return False
            self._prune(name)
        self._notify(DeregisterDelta(name, record.node, record.incarnation))
        return True

    def alias_add(self, alias: str, name: str) -> bool:
        """
        Add a live name to an alias.
        :return: True if the membership is new
        :raises UnknownNameError: the member is not registered
        """
        validate_name(alias)
        with self._lock:
            if name not in self._records:
                raise UnknownNameError(f"cannot alias unregistered name '{name}'")
            members = self._aliases.setdefault(alias, set())
            if name in members:
                return False
            members.add(name)
        self._notify(AliasDelta(alias, name, True))
        return True

    def alias_remove(self, alias: str, name: str) -> bool:
        with self._lock:
            members = self._aliases.get(alias)
            if not members or name not in members:
                return False
            members.discard(name)
            if not members:
                del self._aliases[alias]
        self._notify(AliasDelta(alias, name, False))
        return True

    def _prune(self, name: str) -> None:
        for alias in [a for a, members in self._aliases.items() if name in members]:
            self._aliases[alias].discard(name)
            if not self._aliases[alias]:
                del self._aliases[alias]

    # -- queries -----------------------------------------------------------------------------------

    def lookup(self, name: str) -> NameRecord | None:
        with self._lock:
            return self._records.get(name)

    def alias_members(self, alias: str) -> list[str]:
        with self._lock:
            return sorted(self._aliases.get(alias, ()))

    def resolve(self, query: str, space: NameSpace | str = NameSpace.NAMES) -> list[str]:
        """
        Full-match regex lookup.

        :param query: a regex that must match the entire name or alias
        :param space: search names, or the members of matching aliases
        :return: sorted, duplicate free list of names
        :raises InvalidQueryError: the regex does not compile
        """
        try:
            pattern = re.compile(query)
        except re.error as e:
            raise InvalidQueryError(f"invalid query '{query}': {e}") from None
        space = NameSpace(space) if isinstance(space, str) else space
        with self._lock:
            if space == NameSpace.NAMES:
                return sorted(name for name in self._records if pattern.fullmatch(name))
            found: set[str] = set()
            for alias, members in self._aliases.items():
                if pattern.fullmatch(alias):
                    found |= members
            return sorted(found)

    def local_names(self) -> list[str]:
        with self._lock:
            return sorted(r.name for r in self._records.values() if r.node == self.local_node)

    def snapshot(self, owner: str | None = None) -> RegistrySnapshot:
        """
        A consistent copy of the table.
        :param owner: restrict to records (and alias memberships of records) owned by this node
        """
        with self._lock:
            records = tuple(sorted((r for r in self._records.values() if owner is None or r.node == owner),
                                   key=lambda r: r.name))
            included = {r.name for r in records}
            aliases = []
            for alias in sorted(self._aliases):
                members = tuple(sorted(m for m in self._aliases[alias] if m in included))
                if members:
                    aliases.append((alias, members))
            return RegistrySnapshot(records, tuple(aliases))

    def digest(self) -> str:
        """SHA-256 over the sorted table; identical tables on different nodes give identical digests."""
        snap = self.snapshot()
        hasher = hashlib.sha256()
        for record in snap.records:
            hasher.update(f"N {record.name} {record.node} {record.incarnation}\n".encode("utf-8"))
        for alias, members in snap.aliases:
            hasher.update(f"A {alias} {' '.join(members)}\n".encode("utf-8"))
        return hasher.hexdigest()

    # -- remote deltas -------------------------------------------------------------------------------

    def apply_remote(self, delta: RegistryDelta) -> None:
        if isinstance(delta, RegisterDelta):
            self.apply_remote_register(delta)
        elif isinstance(delta, DeregisterDelta):
            self.apply_remote_deregister(delta)
        else:
            self.apply_remote_alias(delta)

    def apply_remote_register(self, delta: RegisterDelta) -> None:
        """
        Apply a peer's registration. Simultaneous registrations of one name on two nodes resolve to
        the lowest node id; a losing local owner is told through ``on_conflict_lost``.
        """
        lost_local = False
        with self._lock:
            self._incarnations[delta.name] = max(self._incarnations.get(delta.name, 0), delta.incarnation)
            current = self._records.get(delta.name)
            if current is not None and current.node != delta.node:
                if current.node < delta.node:
                    return
                lost_local = current.node == self.local_node
                self._prune(delta.name)
                log_lifecycle(Lifecycle.CONFLICT, delta.name, "-", node=self.local_node, winner=delta.node)
            elif current is not None and current.incarnation > delta.incarnation:
                return
            self._records[delta.name] = NameRecord(delta.name, delta.node, delta.incarnation)
        if lost_local and self.on_conflict_lost is not None:
            self.on_conflict_lost(delta.name)

    def apply_remote_deregister(self, delta: DeregisterDelta) -> None:
        with self._lock:
            current = self._records.get(delta.name)
            if current is None or current.node != delta.node or current.incarnation > delta.incarnation:
                return
            del self._records[delta.name]
            self._prune(delta.name)

    def apply_remote_alias(self, delta: AliasDelta) -> None:
        with self._lock:
            if delta.add:
                if delta.name in self._records:
                    self._aliases.setdefault(delta.alias, set()).add(delta.name)
                return
            members = self._aliases.get(delta.alias)
            if members is not None:
                members.discard(delta.name)
                if not members:
                    del self._aliases[delta.alias]

    def apply_snapshot(self, snapshot: RegistrySnapshot) -> None:
        for record in snapshot.records:
            self.apply_remote_register(RegisterDelta(record.name, record.node, record.incarnation))
        for alias, members in snapshot.aliases:
            for member in members:
                self.apply_remote_alias(AliasDelta(alias, member, True))

    def purge_node(self, node: str) -> list[str]:
        """
        Forget every name owned by a node whose link went down.
        :return: the purged names
        """
        with self._lock:
            purged = sorted(name for name, record in self._records.items() if record.node == node)
            for name in purged:
                del self._records[name]
                self._prune(name)
        return purged

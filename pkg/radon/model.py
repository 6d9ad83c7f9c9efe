# Repository:   https://github.com/PyRadon
# File Name:    radon/model.py
# Description:  Names, atom configurations, policies, envelopes and events
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
# @date: 2026-04-03
# @author: Dieter J Kybelksties

"""
Core vocabulary shared by every other module.

All value types here are immutable once built. The configuration document is JSON with a top-level
``atoms`` list; :func:`parse_configuration` and :func:`render_configuration` convert between the two.
"""

from __future__ import annotations

import asyncio
import json
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Union

from fundamentals.extended_enum import ExtendedEnum

from radon.error import ConfigurationError, ConfigurationSyntaxError, InvalidNameError

MAX_NAME_BYTES = 255
MAX_PAYLOAD_BYTES = 4 * 1024 * 1024
NAME_PATTERN = re.compile(r"[A-Za-z0-9._\-/]+")
_DURATION_PATTERN = re.compile(r"(\d+)(ms|s)")


def validate_name(candidate: str) -> str:
    """
    Check the lexical rules for atom names and aliases.

    :param candidate: the proposed name
    :return: the name, unchanged
    :raises InvalidNameError: empty, illegal character or longer than 255 bytes
    """
    if not isinstance(candidate, str) or candidate == "":
        raise InvalidNameError("name must be a non-empty string")
    if len(candidate.encode("utf-8")) > MAX_NAME_BYTES:
        raise InvalidNameError(f"name exceeds {MAX_NAME_BYTES} bytes")
    if NAME_PATTERN.fullmatch(candidate) is None:
        raise InvalidNameError(f"name '{candidate}' contains characters outside [A-Za-z0-9._-/]")
    return candidate


class AtomKind(ExtendedEnum):
    DAEMON = "daemon"
    REACTIVE = "reactive"


class RecoveryPolicy(ExtendedEnum):
    NONE = "none"
    ESCALATE = "escalate"
    RESTART = "restart"
    RECOVER = "recover"


class Ordering(ExtendedEnum):
    UNORDERED = "unordered"
    FIFO = "fifo"


class NameSpace(ExtendedEnum):
    NAMES = "names"
    ALIASES = "aliases"


def parse_duration_ms(text: str) -> int:
    """Parse ``"<int>s"`` or ``"<int>ms"`` into milliseconds."""
    match = _DURATION_PATTERN.fullmatch(text) if isinstance(text, str) else None
    if match is None:
        raise ValueError(f"duration '{text}' must look like '5s' or '250ms'")
    value = int(match.group(1))
    return value * 1000 if match.group(2) == "s" else value


def render_duration_ms(millis: int) -> str:
    return f"{millis // 1000}s" if millis % 1000 == 0 else f"{millis}ms"


@dataclass(frozen=True)
class One:
    """At most one instance, created on the first event."""


@dataclass(frozen=True)
class RoundRobin:
    """Up to ``limit`` instances, created lazily, events assigned by a rotating cursor."""
    limit: int

    def __post_init__(self) -> None:
        if not isinstance(self.limit, int) or isinstance(self.limit, bool) or self.limit < 1:
            raise ValueError("round-robin limit must be a positive integer")


@dataclass(frozen=True)
class OnDemand:
    """A fresh instance for every event."""


@dataclass(frozen=True)
class OnDemandExpire:
    """Idle instances are reused until the idle timeout or the event budget runs out."""
    idle_timeout_ms: int | None = None
    max_events: int | None = None

    def __post_init__(self) -> None:
        if self.idle_timeout_ms is None and self.max_events is None:
            raise ValueError("on-demand-expire needs idle_timeout or max_events")
        if self.idle_timeout_ms is not None and self.idle_timeout_ms < 0:
            raise ValueError("idle_timeout must not be negative")
        if self.max_events is not None and (not isinstance(self.max_events, int) or isinstance(self.max_events, bool)
                                            or self.max_events < 1):
            raise ValueError("max_events must be a positive integer")

    @property
    def idle_timeout(self) -> float | None:
        """Idle timeout in seconds."""
        return None if self.idle_timeout_ms is None else self.idle_timeout_ms / 1000.0


SchedulingPolicy = Union[One, RoundRobin, OnDemand, OnDemandExpire]


@dataclass(frozen=True)
class EventRoute:
    method: str
    path_prefix: str

    def __post_init__(self) -> None:
        if not self.method or not self.method.isalpha():
            raise ValueError(f"invalid HTTP method '{self.method}'")
        object.__setattr__(self, "method", self.method.upper())
        if not self.path_prefix.startswith("/"):
            raise ValueError(f"path prefix '{self.path_prefix}' must begin with '/'")


@dataclass(frozen=True)
class NodeInfo:
    node_id: str
    listen_address: str
    tags: frozenset[str] = frozenset()
    http_address: str | None = None

    @property
    def host(self) -> str:
        return split_address(self.listen_address)[0]

    @property
    def port(self) -> int:
        return split_address(self.listen_address)[1]

    @property
    def http(self) -> str:
        """The gateway address; defaults to the listen host with port + 100."""
        if self.http_address:
            return self.http_address
        return f"{self.host}:{self.port + 100}"


def split_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"address '{address}' must be host:port")
    return host or "0.0.0.0", int(port)


@dataclass(frozen=True)
class AtomConfiguration:
    definition: str
    kind: AtomKind
    name: str | None = None
    count: int = 1
    scheduling: SchedulingPolicy | None = None
    recovery: RecoveryPolicy = RecoveryPolicy.NONE
    hosts: tuple[str, ...] | None = None
    allow_tags: frozenset[str] = frozenset()
    deny_tags: frozenset[str] = frozenset()
    routes: tuple[EventRoute, ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict, hash=False)

    @property
    def label(self) -> str:
        return self.name if self.kind == AtomKind.DAEMON and self.name else self.definition

    def expand_names(self, node_id: str) -> list[str]:
        """
        Concrete daemon names for one node, expanding ``{node}`` and ``{index}``.
        :param node_id: the hosting node
        :return: ``count`` names in index order
        """
        if self.kind != AtomKind.DAEMON or self.name is None:
            return []
        return [expand_template(self.name, node_id, index) for index in range(self.count)]


def expand_template(template: str, node_id: str, index: int) -> str:
    return template.replace("{node}", node_id).replace("{index}", str(index))


class DestinationSelector:
    """Marker base for the three ways of addressing a send."""


@dataclass(frozen=True)
class Exact(DestinationSelector):
    name: str


@dataclass(frozen=True)
class AliasAll(DestinationSelector):
    alias: str


@dataclass(frozen=True)
class NameSet(DestinationSelector):
    names: tuple[str, ...]


@dataclass
class Event:
    """
    An external request handed to a reactive atom; ``response`` resolves to (status, body). ``path`` is
    the percent-encoded path without the query string, which is kept apart in ``query``.
    """
    method: str
    path: str
    headers: tuple[tuple[str, str], ...] = ()
    body: bytes = b""
    query: str = ""
    correlation_id: bytes = field(default_factory=lambda: os.urandom(16))
    response: asyncio.Future | None = field(default=None, compare=False, repr=False)

    def header(self, key: str, default: str | None = None) -> str | None:
        lowered = key.lower()
        for name, value in self.headers:
            if name.lower() == lowered:
                return value
        return default


@dataclass(frozen=True)
class Envelope:
    """
    A routed message.

    ``target`` and ``incarnation`` are filled in per destination by the router; an incarnation of 0
    matches any live instance. ``event`` is set only on node-local event deliveries to reused reactive
    instances and never crosses the wire.
    """
    sender: str
    destination: DestinationSelector
    ordering: Ordering
    payload: bytes
    correlation_id: bytes | None = None
    target: str = ""
    incarnation: int = 0
    event: Event | None = field(default=None, compare=False)


# ---------------------------------------------------------------------------------------------------
# configuration documents

_DAEMON_KEYS = {"definition", "kind", "name", "count", "recovery", "hosts", "allow_tags", "deny_tags", "params"}
_REACTIVE_KEYS = {"definition", "kind", "scheduling", "recovery", "hosts", "allow_tags", "deny_tags", "routes",
                  "params"}
_POLICY_NAMES = {"one": One, "round-robin": RoundRobin, "on-demand": OnDemand, "on-demand-expire": OnDemandExpire}


def _position(text: str, index: int) -> tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    column = index - (text.rfind("\n", 0, index) + 1) + 1
    return line, column


def _string_list(value: Any, path: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise ConfigurationError("expected a list of strings", path)
    return value


def _parse_scheduling(value: Any, path: str) -> SchedulingPolicy:
    if isinstance(value, str):
        value = {"policy": value}
    if not isinstance(value, dict) or "policy" not in value:
        raise ConfigurationError("expected an object with a 'policy' field", path)
    policy = value["policy"]
    unknown = set(value) - {"policy", "limit", "idle_timeout", "max_events"}
    if unknown:
        raise ConfigurationError(f"unknown field(s) {sorted(unknown)}", path)
    try:
        if policy == "one":
            return One()
        if policy == "on-demand":
            return OnDemand()
        if policy == "round-robin":
            if "limit" not in value:
                raise ConfigurationError("round-robin requires 'limit'", path)
            return RoundRobin(value["limit"])
        if policy == "on-demand-expire":
            idle = value.get("idle_timeout")
            return OnDemandExpire(idle_timeout_ms=parse_duration_ms(idle) if idle is not None else None,
                                  max_events=value.get("max_events"))
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(str(e), path) from e
    raise ConfigurationError(f"unknown scheduling policy '{policy}' (expected one of {sorted(_POLICY_NAMES)})", path)


def _parse_params(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigurationError("expected an object", path)
    for key, item in value.items():
        if not isinstance(item, (str, int, float, bool)) and item is not None:
            raise ConfigurationError(f"parameter '{key}' must be a scalar", path)
    return dict(value)


def _parse_atom(entry: Any, path: str) -> AtomConfiguration:
    if not isinstance(entry, dict):
        raise ConfigurationError("expected an object", path)
    for required in ("definition", "kind"):
        if required not in entry:
            raise ConfigurationError(f"missing field '{required}'", path)
    try:
        kind = AtomKind(entry["kind"])
    except ValueError:
        raise ConfigurationError(f"kind must be 'daemon' or 'reactive', got {entry['kind']!r}", path) from None
    allowed = _DAEMON_KEYS if kind == AtomKind.DAEMON else _REACTIVE_KEYS
    unknown = set(entry) - allowed
    if unknown:
        raise ConfigurationError(f"field(s) {sorted(unknown)} not allowed for {kind.value} atoms", path)

    definition = entry["definition"]
    if not isinstance(definition, str):
        raise ConfigurationError("definition must be a string", f"{path}.definition")
    try:
        validate_name(definition)
    except InvalidNameError as e:
        raise ConfigurationError(str(e), f"{path}.definition") from None

    try:
        recovery = RecoveryPolicy(entry.get("recovery", "none"))
    except ValueError:
        raise ConfigurationError(f"unknown recovery policy {entry.get('recovery')!r}", f"{path}.recovery") from None

    hosts = tuple(_string_list(entry["hosts"], f"{path}.hosts")) if "hosts" in entry else None
    allow_tags = frozenset(_string_list(entry.get("allow_tags", []), f"{path}.allow_tags"))
    deny_tags = frozenset(_string_list(entry.get("deny_tags", []), f"{path}.deny_tags"))
    if allow_tags & deny_tags:
        raise ConfigurationError(f"tags {sorted(allow_tags & deny_tags)} are both allowed and denied", path)
    params = _parse_params(entry.get("params", {}), f"{path}.params")

    if kind == AtomKind.DAEMON:
        name = entry.get("name")
        if not isinstance(name, str):
            raise ConfigurationError("daemon atoms require a 'name'", path)
        count = entry.get("count", 1)
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ConfigurationError("count must be a positive integer", f"{path}.count")
        if count > 1 and "{index}" not in name:
            raise ConfigurationError("count > 1 requires an '{index}' placeholder in the name", f"{path}.name")
        try:
            validate_name(expand_template(name, "n", 0))
        except InvalidNameError as e:
            raise ConfigurationError(str(e), f"{path}.name") from None
        return AtomConfiguration(definition=definition, kind=kind, name=name, count=count, recovery=recovery,
                                 hosts=hosts, allow_tags=allow_tags, deny_tags=deny_tags, params=params)

    if "scheduling" not in entry:
        raise ConfigurationError("reactive atoms require 'scheduling'", path)
    scheduling = _parse_scheduling(entry["scheduling"], f"{path}.scheduling")
    raw_routes = entry.get("routes")
    if not isinstance(raw_routes, list) or not raw_routes:
        raise ConfigurationError("reactive atoms require at least one route", f"{path}.routes")
    routes = []
    for index, raw in enumerate(raw_routes):
        route_path = f"{path}.routes[{index}]"
        if not isinstance(raw, dict) or set(raw) != {"method", "path_prefix"}:
            raise ConfigurationError("route needs exactly 'method' and 'path_prefix'", route_path)
        try:
            routes.append(EventRoute(str(raw["method"]), str(raw["path_prefix"])))
        except ValueError as e:
            raise ConfigurationError(str(e), route_path) from None
    return AtomConfiguration(definition=definition, kind=kind, scheduling=scheduling, recovery=recovery,
                             hosts=hosts, allow_tags=allow_tags, deny_tags=deny_tags, routes=tuple(routes),
                             params=params)


def parse_configuration(text: str) -> list[AtomConfiguration]:
    """
    Parse a configuration document.

    :param text: JSON text with a top-level ``atoms`` list
    :return: the configurations in document order
    :raises ConfigurationSyntaxError: the text is not well-formed JSON (1-based line and column)
    :raises ConfigurationError: a semantic rule is violated; the message names the offending path
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        line, column = _position(text, e.pos)
        raise ConfigurationSyntaxError(e.msg, line, column) from None
    if not isinstance(document, dict) or set(document) != {"atoms"}:
        raise ConfigurationError("document must be an object with exactly one key 'atoms'", "$")
    atoms = document["atoms"]
    if not isinstance(atoms, list):
        raise ConfigurationError("'atoms' must be a list", "$.atoms")

    configs: list[AtomConfiguration] = []
    seen_names: dict[str, int] = {}
    for index, entry in enumerate(atoms):
        config = _parse_atom(entry, f"$.atoms[{index}]")
        if config.kind == AtomKind.DAEMON:
            assert config.name is not None
            if config.name in seen_names:
                raise ConfigurationError(f"duplicate daemon name '{config.name}' "
                                         f"(also at $.atoms[{seen_names[config.name]}])", f"$.atoms[{index}].name")
            seen_names[config.name] = index
        configs.append(config)
    return configs


def _scheduling_to_dict(policy: SchedulingPolicy) -> dict[str, Any]:
    if isinstance(policy, One):
        return {"policy": "one"}
    if isinstance(policy, OnDemand):
        return {"policy": "on-demand"}
    if isinstance(policy, RoundRobin):
        return {"policy": "round-robin", "limit": policy.limit}
    data: dict[str, Any] = {"policy": "on-demand-expire"}
    if policy.idle_timeout_ms is not None:
        data["idle_timeout"] = render_duration_ms(policy.idle_timeout_ms)
    if policy.max_events is not None:
        data["max_events"] = policy.max_events
    return data


def configuration_to_dict(config: AtomConfiguration) -> dict[str, Any]:
    """Canonical document form of one configuration."""
    data: dict[str, Any] = {"definition": config.definition, "kind": config.kind.value}
    if config.kind == AtomKind.DAEMON:
        data["name"] = config.name
        if config.count != 1:
            data["count"] = config.count
    else:
        assert config.scheduling is not None
        data["scheduling"] = _scheduling_to_dict(config.scheduling)
        data["routes"] = [{"method": r.method, "path_prefix": r.path_prefix} for r in config.routes]
    data["recovery"] = config.recovery.value
    if config.hosts is not None:
        data["hosts"] = list(config.hosts)
    if config.allow_tags:
        data["allow_tags"] = sorted(config.allow_tags)
    if config.deny_tags:
        data["deny_tags"] = sorted(config.deny_tags)
    if config.params:
        data["params"] = dict(config.params)
    return data


def render_configuration(configs: list[AtomConfiguration], indent: int | None = 2) -> str:
    return json.dumps({"atoms": [configuration_to_dict(c) for c in configs]}, indent=indent)


def node_eligible(config: AtomConfiguration, node: NodeInfo) -> bool:
    """Explicit host list (if any), then allow_tags must all be present and no deny_tag may be."""
    if config.hosts is not None and node.node_id not in config.hosts:
        return False
    if not config.allow_tags <= node.tags:
        return False
    return not (config.deny_tags & node.tags)

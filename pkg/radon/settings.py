# Repository:   https://github.com/PyRadon
# File Name:    radon/settings.py
# Description:  Layered node settings and cluster documents
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

from __future__ import annotations

import dataclasses
import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fundamentals.extended_enum import ExtendedEnum

from radon.color_scheme import FACTORY_CONFIG_DIR, ColorScheme, get_user_config_dir
from radon.error import ConfigurationError, ConfigurationSyntaxError
from radon.log_channel_abc import OutputFormat
from radon.log_levels import LogLevel
from radon.model import NodeInfo, split_address, validate_name
from radon.runtime_logger import log_debug


class Durability(ExtendedEnum):
    SYNC = "sync"
    ASYNC = "async"


@dataclass(frozen=True)
class NodeSettings:
    mailbox_capacity: int = 65536
    response_timeout: float = 30.0
    durability: Durability = Durability.SYNC
    flush_interval: float = 0.05
    compact_min_bytes: int = 4 * 1024 * 1024
    expiry_sweep_interval: float = 0.5
    connect_timeout: float = 5.0
    reconnect_backoff_min: float = 0.1
    reconnect_backoff_max: float = 2.0
    log_format: str = "key_value"
    log_level: str = "info"
    log_color: str = "color"

    def with_overrides(self, **overrides: Any) -> NodeSettings:
        """Return a copy with the given (already validated) values replaced; None values are ignored."""
        return apply_settings(self, {k: v for k, v in overrides.items() if v is not None}, "overrides")


_FIELDS = {f.name: f for f in dataclasses.fields(NodeSettings)}
_CHOICES = {
    "log_format": {f.name for f in OutputFormat},
    "log_level": {level.name for level in LogLevel},
    "log_color": {scheme.name for scheme in ColorScheme.Default},
}


def _coerce(name: str, value: Any, origin: str) -> Any:
    current = _FIELDS[name].type
    try:
        if name == "durability":
            return value if isinstance(value, Durability) else Durability(str(value).lower())
        if current == "int":
            if isinstance(value, bool) or int(value) != value or int(value) < 1:
                raise ValueError
            return int(value)
        if current == "float":
            if isinstance(value, bool) or float(value) < 0:
                raise ValueError
            return float(value)
        text = str(value).lower()
        if text.upper() not in _CHOICES[name]:
            raise ValueError
        return text
    except (TypeError, ValueError):
        raise ConfigurationError(f"invalid value {value!r} for '{name}'", origin) from None


def apply_settings(base: NodeSettings, values: Mapping[str, Any], origin: str) -> NodeSettings:
    """
    Layer a mapping of settings over a base.
    :raises ConfigurationError: unknown keys or values of the wrong type
    """
    unknown = set(values) - set(_FIELDS)
    if unknown:
        raise ConfigurationError(f"unknown setting(s) {sorted(unknown)}", origin)
    coerced = {name: _coerce(name, value, origin) for name, value in values.items()}
    return dataclasses.replace(base, **coerced)


def _read_json(path: Path) -> Any:
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationSyntaxError(f"{path}: {e.msg}", e.lineno, e.colno) from None


def load_settings(config_file: str | Path | None = None,
                  overrides: Mapping[str, Any] | None = None,
                  use_user_config: bool = True) -> NodeSettings:
    """
    Build node settings from, lowest to highest precedence: the factory defaults, the user file
    ``~/.config/radon/settings/active``, an explicit config file, and command-line overrides.

    :param config_file: optional explicit settings file
    :param overrides: values from the command line; None entries are skipped
    :param use_user_config: consult the user settings file
    :return: the merged settings
    """
    settings = NodeSettings()
    layers: list[Path] = [FACTORY_CONFIG_DIR / "settings" / "factory" / "node_defaults.json"]
    if use_user_config:
        user_active = get_user_config_dir(create=False) / "settings" / "active"
        if user_active.exists():
            layers.append(user_active)
    if config_file is not None:
        layers.append(Path(config_file))
    for layer in layers:
        data = _read_json(layer)
        if not isinstance(data, dict):
            raise ConfigurationError("settings file must hold a JSON object", str(layer))
        settings = apply_settings(settings, data, str(layer))
        log_debug("settings layer applied", file=str(layer))
    if overrides:
        settings = apply_settings(settings, {k: v for k, v in overrides.items() if v is not None}, "command line")
    return settings


def parse_cluster(text: str, origin: str = "cluster") -> list[NodeInfo]:
    """
    Parse a cluster document ``{"nodes": [{"node_id", "listen_address", "http_address"?, "tags"?}]}``.

    :raises ConfigurationError: malformed entries or duplicate node ids
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationSyntaxError(f"{origin}: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(document, dict) or not isinstance(document.get("nodes"), list):
        raise ConfigurationError("cluster document needs a 'nodes' list", origin)
    nodes: list[NodeInfo] = []
    for index, entry in enumerate(document["nodes"]):
        path = f"{origin}.nodes[{index}]"
        if not isinstance(entry, dict):
            raise ConfigurationError("expected an object", path)
        unknown = set(entry) - {"node_id", "listen_address", "http_address", "tags"}
        if unknown:
            raise ConfigurationError(f"unknown field(s) {sorted(unknown)}", path)
        try:
            node_id = validate_name(entry["node_id"])
            listen = entry["listen_address"]
            split_address(listen)
            http = entry.get("http_address")
            if http is not None:
                split_address(http)
            tags = entry.get("tags", [])
            if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
                raise ValueError("tags must be a list of strings")
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(str(e), path) from None
        if any(node.node_id == node_id for node in nodes):
            raise ConfigurationError(f"duplicate node_id '{node_id}'", path)
        nodes.append(NodeInfo(node_id=node_id, listen_address=listen, tags=frozenset(tags), http_address=http))
    return nodes


def load_cluster(path: str | Path) -> list[NodeInfo]:
    path = Path(path)
    return parse_cluster(path.read_text(encoding="utf-8"), str(path))


def render_cluster(nodes: list[NodeInfo]) -> str:
    entries = []
    for node in nodes:
        entry: dict[str, Any] = {"node_id": node.node_id, "listen_address": node.listen_address}
        if node.http_address:
            entry["http_address"] = node.http_address
        if node.tags:
            entry["tags"] = sorted(node.tags)
        entries.append(entry)
    return json.dumps({"nodes": entries}, indent=2)

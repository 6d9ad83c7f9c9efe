# Repository:   https://github.com/PyRadon
# File Name:    radon/bench/workload.py
# Description:  Workload description and the seeded per-client operation stream
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
# @date: 2026-04-16
# @author: Dieter J Kybelksties

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol

from fundamentals.extended_enum import ExtendedEnum

from radon.error import ConfigurationError, ConfigurationSyntaxError


class OpKind(ExtendedEnum):
    PUT = "put"
    GET_RANDOM = "get_random"
    GET_RECENT = "get_recent"


DEFAULT_MIX = {OpKind.PUT: 0.20, OpKind.GET_RANDOM: 0.40, OpKind.GET_RECENT: 0.40}


@dataclass(frozen=True)
class WorkloadSpec:
    """
    :param clients: independent sequential clients
    :param target_rate_per_client: requests per second each client aims for
    :param duration: seconds per phase
    :param mix: fraction of each operation, summing to 1
    :param value_size: bytes per stored value
    :param key_space: keys are drawn from ``k0 .. k<key_space - 1>``
    :param recent_window: how many of its own recent puts a client remembers
    :param idle_gap: seconds of silence between two phases; 0 runs a single phase
    :param timeout: per-request timeout in seconds
    """
    clients: int = 1
    target_rate_per_client: float = 100.0
    duration: float = 10.0
    mix: dict[OpKind, float] = field(default_factory=lambda: dict(DEFAULT_MIX))
    value_size: int = 64
    key_space: int = 100_000
    recent_window: int = 128
    idle_gap: float = 0.0
    timeout: float = 5.0

    def __post_init__(self) -> None:
        if self.clients < 1:
            raise ConfigurationError("clients must be at least 1", "clients")
        if self.target_rate_per_client <= 0:
            raise ConfigurationError("target rate must be positive", "target_rate_per_client")
        if self.duration <= 0:
            raise ConfigurationError("duration must be positive", "duration")
        if any(fraction < 0 for fraction in self.mix.values()):
            raise ConfigurationError("mix fractions must not be negative", "mix")
        if not math.isclose(sum(self.mix.values()), 1.0, abs_tol=1e-9):
            raise ConfigurationError(f"mix fractions sum to {sum(self.mix.values())}, expected 1.0", "mix")
        if self.value_size < 0 or self.key_space < 1 or self.recent_window < 1:
            raise ConfigurationError("value_size, key_space and recent_window must be positive", "workload")
        if self.idle_gap < 0 or self.timeout <= 0:
            raise ConfigurationError("idle_gap must not be negative and timeout must be positive", "workload")

    @property
    def phases(self) -> int:
        return 2 if self.idle_gap > 0 else 1

    @property
    def interval(self) -> float:
        return 1.0 / self.target_rate_per_client

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> WorkloadSpec:
        """
        :raises ConfigurationError: unknown fields, unknown operations or invalid values
        """
        known = {"clients", "target_rate_per_client", "rate", "duration", "mix", "value_size", "key_space",
                 "recent_window", "idle_gap", "timeout"}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown workload field(s) {sorted(unknown)}", "workload")
        values = dict(data)
        if "rate" in values:
            values["target_rate_per_client"] = values.pop("rate")
        if "mix" in values:
            if not isinstance(values["mix"], dict):
                raise ConfigurationError("mix must be an object", "mix")
            try:
                values["mix"] = {OpKind(str(k)): float(v) for k, v in values["mix"].items()}
            except ValueError as e:
                raise ConfigurationError(str(e), "mix") from None
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigurationError(str(e), "workload") from None

    def to_dict(self) -> dict[str, Any]:
        return {
            "clients": self.clients,
            "target_rate_per_client": self.target_rate_per_client,
            "duration": self.duration,
            "mix": {kind.value: fraction for kind, fraction in self.mix.items()},
            "value_size": self.value_size,
            "key_space": self.key_space,
            "recent_window": self.recent_window,
            "idle_gap": self.idle_gap,
            "timeout": self.timeout,
        }


def load_spec(path: str | Path) -> WorkloadSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationSyntaxError(f"{path}: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise ConfigurationError("workload file must hold a JSON object", str(path))
    return WorkloadSpec.from_dict(data)


@dataclass(frozen=True)
class Operation:
    kind: OpKind
    key: str
    value: bytes = b""


class ClientWorkload:
    """
    The operation stream of one client. Identical seeds and client indices give identical streams.
    Recently put keys only count once :meth:`put_succeeded` confirms them.
    """

    def __init__(self, spec: WorkloadSpec, seed: int, client_index: int):
        self.spec = spec
        self.rng = random.Random(f"{seed}/{client_index}")
        self.recent: deque[str] = deque(maxlen=spec.recent_window)
        self._kinds = list(spec.mix)
        self._weights = [spec.mix[kind] for kind in self._kinds]

    def random_key(self) -> str:
        return f"k{self.rng.randrange(self.spec.key_space)}"

    def next_op(self) -> Operation:
        kind = self.rng.choices(self._kinds, self._weights)[0]
        if kind == OpKind.PUT:
            return Operation(kind, self.random_key(), self.rng.randbytes(self.spec.value_size))
        if kind == OpKind.GET_RECENT and self.recent:
            return Operation(kind, self.recent[self.rng.randrange(len(self.recent))])
        return Operation(kind, self.random_key())

    def put_succeeded(self, key: str) -> None:
        self.recent.append(key)

    def pick_target(self, targets: list[str]) -> str:
        return targets[self.rng.randrange(len(targets))]


@dataclass(frozen=True)
class HttpRequest:
    method: str
    path: str
    body: bytes = b""


class RequestMapper(Protocol):
    def request(self, op: Operation) -> HttpRequest: ...

    def succeeded(self, op: Operation, request: HttpRequest, status: int, body: bytes) -> bool: ...


class KvMapper:
    """Operations against the key-value frontend; a 404 on a get is an answer, not an error."""

    def request(self, op: Operation) -> HttpRequest:
        if op.kind == OpKind.PUT:
            return HttpRequest("PUT", f"/kv/{op.key}", op.value)
        return HttpRequest("GET", f"/kv/{op.key}")

    def succeeded(self, op: Operation, request: HttpRequest, status: int, body: bytes) -> bool:
        return status == 200 or (status == 404 and op.kind != OpKind.PUT)


class EchoMapper:
    """Every operation becomes ``POST /echo`` with the operation's value (or key) as body."""

    def request(self, op: Operation) -> HttpRequest:
        return HttpRequest("POST", "/echo", op.value or op.key.encode("ascii"))

    def succeeded(self, op: Operation, request: HttpRequest, status: int, body: bytes) -> bool:
        return status == 200 and body == request.body

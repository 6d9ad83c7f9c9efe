# Repository:   https://github.com/PyRadon
# File Name:    radon/bench/runner.py
# Description:  Paced sequential HTTP clients and the run report they produce
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

"""
Each client picks one target at random, keeps a single persistent connection to it and sends its
requests one after the other. Request ``i`` of a phase is scheduled at ``start + i / rate``; a client
that falls behind sends as fast as responses come back. Latency is measured from the moment a request
is sent until its response is read.
"""

from __future__ import annotations

import asyncio
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

import httpx
from hdrh.histogram import HdrHistogram

from radon.bench.workload import ClientWorkload, KvMapper, OpKind, RequestMapper, WorkloadSpec
from radon.error import BenchError
from radon.runtime_logger import log_debug, log_info, log_warning

LOWEST_US = 1
HIGHEST_US = 60_000_000
SIGNIFICANT_FIGURES = 3


def new_histogram() -> HdrHistogram:
    return HdrHistogram(LOWEST_US, HIGHEST_US, SIGNIFICANT_FIGURES)


@dataclass
class RunReport:
    """
    Client-side view of one run. ``sent == ok + errors + timeouts`` always holds.
    """
    label: str
    clients: int
    rate: float
    elapsed: float = 0.0
    sent: int = 0
    ok: int = 0
    errors: int = 0
    timeouts: int = 0
    per_op: Counter = field(default_factory=Counter)
    statuses: Counter = field(default_factory=Counter)
    histogram: HdrHistogram = field(default_factory=new_histogram, repr=False)
    op_histograms: dict[OpKind, HdrHistogram] = field(default_factory=dict, repr=False)
    max_in_flight: int = 0
    client_sent: list[int] = field(default_factory=list)
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def achieved(self) -> float:
        """Successful operations per second over the active phases."""
        return self.ok / self.elapsed if self.elapsed > 0 else 0.0

    @property
    def failed(self) -> int:
        return self.errors + self.timeouts

    def percentile_us(self, percentile: float, kind: OpKind | None = None) -> int:
        histogram = self.histogram if kind is None else self.op_histograms.get(kind)
        if histogram is None or histogram.get_total_count() == 0:
            return 0
        return int(histogram.get_value_at_percentile(percentile))

    @property
    def p50_us(self) -> int:
        return self.percentile_us(50)

    @property
    def p90_us(self) -> int:
        return self.percentile_us(90)

    @property
    def p99_us(self) -> int:
        return self.percentile_us(99)

    @property
    def p999_us(self) -> int:
        return self.percentile_us(99.9)

    def record(self, kind: OpKind, latency_us: int, outcome: str, status: int | None = None) -> None:
        self.sent += 1
        self.per_op[kind.value] += 1
        if status is not None:
            self.statuses[status] += 1
        if outcome == "ok":
            self.ok += 1
        elif outcome == "timeout":
            self.timeouts += 1
        else:
            self.errors += 1
        value = min(max(latency_us, LOWEST_US), HIGHEST_US)
        self.histogram.record_value(value)
        self.op_histograms.setdefault(kind, new_histogram()).record_value(value)

    def summary(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "clients": self.clients,
            "rate": self.rate,
            "elapsed": round(self.elapsed, 3),
            "achieved": round(self.achieved, 1),
            "sent": self.sent,
            "ok": self.ok,
            "errors": self.errors,
            "timeouts": self.timeouts,
            "p50_us": self.p50_us,
            "p90_us": self.p90_us,
            "p99_us": self.p99_us,
            "p999_us": self.p999_us,
            "per_op": dict(self.per_op),
            "statuses": {str(k): v for k, v in sorted(self.statuses.items())},
            **self.extras,
        }


async def check_targets(targets: list[str], timeout: float = 2.0) -> None:
    """
    Any HTTP answer counts as reachable.
    :raises BenchError: a target does not accept connections
    """
    async with httpx.AsyncClient(timeout=timeout) as client:
        for target in targets:
            try:
                await client.get(target.rstrip("/") + "/")
            except httpx.HTTPError as e:
                raise BenchError(f"target {target} unreachable: {e}") from None


class _Client:
    def __init__(self, index: int, spec: WorkloadSpec, seed: int, targets: list[str], mapper: RequestMapper,
                 report: RunReport):
        self.index = index
        self.spec = spec
        self.workload = ClientWorkload(spec, seed, index)
        self.target = self.workload.pick_target(targets)
        self.mapper = mapper
        self.report = report
        self.in_flight = 0
        self.sent = 0

    async def run(self, phase_starts: list[float], phase_ends: list[float]) -> None:
        limits = httpx.Limits(max_connections=1, max_keepalive_connections=1)
        async with httpx.AsyncClient(base_url=self.target, limits=limits, timeout=self.spec.timeout) as http:
            for start, end in zip(phase_starts, phase_ends):
                await self._phase(http, start, end)

    async def _phase(self, http: httpx.AsyncClient, start: float, end: float) -> None:
        now = time.perf_counter()
        if now < start:
            await asyncio.sleep(start - now)
        i = 0
        while True:
            scheduled = start + i * self.spec.interval
            now = time.perf_counter()
            if scheduled >= end or now >= end:
                return
            if now < scheduled:
                await asyncio.sleep(scheduled - now)
            await self._one(http)
            i += 1

    async def _one(self, http: httpx.AsyncClient) -> None:
        op = self.workload.next_op()
        request = self.mapper.request(op)
        self.in_flight += 1
        self.report.max_in_flight = max(self.report.max_in_flight, self.in_flight)
        t0 = time.perf_counter()
        try:
            response = await http.request(request.method, request.path, content=request.body)
            latency = int((time.perf_counter() - t0) * 1_000_000)
            if self.mapper.succeeded(op, request, response.status_code, response.content):
                outcome = "ok"
                if op.kind == OpKind.PUT:
                    self.workload.put_succeeded(op.key)
            else:
                outcome = "error"
            self.report.record(op.kind, latency, outcome, response.status_code)
        except httpx.TimeoutException:
            self.report.record(op.kind, int((time.perf_counter() - t0) * 1_000_000), "timeout")
        except httpx.HTTPError as e:
            log_debug("request failed", client=self.index, error=str(e))
            self.report.record(op.kind, int((time.perf_counter() - t0) * 1_000_000), "error")
        finally:
            self.in_flight -= 1
            self.sent += 1


async def run_workload(spec: WorkloadSpec, targets: list[str], seed: int = 42, label: str = "kv",
                       mapper: RequestMapper | None = None, check: bool = True) -> RunReport:
    """
    Drive ``spec.clients`` sequential clients against the targets.

    :param spec: the workload
    :param targets: base URLs such as ``http://127.0.0.1:7101``
    :param seed: makes target choice and operation streams reproducible
    :param label: report label
    :param mapper: turns operations into requests, key-value requests by default
    :param check: request every target once first
    :return: the merged report
    :raises BenchError: no targets, or a target is unreachable at start
    """
    if not targets:
        raise BenchError("no targets given")
    if check:
        await check_targets(targets)
    report = RunReport(label=label, clients=spec.clients, rate=spec.target_rate_per_client)
    clients = [_Client(i, spec, seed, targets, mapper or KvMapper(), report) for i in range(spec.clients)]
    log_info("workload started", label=label, clients=spec.clients, rate=spec.target_rate_per_client,
             duration=spec.duration, phases=spec.phases, targets=",".join(targets))
    begin = time.perf_counter() + 0.05
    starts = [begin]
    ends = [begin + spec.duration]
    if spec.phases == 2:
        starts.append(ends[0] + spec.idle_gap)
        ends.append(starts[1] + spec.duration)
    await asyncio.gather(*(client.run(starts, ends) for client in clients))
    finished = time.perf_counter()
    report.elapsed = sum(min(end, finished) - start for start, end in zip(starts, ends))
    report.client_sent = [client.sent for client in clients]
    if report.failed:
        log_warning("workload had failures", label=label, errors=report.errors, timeouts=report.timeouts)
    log_info("workload finished", label=label, sent=report.sent, achieved=round(report.achieved, 1),
             p50_us=report.p50_us, p99_us=report.p99_us)
    return report

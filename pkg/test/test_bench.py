# Repository:   https://github.com/PyRadon
# File Name:    test/test_bench.py
# Description:  Unit tests for the workload model, the load generator and the baselines
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
# @date: 2026-04-21
# @author: Dieter J Kybelksties

import json
import tempfile
import unittest
from collections import Counter
from pathlib import Path
from unittest import mock

import httpx

from radon.bench.baselines import BaselineMode, EchoServer, run_baseline
from radon.bench.runner import RunReport, run_workload
from radon.bench.workload import (DEFAULT_MIX, ClientWorkload, EchoMapper, HttpRequest, KvMapper, Operation, OpKind,
                                  WorkloadSpec, load_spec)
from radon.error import BenchError, ConfigurationError, ConfigurationSyntaxError
from testkit import free_ports, quiet_logging


class WorkloadSpecTests(unittest.TestCase):

    def test_defaults(self):
        spec = WorkloadSpec()
        self.assertEqual(DEFAULT_MIX, spec.mix)
        self.assertEqual(1, spec.phases)
        self.assertAlmostEqual(0.01, spec.interval)

    def test_idle_gap_gives_two_phases(self):
        self.assertEqual(2, WorkloadSpec(idle_gap=1.5).phases)

    def test_rejections(self):
        cases = {
            "clients": dict(clients=0),
            "target_rate_per_client": dict(target_rate_per_client=0),
            "duration": dict(duration=-1),
            "mix": dict(mix={OpKind.PUT: 0.5, OpKind.GET_RANDOM: 0.4}),
        }
        for path, kwargs in cases.items():
            with self.subTest(path=path), self.assertRaises(ConfigurationError) as cm:
                WorkloadSpec(**kwargs)
            self.assertEqual(path, cm.exception.path)
        with self.assertRaises(ConfigurationError):
            WorkloadSpec(mix={OpKind.PUT: 1.5, OpKind.GET_RANDOM: -0.5})
        with self.assertRaises(ConfigurationError):
            WorkloadSpec(idle_gap=-1)

    def test_from_dict_accepts_rate_alias(self):
        spec = WorkloadSpec.from_dict({"clients": 4, "rate": 250, "mix": {"put": 1.0}})
        self.assertEqual(4, spec.clients)
        self.assertEqual(250, spec.target_rate_per_client)
        self.assertEqual({OpKind.PUT: 1.0}, spec.mix)

    def test_from_dict_rejects_unknown(self):
        with self.assertRaises(ConfigurationError):
            WorkloadSpec.from_dict({"clients": 1, "threads": 8})
        with self.assertRaises(ConfigurationError) as cm:
            WorkloadSpec.from_dict({"mix": {"delete": 1.0}})
        self.assertEqual("mix", cm.exception.path)
        with self.assertRaises(ConfigurationError):
            WorkloadSpec.from_dict({"mix": [0.2, 0.8]})

    def test_to_dict_feeds_from_dict(self):
        spec = WorkloadSpec(clients=3, duration=2.5, idle_gap=1.0)
        self.assertEqual(spec, WorkloadSpec.from_dict(spec.to_dict()))

    def test_load_spec(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "workload.json"
            path.write_text(json.dumps({"clients": 2, "rate": 10}), encoding="utf-8")
            self.assertEqual(2, load_spec(path).clients)
            path.write_text("{\n  \"clients\": ,\n}", encoding="utf-8")
            with self.assertRaises(ConfigurationSyntaxError) as cm:
                load_spec(path)
            self.assertEqual(2, cm.exception.line)
            path.write_text("[1, 2]", encoding="utf-8")
            with self.assertRaises(ConfigurationError):
                load_spec(path)


class ClientWorkloadTests(unittest.TestCase):

    def test_same_seed_same_stream(self):
        spec = WorkloadSpec(value_size=8)
        first = ClientWorkload(spec, 7, 0)
        second = ClientWorkload(spec, 7, 0)
        self.assertEqual([first.next_op() for _ in range(200)], [second.next_op() for _ in range(200)])

    def test_clients_differ(self):
        spec = WorkloadSpec()
        first = ClientWorkload(spec, 7, 0)
        second = ClientWorkload(spec, 7, 1)
        self.assertNotEqual([first.next_op() for _ in range(50)], [second.next_op() for _ in range(50)])

    def test_mix_within_one_percent(self):
        workload = ClientWorkload(WorkloadSpec(value_size=0), 42, 0)
        total = 100_000
        counts = Counter(workload.next_op().kind for _ in range(total))
        for kind, fraction in DEFAULT_MIX.items():
            with self.subTest(kind=kind.value):
                self.assertAlmostEqual(fraction, counts[kind] / total, delta=0.01)

    def test_puts_carry_values_and_keys_stay_in_space(self):
        workload = ClientWorkload(WorkloadSpec(value_size=16, key_space=10), 1, 0)
        for _ in range(500):
            op = workload.next_op()
            self.assertIn(op.key, {f"k{i}" for i in range(10)})
            self.assertEqual(16 if op.kind == OpKind.PUT else 0, len(op.value))

    def test_recent_gets_use_confirmed_puts_only(self):
        spec = WorkloadSpec(mix={OpKind.GET_RECENT: 1.0}, key_space=1_000_000, recent_window=2)
        workload = ClientWorkload(spec, 3, 0)
        for key in ("mine-1", "mine-2", "mine-3"):
            workload.put_succeeded(key)
        keys = {workload.next_op().key for _ in range(100)}
        self.assertEqual({"mine-2", "mine-3"}, keys)

    def test_recent_get_without_history_falls_back_to_random_key(self):
        workload = ClientWorkload(WorkloadSpec(mix={OpKind.GET_RECENT: 1.0}), 3, 0)
        op = workload.next_op()
        self.assertEqual(OpKind.GET_RECENT, op.kind)
        self.assertTrue(op.key.startswith("k"))

    def test_pick_target_is_reproducible(self):
        targets = [f"http://127.0.0.1:{port}" for port in (1, 2, 3)]
        picks = [ClientWorkload(WorkloadSpec(), 9, i).pick_target(targets) for i in range(10)]
        self.assertEqual(picks, [ClientWorkload(WorkloadSpec(), 9, i).pick_target(targets) for i in range(10)])


class MapperTests(unittest.TestCase):

    def test_kv_mapper(self):
        mapper = KvMapper()
        put = Operation(OpKind.PUT, "k1", b"v")
        get = Operation(OpKind.GET_RANDOM, "k2")
        self.assertEqual(HttpRequest("PUT", "/kv/k1", b"v"), mapper.request(put))
        self.assertEqual(HttpRequest("GET", "/kv/k2"), mapper.request(get))
        self.assertTrue(mapper.succeeded(get, mapper.request(get), 404, b""))
        self.assertFalse(mapper.succeeded(put, mapper.request(put), 404, b""))
        self.assertFalse(mapper.succeeded(get, mapper.request(get), 503, b""))
        self.assertTrue(mapper.succeeded(put, mapper.request(put), 200, b""))

    def test_echo_mapper(self):
        mapper = EchoMapper()
        get = Operation(OpKind.GET_RECENT, "k5")
        request = mapper.request(get)
        self.assertEqual(HttpRequest("POST", "/echo", b"k5"), request)
        self.assertTrue(mapper.succeeded(get, request, 200, b"k5"))
        self.assertFalse(mapper.succeeded(get, request, 200, b"other"))
        self.assertEqual(b"xyz", mapper.request(Operation(OpKind.PUT, "k1", b"xyz")).body)


class RunReportTests(unittest.TestCase):

    def test_record_reconciles(self):
        report = RunReport("kv", clients=2, rate=10)
        report.record(OpKind.PUT, 1500, "ok", 200)
        report.record(OpKind.GET_RANDOM, 900, "ok", 404)
        report.record(OpKind.GET_RANDOM, 2000, "error", 503)
        report.record(OpKind.GET_RECENT, 5_000_000, "timeout")
        self.assertEqual(4, report.sent)
        self.assertEqual(report.sent, report.ok + report.errors + report.timeouts)
        self.assertEqual(2, report.failed)
        self.assertEqual({"put": 1, "get_random": 2, "get_recent": 1}, dict(report.per_op))
        self.assertEqual({200: 1, 404: 1, 503: 1}, dict(report.statuses))

    def test_achieved_counts_successes_over_elapsed(self):
        report = RunReport("kv", clients=1, rate=10)
        self.assertEqual(0.0, report.achieved)
        for _ in range(30):
            report.record(OpKind.PUT, 100, "ok", 200)
        report.record(OpKind.PUT, 100, "error", 500)
        report.elapsed = 2.0
        self.assertEqual(15.0, report.achieved)

    def test_percentiles(self):
        report = RunReport("kv", clients=1, rate=10)
        self.assertEqual(0, report.p50_us)
        for latency in range(1, 1001):
            report.record(OpKind.GET_RANDOM, latency, "ok", 200)
        self.assertAlmostEqual(500, report.p50_us, delta=2)
        self.assertAlmostEqual(990, report.p99_us, delta=2)
        self.assertLessEqual(report.p90_us, report.p99_us)
        self.assertEqual(0, report.percentile_us(50, OpKind.PUT))
        self.assertAlmostEqual(500, report.percentile_us(50, OpKind.GET_RANDOM), delta=2)

    def test_summary(self):
        report = RunReport("radon-echo", clients=1, rate=5, extras={"spawned": 1})
        report.record(OpKind.PUT, 10, "ok", 200)
        report.elapsed = 1.0
        summary = report.summary()
        self.assertEqual(1, summary["sent"])
        self.assertEqual({"200": 1}, summary["statuses"])
        self.assertEqual(1, summary["spawned"])
        self.assertEqual(1.0, summary["achieved"])


class RunWorkloadTests(unittest.IsolatedAsyncioTestCase):

    async def asyncSetUp(self):
        quiet_logging()
        self.server = EchoServer()
        await self.server.start()

    async def asyncTearDown(self):
        await self.server.stop()

    async def test_paced_clients(self):
        spec = WorkloadSpec(clients=2, target_rate_per_client=40, duration=0.5, value_size=32)
        report = await run_workload(spec, [self.server.url], seed=1, label="echo", mapper=EchoMapper())
        self.assertEqual("echo", report.label)
        self.assertEqual(report.sent, report.ok)
        self.assertEqual(report.sent, sum(report.client_sent))
        self.assertEqual(2, len(report.client_sent))
        for sent in report.client_sent:
            self.assertGreater(sent, 5)
            self.assertLessEqual(sent, 21)
        self.assertEqual(1, report.max_in_flight)
        self.assertGreater(report.p50_us, 0)

    async def test_idle_gap_runs_two_phases(self):
        spec = WorkloadSpec(target_rate_per_client=20, duration=0.3, idle_gap=0.3)
        report = await run_workload(spec, [self.server.url], label="echo", mapper=EchoMapper())
        self.assertAlmostEqual(0.6, report.elapsed, delta=0.1)
        self.assertLessEqual(report.sent, 14)

    async def test_no_targets(self):
        with self.assertRaises(BenchError):
            await run_workload(WorkloadSpec(duration=0.1), [])

    async def test_unreachable_target(self):
        port = free_ports(1)[0]
        with self.assertRaises(BenchError) as cm:
            await run_workload(WorkloadSpec(duration=0.1), [f"http://127.0.0.1:{port}"])
        self.assertIn("unreachable", str(cm.exception))

    async def test_kv_mapper_against_echo_counts_errors(self):
        spec = WorkloadSpec(target_rate_per_client=50, duration=0.2, mix={OpKind.PUT: 1.0})
        report = await run_workload(spec, [self.server.url], label="kv-on-echo")
        # the echo server answers every method with 200
        self.assertEqual(report.sent, report.ok)
        self.assertEqual({"put": report.sent}, dict(report.per_op))


class BaselineTests(unittest.IsolatedAsyncioTestCase):

    async def asyncSetUp(self):
        quiet_logging()

    async def test_echo_baseline(self):
        spec = WorkloadSpec(target_rate_per_client=50, duration=0.3)
        report = await run_baseline(BaselineMode.ECHO, spec)
        self.assertEqual("echo", report.label)
        self.assertGreater(report.sent, 0)
        self.assertEqual(report.sent, report.ok)
        self.assertNotIn("spawned", report.extras)

    async def test_radon_echo_baseline(self):
        spec = WorkloadSpec(target_rate_per_client=50, duration=0.3)
        with tempfile.TemporaryDirectory() as tmp:
            report = await run_baseline("radon-echo", spec, data_dir=tmp)
        self.assertEqual("radon-echo", report.label)
        self.assertGreater(report.sent, 0)
        self.assertEqual(report.sent, report.ok)
        self.assertGreaterEqual(report.extras["spawned"], 1)
        self.assertIn("expired", report.extras)

    async def test_server_stops_when_workload_fails(self):
        targets = []

        async def failing_workload(spec, urls, seed, label, mapper):
            targets.extend(urls)
            raise BenchError("target unreachable")

        spec = WorkloadSpec(target_rate_per_client=50, duration=0.3)
        for mode in BaselineMode:
            with self.subTest(mode=mode.value), tempfile.TemporaryDirectory() as tmp, \
                    mock.patch("radon.bench.baselines.run_workload", failing_workload):
                with self.assertRaises(BenchError):
                    await run_baseline(mode, spec, data_dir=tmp)
                async with httpx.AsyncClient(timeout=2.0) as client:
                    with self.assertRaises(httpx.ConnectError):
                        await client.post(f"{targets[-1]}/echo", content=b"x")
        self.assertEqual(2, len(targets))


if __name__ == '__main__':
    unittest.main()

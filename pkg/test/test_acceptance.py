# Repository:   https://github.com/PyRadon
# File Name:    test/test_acceptance.py
# Description:  Full-size key-value and throughput acceptance runs
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
# @date: 2026-04-23
# @author: Dieter J Kybelksties

import asyncio
import os
import random
import tempfile
import time
import unittest
from pathlib import Path

import httpx

from radon.apps import kv_app_configs
from radon.apps.ring import responsible_set
from radon.bench.baselines import BackgroundLoop, BaselineMode, run_baseline
from radon.bench.runner import RunReport, run_workload
from radon.bench.workload import KvMapper, WorkloadSpec
from radon.deploy import deploy
from radon.model import AtomConfiguration, AtomKind, RecoveryPolicy
from testkit import kv_placement, loopback_cluster, quiet_logging, start_cluster, stop_cluster, stored_ring, wait_until

FULL_SIZE = os.environ.get("RADON_ACCEPTANCE", "") not in ("", "0")
SKIP_REASON = "full-size run, set RADON_ACCEPTANCE=1"

NODES = 3
KVNODES_PER_NODE = 8
REPLICATION = 2
MEMBERS = NODES * KVNODES_PER_NODE


async def deploy_kv(cluster, nodes) -> list[str]:
    report = await deploy(kv_app_configs([node.node_id for node in cluster], KVNODES_PER_NODE, REPLICATION), cluster)
    if not report.ok:
        raise AssertionError(report.render())
    if not await wait_until(lambda: len(stored_ring(nodes[0].store)) == MEMBERS, timeout=30.0):
        raise AssertionError("ring never filled")
    await asyncio.sleep(0.5)
    return [f"http://127.0.0.1:{node.http_port}" for node in nodes]


@unittest.skipUnless(FULL_SIZE, SKIP_REASON)
class KvAcceptanceTests(unittest.IsolatedAsyncioTestCase):

    async def asyncSetUp(self):
        quiet_logging()
        self.tmp = tempfile.TemporaryDirectory()
        self.cluster = loopback_cluster(NODES)
        self.nodes = await start_cluster(self.cluster, Path(self.tmp.name))
        urls = await deploy_kv(self.cluster, self.nodes)
        self.clients = [httpx.AsyncClient(base_url=url, timeout=30.0) for url in urls]

    async def asyncTearDown(self):
        for client in self.clients:
            await client.aclose()
        await stop_cluster(self.nodes)
        self.tmp.cleanup()

    def placement(self) -> dict[str, list[str]]:
        return kv_placement(node.store for node in self.nodes)

    def misplaced(self, keys) -> list[str]:
        ring = stored_ring(self.nodes[0].store)
        placement = self.placement()
        return [key for key in keys if placement.get(key) != sorted(responsible_set(ring, key, REPLICATION))]

    async def test_seeded_script_on_full_topology(self):
        workers = 8
        rng = random.Random(20260423)
        script = [(rng.random() < 0.5, f"k{rng.randrange(2000)}") for _ in range(10_000)]
        acknowledged: dict[str, bytes] = {}
        wrong: list[str] = []

        async def worker(index: int, client: httpx.AsyncClient) -> None:
            # keys are split between workers so each key sees its operations in script order
            for step, (is_put, key) in enumerate(script):
                if int(key[1:]) % workers != index:
                    continue
                if is_put:
                    value = f"{key}@{step}".encode()
                    response = await client.put(f"/kv/{key}", content=value)
                    if response.status_code == 200:
                        acknowledged[key] = value
                    else:
                        wrong.append(f"PUT {key}: {response.status_code}")
                    continue
                response = await client.get(f"/kv/{key}")
                expected = acknowledged.get(key)
                if expected is None and response.status_code != 404:
                    wrong.append(f"GET {key}: {response.status_code}, expected 404")
                elif expected is not None and (response.status_code, response.content) != (200, expected):
                    wrong.append(f"GET {key}: {response.status_code} {response.content!r} != {expected!r}")

        started = time.monotonic()
        await asyncio.gather(*(worker(index, self.clients[index % NODES]) for index in range(workers)))
        self.assertLess(time.monotonic() - started, 120.0)
        self.assertEqual([], wrong[:10])
        self.assertGreater(len(acknowledged), 1000)
        placement = self.placement()
        self.assertTrue(all(len(placement.get(key, [])) == REPLICATION for key in acknowledged))
        self.assertEqual([], self.misplaced(acknowledged)[:10])

    async def test_member_joins_under_write_load(self):
        acknowledged: dict[str, bytes] = {}
        stop = asyncio.Event()

        async def writer(index: int, client: httpx.AsyncClient) -> None:
            step = 0
            while not stop.is_set():
                key, value = f"w{index}-{step}", f"{index}:{step}".encode()
                step += 1
                try:
                    response = await client.put(f"/kv/{key}", content=value)
                except httpx.HTTPError:
                    continue
                if response.status_code == 200:
                    acknowledged[key] = value

        writers = [asyncio.create_task(writer(index, self.clients[index % NODES])) for index in range(4)]
        await asyncio.sleep(1.0)
        late = AtomConfiguration(definition="kvnode", kind=AtomKind.DAEMON, name="kv/late/{index}",
                                 recovery=RecoveryPolicy.RESTART, hosts=("n2",))
        self.assertTrue(all(result.ok for result in self.nodes[1].apply(late)))
        self.assertTrue(await wait_until(lambda: len(stored_ring(self.nodes[0].store)) == MEMBERS + 1, 20.0))
        await asyncio.sleep(1.0)
        stop.set()
        await asyncio.gather(*writers)
        self.assertGreater(len(acknowledged), 100)

        keys = list(acknowledged)
        converged = await wait_until(lambda: not self.misplaced(keys), timeout=10.0, interval=0.2)
        self.assertTrue(converged, f"misplaced: {self.misplaced(keys)[:10]}")
        self.assertTrue(any("kv/late/0" in members for members in self.placement().values()))
        for index, key in enumerate(keys):
            response = await self.clients[index % NODES].get(f"/kv/{key}")
            self.assertEqual((200, acknowledged[key]), (response.status_code, response.content), key)


async def run_kv(spec: WorkloadSpec, seed: int = 7) -> RunReport:
    """The key-value store on its own loop, as the baselines run theirs."""
    background = BackgroundLoop("radon-kv").start()
    cluster = loopback_cluster(NODES)
    with tempfile.TemporaryDirectory() as tmp:
        nodes = await background.call_async(start_cluster(cluster, Path(tmp)))
        try:
            urls = await deploy_kv(cluster, nodes)
            return await run_workload(spec, urls, seed, label="kv", mapper=KvMapper())
        finally:
            await background.call_async(stop_cluster(nodes))
            background.stop()


@unittest.skipUnless(FULL_SIZE, SKIP_REASON)
class ThroughputAcceptanceTests(unittest.IsolatedAsyncioTestCase):

    async def asyncSetUp(self):
        quiet_logging()

    async def run_all(self, spec: WorkloadSpec) -> tuple[RunReport, RunReport, RunReport]:
        echo = await run_baseline(BaselineMode.ECHO, spec)
        radon_echo = await run_baseline(BaselineMode.RADON_ECHO, spec)
        kv = await run_kv(spec)
        for report in (echo, radon_echo, kv):
            self.assertGreater(report.ok, 0, report.summary())
        return echo, radon_echo, kv

    async def test_saturated_throughput_ordering(self):
        echo, radon_echo, kv = await self.run_all(WorkloadSpec(clients=64, target_rate_per_client=10_000,
                                                               duration=10))
        self.assertGreaterEqual(echo.achieved, radon_echo.achieved)
        self.assertGreaterEqual(radon_echo.achieved, kv.achieved)
        self.assertGreaterEqual(kv.achieved, radon_echo.achieved / 3)

    async def test_latency_at_low_load(self):
        echo, radon_echo, kv = await self.run_all(WorkloadSpec(clients=16, target_rate_per_client=500,
                                                               duration=20))
        self.assertLessEqual(kv.p50_us, 5_000)
        self.assertLessEqual(radon_echo.p50_us, 1_000)
        self.assertLessEqual(echo.p50_us, radon_echo.p50_us)
        self.assertLessEqual(radon_echo.p50_us, kv.p50_us)


if __name__ == '__main__':
    unittest.main()

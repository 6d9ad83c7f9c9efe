# Repository:   https://github.com/PyRadon
# File Name:    test/test_node.py
# Description:  Tests for node assembly, placement and deployment
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
import json
import tempfile
import unittest
from pathlib import Path

import httpx

from radon.apps import builtin_definitions, echo_app_configs
from radon.atomlib import serve_events
from radon.deploy import DeployClient, PlacementReport, PlacementRow, deploy, eligible_nodes
from radon.engine import AtomDefinition
from radon.model import AtomConfiguration, AtomKind, EventRoute, NodeInfo, One, RecoveryPolicy
from testkit import free_ports, loopback_cluster, quiet_logging, start_cluster, stop_cluster, wait_until


async def idle_main(ctx, _):
    while True:
        await ctx.receive()


async def trap_main(ctx, _):
    raise RuntimeError("unrecoverable")


async def hello_main(ctx, first):
    async def answer(event):
        ctx.respond(event, 200, f"hello from {ctx.node_id}".encode())

    await serve_events(ctx, first, answer)


DEFINITIONS = [AtomDefinition("idle", idle_main), AtomDefinition("trap", trap_main),
               AtomDefinition("hello", hello_main)]


def daemon(definition: str, name: str, **kwargs) -> AtomConfiguration:
    return AtomConfiguration(definition=definition, kind=AtomKind.DAEMON, name=name, **kwargs)


def hello_route(path: str = "/hello") -> AtomConfiguration:
    return AtomConfiguration(definition="hello", kind=AtomKind.REACTIVE, scheduling=One(),
                             routes=(EventRoute("GET", path),))


class PlacementReportTests(unittest.TestCase):

    def test_eligible_nodes(self):
        cluster = [NodeInfo("n1", "h:1", frozenset({"gpu"})), NodeInfo("n2", "h:2")]
        gpu_only = daemon("idle", "x", allow_tags=frozenset({"gpu"}))
        self.assertEqual(["n1"], [n.node_id for n in eligible_nodes(gpu_only, cluster)])
        self.assertEqual(["n2"], [n.node_id for n in eligible_nodes(daemon("idle", "x", hosts=("n2",)), cluster)])

    def test_render_and_json(self):
        report = PlacementReport([PlacementRow("idle", "n1", "idle-n1", True),
                                  PlacementRow("gpu", "", "", False, "no eligible node")])
        self.assertFalse(report.ok)
        self.assertEqual(1, len(report.failures))
        lines = report.render().splitlines()
        self.assertEqual(["config", "node", "name", "result"], lines[0].split())
        self.assertEqual(["idle", "n1", "idle-n1", "ok"], lines[1].split())
        self.assertTrue(lines[2].endswith("error: no eligible node"))
        self.assertEqual("idle-n1", json.loads(report.to_json())[0]["name"])
        self.assertEqual(["n1"], report.placed("idle"))


class NodeTests(unittest.IsolatedAsyncioTestCase):

    async def asyncSetUp(self):
        quiet_logging()
        self.tmp = tempfile.TemporaryDirectory()
        self.cluster = loopback_cluster(2, tags={"n2": {"gpu"}})
        self.nodes = await start_cluster(self.cluster, Path(self.tmp.name), definitions=DEFINITIONS)

    async def asyncTearDown(self):
        await stop_cluster(self.nodes)
        self.tmp.cleanup()

    async def test_deploy_places_by_constraints(self):
        configs = [daemon("idle", "idle-{node}"), daemon("idle", "gpu-worker", allow_tags=frozenset({"gpu"})),
                   daemon("idle", "nowhere", allow_tags=frozenset({"tpu"})), hello_route()]
        report = await deploy(configs, self.cluster)
        self.assertEqual(["n1", "n2"], report.placed("idle-{node}"))
        self.assertEqual(["n2"], report.placed("gpu-worker"))
        self.assertEqual([PlacementRow("nowhere", "", "", False, "no eligible node")], report.failures)
        self.assertEqual(["n1", "n2"], report.placed("hello"))
        self.assertTrue(await wait_until(lambda: self.nodes[0].registry.lookup("gpu-worker") is not None))
        self.assertEqual("n2", self.nodes[0].registry.lookup("gpu-worker").node)
        for node in self.nodes:
            async with httpx.AsyncClient(timeout=5.0) as client:
                response = await client.get(f"http://127.0.0.1:{node.http_port}/hello")
            self.assertEqual(f"hello from {node.node_id}".encode(), response.content)

    async def test_repeated_deploy(self):
        configs = [daemon("idle", "idle-{node}-{index}", count=2), hello_route()]
        self.assertTrue((await deploy(configs, self.cluster)).ok)
        again = await deploy(configs, self.cluster)
        daemon_rows = [row for row in again.rows if row.config == "idle-{node}-{index}"]
        self.assertEqual(4, len(daemon_rows))
        self.assertTrue(all(not row.ok and "already registered" in row.detail for row in daemon_rows))
        self.assertEqual({"already installed"}, {row.detail for row in again.rows if row.config == "hello"})

    async def test_route_conflict_is_reported(self):
        node = self.nodes[0]
        node.apply(hello_route("/shared"))
        clash = AtomConfiguration(definition="idle", kind=AtomKind.REACTIVE, scheduling=One(),
                                  routes=(EventRoute("GET", "/shared"),))
        result, = node.apply(clash)
        self.assertFalse(result.ok)
        self.assertIn("already belongs to 'hello'", result.detail)
        self.assertEqual(["hello"], node.engine.status()["reactive"])

    async def test_unreachable_node_is_reported(self):
        ghost = NodeInfo("n9", f"127.0.0.1:{free_ports(1)[0]}")
        report = await deploy([daemon("idle", "idle-{node}"), hello_route()], [*self.cluster, ghost], timeout=1.0)
        ghost_rows = [row for row in report.rows if row.node == "n9"]
        self.assertEqual(2, len(ghost_rows))
        self.assertTrue(all(not row.ok and row.detail.startswith("node unreachable") for row in ghost_rows))
        self.assertEqual(["n1", "n2"], report.placed("idle-{node}"))

    async def test_deploy_client_context(self):
        async with DeployClient(self.cluster[1]) as client:
            reply = await client.spawn(daemon("idle", "direct"))
        self.assertEqual("n2", reply.node_id)
        self.assertTrue(reply.results[0].ok)

    async def test_status(self):
        self.nodes[0].apply(daemon("idle", "watcher"))
        status = self.nodes[0].status()
        self.assertEqual("n1", status["node"])
        self.assertEqual(["n2"], status["connections"])
        self.assertEqual(["watcher"], status["instances"])
        self.assertEqual(1, status["names"])
        self.assertFalse(status["halted"])
        self.assertIn("unknown", status["drops"])

    async def test_escalated_fault_stops_the_node(self):
        node = self.nodes[1]
        node.apply(daemon("trap", "doomed", recovery=RecoveryPolicy.ESCALATE))
        await asyncio.wait_for(node.wait_stopped(), 5.0)
        self.assertEqual(1, node.exit_code)
        self.assertTrue(node.engine.halted)
        self.assertTrue(await wait_until(lambda: self.nodes[0].mesh.connections() == []))

    async def test_builtin_definitions(self):
        self.assertEqual(["coordinator", "kvnode", "kvfrontend", "echo"], [d.name for d in builtin_definitions()])
        self.assertEqual("echo", echo_app_configs()[0].definition)


if __name__ == '__main__':
    unittest.main()

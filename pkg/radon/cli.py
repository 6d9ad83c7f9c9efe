# Repository:   https://github.com/PyRadon
# File Name:    radon/cli.py
# Description:  Command line entry points: node, deploy, store, bench and demo-up
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
# @date: 2026-04-17
# @author: Dieter J Kybelksties

"""
Exit codes: 0 success, 1 runtime failure, 2 usage error (argparse's own convention).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import signal
import subprocess
import sys
import time
from pathlib import Path
from typing import Any

import httpx

from radon import __version__
from radon.apps import ECHO_APP, KV_APP, app_configs, builtin_definitions
from radon.bench.baselines import BaselineMode, run_baseline, run_baselines
from radon.bench.report import render_charts, render_table, write_csv
from radon.bench.runner import RunReport, run_workload
from radon.bench.workload import EchoMapper, KvMapper, WorkloadSpec, load_spec
from radon.deploy import PlacementReport, deploy
from radon.engine import InProcessModuleEngine
from radon.error import RadonError, error, fatal
from radon.model import NodeInfo, parse_configuration, render_configuration, split_address
from radon.node import RadonNode
from radon.runtime_logger import configure_logging, log_info, log_warning
from radon.settings import Durability, load_cluster, load_settings, render_cluster
from radon.storage import NodeStore

USAGE_ERROR = 2


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _print_json(data: Any) -> None:
    print(json.dumps(data, sort_keys=True), flush=True)


# -- radon-node ----------------------------------------------------------------------------------------

def _add_logging_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", choices=["debug", "info", "lifecycle", "warning", "error"],
                        help="minimum level written to the console and node log")
    parser.add_argument("--log-format", choices=["human_readable", "key_value", "json_lines"],
                        help="console log layout")


def node_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radon-node", description="Run one runtime node.")
    parser.add_argument("--id", dest="node_id", help="node id (must match the cluster document)")
    parser.add_argument("--listen", help="mesh address host:port")
    parser.add_argument("--http", help="gateway address host:port (default: listen port + 100)")
    parser.add_argument("--tags", help="comma separated host tags")
    parser.add_argument("--cluster", help="cluster document listing every node")
    parser.add_argument("--data-dir", help="node store directory (default: ./<id>)")
    parser.add_argument("--config", help="settings file layered over the defaults")
    parser.add_argument("--load", action="append", default=[], metavar="MODULE",
                        help="import atom definitions from a module exposing atom_definitions()")
    parser.add_argument("--durability", choices=[d.value for d in Durability])
    parser.add_argument("--json", action="store_true", help="print status as JSON lines")
    _add_logging_flags(parser)
    actions = parser.add_subparsers(dest="action")
    store = actions.add_parser("store", help="inspect a node store")
    store_actions = store.add_subparsers(dest="store_action", required=True)
    dump = store_actions.add_parser("dump", help="print every key and value as hex")
    dump.add_argument("--data-dir", dest="store_dir", required=True)
    dump.add_argument("--prefix", default="", help="only keys starting with this text")
    return parser


def _node_info(args: argparse.Namespace, parser: argparse.ArgumentParser) -> tuple[NodeInfo, list[NodeInfo]]:
    if not args.node_id:
        parser.error("--id is required")
    cluster = load_cluster(args.cluster) if args.cluster else []
    entry = next((node for node in cluster if node.node_id == args.node_id), None)
    listen = args.listen or (entry.listen_address if entry else None)
    if listen is None:
        parser.error(f"--listen is required when '{args.node_id}' is not in the cluster document")
    tags = frozenset(_csv_list(args.tags)) if args.tags is not None else (entry.tags if entry else frozenset())
    http = args.http or (entry.http_address if entry else None)
    try:
        info = NodeInfo(args.node_id, listen, tags, http)
        split_address(info.http)
    except ValueError as e:
        parser.error(str(e))
    if entry is None:
        cluster.append(info)
    return info, cluster


async def _serve_node(node: RadonNode, as_json: bool) -> int:
    try:
        await node.start()
    except OSError as e:
        await node.stop()
        error(f"cannot start node {node.node_id}: {e}")
    if as_json:
        _print_json({"event": "started", **node.status()})
    loop = asyncio.get_running_loop()
    for signum in (signal.SIGINT, signal.SIGTERM):
        loop.add_signal_handler(signum, node.request_stop)
    await node.wait_stopped()
    if as_json:
        _print_json({"event": "stopped", "node": node.node_id, "exit_code": node.exit_code})
    if node.exit_code:
        fatal(f"node {node.node_id} halted by an escalated fault", error_code=node.exit_code)
    return 0


def dump_store(data_dir: str | Path, prefix: str = "") -> list[str]:
    """``<key hex> <value hex>`` per entry, sorted by key."""
    with NodeStore(data_dir) as store:
        wanted = prefix.encode("utf-8")
        return [f"{key.hex()} {value.hex()}" for key, value in store.dump() if key.startswith(wanted)]


def node_main(argv: list[str] | None = None) -> int:
    parser = node_parser()
    args = parser.parse_args(argv)
    if args.action == "store":
        try:
            for line in dump_store(args.store_dir, args.prefix):
                print(line)
        except RadonError as e:
            error(f"cannot read store: {e}")
        return 0
    info, cluster = _node_info(args, parser)
    data_dir = Path(args.data_dir or f"./{info.node_id}")
    try:
        settings = load_settings(args.config, {"durability": args.durability, "log_level": args.log_level,
                                               "log_format": args.log_format})
    except RadonError as e:
        parser.error(str(e))
    data_dir.mkdir(parents=True, exist_ok=True)
    configure_logging(settings.log_format, settings.log_level, settings.log_color, data_dir / "node.log")
    modules = InProcessModuleEngine(builtin_definitions())
    try:
        for module_name in args.load:
            modules.load_module(module_name)
        node = RadonNode(info, cluster, data_dir, settings, modules)
    except (RadonError, ImportError) as e:
        error(f"cannot set up node {info.node_id}: {e}")
    return asyncio.run(_serve_node(node, args.json))


# -- radon-deploy --------------------------------------------------------------------------------------

def deploy_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radon-deploy", description="Place atoms on a running cluster.")
    parser.add_argument("--cluster", required=True, help="cluster document")
    parser.add_argument("--app", required=True,
                        help=f"configuration document, or '{KV_APP}' / '{ECHO_APP}' for a built-in application")
    parser.add_argument("--kvnodes", type=int, default=8, help="key-value members per node (built-in kv)")
    parser.add_argument("--replication", type=int, default=2, help="replication factor (built-in kv)")
    parser.add_argument("--timeout", type=float, default=10.0)
    parser.add_argument("--json", action="store_true")
    _add_logging_flags(parser)
    return parser


def load_app(app: str, cluster: list[NodeInfo], kvnodes: int = 8, replication: int = 2):
    path = Path(app)
    if path.exists():
        return parse_configuration(path.read_text(encoding="utf-8"))
    return app_configs(app, [node.node_id for node in cluster], kvnodes, replication)


def deploy_main(argv: list[str] | None = None) -> int:
    parser = deploy_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_format or "key_value", args.log_level or "warning", "plain_text")
    try:
        cluster = load_cluster(args.cluster)
        configs = load_app(args.app, cluster, args.kvnodes, args.replication)
    except (RadonError, ValueError, OSError) as e:
        parser.error(str(e))
    report: PlacementReport = asyncio.run(deploy(configs, cluster, args.timeout))
    print(report.to_json() if args.json else report.render())
    return 0 if report.ok else 1


# -- radon-bench ---------------------------------------------------------------------------------------

def _add_workload_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--spec", help="workload JSON; flags below override its fields")
    parser.add_argument("--clients", type=int)
    parser.add_argument("--rate", type=float, help="target requests/s per client")
    parser.add_argument("--duration", type=float, help="seconds per phase")
    parser.add_argument("--idle-gap", type=float, help="seconds of silence between two phases")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", help="CSV report file")
    parser.add_argument("--charts", metavar="DIR", help="write throughput and latency charts (needs matplotlib)")
    parser.add_argument("--json", action="store_true", help="print report summaries as JSON lines")
    _add_logging_flags(parser)


def bench_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radon-bench", description="Load generator and baselines.")
    actions = parser.add_subparsers(dest="action", required=True)
    run = actions.add_parser("run", help="drive a workload against running gateways")
    run.add_argument("--targets", required=True, help="comma separated base URLs")
    run.add_argument("--app", choices=[KV_APP, ECHO_APP], default=KV_APP)
    run.add_argument("--label", help="report label (default: the app name)")
    _add_workload_flags(run)
    baseline = actions.add_parser("baseline", help="run the echo and/or radon-echo baseline")
    baseline.add_argument("--mode", choices=[m.value for m in BaselineMode] + ["both"], default="both")
    baseline.add_argument("--data-dir", help="store directory of the radon-echo node (default: temporary)")
    _add_workload_flags(baseline)
    return parser


def workload_from_args(args: argparse.Namespace) -> WorkloadSpec:
    spec = load_spec(args.spec) if args.spec else WorkloadSpec()
    values = spec.to_dict()
    for flag, field_name in (("clients", "clients"), ("rate", "target_rate_per_client"),
                             ("duration", "duration"), ("idle_gap", "idle_gap")):
        if getattr(args, flag) is not None:
            values[field_name] = getattr(args, flag)
    return WorkloadSpec.from_dict(values)


def _emit(reports: list[RunReport], args: argparse.Namespace) -> None:
    if args.json:
        for report in reports:
            _print_json(report.summary())
    else:
        print(render_table(reports))
    if args.out:
        write_csv(reports, args.out)
    if args.charts:
        render_charts(reports, args.charts)


def bench_main(argv: list[str] | None = None) -> int:
    parser = bench_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_format or "key_value", args.log_level or "warning", "plain_text")
    try:
        spec = workload_from_args(args)
    except (RadonError, OSError) as e:
        parser.error(str(e))
    try:
        if args.action == "run":
            mapper = EchoMapper() if args.app == ECHO_APP else KvMapper()
            reports = [asyncio.run(run_workload(spec, _csv_list(args.targets), args.seed,
                                                args.label or args.app, mapper))]
        elif args.mode == "both":
            reports = asyncio.run(run_baselines(spec, args.seed, args.data_dir))
        else:
            reports = [asyncio.run(run_baseline(BaselineMode(args.mode), spec, args.seed, args.data_dir))]
        _emit(reports, args)
    except RadonError as e:
        error(str(e))
    return 0


# -- radon demo-up -------------------------------------------------------------------------------------

def demo_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radon demo-up",
                                     description="Start a local cluster and deploy the key-value store.")
    parser.add_argument("--nodes", type=int, default=3)
    parser.add_argument("--kvnodes", type=int, default=8, help="key-value members per node")
    parser.add_argument("--replication", type=int, default=2)
    parser.add_argument("--base-port", type=int, default=7001, help="mesh port of the first node")
    parser.add_argument("--dir", default="./radon-demo", help="cluster documents and node stores")
    parser.add_argument("--timeout", type=float, default=30.0, help="seconds to wait for readiness")
    parser.add_argument("--detach", action="store_true", help="leave the nodes running and return")
    parser.add_argument("--json", action="store_true")
    _add_logging_flags(parser)
    return parser


def demo_cluster(nodes: int, base_port: int) -> list[NodeInfo]:
    return [NodeInfo(f"n{i + 1}", f"127.0.0.1:{base_port + i}", http_address=f"127.0.0.1:{base_port + i + 100}")
            for i in range(nodes)]


def _wait_for_kv(urls: list[str], deadline: float) -> None:
    """Round-trip a check key through every gateway."""
    with httpx.Client(timeout=5.0) as client:
        for url in urls:
            while True:
                try:
                    put = client.put(f"{url}/kv/radon-demo-check", content=b"ok")
                    got = client.get(f"{url}/kv/radon-demo-check")
                    if put.status_code == 200 and got.status_code == 200 and got.content == b"ok":
                        break
                except httpx.HTTPError:
                    pass
                if time.monotonic() > deadline:
                    raise TimeoutError(f"{url} did not answer the check in time")
                time.sleep(0.25)


def _deploy_until_reachable(configs: list, cluster: list[NodeInfo], deadline: float) -> PlacementReport:
    while True:
        report = asyncio.run(deploy(configs, cluster, timeout=2.0))
        unreachable = [row for row in report.failures if row.detail.startswith("node unreachable")]
        if not unreachable:
            return report
        if time.monotonic() > deadline:
            raise TimeoutError(f"nodes not reachable: {sorted({row.node for row in unreachable})}")
        time.sleep(0.25)


def demo_main(argv: list[str] | None = None) -> int:
    parser = demo_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_format or "key_value", args.log_level or "info", "color")
    if args.nodes < 1 or args.kvnodes < 1:
        parser.error("--nodes and --kvnodes must be positive")
    cluster = demo_cluster(args.nodes, args.base_port)
    try:
        configs = app_configs(KV_APP, [node.node_id for node in cluster], args.kvnodes, args.replication)
    except ValueError as e:
        parser.error(str(e))
    root = Path(args.dir)
    root.mkdir(parents=True, exist_ok=True)
    (root / "cluster.json").write_text(render_cluster(cluster), encoding="utf-8")
    (root / "app.json").write_text(render_configuration(configs), encoding="utf-8")

    processes = []
    for node in cluster:
        command = [sys.executable, "-m", "radon", "node", "--id", node.node_id, "--cluster", str(root / "cluster.json"),
                   "--data-dir", str(root / node.node_id), "--durability", "async"]
        processes.append(subprocess.Popen(command, stdout=subprocess.DEVNULL))
    (root / "pids").write_text("\n".join(str(p.pid) for p in processes) + "\n", encoding="utf-8")

    def _terminate() -> None:
        for process in processes:
            if process.poll() is None:
                process.terminate()
        for process in processes:
            try:
                process.wait(10)
            except subprocess.TimeoutExpired:
                process.kill()

    urls = [f"http://{node.http}" for node in cluster]
    deadline = time.monotonic() + args.timeout
    try:
        report = _deploy_until_reachable(configs, cluster, deadline)
        if not report.ok:
            raise RuntimeError("deployment failed:\n" + report.render())
        _wait_for_kv(urls, deadline)
    except (TimeoutError, RuntimeError) as e:
        _terminate()
        error(f"demo cluster not ready: {e}")
    summary = {"nodes": [node.node_id for node in cluster], "gateways": urls, "pids": [p.pid for p in processes],
               "dir": str(root)}
    if args.json:
        _print_json(summary)
    else:
        print(f"key-value store ready on {', '.join(urls)} (PUT/GET /kv/<key>)")
    log_info("demo cluster ready", **{k: ",".join(map(str, v)) if isinstance(v, list) else v
                                      for k, v in summary.items()})
    if args.detach:
        return 0
    try:
        while all(process.poll() is None for process in processes):
            time.sleep(0.5)
        log_warning("a demo node exited, stopping the others")
        return 1
    except KeyboardInterrupt:
        return 0
    finally:
        _terminate()


# -- radon ---------------------------------------------------------------------------------------------

COMMANDS = {
    "node": node_main,
    "deploy": deploy_main,
    "bench": bench_main,
    "demo-up": demo_main,
    "store": lambda argv: node_main(["store", *argv]),
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ("--version", "-V"):
        print(f"radon {__version__}")
        return 0
    if not argv or argv[0] not in COMMANDS:
        print(f"usage: radon {{{','.join(COMMANDS)}}} ...", file=sys.stderr)
        return USAGE_ERROR
    return COMMANDS[argv[0]](argv[1:])


def _entry(function) -> None:
    sys.exit(function())


def run() -> None:
    _entry(main)


def run_node() -> None:
    _entry(node_main)


def run_deploy() -> None:
    _entry(deploy_main)


def run_bench() -> None:
    _entry(bench_main)

# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/__init__.py
# Description:  Built-in atom definitions and their deployment documents
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
# @date: 2026-04-14
# @author: Dieter J Kybelksties

from __future__ import annotations

from collections.abc import Sequence

from radon.apps.coordinator import coordinator_main
from radon.apps.echo import echo_main
from radon.apps.kvfrontend import kvfrontend_main
from radon.apps.kvnode import kvnode_main
from radon.engine import AtomDefinition
from radon.model import AtomConfiguration, AtomKind, EventRoute, OnDemandExpire, RecoveryPolicy

KV_APP = "kv"
ECHO_APP = "echo"
FRONTEND_IDLE_TIMEOUT_MS = 5000


def builtin_definitions() -> list[AtomDefinition]:
    """The definitions every node registers at startup."""
    return [
        AtomDefinition("coordinator", coordinator_main, description="ring membership of the key-value store"),
        AtomDefinition("kvnode", kvnode_main, description="key-value partition holder"),
        AtomDefinition("kvfrontend", kvfrontend_main, description="REST entry point of the key-value store"),
        AtomDefinition("echo", echo_main, description="returns the request body"),
    ]


def kv_app_configs(nodes: Sequence[str], kvnodes_per_node: int = 8, replication: int = 2) -> list[AtomConfiguration]:
    """
    The key-value store: one coordinator on the first node, ``kvnodes_per_node`` members on every node
    and an on-demand-expire frontend behind ``/kv`` everywhere.

    :param nodes: node ids of the cluster, coordinator host first
    :param kvnodes_per_node: members started on each node
    :param replication: replication factor of the ring
    :return: the atom configurations
    """
    if not nodes:
        raise ValueError("the key-value store needs at least one node")
    if replication < 1 or replication > len(nodes) * kvnodes_per_node:
        raise ValueError(f"replication {replication} needs between 1 and {len(nodes) * kvnodes_per_node} members")
    return [
        AtomConfiguration(definition="coordinator", kind=AtomKind.DAEMON, name="coordinator",
                          recovery=RecoveryPolicy.RESTART, hosts=(nodes[0],),
                          params={"replication": replication}),
        AtomConfiguration(definition="kvnode", kind=AtomKind.DAEMON, name="kv/{node}/{index}",
                          count=kvnodes_per_node, recovery=RecoveryPolicy.RESTART),
        AtomConfiguration(definition="kvfrontend", kind=AtomKind.REACTIVE,
                          scheduling=OnDemandExpire(idle_timeout_ms=FRONTEND_IDLE_TIMEOUT_MS),
                          routes=(EventRoute("GET", "/kv"), EventRoute("PUT", "/kv"))),
    ]


def echo_app_configs() -> list[AtomConfiguration]:
    return [AtomConfiguration(definition="echo", kind=AtomKind.REACTIVE,
                              scheduling=OnDemandExpire(idle_timeout_ms=FRONTEND_IDLE_TIMEOUT_MS),
                              routes=(EventRoute("POST", "/echo"),))]


def app_configs(app: str, nodes: Sequence[str], kvnodes_per_node: int = 8,
                replication: int = 2) -> list[AtomConfiguration]:
    """
    :raises ValueError: unknown application name
    """
    if app == KV_APP:
        return kv_app_configs(nodes, kvnodes_per_node, replication)
    if app == ECHO_APP:
        return echo_app_configs()
    raise ValueError(f"unknown application '{app}' (expected '{KV_APP}' or '{ECHO_APP}')")

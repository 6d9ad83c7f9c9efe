# Repository:   https://github.com/PyRadon
# File Name:    radon/engine.py
# Description:  Atom definitions, instances, the guest runtime interface and scheduling
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
# @date: 2026-04-10
# @author: Dieter J Kybelksties

"""
The engine owns every atom instance on one node.

Guests are coroutine functions ``async def main(ctx, event)``. Each instance runs as one asyncio task on
the node's event loop, so a guest blocked in ``await ctx.receive()`` holds no thread. A guest touches
the outside world only through its :class:`RuntimeContext`.

Reactive instances get their first event as the ``event`` argument; events routed to an instance that
is already running arrive in its mailbox as envelopes whose ``event`` attribute is set. An instance is
idle while it waits in ``receive`` on an empty mailbox with every event it was given answered, and busy
otherwise.
"""

from __future__ import annotations

import asyncio
import importlib
import itertools
import secrets
import time
from abc import ABC, abstractmethod
from collections.abc import Awaitable, Callable, Iterable
from dataclasses import dataclass, field
from typing import Any

from fundamentals.extended_enum import ExtendedEnum

from radon.error import (AtomExit, AtomFault, AtomRetired, DuplicateDefinitionError, HostConstraintError,
                         InstanceStoppedError, MailboxFullError, PolicyError, ResponseError, UnknownDefinitionError)
from radon.log_levels import Lifecycle
from radon.messaging import DEFAULT_MAILBOX_CAPACITY, Mailbox, MessageRouter
from radon.model import (AtomConfiguration, AtomKind, DestinationSelector, Envelope, Event, Exact, NameSpace,
                         NodeInfo, OnDemand, OnDemandExpire, One, Ordering, RecoveryPolicy, RoundRobin,
                         node_eligible)
from radon.naming import NameRegistry
from radon.runtime_logger import log_debug, log_error, log_lifecycle, log_warning
from radon.storage import NodeStore

GuestMain = Callable[["RuntimeContext", "Event | None"], Awaitable[None]]
RecoverHook = Callable[["RuntimeContext", AtomFault], Awaitable[None]]

STATUS_FAULT = 500
STATUS_UNAVAILABLE = 503


@dataclass(frozen=True)
class AtomDefinition:
    """
    A behaviour blueprint.

    :param name: the definition name configurations refer to
    :param main: the guest entry point
    :param recover: hook run by the Recover policy before the instance is restarted
    """
    name: str
    main: GuestMain
    recover: RecoverHook | None = None
    description: str = ""


class ModuleEngine(ABC):
    """Source of atom definitions for a node."""

    @abstractmethod
    def register(self, definition: AtomDefinition) -> None:
        pass

    @abstractmethod
    def load(self, name: str) -> AtomDefinition:
        pass

    @abstractmethod
    def names(self) -> list[str]:
        pass


class InProcessModuleEngine(ModuleEngine):
    """Definitions are Python coroutine functions living in the node process, selected by name."""

    def __init__(self, definitions: Iterable[AtomDefinition] = ()):
        self._definitions: dict[str, AtomDefinition] = {}
        for definition in definitions:
            self.register(definition)

    def register(self, definition: AtomDefinition) -> None:
        """
        :raises DuplicateDefinitionError: a definition of that name exists
        """
        if definition.name in self._definitions:
            raise DuplicateDefinitionError(f"definition '{definition.name}' is already registered")
        self._definitions[definition.name] = definition

    def load(self, name: str) -> AtomDefinition:
        try:
            return self._definitions[name]
        except KeyError:
            raise UnknownDefinitionError(f"no definition named '{name}'") from None

    def names(self) -> list[str]:
        return sorted(self._definitions)

    def load_module(self, module_name: str) -> list[str]:
        """
        Import a module and register everything its ``atom_definitions()`` returns.
        :return: the registered definition names
        """
        module = importlib.import_module(module_name)
        provider = getattr(module, "atom_definitions", None)
        if provider is None:
            raise UnknownDefinitionError(f"module '{module_name}' has no atom_definitions()")
        added = []
        for definition in provider():
            self.register(definition)
            added.append(definition.name)
        return added


class InstanceState(ExtendedEnum):
    STARTING = "starting"
    IDLE = "idle"
    BUSY = "busy"
    STOPPED = "stopped"
    FAULTED = "faulted"


@dataclass(eq=False)
class AtomInstance:
    name: str
    definition: AtomDefinition
    config: AtomConfiguration
    incarnation: int
    serial: int
    mailbox: Mailbox
    state: InstanceState = InstanceState.STARTING
    events_handled: int = 0
    last_activity: float = 0.0
    slot_index: int = 0
    retiring: bool = False
    torn_down: bool = False
    activations: int = 0
    pending: dict[bytes, Event] = field(default_factory=dict)
    task: asyncio.Task | None = None

    @property
    def live(self) -> bool:
        return self.state not in (InstanceState.STOPPED, InstanceState.FAULTED) and not self.retiring


@dataclass
class ReactiveSlot:
    """Scheduler state of one reactive definition."""
    config: AtomConfiguration
    definition: AtomDefinition
    instances: list[AtomInstance] = field(default_factory=list)
    ring: list[AtomInstance | None] = field(default_factory=list)
    cursor: int = 0


@dataclass
class EngineStats:
    spawned: int = 0
    faults: int = 0
    restarts: int = 0
    expired: int = 0
    exited: int = 0
    events: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


class RuntimeContext:
    """
    The complete set of functions a guest may call.

    Every call raises :class:`InstanceStoppedError` once the instance is stopped or faulted.
    """

    def __init__(self, engine: Engine, instance: AtomInstance, transient: bool = False):
        self._engine = engine
        self._instance = instance
        self._transient = transient

    def _live(self) -> AtomInstance:
        instance = self._instance
        if not self._transient and instance.state in (InstanceState.STOPPED, InstanceState.FAULTED):
            raise InstanceStoppedError(f"atom '{instance.name}' is no longer running")
        return instance

    @property
    def params(self) -> dict[str, Any]:
        return dict(self._instance.config.params)

    @property
    def node_id(self) -> str:
        return self._engine.node.node_id

    def self_name(self) -> str:
        return self._live().name

    def exit(self) -> None:
        self._live()
        raise AtomExit()

    def send(self, destination: DestinationSelector | str, payload: bytes, ordering: Ordering = Ordering.FIFO,
             correlation_id: bytes | None = None) -> int:
        """
        Non-blocking send; a plain string addresses one name exactly.
        :return: the number of destinations routed to
        """
        instance = self._live()
        if isinstance(destination, str):
            destination = Exact(destination)
        return self._engine.router.send(instance.name, destination, ordering, payload, correlation_id)

    async def receive(self, timeout: float | None = None) -> Envelope | None:
        """
        Take the next envelope, waiting up to ``timeout`` seconds (forever when None).
        :return: the envelope, or None on timeout
        """
        instance = self._live()
        envelope = instance.mailbox.take()
        if envelope is not None or timeout == 0 or self._transient:
            return envelope
        if not instance.pending:
            self._engine._became_idle(instance)
        try:
            envelope = await instance.mailbox.get(timeout)
        finally:
            if instance.state == InstanceState.IDLE:
                instance.state = InstanceState.BUSY
        if envelope is None and instance.retiring:
            raise AtomRetired()
        return envelope

    def resolve(self, query: str, space: NameSpace | str = NameSpace.NAMES) -> list[str]:
        self._live()
        return self._engine.registry.resolve(query, space)

    def alias_add(self, alias: str, name: str) -> bool:
        self._live()
        return self._engine.registry.alias_add(alias, name)

    def alias_remove(self, alias: str, name: str) -> bool:
        self._live()
        return self._engine.registry.alias_remove(alias, name)

    def storage_get(self, key: str | bytes) -> bytes | None:
        self._live()
        return self._engine.store.get(key)

    def storage_set(self, key: str | bytes, value: bytes) -> None:
        self._live()
        self._engine.store.set(key, value)

    def storage_delete(self, key: str | bytes) -> bool:
        self._live()
        return self._engine.store.delete(key)

    def respond(self, target: Event | Envelope | bytes, status: int = 200, body: bytes = b"") -> bool:
        """
        Complete an event.
        :param target: the event, the envelope that carried it, or its correlation id
        :return: False if the event was already answered or is unknown
        :raises ResponseError: status outside 100..599
        """
        self._live()
        if not 100 <= status <= 599:
            raise ResponseError(f"invalid HTTP status {status}")
        if isinstance(target, Envelope):
            correlation = target.event.correlation_id if target.event is not None else target.correlation_id
        elif isinstance(target, Event):
            correlation = target.correlation_id
        else:
            correlation = target
        if correlation is None:
            return False
        return self._engine.complete_event(correlation, status, body)

    def now(self) -> float:
        return time.time()

    def random_bytes(self, count: int) -> bytes:
        return secrets.token_bytes(count)


class Engine:
    """
    Atom lifecycle on one node.

    All methods must be called on the node's event loop; other threads go through the node.

    :param node: the hosting node
    :param modules: where definitions come from
    :param registry: the node's replicated name table
    :param router: the node's message router
    :param store: the node store behind ``storage_get`` and ``storage_set``
    :param clock: monotonic seconds used for idle accounting
    :param expiry_sweep_interval: period of the idle-expiry sweep; None disables the sweep
    """

    def __init__(self, node: NodeInfo, modules: ModuleEngine, registry: NameRegistry, router: MessageRouter,
                 store: NodeStore, clock: Callable[[], float] = time.monotonic,
                 mailbox_capacity: int = DEFAULT_MAILBOX_CAPACITY, expiry_sweep_interval: float | None = 0.5):
        self.node = node
        self.modules = modules
        self.registry = registry
        self.router = router
        self.store = store
        self.clock = clock
        self.mailbox_capacity = mailbox_capacity
        self.expiry_sweep_interval = expiry_sweep_interval
        self.instances: dict[str, AtomInstance] = {}
        self.stats = EngineStats()
        self.halted = False
        self.on_escalate: Callable[[str, AtomFault], None] | None = None
        self._reactive: dict[str, ReactiveSlot] = {}
        self._events: dict[bytes, tuple[Event, AtomInstance]] = {}
        self._suffixes = itertools.count(1)
        self._serials = itertools.count(1)
        self._sweeper: asyncio.Task | None = None
        registry.on_conflict_lost = self._lost_name

    # -- definitions ---------------------------------------------------------------------------------

    def register_definition(self, definition: AtomDefinition) -> None:
        self.modules.register(definition)

    # -- daemons -------------------------------------------------------------------------------------

    def _check_placement(self, config: AtomConfiguration, kind: AtomKind) -> AtomDefinition:
        if self.halted:
            raise InstanceStoppedError(f"node {self.node.node_id} is halted")
        if config.kind != kind:
            raise PolicyError(f"configuration for '{config.definition}' is not a {kind.value} atom")
        if not node_eligible(config, self.node):
            raise HostConstraintError(f"node {self.node.node_id} does not satisfy the host constraints "
                                      f"of '{config.label}'")
        return self.modules.load(config.definition)

    def spawn_daemon(self, config: AtomConfiguration) -> list[str]:
        """
        Start every daemon instance a configuration places on this node.

        :return: the started names (one per ``count``)
        :raises NameConflictError: a name is live somewhere; earlier names stay running
        :raises UnknownDefinitionError: the definition is not registered here
        :raises HostConstraintError: this node is not eligible
        """
        return [self.spawn_daemon_named(config, name) for name in config.expand_names(self.node.node_id)]

    def spawn_daemon_named(self, config: AtomConfiguration, name: str) -> str:
        definition = self._check_placement(config, AtomKind.DAEMON)
        incarnation = self.registry.register(name)
        self._start(definition, config, name, incarnation, None)
        return name

    def _start(self, definition: AtomDefinition, config: AtomConfiguration, name: str, incarnation: int,
               event: Event | None, slot_index: int = 0) -> AtomInstance:
        instance = AtomInstance(name=name, definition=definition, config=config, incarnation=incarnation,
                                serial=next(self._serials), mailbox=Mailbox(self.mailbox_capacity),
                                last_activity=self.clock(), slot_index=slot_index)
        if event is not None:
            instance.events_handled = 1
            self._track_event(event, instance)
        self.instances[name] = instance
        self.router.attach(name, incarnation, instance.mailbox)
        self.stats.spawned += 1
        log_lifecycle(Lifecycle.SPAWN, name, definition.name, node=self.node.node_id, incarnation=incarnation)
        instance.task = asyncio.get_running_loop().create_task(self._run(instance, event), name=f"atom:{name}")
        return instance

    async def _run(self, instance: AtomInstance, event: Event | None) -> None:
        if instance.activations:
            raise RuntimeError(f"atom '{instance.name}' activated twice")
        instance.activations += 1
        instance.state = InstanceState.BUSY
        context = RuntimeContext(self, instance)
        fault: AtomFault | None = None
        try:
            await instance.definition.main(context, event)
            self._finish(instance, Lifecycle.EXIT)
        except AtomExit:
            self._finish(instance, Lifecycle.EXIT)
        except AtomRetired:
            self._finish(instance, Lifecycle.EXPIRE)
        except asyncio.CancelledError:
            self._teardown(instance, InstanceState.STOPPED, "node stopping")
            raise
        except Exception as e:
            fault = AtomFault(instance.name, e)
        finally:
            instance.activations -= 1
        if fault is not None:
            await self.handle_fault(instance, fault)

    def _finish(self, instance: AtomInstance, how: Lifecycle) -> None:
        if how == Lifecycle.EXPIRE:
            self.stats.expired += 1
        else:
            self.stats.exited += 1
        log_lifecycle(how, instance.name, instance.definition.name, node=self.node.node_id,
                      events=instance.events_handled)
        self._teardown(instance, InstanceState.STOPPED, "atom stopped without responding")

    def _teardown(self, instance: AtomInstance, state: InstanceState, reason: str,
                  status: int = STATUS_FAULT) -> None:
        instance.state = state
        if instance.torn_down:
            return
        instance.torn_down = True
        instance.mailbox.clear()
        self.router.detach(instance.name, instance.incarnation)
        record = self.registry.lookup(instance.name)
        if record is not None and record.node == self.node.node_id and record.incarnation == instance.incarnation:
            self.registry.deregister(instance.name)
        if self.instances.get(instance.name) is instance:
            del self.instances[instance.name]
        slot = self._reactive.get(instance.config.definition)
        if slot is not None:
            if instance in slot.instances:
                slot.instances.remove(instance)
            if slot.ring and slot.ring[instance.slot_index] is instance:
                slot.ring[instance.slot_index] = None
        for correlation in list(instance.pending):
            self.complete_event(correlation, status, reason.encode("utf-8"))

    # -- faults --------------------------------------------------------------------------------------

    async def handle_fault(self, instance: AtomInstance, fault: AtomFault) -> None:
        """Apply the configured recovery policy to a trapped instance."""
        policy = instance.config.recovery
        self.stats.faults += 1
        log_lifecycle(Lifecycle.FAULT, instance.name, instance.definition.name, node=self.node.node_id,
                      reason=str(fault.cause), recovery=policy.value)
        self._teardown(instance, InstanceState.FAULTED, str(fault))
        if self.halted:
            return
        if policy == RecoveryPolicy.NONE:
            log_error("atom faulted", atom=instance.name, error=str(fault.cause))
            return
        if policy == RecoveryPolicy.ESCALATE:
            log_error("atom fault escalated, halting node", atom=instance.name, node=self.node.node_id)
            await self.halt()
            if self.on_escalate is not None:
                self.on_escalate(instance.name, fault)
            return
        if policy == RecoveryPolicy.RECOVER and instance.definition.recover is not None:
            helper = AtomInstance(name=instance.name, definition=instance.definition, config=instance.config,
                                  incarnation=instance.incarnation, serial=instance.serial,
                                  mailbox=Mailbox(1), state=InstanceState.BUSY)
            try:
                await instance.definition.recover(RuntimeContext(self, helper, transient=True), fault)
            except Exception as e:
                log_error("recover hook failed, atom stays down", atom=instance.name, error=str(e))
                return
        if instance.config.kind == AtomKind.REACTIVE and isinstance(instance.config.scheduling, OnDemand):
            # on-demand instances are never reused; the next event spawns a fresh one
            log_lifecycle(Lifecycle.RETIRE, instance.name, instance.definition.name, node=self.node.node_id,
                          recovery=policy.value)
            return
        self.restart(instance)

    def restart(self, instance: AtomInstance) -> AtomInstance | None:
        """Re-instantiate a torn down instance under the same name with a fresh incarnation."""
        if self.registry.lookup(instance.name) is not None:
            log_warning("restart skipped, name is live again", atom=instance.name)
            return None
        incarnation = self.registry.register(instance.name)
        self.stats.restarts += 1
        log_lifecycle(Lifecycle.RESTART, instance.name, instance.definition.name, node=self.node.node_id,
                      incarnation=incarnation)
        replacement = self._start(instance.definition, instance.config, instance.name, incarnation, None,
                                  instance.slot_index)
        slot = self._reactive.get(instance.config.definition)
        if slot is not None and instance.config.kind == AtomKind.REACTIVE:
            slot.instances.append(replacement)
            if slot.ring:
                slot.ring[instance.slot_index] = replacement
        return replacement

    def _lost_name(self, name: str) -> None:
        instance = self.instances.get(name)
        if instance is not None and instance.task is not None:
            log_warning("lost name conflict, stopping local instance", atom=name)
            self._teardown(instance, InstanceState.STOPPED, "lost name conflict")
            instance.task.cancel()

    async def halt(self) -> None:
        """Stop every instance; nothing on this node accepts messages afterwards."""
        self.halted = True
        if self._sweeper is not None:
            self._sweeper.cancel()
        current = asyncio.current_task()
        tasks = []
        for instance in list(self.instances.values()):
            self._teardown(instance, InstanceState.STOPPED, "node halted", STATUS_UNAVAILABLE)
            if instance.task is not None and instance.task is not current:
                instance.task.cancel()
                tasks.append(instance.task)
        if tasks:
            await asyncio.gather(*tasks, return_exceptions=True)

    # -- reactive atoms ------------------------------------------------------------------------------

    def install_reactive(self, config: AtomConfiguration) -> bool:
        """
        Make a reactive definition dispatchable on this node.
        :return: False if the identical configuration was already installed
        :raises PolicyError: a different configuration is installed for the definition
        """
        definition = self._check_placement(config, AtomKind.REACTIVE)
        existing = self._reactive.get(config.definition)
        if existing is not None:
            if existing.config == config:
                return False
            raise PolicyError(f"definition '{config.definition}' is already installed with another configuration")
        slot = ReactiveSlot(config=config, definition=definition)
        if isinstance(config.scheduling, RoundRobin):
            slot.ring = [None] * config.scheduling.limit
        self._reactive[config.definition] = slot
        log_debug("reactive atom installed", definition=config.definition, node=self.node.node_id)
        return True

    def reactive_instances(self, definition: str) -> list[str]:
        slot = self._reactive.get(definition)
        return [] if slot is None else [i.name for i in slot.instances if i.live]

    def dispatch_event(self, definition: str, event: Event) -> str:
        """
        Hand an event to an instance chosen by the definition's scheduling policy.

        :return: the name of the handling instance
        :raises UnknownDefinitionError: no reactive configuration for the definition
        :raises MailboxFullError: the chosen instance cannot take more events
        """
        if self.halted:
            raise InstanceStoppedError(f"node {self.node.node_id} is halted")
        slot = self._reactive.get(definition)
        if slot is None:
            raise UnknownDefinitionError(f"no reactive atom '{definition}' installed on {self.node.node_id}")
        self.stats.events += 1
        policy = slot.config.scheduling
        if isinstance(policy, One):
            live = [i for i in slot.instances if i.live]
            return self._deliver(live[0], event) if live else self._create(slot, event).name
        if isinstance(policy, RoundRobin):
            index = slot.cursor % policy.limit
            slot.cursor += 1
            target = slot.ring[index]
            if target is not None and target.live:
                return self._deliver(target, event)
            return self._create(slot, event, index).name
        if isinstance(policy, OnDemand):
            return self._create(slot, event).name
        assert isinstance(policy, OnDemandExpire)
        self._expire_idle(slot)
        candidates = [i for i in slot.instances if i.live and i.state == InstanceState.IDLE
                      and (policy.max_events is None or i.events_handled < policy.max_events)]
        if candidates:
            return self._deliver(min(candidates, key=lambda i: (i.last_activity, i.serial)), event)
        return self._create(slot, event).name

    def _create(self, slot: ReactiveSlot, event: Event, index: int = 0) -> AtomInstance:
        name = f"{slot.config.definition}/{self.node.node_id}.{next(self._suffixes)}"
        incarnation = self.registry.register(name)
        instance = self._start(slot.definition, slot.config, name, incarnation, event, index)
        slot.instances.append(instance)
        if slot.ring:
            slot.ring[index] = instance
        return instance

    def _deliver(self, instance: AtomInstance, event: Event) -> str:
        envelope = Envelope(sender="", destination=Exact(instance.name), ordering=Ordering.FIFO, payload=event.body,
                            correlation_id=event.correlation_id, target=instance.name,
                            incarnation=instance.incarnation, event=event)
        if not self.router.deliver_local(envelope):
            raise MailboxFullError(f"mailbox of '{instance.name}' is full")
        instance.state = InstanceState.BUSY
        instance.events_handled += 1
        instance.last_activity = self.clock()
        self._track_event(event, instance)
        return instance.name

    def _track_event(self, event: Event, instance: AtomInstance) -> None:
        instance.pending[event.correlation_id] = event
        self._events[event.correlation_id] = (event, instance)

    def complete_event(self, correlation: bytes, status: int, body: bytes) -> bool:
        entry = self._events.pop(correlation, None)
        if entry is None:
            return False
        event, instance = entry
        instance.pending.pop(correlation, None)
        if event.response is not None and not event.response.done():
            event.response.set_result((status, bytes(body)))
        return True

    # -- idle expiry ---------------------------------------------------------------------------------

    def _became_idle(self, instance: AtomInstance) -> None:
        instance.state = InstanceState.IDLE
        instance.last_activity = self.clock()
        policy = instance.config.scheduling
        if isinstance(policy, OnDemandExpire) and policy.max_events is not None \
                and instance.events_handled >= policy.max_events:
            instance.retiring = True
            raise AtomRetired()

    def _expired(self, instance: AtomInstance, policy: OnDemandExpire, now: float) -> bool:
        if instance.state != InstanceState.IDLE or instance.retiring:
            return False
        if policy.max_events is not None and instance.events_handled >= policy.max_events:
            return True
        return policy.idle_timeout is not None and now - instance.last_activity >= policy.idle_timeout

    def _expire_idle(self, slot: ReactiveSlot) -> int:
        policy = slot.config.scheduling
        if not isinstance(policy, OnDemandExpire):
            return 0
        now = self.clock()
        retired = 0
        for instance in list(slot.instances):
            if self._expired(instance, policy, now):
                self.retire(instance)
                retired += 1
        return retired

    def retire(self, instance: AtomInstance) -> None:
        """Take an idle instance out of scheduling and release it from ``receive``."""
        instance.retiring = True
        slot = self._reactive.get(instance.config.definition)
        if slot is not None and instance in slot.instances:
            slot.instances.remove(instance)
        instance.mailbox.interrupt()

    def sweep(self) -> int:
        return sum(self._expire_idle(slot) for slot in self._reactive.values())

    async def _sweep_loop(self) -> None:
        assert self.expiry_sweep_interval is not None
        while True:
            await asyncio.sleep(self.expiry_sweep_interval)
            self.sweep()

    def start(self) -> None:
        if self.expiry_sweep_interval is not None and self._sweeper is None:
            self._sweeper = asyncio.get_running_loop().create_task(self._sweep_loop())

    async def stop(self) -> None:
        if self._sweeper is not None:
            self._sweeper.cancel()
            self._sweeper = None
        tasks = []
        for instance in list(self.instances.values()):
            self._teardown(instance, InstanceState.STOPPED, "node stopping", STATUS_UNAVAILABLE)
            if instance.task is not None:
                instance.task.cancel()
                tasks.append(instance.task)
        if tasks:
            await asyncio.gather(*tasks, return_exceptions=True)

    def status(self) -> dict[str, Any]:
        return {
            "node": self.node.node_id,
            "instances": sorted(self.instances),
            "reactive": sorted(self._reactive),
            "stats": self.stats.as_dict(),
            "halted": self.halted,
        }

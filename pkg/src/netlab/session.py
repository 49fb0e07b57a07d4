"""Lab sessions: one group sandbox each, with an ordered event log.

A session owns a topology, the device configs, and the converged state,
which is recomputed synchronously after every mutating command so
`show` output is always up to date. Mutations are serialized per
session; the event log is append-only and streamed by sequence number,
so readers can resume without gaps or duplicates.
"""

from __future__ import annotations

import copy
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

from . import dataplane, render
from .devconf import (
    CommandError,
    ConfigCommand,
    DeviceConfig,
    PingCommand,
    ShowCommand,
    TracerouteCommand,
    apply_config_command,
    parse_command,
    render_config,
)
from .labs import Scenario, TaskReport, build_scenario, evaluate_tasks
from .rib import NonConvergence, converge
from .topo import Topology

__all__ = [
    "Event",
    "LabSession",
    "SessionManager",
    "UnknownSession",
    "UnknownDevice",
]


class UnknownSession(KeyError):
    pass


class UnknownDevice(KeyError):
    pass


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class Event:
    seq: int
    kind: str  # created | config-applied | converged | capture | fault
    device: Optional[str] = None
    segment: Optional[str] = None
    payload: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        record: dict = {"seq": self.seq, "kind": self.kind}
        if self.device is not None:
            record["device"] = self.device
        if self.segment is not None:
            record["segment"] = self.segment
        record["payload"] = self.payload
        return record


class LabSession:
    """One sandbox: topology + configs + converged state + event log."""

    def __init__(
        self,
        session_id: str,
        scenario: Scenario,
        mode: str = "unconfigured",
        topology: Optional[Topology] = None,
        configs: Optional[Dict[str, DeviceConfig]] = None,
        created_at: Optional[str] = None,
    ):
        if mode not in ("unconfigured", "solved"):
            raise ValueError(f"unknown mode {mode!r}")
        self.id = session_id
        self.scenario = scenario
        self.mode = mode
        self.topology = topology if topology is not None else scenario.topology
        if configs is None:
            configs = {}
            for name in sorted(scenario.solved_configs):
                if name in scenario.demo_devices or mode == "solved":
                    configs[name] = copy.deepcopy(scenario.solved_configs[name])
        self.configs = configs
        self.created_at = created_at if created_at is not None else _now_iso()
        self.modified_at = self.created_at
        self.events: List[Event] = []
        self._lock = threading.RLock()
        self._events_cond = threading.Condition()
        self.emit(
            "created",
            payload={
                "scenario": scenario.name,
                "groups": scenario.group_count,
                "mode": mode,
            },
        )
        self.converged = converge(self.topology, self.configs)
        self.emit("converged", payload={"round_count": self.converged.round_count})

    # -- events -------------------------------------------------------

    def emit(
        self,
        kind: str,
        device: Optional[str] = None,
        segment: Optional[str] = None,
        payload: Optional[dict] = None,
    ) -> Event:
        with self._events_cond:
            event = Event(
                seq=len(self.events) + 1,
                kind=kind,
                device=device,
                segment=segment,
                payload=payload or {},
            )
            self.events.append(event)
            self._events_cond.notify_all()
            return event

    def events_since(self, from_seq: int) -> List[Event]:
        with self._events_cond:
            return [e for e in self.events if e.seq >= from_seq]

    def wait_events(self, from_seq: int, timeout: float = 1.0) -> List[Event]:
        """Events with seq >= from_seq; blocks up to `timeout` for new ones."""
        with self._events_cond:
            events = [e for e in self.events if e.seq >= from_seq]
            if events:
                return events
            self._events_cond.wait(timeout)
            return [e for e in self.events if e.seq >= from_seq]

    # -- command execution --------------------------------------------

    def _device(self, name: str):
        try:
            return self.topology.device(name)
        except KeyError:
            raise UnknownDevice(name) from None

    def reconverge(self) -> None:
        """Recompute converged state and log it; callers hold the lock."""
        try:
            self.converged = converge(self.topology, self.configs)
        except NonConvergence as exc:
            self.emit("fault", payload={"error": str(exc)})
            raise
        self.modified_at = _now_iso()
        self.emit("converged", payload={"round_count": self.converged.round_count})

    def exec(self, device_name: str, command: str) -> Tuple[str, int]:
        """Run one console command; returns (output, events appended)."""
        device = self._device(device_name)
        with self._lock:
            before = len(self.events)
            try:
                parsed = parse_command(command)
            except CommandError as exc:
                return exc.rendered(), 0
            if isinstance(parsed, ConfigCommand):
                config = self.configs.setdefault(device_name, DeviceConfig())
                try:
                    response = apply_config_command(config, parsed, device, command)
                except CommandError as exc:
                    return exc.rendered(), 0
                self.emit("config-applied", device=device_name, payload={"command": command})
                self.reconverge()
                return response, len(self.events) - before
            if isinstance(parsed, ShowCommand):
                return self.state_view(device_name, parsed.view), 0
            sink = self._capture_sink()
            forwarder = dataplane.Forwarder(self.topology, self.configs, self.converged)
            if isinstance(parsed, PingCommand):
                result = forwarder.ping(device_name, parsed.dst, sink)
                return render.render_ping(parsed.dst, result), len(self.events) - before
            if isinstance(parsed, TracerouteCommand):
                trace = forwarder.traceroute(device_name, parsed.dst, sink)
                return render.render_traceroute(parsed.dst, trace), len(self.events) - before
            raise AssertionError(f"unhandled command {parsed!r}")

    def _capture_sink(self):
        def sink(record: dataplane.CaptureSummary) -> None:
            self.emit(
                "capture",
                segment=record.segment,
                payload={
                    "kind": record.kind,
                    "src": str(record.src),
                    "dst": str(record.dst),
                    "ttl": record.ttl,
                },
            )

        return sink

    # -- queries --------------------------------------------------------

    def state_view(self, device_name: str, view: str) -> str:
        self._device(device_name)
        state = self.converged
        if view == "route":
            return render.render_route_table(state.ribs.get(device_name, []))
        if view == "bgp":
            config = self.configs.get(device_name)
            if config is None or config.bgp is None:
                return "% BGP is not running\n"
            return render.render_bgp_table(
                state.bgp_tables.get(device_name, []), config.bgp.local_as
            )
        if view == "ospf_neighbor":
            return render.render_ospf_neighbors(device_name, state, self.topology, self.configs)
        if view == "run":
            config = self.configs.get(device_name)
            return render_config(config) if config is not None else ""
        raise ValueError(f"unknown view {view!r}")

    def report(self, group: int) -> TaskReport:
        return evaluate_tasks(self, self.scenario, group)


class SessionManager:
    """Holds the live sessions; mutating calls on one session never touch
    another, so sessions can be driven concurrently."""

    def __init__(self):
        self._sessions: Dict[str, LabSession] = {}
        self._lock = threading.Lock()

    def create(
        self,
        scenario_name: str,
        groups: Optional[int] = None,
        mode: str = "unconfigured",
    ) -> LabSession:
        scenario = build_scenario(scenario_name, groups)
        session = LabSession(uuid.uuid4().hex[:12], scenario, mode)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> LabSession:
        with self._lock:
            if session_id not in self._sessions:
                raise UnknownSession(session_id)
            return self._sessions[session_id]

    def list(self) -> List[LabSession]:
        with self._lock:
            return list(self._sessions.values())

    def add(self, session: LabSession) -> None:
        with self._lock:
            self._sessions[session.id] = session

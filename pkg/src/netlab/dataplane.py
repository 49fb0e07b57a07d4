"""Forwarding-plane queries over a converged state.

ping and traceroute walk device forwarding tables hop by hop with a
longest-prefix match at each device, TTL 64. Ping succeeds only when
the reverse path from the destination back to the source address also
resolves — the classic one-way-reachability failure stays observable.
Every traversed segment emits a capture record through the optional
sink, so link viewers see the traffic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .devconf import DeviceConfig, active_interfaces
from .netcore import Address, Prefix, longest_prefix_match
from .rib import ConvergedState
from .topo import Topology

__all__ = [
    "TTL_INITIAL",
    "HopRecord",
    "CaptureSummary",
    "PingResult",
    "TracerouteResult",
    "DataplaneError",
    "Forwarder",
    "ping",
    "traceroute",
    "as_path_query",
]

TTL_INITIAL = 64

KIND_ECHO = "icmp_echo"
KIND_REPLY = "icmp_reply"
KIND_TTL_EXCEEDED = "ttl_exceeded"


class DataplaneError(ValueError):
    pass


@dataclass(frozen=True)
class HopRecord:
    device: str
    ingress_address: Address


@dataclass(frozen=True)
class CaptureSummary:
    segment: str
    kind: str  # icmp_echo | icmp_reply | ttl_exceeded
    src: Address
    dst: Address
    ttl: int


@dataclass
class PingResult:
    success: bool
    forward_hops: int
    error: Optional[str] = None


@dataclass
class TracerouteResult:
    hops: List[HopRecord] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.error is None


CaptureSink = Callable[[CaptureSummary], None]


class Forwarder:
    """Reusable lookup structures for forwarding queries on one state."""

    def __init__(
        self,
        topology: Topology,
        configs: Mapping[str, DeviceConfig],
        state: ConvergedState,
    ):
        self.topology = topology
        self.state = state
        self.active = active_interfaces(topology, dict(configs))
        # address -> (device, interface, segment); lowest device wins on
        # duplicate addressing so lookups stay deterministic.
        self.owner: Dict[Address, Tuple[str, str, str]] = {}
        for device in sorted(self.active):
            for ai in self.active[device]:
                self.owner.setdefault(ai.address, (ai.device, ai.name, ai.segment))
        self.fibs: Dict[str, List[Tuple[Prefix, Tuple[Optional[Address], str]]]] = {
            device: [(p, (nh, egress)) for p, nh, egress in entries]
            for device, entries in state.fibs.items()
        }

    def owns(self, device: str, address: Address) -> bool:
        rec = self.owner.get(address)
        return rec is not None and rec[0] == device

    def _segment_of(self, device: str, interface: str) -> Optional[str]:
        return self.topology.segment_of(device, interface)

    def _walk(
        self, source: str, dst: Address
    ) -> Tuple[List[HopRecord], List[Tuple[str, int]], Optional[str], Optional[str]]:
        """Forward packet walk from `source` toward `dst`.

        Returns (hops, traversed (segment, ttl) pairs, error, error kind).
        The caller handles the source-owns-destination case.
        """
        hops: List[HopRecord] = []
        wires: List[Tuple[str, int]] = []
        device = source
        ttl = TTL_INITIAL
        while True:
            entry = longest_prefix_match(self.fibs.get(device, []), dst)
            if entry is None:
                return hops, wires, f"no route to {dst} at {device}", "no-route"
            next_hop, egress = entry
            target = dst if next_hop is None else next_hop
            segment = self._segment_of(device, egress)
            rec = self.owner.get(target)
            if segment is None or rec is None or rec[2] != segment:
                return hops, wires, f"no route to {dst} at {device}", "no-route"
            if ttl == 0:
                wires.append((segment, 0))
                return hops, wires, f"TTL exceeded at {device}", "ttl-exceeded"
            wires.append((segment, ttl))
            ttl -= 1
            device = rec[0]
            if self.owns(device, dst):
                hops.append(HopRecord(device, dst))
                return hops, wires, None, None
            hops.append(HopRecord(device, target))

    def _source_address(self, source: str, dst: Address) -> Tuple[Optional[Address], Optional[str]]:
        ifaces = self.active.get(source, [])
        if not ifaces:
            return None, f"{source} has no addressed interface"
        entry = longest_prefix_match(self.fibs.get(source, []), dst)
        if entry is None:
            return None, f"no route to {dst} at {source}"
        _, egress = entry
        for ai in ifaces:
            if ai.name == egress:
                return ai.address, None
        return ifaces[0].address, None

    def ping(
        self, source: str, dst: Address, sink: Optional[CaptureSink] = None
    ) -> PingResult:
        if self.owns(source, dst):
            return PingResult(success=True, forward_hops=0)
        src_addr, err = self._source_address(source, dst)
        if src_addr is None:
            return PingResult(success=False, forward_hops=0, error=err)
        hops, wires, err, kind = self._walk(source, dst)
        self._emit(sink, wires, KIND_ECHO, src_addr, dst, kind)
        if err is not None:
            return PingResult(success=False, forward_hops=len(hops), error=err)
        _, r_wires, r_err, r_kind = self._walk(hops[-1].device, src_addr)
        self._emit(sink, r_wires, KIND_REPLY, dst, src_addr, r_kind)
        if r_err is not None:
            return PingResult(
                success=False, forward_hops=len(hops), error=f"no reply ({r_err})"
            )
        return PingResult(success=True, forward_hops=len(hops))

    def traceroute(
        self, source: str, dst: Address, sink: Optional[CaptureSink] = None
    ) -> TracerouteResult:
        if self.owns(source, dst):
            return TracerouteResult(hops=[HopRecord(source, dst)])
        src_addr, err = self._source_address(source, dst)
        if src_addr is None:
            return TracerouteResult(error=err)
        hops, wires, err, kind = self._walk(source, dst)
        self._emit(sink, wires, KIND_ECHO, src_addr, dst, kind)
        if err is not None:
            return TracerouteResult(hops=hops, error=err)
        _, r_wires, r_err, r_kind = self._walk(hops[-1].device, src_addr)
        self._emit(sink, r_wires, KIND_REPLY, dst, src_addr, r_kind)
        if r_err is not None:
            # Probes arrive but replies never return; the destination is
            # not reported as reached.
            return TracerouteResult(hops=hops[:-1], error=f"no reply from {dst}")
        return TracerouteResult(hops=hops)

    def as_path_query(self, router: str, dst: Address) -> Tuple[int, ...]:
        best = self.state.bgp_best.get(router)
        if best is None:
            raise DataplaneError(f"{router} does not run BGP")
        route = longest_prefix_match(list(best.items()), dst)
        if route is None:
            raise DataplaneError(f"no BGP route for {dst} on {router}")
        return route.as_path

    @staticmethod
    def _emit(
        sink: Optional[CaptureSink],
        wires: List[Tuple[str, int]],
        kind: str,
        src: Address,
        dst: Address,
        error_kind: Optional[str],
    ) -> None:
        if sink is None:
            return
        for segment, ttl in wires:
            record_kind = KIND_TTL_EXCEEDED if ttl == 0 and error_kind == "ttl-exceeded" else kind
            sink(CaptureSummary(segment=segment, kind=record_kind, src=src, dst=dst, ttl=ttl))


def ping(
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
    state: ConvergedState,
    source: str,
    dst: Address,
    sink: Optional[CaptureSink] = None,
) -> PingResult:
    return Forwarder(topology, configs, state).ping(source, dst, sink)


def traceroute(
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
    state: ConvergedState,
    source: str,
    dst: Address,
    sink: Optional[CaptureSink] = None,
) -> TracerouteResult:
    return Forwarder(topology, configs, state).traceroute(source, dst, sink)


def as_path_query(
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
    state: ConvergedState,
    router: str,
    dst: Address,
) -> Tuple[int, ...]:
    return Forwarder(topology, configs, state).as_path_query(router, dst)

"""Deterministic text renderings for console queries.

Every rendering is a pure function of converged state, canonically
ordered, so repeated queries and grading scripts see identical bytes.
"""

from __future__ import annotations

from typing import List, Mapping

from . import ospf as ospf_mod
from .bgp import ORIGIN_NETWORK, BgpRoute
from .dataplane import PingResult, TracerouteResult
from .devconf import DeviceConfig
from .netcore import Address
from .rib import ConvergedState, RibEntry
from .topo import Topology

__all__ = [
    "render_route_table",
    "render_bgp_table",
    "render_ospf_neighbors",
    "render_ping",
    "render_traceroute",
]

_ROUTE_HEADER = (
    "Codes: C connected, S static, O intra-area, O IA inter-area, "
    "O E2 external, B ebgp\n"
)


def _route_code(entry: RibEntry) -> str:
    if entry.origin == "connected":
        return "C"
    if entry.origin == "static":
        return "S"
    if entry.origin == "ebgp":
        return "B"
    return {"intra_area": "O", "inter_area": "O IA", "external": "O E2"}[entry.ospf_class or ""]


def render_route_table(entries: List[RibEntry]) -> str:
    lines = [_ROUTE_HEADER]
    for e in sorted(entries, key=lambda e: e.prefix):
        code = _route_code(e)
        if e.origin == "connected":
            lines.append(f"{code:<5} {e.prefix} is directly connected, {e.egress_interface}")
        else:
            lines.append(
                f"{code:<5} {e.prefix} [{e.preference}/{e.metric}] "
                f"via {e.next_hop}, {e.egress_interface}"
            )
    return "\n".join(lines) + "\n"


def render_bgp_table(table: List[BgpRoute], local_as: int) -> str:
    lines = [
        f"BGP table, local AS {local_as}",
        "Status: > best; Origin: i network statement, ? redistributed",
        "",
        "   Network              Next Hop         Path",
    ]
    for route in sorted(table, key=lambda r: (r.prefix, len(r.as_path), r.as_path, r.next_hop)):
        marker = "*>" if route.best else "* "
        origin = "i" if route.origin == ORIGIN_NETWORK else "?"
        path = " ".join(str(a) for a in route.as_path)
        path = f"{path} {origin}" if path else origin
        lines.append(f"{marker} {str(route.prefix):<20} {str(route.next_hop):<16} {path}")
    return "\n".join(lines) + "\n"


def render_ospf_neighbors(
    device: str,
    state: ConvergedState,
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
) -> str:
    config = configs.get(device)
    if config is None or config.ospf is None:
        return "% OSPF is not running\n"
    interfaces = ospf_mod.ospf_interfaces(topology, configs)
    address_on = {(oi.device, oi.segment): oi.address for oi in interfaces}
    my_iface_on = {(oi.device, oi.segment): oi.name for oi in interfaces}
    rows = []
    for adj in state.adjacencies:
        if device == adj.device_a:
            neighbor = adj.device_b
        elif device == adj.device_b:
            neighbor = adj.device_a
        else:
            continue
        rows.append(
            (
                neighbor,
                adj.area,
                my_iface_on[(device, adj.segment)],
                address_on[(neighbor, adj.segment)],
            )
        )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = ["Neighbor     Area  Interface    Address"]
    for neighbor, area, iface, address in rows:
        lines.append(f"{neighbor:<12} {area:<5} {iface:<12} {address}")
    return "\n".join(lines) + "\n"


def render_ping(dst: Address, result: PingResult) -> str:
    if result.success:
        return f"ping {dst}: success, {result.forward_hops} hops\n"
    return f"ping {dst}: failed - {result.error}\n"


def render_traceroute(dst: Address, result: TracerouteResult) -> str:
    lines = [f"traceroute to {dst}"]
    for i, hop in enumerate(result.hops, start=1):
        lines.append(f"{i:>3}  {hop.ingress_address}")
    if result.error is not None:
        lines.append(f"  !  {result.error}")
    return "\n".join(lines) + "\n"

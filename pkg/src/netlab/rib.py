"""Routing-table assembly and the joint OSPF/BGP convergence engine.

converge() runs synchronous rounds: connected and static entries,
OSPF routes given the BGP-injected externals so far, BGP originations
from the previous routing table, a full path-vector exchange, then
per-prefix selection by protocol preference. Rounds repeat until no
routing table changes, so the result is a deterministic fixpoint.

Mutual redistribution is kept loop free by provenance tags: a route
that entered OSPF from BGP is never handed back to BGP, and a route
that entered BGP from OSPF is never handed back to OSPF.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from . import bgp as bgp_mod
from . import ospf as ospf_mod
from .bgp import BgpRoute, BgpSession, PathVectorOverrun
from .devconf import DeviceConfig, active_interfaces
from .netcore import Address, Prefix
from .ospf import CLASS_EXTERNAL, OspfAdjacency, OspfRoute
from .topo import Topology

__all__ = [
    "PREF_CONNECTED",
    "PREF_STATIC",
    "PREF_EBGP",
    "PREF_OSPF",
    "PROV_NATIVE",
    "PROV_FROM_BGP",
    "PROV_FROM_OSPF",
    "RibEntry",
    "ConvergedState",
    "NonConvergence",
    "redistribution_filter",
    "converge",
    "canonical_state",
]

PREF_CONNECTED = 0
PREF_STATIC = 1
PREF_EBGP = 20
PREF_OSPF = 110

PROV_NATIVE = "native"
PROV_FROM_BGP = "from_bgp"
PROV_FROM_OSPF = "from_ospf"

DEFAULT_PREFIX = Prefix(Address(0), 0)


class NonConvergence(RuntimeError):
    """Engine fault: the round bound was exceeded. Never expected on
    valid input."""


@dataclass(frozen=True)
class RibEntry:
    prefix: Prefix
    next_hop: Optional[Address]  # None for connected routes
    egress_interface: str
    origin: str  # connected | static | ospf | ebgp
    ospf_class: Optional[str]  # intra_area | inter_area | external
    preference: int
    metric: int
    provenance: str  # native | from_bgp | from_ospf


@dataclass
class ConvergedState:
    ribs: Dict[str, List[RibEntry]]
    fibs: Dict[str, List[Tuple[Prefix, Optional[Address], str]]]
    bgp_tables: Dict[str, List[BgpRoute]]
    bgp_best: Dict[str, Dict[Prefix, BgpRoute]]
    sessions: List[BgpSession]
    adjacencies: List[OspfAdjacency]
    ospf_routes: Dict[str, List[OspfRoute]]
    round_count: int


def redistribution_filter(entry: RibEntry, direction: str) -> bool:
    """Eligibility of a routing-table entry for redistribution.

    Provenance tags stop echo: from_bgp never re-enters BGP, from_ospf
    never re-enters OSPF. Connected and static entries are covered by
    network statements, not redistribution.
    """
    if direction == "ospf_to_bgp":
        return entry.origin == "ospf" and entry.provenance != PROV_FROM_BGP
    if direction == "bgp_to_ospf":
        return entry.origin == "ebgp" and entry.provenance != PROV_FROM_OSPF
    raise ValueError(f"unknown direction {direction!r}")


def _base_entries(
    topology: Topology, configs: Mapping[str, DeviceConfig]
) -> Dict[str, Dict[Prefix, RibEntry]]:
    """Connected, static and host-gateway entries; fixed across rounds."""
    active = active_interfaces(topology, dict(configs))
    base: Dict[str, Dict[Prefix, RibEntry]] = {}
    for device in topology.devices:
        entries: Dict[Prefix, RibEntry] = {}
        ifaces = active.get(device.name, [])
        connected: Dict[Prefix, Tuple[Address, str]] = {}
        for ai in ifaces:
            slot = (ai.address, ai.name)
            if ai.prefix not in connected or slot < connected[ai.prefix]:
                connected[ai.prefix] = slot
        for prefix in sorted(connected):
            _, ifname = connected[prefix]
            entries[prefix] = RibEntry(
                prefix, None, ifname, "connected", None, PREF_CONNECTED, 0, PROV_NATIVE
            )

        def egress_for(next_hop: Address) -> Optional[str]:
            for ai in ifaces:
                if ai.prefix.contains(next_hop):
                    return ai.name
            return None

        config = configs.get(device.name)
        if config is not None:
            for st in config.statics:
                egress = egress_for(st.next_hop)
                if egress is None or st.prefix in entries:
                    continue
                entries[st.prefix] = RibEntry(
                    st.prefix, st.next_hop, egress, "static", None, PREF_STATIC, 0, PROV_NATIVE
                )
            if device.kind == "host" and config.gateway is not None:
                egress = egress_for(config.gateway)
                if egress is not None and DEFAULT_PREFIX not in entries:
                    entries[DEFAULT_PREFIX] = RibEntry(
                        DEFAULT_PREFIX,
                        config.gateway,
                        egress,
                        "static",
                        None,
                        PREF_STATIC,
                        0,
                        PROV_NATIVE,
                    )
        base[device.name] = entries
    return base


def converge(topology: Topology, configs: Mapping[str, DeviceConfig]) -> ConvergedState:
    """Run OSPF and BGP to their joint fixpoint. Deterministic."""
    bound = 2 * len(topology.devices) + 10
    active = active_interfaces(topology, dict(configs))
    sessions = bgp_mod.bgp_sessions(topology, configs)
    adjacencies = ospf_mod.ospf_adjacencies(topology, configs)
    router_as = {
        d.name: configs[d.name].bgp.local_as
        for d in topology.devices
        if d.name in configs and configs[d.name].bgp is not None
    }
    base = _base_entries(topology, configs)

    prev: Dict[str, Dict[Prefix, RibEntry]] = {d.name: {} for d in topology.devices}
    round_count = 0
    while True:
        round_count += 1
        if round_count > bound:
            raise NonConvergence(f"no fixpoint within {bound} rounds")

        externals: List[Tuple[Prefix, str, int]] = []
        for device in topology.devices:
            config = configs.get(device.name)
            if config is None or config.ospf is None or not config.ospf.redistribute_bgp:
                continue
            for entry in prev[device.name].values():
                if redistribution_filter(entry, "bgp_to_ospf"):
                    externals.append((entry.prefix, device.name, config.ospf.external_metric))

        ospf_tables = ospf_mod.compute_routes(topology, configs, externals)
        originations = {
            r: bgp_mod.originate(r, configs[r], prev[r].values()) for r in router_as
        }
        try:
            bgp_tables, bgp_best = bgp_mod.bgp_best_paths(
                sessions, originations, router_as, bound
            )
        except PathVectorOverrun as exc:
            raise NonConvergence(str(exc)) from exc

        new: Dict[str, Dict[Prefix, RibEntry]] = {}
        for device in topology.devices:
            name = device.name
            candidates: Dict[Prefix, List[RibEntry]] = {}
            for prefix, entry in base[name].items():
                candidates.setdefault(prefix, []).append(entry)
            for route in ospf_tables.get(name, ()):
                provenance = PROV_FROM_BGP if route.route_class == CLASS_EXTERNAL else PROV_NATIVE
                candidates.setdefault(route.prefix, []).append(
                    RibEntry(
                        route.prefix,
                        route.next_hop,
                        route.egress_interface,
                        "ospf",
                        route.route_class,
                        PREF_OSPF,
                        route.cost,
                        provenance,
                    )
                )
            for prefix, route in bgp_best.get(name, {}).items():
                if not route.as_path:
                    continue  # local originations are already in the table
                egress = None
                for ai in active[name]:
                    if ai.prefix.contains(route.next_hop):
                        egress = ai.name
                        break
                if egress is None:
                    continue
                provenance = (
                    PROV_FROM_OSPF
                    if route.origin == bgp_mod.ORIGIN_REDISTRIBUTED
                    else PROV_NATIVE
                )
                candidates.setdefault(prefix, []).append(
                    RibEntry(
                        prefix,
                        route.next_hop,
                        egress,
                        "ebgp",
                        None,
                        PREF_EBGP,
                        len(route.as_path),
                        provenance,
                    )
                )
            new[name] = {
                prefix: min(cands, key=lambda e: e.preference)
                for prefix, cands in candidates.items()
            }

        if new == prev:
            break
        prev = new

    ribs = {
        name: sorted(prev[name].values(), key=lambda e: e.prefix)
        for name in sorted(prev)
    }
    fibs = {
        name: [(e.prefix, e.next_hop, e.egress_interface) for e in entries]
        for name, entries in ribs.items()
    }
    return ConvergedState(
        ribs=ribs,
        fibs=fibs,
        bgp_tables=bgp_tables,
        bgp_best=bgp_best,
        sessions=sessions,
        adjacencies=adjacencies,
        ospf_routes=ospf_tables,
        round_count=round_count,
    )


def canonical_state(state: ConvergedState) -> str:
    """Canonical text form of a converged state, for determinism checks
    and snapshots. Sorted devices, sorted prefixes, stable fields."""
    lines: List[str] = [f"round_count {state.round_count}"]
    for adj in sorted(
        state.adjacencies, key=lambda a: (a.device_a, a.device_b, a.segment, a.area)
    ):
        lines.append(f"adjacency {adj.device_a} {adj.device_b} {adj.segment} area {adj.area}")
    for s in sorted(state.sessions, key=lambda s: (s.local_device, str(s.peer_address))):
        local = "-" if s.local_address is None else str(s.local_address)
        peer = "-" if s.peer_device is None else s.peer_device
        lines.append(
            f"session {s.local_device} {local} -> {peer} {s.peer_address} "
            f"as {s.local_as}->{s.peer_as} {s.state}"
        )
    for name in sorted(state.ribs):
        lines.append(f"device {name}")
        for e in sorted(state.ribs[name], key=lambda e: e.prefix):
            origin = e.origin if e.ospf_class is None else f"{e.origin}/{e.ospf_class}"
            via = "-" if e.next_hop is None else str(e.next_hop)
            lines.append(
                f"  rib {e.prefix} {origin} pref {e.preference} metric {e.metric} "
                f"via {via} egress {e.egress_interface} prov {e.provenance}"
            )
        for r in sorted(
            state.ospf_routes.get(name, []),
            key=lambda r: (r.prefix, r.route_class, r.cost, r.next_hop),
        ):
            lines.append(
                f"  ospf {r.prefix} {r.route_class} cost {r.cost} via {r.next_hop} "
                f"egress {r.egress_interface} area {r.area}"
            )
        for b in sorted(
            state.bgp_tables.get(name, []),
            key=lambda b: (b.prefix, len(b.as_path), b.as_path, b.next_hop),
        ):
            path = " ".join(str(a) for a in b.as_path) or "-"
            marker = "best" if b.best else "alt"
            lines.append(
                f"  bgp {b.prefix} path {path} via {b.next_hop} origin {b.origin} {marker}"
            )
    return "\n".join(lines) + "\n"

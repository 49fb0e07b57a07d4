"""Multi-area link-state route computation.

The engine computes the converged link-state result directly — no
timers, flooding or DR election. Every interface costs 1, so route
costs are hop counts plus one for the destination subnet. Area border
routers (routers with enabled interfaces in two or more areas) leak
routes between their attached areas with accumulated cost. External
prefixes injected by BGP redistribution appear everywhere with the
advertiser's fixed metric (non-accumulating) and rank below internal
routes for the same prefix.

All outputs are canonically ordered; equal-cost ties break on the
lowest next-hop address (no multipath).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .devconf import ActiveInterface, DeviceConfig, active_interfaces
from .netcore import Address, Prefix
from .topo import Topology

__all__ = [
    "CLASS_INTRA",
    "CLASS_INTER",
    "CLASS_EXTERNAL",
    "OspfAdjacency",
    "OspfRoute",
    "OspfInterface",
    "ospf_interfaces",
    "ospf_adjacencies",
    "ospf_routes",
    "compute_routes",
]

CLASS_INTRA = "intra_area"
CLASS_INTER = "inter_area"
CLASS_EXTERNAL = "external"

_CLASS_RANK = {CLASS_INTRA: 0, CLASS_INTER: 1, CLASS_EXTERNAL: 2}


@dataclass(frozen=True)
class OspfInterface:
    """An OSPF-enabled interface: an active interface covered by a
    network statement (first matching statement selects the area)."""

    device: str
    name: str
    address: Address
    length: int
    segment: str
    area: int
    passive: bool

    @property
    def prefix(self) -> Prefix:
        return Prefix.of(self.address, self.length)


@dataclass(frozen=True)
class OspfAdjacency:
    """A formed adjacency; device_a < device_b canonically."""

    device_a: str
    device_b: str
    segment: str
    area: int


@dataclass(frozen=True)
class OspfRoute:
    prefix: Prefix
    next_hop: Address
    egress_interface: str
    cost: int
    route_class: str  # intra_area | inter_area | external
    area: int


def ospf_interfaces(
    topology: Topology, configs: Mapping[str, DeviceConfig]
) -> List[OspfInterface]:
    """All OSPF-enabled interfaces across routers, in device order."""
    enabled: List[OspfInterface] = []
    active = active_interfaces(topology, dict(configs))
    for device in topology.devices:
        if device.kind != "router":
            continue
        config = configs.get(device.name)
        if config is None or config.ospf is None:
            continue
        for ai in active[device.name]:
            area = None
            for prefix, stmt_area in config.ospf.networks:
                if prefix.contains(ai.address):
                    area = stmt_area
                    break
            if area is None:
                continue
            enabled.append(
                OspfInterface(
                    device=ai.device,
                    name=ai.name,
                    address=ai.address,
                    length=ai.length,
                    segment=ai.segment,
                    area=area,
                    passive=ai.name in config.ospf.passive_interfaces,
                )
            )
    return enabled


def ospf_adjacencies(
    topology: Topology, configs: Mapping[str, DeviceConfig]
) -> List[OspfAdjacency]:
    """Adjacencies: two routers sharing a segment, both enabled there in
    the same area, neither side passive."""
    return _adjacencies(ospf_interfaces(topology, configs))


def _adjacencies(enabled: Sequence[OspfInterface]) -> List[OspfAdjacency]:
    by_segment: Dict[str, List[OspfInterface]] = {}
    for oi in enabled:
        by_segment.setdefault(oi.segment, []).append(oi)
    found = set()
    for members in by_segment.values():
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                if a.device == b.device or a.area != b.area or a.passive or b.passive:
                    continue
                pair = tuple(sorted((a.device, b.device)))
                found.add(OspfAdjacency(pair[0], pair[1], a.segment, a.area))
    return sorted(found, key=lambda adj: (adj.device_a, adj.device_b, adj.segment, adj.area))


def _shortest(
    neighbors: Mapping[str, Sequence[Tuple[str, Address, str]]], source: str
) -> Tuple[Dict[str, int], Dict[str, Tuple[Address, str]]]:
    """BFS distances and deterministic first hops from `source`.

    First hop is (neighbor address, egress interface); among equal-cost
    paths the lexicographically smallest first hop wins.
    """
    dist: Dict[str, int] = {source: 0}
    fhop: Dict[str, Tuple[Address, str]] = {}
    layer = [source]
    hops = 0
    while layer:
        hops += 1
        best: Dict[str, Tuple[Address, str]] = {}
        for u in layer:
            for v, v_addr, my_if in neighbors.get(u, ()):
                if v in dist:
                    continue
                candidate = (v_addr, my_if) if u == source else fhop[u]
                if v not in best or candidate < best[v]:
                    best[v] = candidate
        for v in sorted(best):
            dist[v] = hops
            fhop[v] = best[v]
        layer = sorted(best)
    return dist, fhop


@dataclass(frozen=True)
class _Candidate:
    rank: int
    cost: int
    next_hop: Address
    egress: str
    route_class: str
    area: int

    def key(self) -> Tuple[int, int, Address, str]:
        return (self.rank, self.cost, self.next_hop, self.egress)


def compute_routes(
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
    externals: Iterable[Tuple[Prefix, str, int]] = (),
) -> Dict[str, List[OspfRoute]]:
    """Converged per-router OSPF routes.

    `externals` are (prefix, advertising router, metric) injections from
    BGP redistribution; they appear at every reachable router except the
    advertiser itself.
    """
    enabled = ospf_interfaces(topology, configs)
    adjacencies = _adjacencies(enabled)

    addr_on_segment: Dict[Tuple[str, str], Tuple[Address, str]] = {}
    for oi in enabled:
        key = (oi.device, oi.segment)
        value = (oi.address, oi.name)
        if key not in addr_on_segment or value < addr_on_segment[key]:
            addr_on_segment[key] = value

    # Per-area and union neighbor maps: device -> (peer, peer addr, my egress)
    area_neighbors: Dict[int, Dict[str, List[Tuple[str, Address, str]]]] = {}
    union_neighbors: Dict[str, List[Tuple[str, Address, str]]] = {}
    for adj in adjacencies:
        for me, other in ((adj.device_a, adj.device_b), (adj.device_b, adj.device_a)):
            other_addr, _ = addr_on_segment[(other, adj.segment)]
            _, my_if = addr_on_segment[(me, adj.segment)]
            edge = (other, other_addr, my_if)
            area_neighbors.setdefault(adj.area, {}).setdefault(me, []).append(edge)
            union_neighbors.setdefault(me, []).append(edge)

    # Routers participating per area (enabled interface there, passive or not).
    area_members: Dict[int, List[str]] = {}
    routers: List[str] = []
    for oi in enabled:
        members = area_members.setdefault(oi.area, [])
        if oi.device not in members:
            members.append(oi.device)
        if oi.device not in routers:
            routers.append(oi.device)

    # Advertised subnets per area: prefix -> advertisers with their address.
    advertised: Dict[int, Dict[Prefix, List[OspfInterface]]] = {}
    for oi in enabled:
        advertised.setdefault(oi.area, {}).setdefault(oi.prefix, []).append(oi)

    # All-pairs shortest paths, per area and over the whole adjacency graph.
    area_paths: Dict[int, Dict[str, Tuple[Dict[str, int], Dict[str, Tuple[Address, str]]]]] = {}
    for area, members in area_members.items():
        neighbor_map = area_neighbors.get(area, {})
        area_paths[area] = {r: _shortest(neighbor_map, r) for r in members}
    union_paths = {r: _shortest(union_neighbors, r) for r in routers}

    tables: Dict[str, Dict[Prefix, _Candidate]] = {r: {} for r in routers}

    def merge(router: str, prefix: Prefix, candidate: _Candidate) -> bool:
        current = tables[router].get(prefix)
        if current is None or candidate.key() < current.key():
            tables[router][prefix] = candidate
            return True
        return False

    # Intra-area routes: cost to the advertising router + 1.
    for area in sorted(area_members):
        for router in sorted(area_members[area]):
            dist, fhop = area_paths[area][router]
            for prefix in sorted(advertised[area]):
                best: Optional[_Candidate] = None
                for adv in advertised[area][prefix]:
                    if adv.device not in dist:
                        continue
                    if adv.device == router:
                        hop = (adv.address, adv.name)
                    else:
                        hop = fhop[adv.device]
                    cand = _Candidate(
                        _CLASS_RANK[CLASS_INTRA],
                        dist[adv.device] + 1,
                        hop[0],
                        hop[1],
                        CLASS_INTRA,
                        area,
                    )
                    if best is None or cand.key() < best.key():
                        best = cand
                if best is not None:
                    merge(router, prefix, best)

    # Inter-area leaking: an ABR re-advertises its best internal routes
    # into each other attached area with accumulated cost, to fixpoint.
    abrs = sorted(
        r
        for r in routers
        if len({oi.area for oi in enabled if oi.device == r}) >= 2
    )
    abr_areas = {
        r: sorted({oi.area for oi in enabled if oi.device == r}) for r in abrs
    }
    changed = True
    while changed:
        changed = False
        for abr in abrs:
            for area in abr_areas[abr]:
                dist_map = area_paths[area]
                for prefix in sorted(tables[abr]):
                    source = tables[abr][prefix]
                    if source.route_class == CLASS_EXTERNAL:
                        continue
                    for router in sorted(area_members[area]):
                        if router == abr:
                            continue
                        dist, fhop = dist_map[router]
                        if abr not in dist:
                            continue
                        hop = fhop[abr]
                        cand = _Candidate(
                            _CLASS_RANK[CLASS_INTER],
                            dist[abr] + source.cost,
                            hop[0],
                            hop[1],
                            CLASS_INTER,
                            area,
                        )
                        if merge(router, prefix, cand):
                            changed = True

    # Externals: fixed metric, next hop toward the advertiser. Ties break
    # on lower metric, then closer advertiser, then lower next hop; an
    # internal route for the same prefix always wins.
    ext_best: Dict[Tuple[str, Prefix], Tuple[Tuple[int, int, Address, str], _Candidate]] = {}
    for prefix, advertiser, metric in sorted(externals, key=lambda e: (e[0], e[1], e[2])):
        for router in routers:
            if router == advertiser:
                continue
            dist, fhop = union_paths[router]
            if advertiser not in dist:
                continue
            hop = fhop[advertiser]
            key = (metric, dist[advertiser], hop[0], hop[1])
            cand = _Candidate(
                _CLASS_RANK[CLASS_EXTERNAL], metric, hop[0], hop[1], CLASS_EXTERNAL, 0
            )
            slot = (router, prefix)
            if slot not in ext_best or key < ext_best[slot][0]:
                ext_best[slot] = (key, cand)
    for (router, prefix), (_, cand) in ext_best.items():
        if prefix not in tables[router]:
            tables[router][prefix] = cand

    result: Dict[str, List[OspfRoute]] = {}
    for router in sorted(routers):
        routes = [
            OspfRoute(
                prefix=prefix,
                next_hop=cand.next_hop,
                egress_interface=cand.egress,
                cost=cand.cost,
                route_class=cand.route_class,
                area=cand.area,
            )
            for prefix, cand in tables[router].items()
        ]
        routes.sort(key=lambda r: (r.prefix, r.route_class, r.cost))
        result[router] = routes
    return result


def ospf_routes(
    router: str,
    topology: Topology,
    configs: Mapping[str, DeviceConfig],
    externals: Iterable[Tuple[Prefix, str, int]] = (),
) -> List[OspfRoute]:
    """Converged OSPF routes for one router."""
    return compute_routes(topology, configs, externals).get(router, [])

"""eBGP path-vector engine: sessions, origination, best-path selection.

Sessions are single hop on a shared subnet and external only (the two
sides must be in different autonomous systems). Each router advertises
its best route per prefix to every established peer with its own AS
prepended; receivers discard routes already carrying their AS. Best is
the shortest AS path, then the lowest peer address. The exchange runs
in synchronous rounds to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .devconf import DeviceConfig, active_interfaces
from .netcore import Address, Prefix
from .topo import Topology

__all__ = [
    "SESSION_IDLE",
    "SESSION_ESTABLISHED",
    "ORIGIN_NETWORK",
    "ORIGIN_REDISTRIBUTED",
    "BgpSession",
    "BgpRoute",
    "PathVectorOverrun",
    "bgp_sessions",
    "originate",
    "bgp_best_paths",
]

SESSION_IDLE = "idle"
SESSION_ESTABLISHED = "established"

ORIGIN_NETWORK = "network_statement"
ORIGIN_REDISTRIBUTED = "redistributed_ospf"

LOCAL_NEXT_HOP = Address(0)  # rendered as 0.0.0.0 on locally originated routes


class PathVectorOverrun(RuntimeError):
    """The exchange failed to reach a fixpoint within its round bound."""


@dataclass(frozen=True)
class BgpSession:
    """One router's view of one configured neighbor."""

    local_device: str
    local_address: Optional[Address]
    peer_device: Optional[str]
    peer_address: Address
    local_as: int
    peer_as: int  # the configured remote-as
    state: str


@dataclass(frozen=True)
class BgpRoute:
    prefix: Prefix
    as_path: Tuple[int, ...]
    next_hop: Address
    origin: str  # network_statement | redistributed_ospf
    best: bool = False


def bgp_sessions(
    topology: Topology, configs: Mapping[str, DeviceConfig]
) -> List[BgpSession]:
    """All configured sessions with computed state, canonically ordered.

    Established needs both sides configured with each other's address
    and matching remote-as, addresses in one subnet on a shared segment,
    and different local AS numbers; anything else is idle.
    """
    active = active_interfaces(topology, dict(configs))

    # address -> (device, segment, prefix); lowest device name wins on
    # (misconfigured) duplicates so the outcome stays deterministic.
    owner: Dict[Address, Tuple[str, str, Prefix]] = {}
    for device in sorted(active):
        for ai in active[device]:
            owner.setdefault(ai.address, (ai.device, ai.segment, ai.prefix))

    sessions: List[BgpSession] = []
    for device in topology.devices:
        config = configs.get(device.name)
        if config is None or config.bgp is None:
            continue
        local_as = config.bgp.local_as
        for peer_addr, remote_as in config.bgp.neighbors:
            local_ai = None
            for ai in active[device.name]:
                if ai.prefix.contains(peer_addr):
                    if local_ai is None or (ai.address, ai.name) < (local_ai.address, local_ai.name):
                        local_ai = ai
            state = SESSION_IDLE
            peer_device = None
            if local_ai is not None:
                found = owner.get(peer_addr)
                if found is not None and found[1] == local_ai.segment:
                    peer_device = found[0]
                    peer_cfg = configs.get(peer_device)
                    if (
                        peer_cfg is not None
                        and peer_cfg.bgp is not None
                        and peer_cfg.bgp.local_as == remote_as
                        and remote_as != local_as
                        and found[2].contains(local_ai.address)
                        and any(
                            addr == local_ai.address and r_as == local_as
                            for addr, r_as in peer_cfg.bgp.neighbors
                        )
                    ):
                        state = SESSION_ESTABLISHED
            sessions.append(
                BgpSession(
                    local_device=device.name,
                    local_address=None if local_ai is None else local_ai.address,
                    peer_device=peer_device,
                    peer_address=peer_addr,
                    local_as=local_as,
                    peer_as=remote_as,
                    state=state,
                )
            )
    sessions.sort(key=lambda s: (s.local_device, s.peer_address))
    return sessions


def originate(
    router: str, config: DeviceConfig, rib_entries: Iterable
) -> List[BgpRoute]:
    """Locally originated routes for one router.

    A network statement originates only on an exact routing-table match
    against an interior entry (connected, static or OSPF) — a BGP-learned
    entry cannot satisfy its own network statement, which would make the
    origination feed back on itself. With `redistribute ospf`, every
    OSPF-derived entry is originated too, except entries that themselves
    entered OSPF from BGP (provenance "from_bgp"). `rib_entries` need
    `prefix`, `origin` and `provenance`.
    """
    if config.bgp is None:
        return []
    entries = list(rib_entries)
    known = {entry.prefix for entry in entries if entry.origin != "ebgp"}
    routes: Dict[Prefix, BgpRoute] = {}
    for prefix in config.bgp.networks:
        if prefix in known:
            routes[prefix] = BgpRoute(prefix, (), LOCAL_NEXT_HOP, ORIGIN_NETWORK)
    if config.bgp.redistribute_ospf:
        for entry in entries:
            if entry.origin != "ospf" or entry.provenance == "from_bgp":
                continue
            if entry.prefix not in routes:
                routes[entry.prefix] = BgpRoute(
                    entry.prefix, (), LOCAL_NEXT_HOP, ORIGIN_REDISTRIBUTED
                )
    return [routes[p] for p in sorted(routes)]


def bgp_best_paths(
    sessions: Sequence[BgpSession],
    originations: Mapping[str, Sequence[BgpRoute]],
    router_as: Mapping[str, int],
    round_bound: int,
) -> Tuple[Dict[str, List[BgpRoute]], Dict[str, Dict[Prefix, BgpRoute]]]:
    """Synchronous path-vector exchange to fixpoint.

    Returns (full tables with best flags, best route per prefix) per
    router. Raises PathVectorOverrun past `round_bound` rounds.
    """
    peers: Dict[str, List[Tuple[str, Address]]] = {r: [] for r in router_as}
    for s in sessions:
        if s.state == SESSION_ESTABLISHED and s.peer_device is not None:
            peers[s.local_device].append((s.peer_device, s.peer_address))
    for lst in peers.values():
        lst.sort(key=lambda p: p[1])

    def select(cands: List[BgpRoute]) -> BgpRoute:
        return min(cands, key=lambda r: (len(r.as_path), r.next_hop))

    best: Dict[str, Dict[Prefix, BgpRoute]] = {
        r: {route.prefix: route for route in originations.get(r, ())} for r in router_as
    }

    rounds = 0
    received: Dict[str, Dict[Tuple[Prefix, Address], BgpRoute]] = {r: {} for r in router_as}
    while True:
        rounds += 1
        if rounds > round_bound:
            raise PathVectorOverrun(f"no fixpoint after {round_bound} rounds")
        received = {r: {} for r in router_as}
        for router in sorted(router_as):
            own_as = router_as[router]
            for peer, peer_addr in peers[router]:
                for prefix in sorted(best[peer]):
                    route = best[peer][prefix]
                    path = (router_as[peer],) + route.as_path
                    if own_as in path:
                        continue
                    received[router][(prefix, peer_addr)] = BgpRoute(
                        prefix, path, peer_addr, route.origin
                    )
        new_best: Dict[str, Dict[Prefix, BgpRoute]] = {}
        for router in router_as:
            candidates: Dict[Prefix, List[BgpRoute]] = {}
            for route in originations.get(router, ()):
                candidates.setdefault(route.prefix, []).append(route)
            for route in received[router].values():
                candidates.setdefault(route.prefix, []).append(route)
            new_best[router] = {p: select(c) for p, c in candidates.items()}
        if new_best == best:
            break
        best = new_best

    tables: Dict[str, List[BgpRoute]] = {}
    best_flagged: Dict[str, Dict[Prefix, BgpRoute]] = {}
    for router in sorted(router_as):
        rows: List[BgpRoute] = []
        chosen: Dict[Prefix, BgpRoute] = {}
        candidates = list(originations.get(router, ())) + list(received[router].values())
        for route in candidates:
            is_best = best[router][route.prefix] == route
            flagged = BgpRoute(route.prefix, route.as_path, route.next_hop, route.origin, is_best)
            rows.append(flagged)
            if is_best:
                chosen[route.prefix] = flagged
        rows.sort(key=lambda r: (r.prefix, len(r.as_path), r.as_path, r.next_hop))
        tables[router] = rows
        best_flagged[router] = chosen
    return tables, best_flagged

from collections import deque

import pytest

from netlab.devconf import parse_config_document
from netlab.fuzz import random_lab
from netlab.netcore import Address, parse_prefix
from netlab.ospf import (
    CLASS_EXTERNAL,
    CLASS_INTER,
    CLASS_INTRA,
    compute_routes,
    ospf_adjacencies,
    ospf_routes,
)
from netlab.topo import load_topology

# One group's interior: primary and secondary router around an area 0
# core, three area 1 LANs behind the secondary.
PAIR_DOC = """\
device PR1 router
  interface F0/3/1
device SR1 router
  interface E1/0
  interface E1/1
  interface E1/2
  interface E1/3
segment core
segment lan1
segment lan2
segment lan3
attach PR1 F0/3/1 core
attach SR1 E1/0 core
attach SR1 E1/1 lan1
attach SR1 E1/2 lan2
attach SR1 E1/3 lan3
"""

PR1_CFG = """\
interface F0/3/1 ip address 10.10.1.2/26
router ospf network 10.10.1.0/26 area 0
"""

SR1_CFG = """\
interface E1/0 ip address 10.10.1.1/26
interface E1/1 ip address 10.10.1.65/26
interface E1/2 ip address 10.10.1.129/26
interface E1/3 ip address 10.10.1.193/26
router ospf network 10.10.1.0/26 area 0
router ospf network 10.10.1.64/26 area 1
router ospf network 10.10.1.128/26 area 1
router ospf network 10.10.1.192/26 area 1
"""


def build_pair(pr_cfg=PR1_CFG, sr_cfg=SR1_CFG):
    topo = load_topology(PAIR_DOC)
    configs = {
        "PR1": parse_config_document(pr_cfg, topo.device("PR1")),
        "SR1": parse_config_document(sr_cfg, topo.device("SR1")),
    }
    return topo, configs


def route_for(routes, text):
    prefix = parse_prefix(text)
    matches = [r for r in routes if r.prefix == prefix]
    assert len(matches) == 1, f"expected one route for {text}, got {matches}"
    return matches[0]


class TestAdjacencies:
    def test_pair_forms_one_area0_adjacency(self):
        topo, configs = build_pair()
        adjacencies = ospf_adjacencies(topo, configs)
        assert len(adjacencies) == 1
        adj = adjacencies[0]
        assert (adj.device_a, adj.device_b, adj.segment, adj.area) == ("PR1", "SR1", "core", 0)

    def test_passive_suppresses_adjacency(self):
        topo, configs = build_pair(PR1_CFG + "router ospf passive-interface F0/3/1\n")
        assert ospf_adjacencies(topo, configs) == []

    def test_area_mismatch_means_no_adjacency(self):
        topo, configs = build_pair(PR1_CFG.replace("area 0", "area 1"))
        assert ospf_adjacencies(topo, configs) == []

    def test_shutdown_interface_means_no_adjacency(self):
        topo, configs = build_pair(PR1_CFG + "interface F0/3/1 shutdown\n")
        assert ospf_adjacencies(topo, configs) == []

    def test_adjacency_requires_network_statement_covering_address(self):
        topo, configs = build_pair(
            "interface F0/3/1 ip address 10.10.1.2/26\nrouter ospf network 10.99.0.0/16 area 0\n"
        )
        assert ospf_adjacencies(topo, configs) == []


class TestRoutes:
    def test_inter_area_route_behind_abr(self):
        # Hand-computed: one hop to the ABR (cost 1) plus the stub hop.
        topo, configs = build_pair()
        routes = ospf_routes("PR1", topo, configs)
        route = route_for(routes, "10.10.1.128/26")
        assert route.route_class == CLASS_INTER
        assert route.cost == 2
        assert route.next_hop == Address.parse("10.10.1.1")
        assert route.egress_interface == "F0/3/1"

    def test_directly_advertised_stub_is_intra_cost_1(self):
        topo, configs = build_pair()
        route = route_for(ospf_routes("SR1", topo, configs), "10.10.1.64/26")
        assert route.route_class == CLASS_INTRA
        assert route.cost == 1

    def test_external_injection_appears_with_fixed_metric(self):
        topo, configs = build_pair()
        externals = [(parse_prefix("192.168.3.0/25"), "PR1", 20)]
        route = route_for(ospf_routes("SR1", topo, configs, externals), "192.168.3.0/25")
        assert route.route_class == CLASS_EXTERNAL
        assert route.cost == 20
        assert route.next_hop == Address.parse("10.10.1.2")

    def test_external_not_installed_at_advertiser(self):
        topo, configs = build_pair()
        externals = [(parse_prefix("192.168.3.0/25"), "PR1", 20)]
        routes = ospf_routes("PR1", topo, configs, externals)
        assert [r for r in routes if r.prefix == parse_prefix("192.168.3.0/25")] == []

    def test_passive_keeps_subnet_advertised_everywhere(self):
        topo, configs = build_pair(sr_cfg=SR1_CFG + "router ospf passive-interface E1/1\n")
        route = route_for(ospf_routes("PR1", topo, configs), "10.10.1.64/26")
        assert route.route_class == CLASS_INTER and route.cost == 2

    def test_determinism(self):
        topo, configs = build_pair()
        assert compute_routes(topo, configs) == compute_routes(topo, configs)


def bfs_oracle(adjacencies, area):
    """Independent all-pairs BFS over one area's adjacency graph."""
    graph = {}
    for adj in adjacencies:
        if adj.area != area:
            continue
        graph.setdefault(adj.device_a, set()).add(adj.device_b)
        graph.setdefault(adj.device_b, set()).add(adj.device_a)
    dist = {}
    for start in graph:
        seen = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in graph[u]:
                if v not in seen:
                    seen[v] = seen[u] + 1
                    queue.append(v)
        dist[start] = seen
    return dist


class TestSpfOracle:
    @pytest.mark.parametrize("seed", range(25))
    def test_intra_area_costs_match_brute_force(self, seed):
        from netlab.ospf import ospf_interfaces

        topology, configs = random_lab(seed)
        enabled = ospf_interfaces(topology, configs)
        adjacencies = ospf_adjacencies(topology, configs)
        tables = compute_routes(topology, configs)

        areas = sorted({oi.area for oi in enabled})
        for area in areas:
            dist = bfs_oracle(adjacencies, area)
            members = {oi.device for oi in enabled if oi.area == area}
            advertisers = {}
            for oi in enabled:
                if oi.area == area:
                    advertisers.setdefault(oi.prefix, set()).add(oi.device)
            for router in members:
                reach = dist.get(router, {router: 0})
                reach.setdefault(router, 0)
                for prefix, advs in advertisers.items():
                    expected = min(
                        (reach[a] + 1 for a in advs if a in reach), default=None
                    )
                    if expected is None:
                        continue
                    route = [r for r in tables.get(router, []) if r.prefix == prefix]
                    assert route, f"seed {seed}: {router} missing route for {prefix}"
                    # Intra-area routes rank first, so the best route for a
                    # subnet reachable inside the area must be intra at the
                    # brute-force cost.
                    assert route[0].route_class == CLASS_INTRA
                    assert route[0].cost == expected, (
                        f"seed {seed}: {router} -> {prefix} cost {route[0].cost} != {expected}"
                    )

    @pytest.mark.parametrize("seed", range(25))
    def test_adjacency_symmetry_and_canonical_order(self, seed):
        topology, configs = random_lab(seed)
        adjacencies = ospf_adjacencies(topology, configs)
        assert adjacencies == sorted(
            adjacencies, key=lambda a: (a.device_a, a.device_b, a.segment, a.area)
        )
        for adj in adjacencies:
            assert adj.device_a < adj.device_b

import copy

import pytest

from netlab.devconf import parse_config_document
from netlab.fuzz import random_lab
from netlab.netcore import parse_prefix
from netlab.rib import (
    PREF_CONNECTED,
    PREF_EBGP,
    PREF_OSPF,
    PREF_STATIC,
    PROV_FROM_BGP,
    PROV_FROM_OSPF,
    PROV_NATIVE,
    RibEntry,
    canonical_state,
    converge,
    redistribution_filter,
)
from netlab.topo import load_topology

from conftest import without_group


def make_entry(origin, provenance=PROV_NATIVE, ospf_class=None):
    return RibEntry(
        parse_prefix("10.0.0.0/8"), None, "F0/0", origin, ospf_class, 0, 0, provenance
    )


class TestRedistributionFilter:
    def test_native_ospf_entry_enters_bgp(self):
        assert redistribution_filter(make_entry("ospf", ospf_class="intra_area"), "ospf_to_bgp")

    def test_entry_from_bgp_never_returns_to_bgp(self):
        assert not redistribution_filter(
            make_entry("ospf", PROV_FROM_BGP, "external"), "ospf_to_bgp"
        )

    def test_native_ebgp_entry_enters_ospf(self):
        assert redistribution_filter(make_entry("ebgp"), "bgp_to_ospf")

    def test_entry_from_ospf_never_returns_to_ospf(self):
        assert not redistribution_filter(make_entry("ebgp", PROV_FROM_OSPF), "bgp_to_ospf")

    def test_connected_redistributes_in_neither_direction(self):
        assert not redistribution_filter(make_entry("connected"), "ospf_to_bgp")
        assert not redistribution_filter(make_entry("connected"), "bgp_to_ospf")

    def test_unknown_direction(self):
        with pytest.raises(ValueError):
            redistribution_filter(make_entry("ebgp"), "sideways")


class TestConverge:
    def test_empty_configs_converge_in_one_round(self, original):
        state = converge(original.topology, {})
        assert state.round_count == 1
        assert all(entries == [] for entries in state.ribs.values())

    def test_bound_respected_on_scenarios(self, original, original_view, redesigned3_view):
        for view in (original_view, redesigned3_view):
            bound = 2 * len(view.topology.devices) + 10
            assert view.converged.round_count <= bound

    def test_solved_original_prs_hold_every_vlan_and_interior(self, original_view):
        state = original_view.converged
        for n in (1, 2, 3, 4):
            prefixes = {str(e.prefix) for e in state.ribs[f"PR{n}"]}
            for j in (1, 2, 3, 4):
                assert f"192.168.{j}.0/25" in prefixes
                assert f"192.168.{j}.128/25" in prefixes
                for host_byte in (0, 64, 128, 192):
                    assert f"10.10.{j}.{host_byte}/26" in prefixes

    def test_ebgp_preferred_over_ospf_external(self):
        # R1 and R2 share an OSPF domain and both peer with R3, which
        # originates a prefix. Both see it via eBGP (pref 20) and via the
        # other's OSPF injection (pref 110): eBGP must win.
        doc = (
            "device R1 router\n  interface e0\n  interface e1\n"
            "device R2 router\n  interface e0\n  interface e1\n"
            "device R3 router\n  interface e0\n  interface e1\n  interface e2\n"
            "segment inside\nsegment up1\nsegment up2\nsegment faraway\n"
            "attach R1 e0 inside\nattach R2 e0 inside\n"
            "attach R1 e1 up1\nattach R3 e0 up1\n"
            "attach R2 e1 up2\nattach R3 e1 up2\n"
            "attach R3 e2 faraway\n"
        )
        topo = load_topology(doc)
        configs = {
            "R1": parse_config_document(
                "interface e0 ip address 10.1.0.1/24\n"
                "interface e1 ip address 10.2.0.1/30\n"
                "router ospf network 10.1.0.0/24 area 0\n"
                "router ospf redistribute bgp\n"
                "router bgp 100 neighbor 10.2.0.2 remote-as 300\n",
                topo.device("R1"),
            ),
            "R2": parse_config_document(
                "interface e0 ip address 10.1.0.2/24\n"
                "interface e1 ip address 10.3.0.1/30\n"
                "router ospf network 10.1.0.0/24 area 0\n"
                "router ospf redistribute bgp\n"
                "router bgp 200 neighbor 10.3.0.2 remote-as 300\n",
                topo.device("R2"),
            ),
            "R3": parse_config_document(
                "interface e0 ip address 10.2.0.2/30\n"
                "interface e1 ip address 10.3.0.2/30\n"
                "interface e2 ip address 172.20.0.1/24\n"
                "router bgp 300 neighbor 10.2.0.1 remote-as 100\n"
                "router bgp 300 neighbor 10.3.0.1 remote-as 200\n"
                "router bgp 300 network 172.20.0.0/24\n",
                topo.device("R3"),
            ),
        }
        state = converge(topo, configs)
        target = parse_prefix("172.20.0.0/24")
        for router in ("R1", "R2"):
            (entry,) = [e for e in state.ribs[router] if e.prefix == target]
            assert entry.origin == "ebgp"
            assert entry.preference == PREF_EBGP
            # the OSPF external candidate exists but loses
            externals = [
                r
                for r in state.ospf_routes[router]
                if r.prefix == target and r.route_class == "external"
            ]
            assert externals, "expected a competing external candidate"

    def test_preference_constants(self):
        assert PREF_CONNECTED < PREF_STATIC < PREF_EBGP < PREF_OSPF

    def test_provenance_tags_on_scenario_ribs(self, original_view):
        state = original_view.converged
        # interiors of other groups arrive via BGP as redistributed
        # routes, so they carry from_ospf and stay out of local OSPF
        for entry in state.ribs["PR1"]:
            if str(entry.prefix) == "10.10.2.64/26":
                assert entry.origin == "ebgp"
                assert entry.provenance == PROV_FROM_OSPF
            if str(entry.prefix) == "192.168.2.0/25":
                assert entry.origin == "ebgp"
                assert entry.provenance == PROV_NATIVE
        # and the external injections at the secondary are tagged from_bgp
        sr_externals = [
            e for e in state.ribs["SR1"] if e.origin == "ospf" and e.ospf_class == "external"
        ]
        assert sr_externals
        assert all(e.provenance == PROV_FROM_BGP for e in sr_externals)

    def test_no_echo_across_protocol_boundaries(self, original_view, redesigned3_view):
        # No interior prefix of one group may appear as an OSPF external
        # inside another group's domain (it would have crossed OSPF->BGP
        # and then BGP->OSPF, i.e. the same boundary twice).
        for view in (original_view, redesigned3_view):
            interiors = {
                str(p)
                for n in range(1, 5)
                for p in (
                    f"10.10.{n}.64/26",
                    f"10.10.{n}.128/26",
                    f"10.10.{n}.192/26",
                )
            }
            for device, routes in view.converged.ospf_routes.items():
                group = device[-1]
                for route in routes:
                    if route.route_class != "external":
                        continue
                    assert str(route.prefix) not in interiors - {
                        f"10.10.{group}.{b}/26" for b in (64, 128, 192)
                    }, (device, str(route.prefix))

    def test_fixpoint_stability_and_determinism(self, original):
        first = converge(original.topology, original.solved_configs)
        second = converge(original.topology, original.solved_configs)
        assert canonical_state(first) == canonical_state(second)
        assert first.round_count == second.round_count

    def test_monotone_reachability_when_configuring_more(self, original):
        partial = without_group(original, 4)
        partial_state = converge(original.topology, partial)
        full_state = converge(original.topology, original.solved_configs)
        for device, entries in partial_state.ribs.items():
            partial_pairs = {e.prefix for e in entries}
            full_pairs = {e.prefix for e in full_state.ribs[device]}
            assert partial_pairs <= full_pairs, device

    @pytest.mark.parametrize("seed", range(30))
    def test_random_labs_converge_within_bound(self, seed):
        topology, configs = random_lab(seed)
        state = converge(topology, configs)
        assert state.round_count <= 2 * len(topology.devices) + 10
        assert canonical_state(state) == canonical_state(converge(topology, configs))


class TestConvergenceUnderDegradation:
    def test_uplink_shutdown_still_converges(self, redesigned3):
        # Shutting an uplink removes the connected route behind a network
        # statement; the prefix is then BGP-learned, which must not feed
        # the statement back into an origination flap.
        configs = {k: copy.deepcopy(v) for k, v in redesigned3.solved_configs.items()}
        configs["PR1"].interfaces["F0/1"].shutdown = True
        state = converge(redesigned3.topology, configs)
        assert state.round_count <= 2 * len(redesigned3.topology.devices) + 10
        (entry,) = [
            e for e in state.ribs["PR1"] if str(e.prefix) == "192.168.101.0/24"
        ]
        assert entry.origin == "ebgp"
        assert entry.next_hop is not None

    def test_every_single_interface_shutdown_converges(self, original):
        for device, config in original.solved_configs.items():
            for ifname in config.interfaces:
                configs = {k: copy.deepcopy(v) for k, v in original.solved_configs.items()}
                configs[device].interfaces[ifname].shutdown = True
                state = converge(original.topology, configs)
                assert state.round_count <= 2 * len(original.topology.devices) + 10, (
                    device,
                    ifname,
                )

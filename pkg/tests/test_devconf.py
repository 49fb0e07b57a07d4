import copy

import pytest
from hypothesis import given
from hypothesis import strategies as st

from netlab.devconf import (
    CommandError,
    ConfigCommand,
    DeviceConfig,
    PingCommand,
    ShowCommand,
    TracerouteCommand,
    apply_config_command,
    parse_command,
    parse_config_document,
    render_config,
)
from netlab.netcore import Address
from netlab.topo import load_topology

TOPO = load_topology(
    "device R1 router\n"
    "  interface F0/0\n"
    "  interface F0/1\n"
    "  interface F0/3/0\n"
    "  interface F0/3/0.1\n"
    "device H1 host\n"
    "  interface eth0\n"
    "device SW1 switch\n"
    "  interface Gi0/1\n"
    "segment s1\n"
    "attach R1 F0/0 s1\n"
    "attach H1 eth0 s1\n"
)
R1 = TOPO.device("R1")
H1 = TOPO.device("H1")


def apply_lines(device, lines):
    config = DeviceConfig()
    for line in lines:
        command = parse_command(line)
        assert isinstance(command, ConfigCommand)
        apply_config_command(config, command, device, line)
    return config


class TestGrammar:
    def test_interface_address(self):
        config = apply_lines(R1, ["interface F0/0 ip address 192.168.100.1/24"])
        assert config.interfaces["F0/0"].address == (Address.parse("192.168.100.1"), 24)

    def test_bgp_neighbor(self):
        config = apply_lines(R1, ["router bgp 101 neighbor 192.168.100.254 remote-as 201"])
        assert config.bgp.local_as == 101
        assert config.bgp.neighbors == [(Address.parse("192.168.100.254"), 201)]

    def test_bgp_as_mismatch(self):
        config = apply_lines(R1, ["router bgp 101 network 10.0.0.0/8"])
        with pytest.raises(CommandError, match="AS 101"):
            apply_config_command(
                config, parse_command("router bgp 102 network 10.0.0.0/8"), R1
            )

    def test_show_and_query_commands(self):
        assert parse_command("show ip route") == ShowCommand("route")
        assert parse_command("show ip bgp") == ShowCommand("bgp")
        assert parse_command("show ip ospf neighbor") == ShowCommand("ospf_neighbor")
        assert parse_command("show run") == ShowCommand("run")
        assert parse_command("ping 10.0.0.1") == PingCommand(Address.parse("10.0.0.1"))
        assert parse_command("traceroute 10.0.0.1") == TracerouteCommand(Address.parse("10.0.0.1"))

    def test_parse_error_has_caret_at_bad_token(self):
        with pytest.raises(CommandError) as err:
            parse_command("interface F0/0 ip addres 1.2.3.4/24")
        rendered = err.value.rendered()
        lines = rendered.splitlines()
        assert lines[0].startswith("% ")
        assert lines[1] == "  interface F0/0 ip addres 1.2.3.4/24"
        # caret under 'addres' (column 19)
        assert lines[2] == "  " + " " * 18 + "^"

    def test_unknown_command(self):
        with pytest.raises(CommandError, match="unknown command"):
            parse_command("configure terminal")

    def test_interface_mask_bounds(self):
        for bad in ("1.2.3.4/0", "1.2.3.4/32"):
            with pytest.raises(CommandError, match="1-31"):
                parse_command(f"interface F0/0 ip address {bad}")

    def test_redistribute_metric(self):
        config = apply_lines(R1, ["router ospf redistribute bgp metric 50"])
        assert config.ospf.redistribute_bgp and config.ospf.external_metric == 50

    def test_static_route_normalizes_prefix(self):
        config = apply_lines(R1, ["ip route 10.20.30.77/24 via 192.168.1.1"])
        assert str(config.statics[0].prefix) == "10.20.30.0/24"


class TestSemantics:
    def test_unknown_interface(self):
        with pytest.raises(CommandError, match="unknown interface"):
            apply_lines(R1, ["interface F9/9 ip address 1.2.3.4/24"])

    def test_host_form_only_on_hosts(self):
        config = apply_lines(H1, ["ip address 192.168.1.10/25 gateway 192.168.1.1"])
        assert config.gateway == Address.parse("192.168.1.1")
        with pytest.raises(CommandError, match="needs a host"):
            apply_lines(R1, ["ip address 192.168.1.10/25 gateway 192.168.1.1"])

    def test_router_commands_rejected_on_hosts_and_switches(self):
        with pytest.raises(CommandError, match="need a router"):
            apply_lines(H1, ["router ospf network 10.0.0.0/8 area 0"])
        with pytest.raises(CommandError, match="need a router"):
            apply_lines(TOPO.device("SW1"), ["interface Gi0/1 shutdown"])

    def test_shutdown_cycle(self):
        config = apply_lines(R1, ["interface F0/0 ip address 1.2.3.4/24", "interface F0/0 shutdown"])
        assert config.interfaces["F0/0"].shutdown
        apply_config_command(config, parse_command("interface F0/0 no shutdown"), R1)
        assert not config.interfaces["F0/0"].shutdown

    def test_neighbor_update_replaces(self):
        config = apply_lines(
            R1,
            [
                "router bgp 101 neighbor 10.0.0.2 remote-as 102",
                "router bgp 101 neighbor 10.0.0.2 remote-as 103",
            ],
        )
        assert config.bgp.neighbors == [(Address.parse("10.0.0.2"), 103)]

    def test_static_route_replaces_same_prefix(self):
        config = apply_lines(
            R1,
            ["ip route 0.0.0.0/0 via 10.0.0.1", "ip route 0.0.0.0/0 via 10.0.0.2"],
        )
        assert len(config.statics) == 1
        assert config.statics[0].next_hop == Address.parse("10.0.0.2")


CONFIG_LINES = [
    "interface F0/0 ip address 192.168.100.1/30",
    "interface F0/1 ip address 10.10.1.2/26",
    "interface F0/1 shutdown",
    "ip route 0.0.0.0/0 via 192.168.100.2",
    "router ospf network 10.10.1.0/26 area 0",
    "router ospf passive-interface F0/0",
    "router ospf redistribute bgp",
    "router bgp 101 neighbor 192.168.100.2 remote-as 102",
    "router bgp 101 network 10.10.1.0/26",
    "router bgp 101 redistribute ospf",
]


class TestRoundTripAndIdempotence:
    def test_render_parse_round_trip(self):
        config = apply_lines(R1, CONFIG_LINES)
        rendered = render_config(config)
        assert parse_config_document(rendered, R1) == config
        # rendering is canonical: round-tripping the rendering is stable
        assert render_config(parse_config_document(rendered, R1)) == rendered

    def test_show_run_reproduces_commands_verbatim(self):
        lines = [
            "interface F0/0 ip address 192.168.100.1/24",
            "router bgp 101 neighbor 192.168.100.254 remote-as 201",
        ]
        rendered = render_config(apply_lines(R1, lines))
        assert rendered.splitlines() == lines

    def test_empty_config_renders_empty(self):
        assert render_config(DeviceConfig()) == ""

    @given(st.sampled_from(CONFIG_LINES))
    def test_commands_idempotent(self, line):
        base = apply_lines(R1, CONFIG_LINES)
        once = copy.deepcopy(base)
        apply_config_command(once, parse_command(line), R1, line)
        twice = copy.deepcopy(once)
        apply_config_command(twice, parse_command(line), R1, line)
        assert once == twice

    @given(st.permutations(["interface F0/0 ip address 1.1.1.1/24", "interface F0/1 ip address 2.2.2.2/24"]))
    def test_commands_on_distinct_interfaces_commute(self, ordering):
        assert apply_lines(R1, list(ordering)) == apply_lines(
            R1,
            [
                "interface F0/0 ip address 1.1.1.1/24",
                "interface F0/1 ip address 2.2.2.2/24",
            ],
        )

    def test_host_config_round_trip(self):
        config = apply_lines(H1, ["ip address 192.168.1.10/25 gateway 192.168.1.1"])
        rendered = render_config(config)
        assert rendered == "ip address 192.168.1.10/25 gateway 192.168.1.1\n"
        assert parse_config_document(rendered, H1) == config

    def test_config_document_rejects_queries(self):
        with pytest.raises(CommandError, match="configuration commands"):
            parse_config_document("show ip route\n", R1)

    def test_scenario_configs_round_trip(self, original):
        for name, config in original.solved_configs.items():
            device = original.topology.device(name)
            assert parse_config_document(render_config(config), device) == config

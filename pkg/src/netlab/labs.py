"""Built-in lab scenarios and the automated task checker.

Two scenarios ship with the simulator:

* ``original`` — four groups in a ring of /30 eBGP peerings. Each group
  runs a primary router (multi-homed to two neighbor groups), a
  secondary router behind it carrying the OSPF interior (area 0 core
  plus three area 1 LANs), and one workstation on VLAN 1. Groups depend
  on each other: the ring only delivers traffic end to end once every
  group is configured.

* ``redesigned`` — a parametric number of groups, all peering with the
  same pre-configured demo networks (AS 201 and AS 203 on two shared
  backbone segments, AS 202 reachable only through them). Groups are
  fully independent of one another.

The 17-step task list is checked against converged state; the checks
for a group reference only that group's own devices and the demo
networks, so in ``redesigned`` a group's report does not depend on what
other groups have done.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .bgp import ORIGIN_NETWORK, ORIGIN_REDISTRIBUTED, SESSION_ESTABLISHED
from .dataplane import DataplaneError, Forwarder
from .devconf import DeviceConfig, parse_config_document
from .netcore import Address, Prefix, parse_prefix
from .ospf import CLASS_EXTERNAL
from .topo import Topology, load_topology

__all__ = [
    "GroupPlan",
    "Scenario",
    "TaskResult",
    "TaskReport",
    "SCENARIO_NAMES",
    "MAX_REDESIGNED_GROUPS",
    "build_original",
    "build_redesigned",
    "build_scenario",
    "evaluate_tasks",
]

SCENARIO_NAMES = ("original", "redesigned")

# Table-driven addressing keeps groups to two digits: group VLAN nets use
# 192.168.<n>.0/24 space, which would collide with the 192.168.100/101
# peering backbones (and AS 201) from group 100 up.
MAX_REDESIGNED_GROUPS = 99

TASK_IDS = tuple(range(1, 18))


@dataclass(frozen=True)
class GroupPlan:
    """Per-group devices and check targets, fixed by the scenario."""

    number: int
    as_number: int
    pr: str
    sr: str
    ws: str
    ws_address: Address
    ping_targets: Tuple[Address, ...]  # tasks 6/15 (and 7/16)
    learn_targets: Tuple[Prefix, ...]  # task 4
    as_targets: Tuple[Tuple[int, Address], ...]  # task 8
    remote_holders: Tuple[str, ...]  # tasks 5/14
    advertised_prefixes: Tuple[Prefix, ...]  # what remote holders must hold
    interior_prefixes: Tuple[Prefix, ...]  # task 12
    external_targets: Tuple[Prefix, ...]  # task 13


@dataclass(frozen=True)
class Scenario:
    name: str
    group_count: int
    topology: Topology
    solved_configs: Dict[str, DeviceConfig]
    student_devices: frozenset
    demo_devices: frozenset
    groups: Dict[int, GroupPlan]


@dataclass(frozen=True)
class TaskResult:
    id: int
    status: str  # pass | fail | not_applicable
    evidence: str


@dataclass(frozen=True)
class TaskReport:
    group: int
    tasks: Tuple[TaskResult, ...]

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "tasks": [
                {"id": t.id, "status": t.status, "evidence": t.evidence} for t in self.tasks
            ],
        }

    def passed(self) -> bool:
        return all(t.status != "fail" for t in self.tasks)


def _group_lan_doc(n: int) -> List[str]:
    """Topology lines shared by both scenarios for group n."""
    return [
        f"device PR{n} router",
        "  interface F0/0",
        "  interface F0/1",
        "  interface F0/3/0",
        "  interface F0/3/0.1",
        "  interface F0/3/0.2",
        "  interface F0/3/1",
        f"device SR{n} router",
        "  interface E1/0",
        "  interface E1/1",
        "  interface E1/2",
        "  interface E1/3",
        f"device WS{n} host",
        "  interface eth0",
        f"segment vlan1-{n} vlan 1",
        f"segment vlan2-{n} vlan 2",
        f"segment core-{n}",
        f"segment lan1-{n}",
        f"segment lan2-{n}",
        f"segment lan3-{n}",
        f"attach PR{n} F0/3/0.1 vlan1-{n}",
        f"attach PR{n} F0/3/0.2 vlan2-{n}",
        f"attach PR{n} F0/3/1 core-{n}",
        f"attach SR{n} E1/0 core-{n}",
        f"attach SR{n} E1/1 lan1-{n}",
        f"attach SR{n} E1/2 lan2-{n}",
        f"attach SR{n} E1/3 lan3-{n}",
        f"attach WS{n} eth0 vlan1-{n}",
    ]


def _group_config_docs(
    n: int,
    peerings: Sequence[Tuple[str, str, str, int]],
) -> Dict[str, str]:
    """Solved config documents for group n.

    `peerings` rows are (interface, own address/len, neighbor address,
    neighbor AS) for the primary router's two uplinks.
    """
    asn = 100 + n
    pr_lines = []
    for iface, addr, _, _ in peerings:
        pr_lines.append(f"interface {iface} ip address {addr}")
    pr_lines += [
        f"interface F0/3/0.1 ip address 192.168.{n}.1/25",
        f"interface F0/3/0.2 ip address 192.168.{n}.129/25",
        f"interface F0/3/1 ip address 10.10.{n}.2/26",
    ]
    for _, _, neighbor, remote_as in peerings:
        pr_lines.append(f"router bgp {asn} neighbor {neighbor} remote-as {remote_as}")
    for _, addr, _, _ in peerings:
        pr_lines.append(f"router bgp {asn} network {parse_prefix(addr)}")
    pr_lines += [
        f"router bgp {asn} network 192.168.{n}.0/25",
        f"router bgp {asn} network 192.168.{n}.128/25",
        f"router bgp {asn} network 10.10.{n}.0/26",
        f"router bgp {asn} redistribute ospf",
        f"router ospf network 10.10.{n}.0/26 area 0",
    ]
    for _, addr, _, _ in peerings:
        pr_lines.append(f"router ospf network {parse_prefix(addr)} area 0")
    for iface, _, _, _ in peerings:
        pr_lines.append(f"router ospf passive-interface {iface}")
    pr_lines.append("router ospf redistribute bgp")

    sr_lines = [
        f"interface E1/0 ip address 10.10.{n}.1/26",
        f"interface E1/1 ip address 10.10.{n}.65/26",
        f"interface E1/2 ip address 10.10.{n}.129/26",
        f"interface E1/3 ip address 10.10.{n}.193/26",
        f"router ospf network 10.10.{n}.0/26 area 0",
        f"router ospf network 10.10.{n}.64/26 area 1",
        f"router ospf network 10.10.{n}.128/26 area 1",
        f"router ospf network 10.10.{n}.192/26 area 1",
    ]
    ws_lines = [f"ip address 192.168.{n}.10/25 gateway 192.168.{n}.1"]
    return {
        f"PR{n}": "\n".join(pr_lines) + "\n",
        f"SR{n}": "\n".join(sr_lines) + "\n",
        f"WS{n}": "\n".join(ws_lines) + "\n",
    }


def _interior(n: int) -> Tuple[Prefix, ...]:
    return (
        parse_prefix(f"10.10.{n}.64/26"),
        parse_prefix(f"10.10.{n}.128/26"),
        parse_prefix(f"10.10.{n}.192/26"),
    )


def _vlans(n: int) -> Tuple[Prefix, ...]:
    return (parse_prefix(f"192.168.{n}.0/25"), parse_prefix(f"192.168.{n}.128/25"))


# Primary-router uplink addressing of the four-group ring, one /30 per
# adjacent pair: 1-2 at .0, 2-3 at .4, 3-4 at .8, 4-1 at .12.
_RING_UPLINKS = {
    1: {"F0/0": "192.168.100.1/30", "F0/1": "192.168.100.14/30"},
    2: {"F0/0": "192.168.100.2/30", "F0/1": "192.168.100.5/30"},
    3: {"F0/0": "192.168.100.9/30", "F0/1": "192.168.100.6/30"},
    4: {"F0/0": "192.168.100.10/30", "F0/1": "192.168.100.13/30"},
}


def build_original() -> Scenario:
    """The four-group ring exercise."""
    groups = (1, 2, 3, 4)

    # Pair uplinks sharing a /30 into ring segments and neighbor entries.
    by_prefix: Dict[Prefix, List[Tuple[int, str, Address]]] = {}
    for n in groups:
        for iface, text in _RING_UPLINKS[n].items():
            addr = Address.parse(text.split("/")[0])
            by_prefix.setdefault(parse_prefix(text), []).append((n, iface, addr))
    ring_segments: Dict[Prefix, str] = {}
    neighbor_of: Dict[Tuple[int, str], Tuple[Address, int]] = {}
    attach_lines: List[str] = []
    segment_lines: List[str] = []
    for prefix in sorted(by_prefix):
        (na, ifa, aa), (nb, ifb, ab) = sorted(by_prefix[prefix])
        seg = f"ring-{na}-{nb}"
        ring_segments[prefix] = seg
        segment_lines.append(f"segment {seg}")
        attach_lines.append(f"attach PR{na} {ifa} {seg}")
        attach_lines.append(f"attach PR{nb} {ifb} {seg}")
        neighbor_of[(na, ifa)] = (ab, 100 + nb)
        neighbor_of[(nb, ifb)] = (aa, 100 + na)

    doc_lines: List[str] = []
    for n in groups:
        doc_lines += _group_lan_doc(n)
    doc_lines += segment_lines + attach_lines
    topology = load_topology("\n".join(doc_lines) + "\n")

    configs: Dict[str, DeviceConfig] = {}
    for n in groups:
        peerings = []
        for iface in ("F0/0", "F0/1"):
            neighbor, remote_as = neighbor_of[(n, iface)]
            peerings.append((iface, _RING_UPLINKS[n][iface], str(neighbor), remote_as))
        for name, doc in _group_config_docs(n, peerings).items():
            configs[name] = parse_config_document(doc, topology.device(name))

    plans: Dict[int, GroupPlan] = {}
    for n in groups:
        others = [j for j in groups if j != n]
        plans[n] = GroupPlan(
            number=n,
            as_number=100 + n,
            pr=f"PR{n}",
            sr=f"SR{n}",
            ws=f"WS{n}",
            ws_address=Address.parse(f"192.168.{n}.10"),
            ping_targets=tuple(Address.parse(f"192.168.{j}.10") for j in others),
            learn_targets=tuple(parse_prefix(f"192.168.{j}.0/25") for j in others),
            as_targets=tuple((100 + j, Address.parse(f"192.168.{j}.1")) for j in others),
            remote_holders=tuple(f"PR{j}" for j in others),
            advertised_prefixes=_vlans(n),
            interior_prefixes=_interior(n),
            external_targets=tuple(p for j in others for p in _vlans(j)),
        )

    return Scenario(
        name="original",
        group_count=4,
        topology=topology,
        solved_configs=configs,
        student_devices=frozenset(d.name for d in topology.devices),
        demo_devices=frozenset(),
        groups=plans,
    )


_DEMO_STUBS = {
    201: "172.16.1.0/24",
    202: "172.16.2.0/24",
    203: "172.16.3.0/24",
}


def _demo_docs(group_numbers: Sequence[int]) -> Dict[str, str]:
    d201 = [
        "interface F0/0 ip address 192.168.100.254/24",
        "interface F0/1 ip address 172.31.1.1/30",
        "interface F0/2 ip address 172.16.1.1/24",
        "router bgp 201 neighbor 172.31.1.2 remote-as 202",
    ]
    for n in group_numbers:
        d201.append(f"router bgp 201 neighbor 192.168.100.{n} remote-as {100 + n}")
    d201 += [
        "router bgp 201 network 172.16.1.0/24",
        "router bgp 201 network 172.31.1.0/30",
        "router bgp 201 network 192.168.100.0/24",
    ]
    d202 = [
        "interface F0/0 ip address 172.31.1.2/30",
        "interface F0/1 ip address 172.31.2.1/30",
        "interface F0/2 ip address 172.16.2.1/24",
        "router bgp 202 neighbor 172.31.1.1 remote-as 201",
        "router bgp 202 neighbor 172.31.2.2 remote-as 203",
        "router bgp 202 network 172.16.2.0/24",
        "router bgp 202 network 172.31.1.0/30",
        "router bgp 202 network 172.31.2.0/30",
    ]
    d203 = [
        "interface F0/0 ip address 192.168.101.254/24",
        "interface F0/1 ip address 172.31.2.2/30",
        "interface F0/2 ip address 172.16.3.1/24",
        "router bgp 203 neighbor 172.31.2.1 remote-as 202",
    ]
    for n in group_numbers:
        d203.append(f"router bgp 203 neighbor 192.168.101.{n} remote-as {100 + n}")
    d203 += [
        "router bgp 203 network 172.16.3.0/24",
        "router bgp 203 network 172.31.2.0/30",
        "router bgp 203 network 192.168.101.0/24",
    ]
    return {
        "D201": "\n".join(d201) + "\n",
        "D202": "\n".join(d202) + "\n",
        "D203": "\n".join(d203) + "\n",
    }


def build_redesigned(group_count: int) -> Scenario:
    """The shared-backbone exercise with pre-configured demo networks."""
    if not 1 <= group_count <= MAX_REDESIGNED_GROUPS:
        raise ValueError(
            f"group count must be 1-{MAX_REDESIGNED_GROUPS}, got {group_count}"
        )
    groups = tuple(range(1, group_count + 1))

    doc_lines: List[str] = [
        "segment peer1",
        "segment peer2",
        "segment demo-core-a",
        "segment demo-core-b",
        "segment demo-lan-201",
        "segment demo-lan-202",
        "segment demo-lan-203",
    ]
    for asn in (201, 202, 203):
        doc_lines += [
            f"device D{asn} router",
            "  interface F0/0",
            "  interface F0/1",
            "  interface F0/2",
        ]
    doc_lines += [
        "attach D201 F0/0 peer1",
        "attach D201 F0/1 demo-core-a",
        "attach D201 F0/2 demo-lan-201",
        "attach D202 F0/0 demo-core-a",
        "attach D202 F0/1 demo-core-b",
        "attach D202 F0/2 demo-lan-202",
        "attach D203 F0/0 peer2",
        "attach D203 F0/1 demo-core-b",
        "attach D203 F0/2 demo-lan-203",
    ]
    for n in groups:
        doc_lines += _group_lan_doc(n)
        doc_lines += [f"attach PR{n} F0/0 peer1", f"attach PR{n} F0/1 peer2"]
    topology = load_topology("\n".join(doc_lines) + "\n")

    configs: Dict[str, DeviceConfig] = {}
    for name, doc in _demo_docs(groups).items():
        configs[name] = parse_config_document(doc, topology.device(name))
    for n in groups:
        peerings = [
            ("F0/0", f"192.168.100.{n}/24", "192.168.100.254", 201),
            ("F0/1", f"192.168.101.{n}/24", "192.168.101.254", 203),
        ]
        for name, doc in _group_config_docs(n, peerings).items():
            configs[name] = parse_config_document(doc, topology.device(name))

    demo_stub_prefixes = tuple(parse_prefix(_DEMO_STUBS[a]) for a in (201, 202, 203))
    # The demo routers own the first host address of their stub networks.
    demo_hosts = {a: Address(parse_prefix(_DEMO_STUBS[a]).network.value + 1) for a in _DEMO_STUBS}
    plans: Dict[int, GroupPlan] = {}
    for n in groups:
        plans[n] = GroupPlan(
            number=n,
            as_number=100 + n,
            pr=f"PR{n}",
            sr=f"SR{n}",
            ws=f"WS{n}",
            ws_address=Address.parse(f"192.168.{n}.10"),
            ping_targets=tuple(demo_hosts[a] for a in (201, 202, 203)),
            learn_targets=demo_stub_prefixes,
            as_targets=tuple((a, demo_hosts[a]) for a in (201, 202, 203)),
            remote_holders=("D201", "D202", "D203"),
            advertised_prefixes=_vlans(n),
            interior_prefixes=_interior(n),
            external_targets=demo_stub_prefixes,
        )

    student = frozenset(
        name for n in groups for name in (f"PR{n}", f"SR{n}", f"WS{n}")
    )
    return Scenario(
        name="redesigned",
        group_count=group_count,
        topology=topology,
        solved_configs=configs,
        student_devices=student,
        demo_devices=frozenset(("D201", "D202", "D203")),
        groups=plans,
    )


def build_scenario(name: str, groups: Optional[int] = None) -> Scenario:
    if name == "original":
        if groups not in (None, 4):
            raise ValueError("scenario 'original' is fixed at 4 groups")
        return build_original()
    if name == "redesigned":
        return build_redesigned(4 if groups is None else groups)
    raise ValueError(f"unknown scenario {name!r}")


def evaluate_tasks(session, scenario: Scenario, group: int) -> TaskReport:
    """Check the 17 lab tasks for one group against converged state.

    `session` needs `.topology`, `.configs` and `.converged`. Checks are
    scoped to the group's own devices plus the scenario's fixed targets,
    so in `redesigned` a group's report is independent of other groups.
    """
    if group not in scenario.groups:
        raise ValueError(f"unknown group {group}")
    plan = scenario.groups[group]
    configs = session.configs
    state = session.converged
    fwd = Forwarder(session.topology, configs, state)

    pr_cfg = configs.get(plan.pr) or DeviceConfig()
    sr_cfg = configs.get(plan.sr) or DeviceConfig()
    plan_pr = scenario.solved_configs[plan.pr]
    plan_sr = scenario.solved_configs[plan.sr]

    def iface_check(device: str, planned: DeviceConfig, actual: DeviceConfig):
        want = {
            name: ic.address
            for name, ic in planned.interfaces.items()
            if ic.address is not None
        }
        missing = sorted(
            name
            for name, address in want.items()
            if name not in actual.interfaces or actual.interfaces[name].address != address
        )
        if missing:
            return False, (
                f"{device}: {len(missing)} of {len(want)} planned addresses missing"
                f" (first: {missing[0]})"
            )
        return True, f"{device}: {len(want)}/{len(want)} planned interface addresses configured"

    established = {
        s.peer_address
        for s in state.sessions
        if s.local_device == plan.pr and s.state == SESSION_ESTABLISHED
    }
    planned_neighbors = [addr for addr, _ in (plan_pr.bgp.neighbors if plan_pr.bgp else [])]

    def sessions_check():
        if not established:
            return False, "no established sessions"
        missing = [str(a) for a in planned_neighbors if a not in established]
        if missing:
            return False, f"{plan.pr}: session to {missing[0]} not established"
        total = len(planned_neighbors)
        return True, f"{plan.pr}: {total}/{total} BGP sessions established"

    table = state.bgp_tables.get(plan.pr, [])

    def origination_check(prefixes: Sequence[Prefix], origin: str, label: str):
        have = {r.prefix for r in table if not r.as_path and r.origin == origin}
        missing = sorted(p for p in prefixes if p not in have)
        if missing:
            return False, f"{plan.pr}: {label} missing for {missing[0]}"
        return True, f"{plan.pr}: {len(prefixes)}/{len(prefixes)} {label}"

    def learned_check():
        if not established:
            return False, "no established sessions"
        have = {r.prefix for r in table if r.as_path}
        missing = sorted(p for p in plan.learn_targets if p not in have)
        if missing:
            return False, f"{plan.pr}: route for {missing[0]} not learned from peers"
        total = len(plan.learn_targets)
        return True, f"{plan.pr}: {total}/{total} peer routes learned"

    def holders_check():
        if not established:
            return False, "no established sessions"
        holders = [
            h
            for h in plan.remote_holders
            if configs.get(h) is not None and configs[h].bgp is not None
        ]
        if not holders:
            return False, "no established sessions"
        for holder in holders:
            held = {r.prefix for r in state.bgp_tables.get(holder, []) if r.as_path}
            for prefix in plan.advertised_prefixes:
                if prefix not in held:
                    return False, f"{holder} is not holding {prefix}"
        return True, (
            f"{len(plan.advertised_prefixes)} group prefixes held by "
            f"{len(holders)}/{len(plan.remote_holders)} remote routers"
        )

    def ping_check():
        for target in plan.ping_targets:
            result = fwd.ping(plan.ws, target)
            if not result.success:
                return False, f"{plan.ws}: ping {target} failed ({result.error})"
        total = len(plan.ping_targets)
        return True, f"{plan.ws}: ping {total}/{total} targets ok"

    def traceroute_check():
        for target in plan.ping_targets:
            result = fwd.traceroute(plan.ws, target)
            if not result.complete or result.hops[-1].ingress_address != target:
                return False, f"{plan.ws}: traceroute to {target} did not terminate"
        total = len(plan.ping_targets)
        return True, f"{plan.ws}: traceroute {total}/{total} targets terminated"

    def as_path_check():
        for asn, representative in plan.as_targets:
            try:
                path = fwd.as_path_query(plan.pr, representative)
            except DataplaneError:
                return False, f"{plan.pr}: no AS path for AS {asn}"
            if not path or path[-1] != asn:
                return False, f"{plan.pr}: AS path for AS {asn} does not end there"
        total = len(plan.as_targets)
        return True, f"{plan.pr}: AS paths resolved for {total}/{total} autonomous systems"

    def passive_check():
        if pr_cfg.ospf is None or sr_cfg.ospf is None:
            return False, f"OSPF not configured on both {plan.pr} and {plan.sr}"
        planned_passive = sorted(plan_pr.ospf.passive_interfaces if plan_pr.ospf else [])
        missing = [
            name for name in planned_passive if name not in pr_cfg.ospf.passive_interfaces
        ]
        if missing:
            return False, f"{plan.pr}: passive-interface missing for {missing[0]}"
        return True, f"OSPF running on {plan.pr} and {plan.sr}; peering interfaces passive"

    def redistribution_into_ospf_check():
        if pr_cfg.ospf is None or not pr_cfg.ospf.redistribute_bgp:
            return False, f"{plan.pr}: OSPF is not redistributing BGP"
        externals = {
            r.prefix
            for r in state.ospf_routes.get(plan.sr, [])
            if r.route_class == CLASS_EXTERNAL
        }
        missing = sorted(p for p in plan.external_targets if p not in externals)
        if missing:
            return False, f"{plan.sr}: external route for {missing[0]} missing"
        total = len(plan.external_targets)
        return True, f"{plan.sr}: {total}/{total} external networks learned via OSPF"

    def redistribution_into_bgp_check():
        if pr_cfg.bgp is None or not pr_cfg.bgp.redistribute_ospf:
            return False, f"{plan.pr}: BGP is not redistributing OSPF"
        return origination_check(
            plan.interior_prefixes, ORIGIN_REDISTRIBUTED, "interior networks redistributed"
        )

    network_statements = list(plan_pr.bgp.networks) if plan_pr.bgp else []

    checks = {
        1: lambda: iface_check(plan.pr, plan_pr, pr_cfg),
        2: sessions_check,
        3: lambda: origination_check(network_statements, ORIGIN_NETWORK, "connected networks advertised"),
        4: learned_check,
        5: holders_check,
        6: ping_check,
        7: traceroute_check,
        8: as_path_check,
        9: sessions_check,
        10: lambda: iface_check(plan.sr, plan_sr, sr_cfg),
        11: passive_check,
        12: redistribution_into_bgp_check,
        13: redistribution_into_ospf_check,
        14: holders_check,
        15: ping_check,
        16: traceroute_check,
        17: lambda: (True, "running-config, routing table and BGP table rendered"),
    }

    results = []
    for task_id in TASK_IDS:
        ok, evidence = checks[task_id]()
        results.append(TaskResult(task_id, "pass" if ok else "fail", evidence))
    return TaskReport(group=group, tasks=tuple(results))

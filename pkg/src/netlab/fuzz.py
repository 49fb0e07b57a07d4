"""Seeded random small topologies for convergence stress checks.

Each generated lab has up to six routers on random shared segments,
random OSPF areas and passive interfaces, random eBGP peerings (some
deliberately misconfigured), network statements for connected subnets,
and random mutual redistribution. Generation is a pure function of the
seed.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from .devconf import DeviceConfig, parse_config_document
from .topo import Topology, load_topology

__all__ = ["random_lab"]


def random_lab(seed: int) -> Tuple[Topology, Dict[str, DeviceConfig]]:
    rng = random.Random(seed)
    n_routers = rng.randint(2, 6)
    routers = [f"R{i}" for i in range(1, n_routers + 1)]

    n_segments = rng.randint(max(1, n_routers - 1), n_routers + 2)
    members: List[List[str]] = []
    for s in range(n_segments):
        size = rng.choice((2, 2, 2, 3))
        members.append(rng.sample(routers, min(size, n_routers)))
    # Chain segments so the graph is usually connected.
    for s in range(1, n_segments):
        if rng.random() < 0.8 and routers:
            carry = members[s - 1][0]
            if carry not in members[s]:
                members[s][0] = carry

    iface_count = {r: 0 for r in routers}
    attachments: List[Tuple[str, str, str]] = []
    addresses: Dict[Tuple[str, str], str] = {}
    seg_area: Dict[str, int] = {}
    lines: List[str] = []
    for r in routers:
        lines.append(f"device {r} router")
        for s in range(n_segments + 2):
            lines.append(f"  interface eth{s}")
    for s, segment_members in enumerate(members):
        seg = f"net{s}"
        lines.append(f"segment {seg}")
        seg_area[seg] = 0 if rng.random() < 0.75 else 1
        for k, r in enumerate(segment_members):
            iface = f"eth{iface_count[r]}"
            iface_count[r] += 1
            attachments.append((r, iface, seg))
            addresses[(r, iface)] = f"10.50.{s}.{k + 1}/29"
    stub_id = 0
    for r in routers:
        if rng.random() < 0.5:
            seg = f"stub{stub_id}"
            lines.append(f"segment {seg}")
            seg_area[seg] = 0 if rng.random() < 0.6 else 1
            iface = f"eth{iface_count[r]}"
            iface_count[r] += 1
            attachments.append((r, iface, seg))
            addresses[(r, iface)] = f"10.60.{stub_id}.1/26"
            stub_id += 1
    for r, iface, seg in attachments:
        lines.append(f"attach {r} {iface} {seg}")
    topology = load_topology("\n".join(lines) + "\n")

    as_of = {r: rng.randint(1, 5) * 100 for r in routers}
    run_ospf = {r: rng.random() < 0.85 for r in routers}
    run_bgp = {r: rng.random() < 0.75 for r in routers}

    seg_of: Dict[Tuple[str, str], str] = {(r, i): s for r, i, s in attachments}
    on_segment: Dict[str, List[Tuple[str, str]]] = {}
    for r, iface, seg in attachments:
        on_segment.setdefault(seg, []).append((r, iface))

    configs: Dict[str, DeviceConfig] = {}
    for r in routers:
        doc: List[str] = []
        for (rr, iface), addr in addresses.items():
            if rr == r:
                doc.append(f"interface {iface} ip address {addr}")
        if run_ospf[r]:
            for (rr, iface), addr in addresses.items():
                if rr != r:
                    continue
                seg = seg_of[(r, iface)]
                net = addr.rsplit(".", 1)[0] + ".0/" + addr.split("/")[1]
                doc.append(f"router ospf network {net} area {seg_area[seg]}")
                if rng.random() < 0.15:
                    doc.append(f"router ospf passive-interface {iface}")
        if run_bgp[r]:
            asn = as_of[r]
            for (rr, iface), addr in addresses.items():
                if rr != r:
                    continue
                seg = seg_of[(r, iface)]
                for other, other_iface in on_segment.get(seg, ()):
                    if other == r or not run_bgp[other]:
                        continue
                    if rng.random() < 0.8:
                        other_addr = addresses[(other, other_iface)].split("/")[0]
                        remote = as_of[other] if rng.random() < 0.85 else as_of[other] + 7
                        doc.append(f"router bgp {asn} neighbor {other_addr} remote-as {remote}")
            for (rr, iface), addr in addresses.items():
                if rr == r and rng.random() < 0.6:
                    net = addr.rsplit(".", 1)[0] + ".0/" + addr.split("/")[1]
                    doc.append(f"router bgp {asn} network {net}")
            if run_ospf[r] and rng.random() < 0.6:
                doc.append(f"router bgp {asn} redistribute ospf")
        if run_ospf[r] and run_bgp[r] and rng.random() < 0.6:
            doc.append("router ospf redistribute bgp")
        configs[r] = parse_config_document("\n".join(doc) + "\n", topology.device(r))
    return topology, configs

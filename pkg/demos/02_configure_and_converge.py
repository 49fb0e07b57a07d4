"""
Configuring two routers and watching OSPF and BGP converge
==========================================================

A miniature multi-homed setup: one interior router pair running OSPF,
an eBGP uplink, and mutual redistribution — the same moves the full
exercises are made of, at the smallest scale that shows them.
"""

from netlab import converge, load_topology
from netlab.devconf import parse_config_document
from netlab.render import render_bgp_table, render_route_table

topology = load_topology(
    """\
device EDGE router
  interface F0/0
  interface F0/1
device CORE router
  interface E1/0
  interface E1/1
device ISP router
  interface F0/0
  interface F0/1
segment interior
segment lan
segment uplink
segment isp-lan
attach EDGE F0/1 interior
attach CORE E1/0 interior
attach CORE E1/1 lan
attach EDGE F0/0 uplink
attach ISP F0/0 uplink
attach ISP F0/1 isp-lan
"""
)

configs = {
    "EDGE": parse_config_document(
        """\
interface F0/0 ip address 203.0.113.2/30
interface F0/1 ip address 10.0.0.1/30
router ospf network 10.0.0.0/30 area 0
router ospf redistribute bgp
router bgp 65001 neighbor 203.0.113.1 remote-as 65000
router bgp 65001 network 10.0.0.0/30
router bgp 65001 redistribute ospf
""",
        topology.device("EDGE"),
    ),
    "CORE": parse_config_document(
        """\
interface E1/0 ip address 10.0.0.2/30
interface E1/1 ip address 10.1.0.1/24
router ospf network 10.0.0.0/30 area 0
router ospf network 10.1.0.0/24 area 1
""",
        topology.device("CORE"),
    ),
    "ISP": parse_config_document(
        """\
interface F0/0 ip address 203.0.113.1/30
interface F0/1 ip address 198.51.100.1/24
router bgp 65000 neighbor 203.0.113.2 remote-as 65001
router bgp 65000 network 198.51.100.0/24
""",
        topology.device("ISP"),
    ),
}

state = converge(topology, configs)
print(f"converged in {state.round_count} rounds")
print(f"adjacencies: {[(a.device_a, a.device_b, a.area) for a in state.adjacencies]}")
print(f"sessions: {[(s.local_device, s.peer_device, s.state) for s in state.sessions]}")

# The edge router sees the interior LAN behind the area border router
# and the provider prefix over eBGP.
print("\nEDGE routing table:")
print(render_route_table(state.ribs["EDGE"]))

# The core router never speaks BGP, yet it reaches the provider LAN:
# the edge redistributes BGP into OSPF (an external with fixed metric).
print("CORE routing table:")
print(render_route_table(state.ribs["CORE"]))

# In the other direction, the interior LAN was learned via OSPF and
# redistributed into BGP, so the provider finds its way back.
print("ISP BGP table:")
print(render_bgp_table(state.bgp_tables["ISP"], 65000))

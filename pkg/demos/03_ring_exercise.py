"""
The four-group ring: why everyone depends on everyone
=====================================================

In the `original` scenario each group peers with its two neighbors on
/30 links, closing a ring. Traffic between groups transits other
groups' routers — so one unconfigured group degrades or breaks paths
for the rest. This script shows both the healthy ring and the degraded
one.
"""

import copy

from netlab import Address, Forwarder, build_original, converge

scenario = build_original()
state = converge(scenario.topology, scenario.solved_configs)
fwd = Forwarder(scenario.topology, scenario.solved_configs, state)

print("healthy ring")
print("------------")
trace = fwd.traceroute("WS1", Address.parse("192.168.3.10"))
print("WS1 -> WS3 (two AS hops away):")
for i, hop in enumerate(trace.hops, 1):
    print(f"  {i}  {hop.ingress_address}  ({hop.device})")
print("best AS path from PR1:", fwd.as_path_query("PR1", Address.parse("192.168.3.10")))

# Take group 2 dark and re-converge: packets reroute the long way round
# the ring, through group 4.
configs = {
    name: copy.deepcopy(cfg)
    for name, cfg in scenario.solved_configs.items()
    if name not in ("PR2", "SR2", "WS2")
}
degraded = converge(scenario.topology, configs)
fwd2 = Forwarder(scenario.topology, configs, degraded)

print("\ngroup 2 unconfigured")
print("--------------------")
trace = fwd2.traceroute("WS1", Address.parse("192.168.3.10"))
print("WS1 -> WS3 now detours:")
for i, hop in enumerate(trace.hops, 1):
    print(f"  {i}  {hop.ingress_address}  ({hop.device})")
print("best AS path from PR1:", fwd2.as_path_query("PR1", Address.parse("192.168.3.10")))

# And of course nobody can reach group 2 itself any more.
result = fwd2.ping("WS1", Address.parse("192.168.2.10"))
print(f"\nping WS1 -> WS2: success={result.success} ({result.error})")

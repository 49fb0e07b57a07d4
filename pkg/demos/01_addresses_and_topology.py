"""
Addresses, prefixes, and the topology DSL
=========================================

The building blocks under the simulator: 32-bit IPv4 arithmetic,
longest-prefix match, and the little text language that describes a lab.
"""

from netlab import Address, Prefix, load_topology, longest_prefix_match, parse_prefix, render_topology

# Prefixes normalize host bits away; interface notation keeps them.
prefix = parse_prefix("10.10.1.65/26")
print("network of 10.10.1.65/26:", prefix)
print("contains .65?", prefix.contains(Address.parse("10.10.1.65")))
print("contains .129?", prefix.contains(Address.parse("10.10.1.129")))

# A forwarding table is just (prefix, payload) pairs; lookup picks the
# most specific match.
table = [
    (parse_prefix("192.168.1.0/25"), "towards VLAN 1"),
    (parse_prefix("192.168.1.128/25"), "towards VLAN 2"),
    (parse_prefix("0.0.0.0/0"), "default"),
]
for target in ("192.168.1.130", "192.168.1.5", "8.8.8.8"):
    print(f"lookup {target}:", longest_prefix_match(table, Address.parse(target)))

# Topologies are plain text: devices with interfaces, broadcast
# segments, attachments. Switches collapse into segments, so a VLAN is
# just a segment shared by whoever belongs to it.
doc = """\
device R1 router
  interface F0/0
  interface F0/1
device R2 router
  interface F0/0
device WS1 host
  interface eth0
segment office vlan 10
segment uplink
attach R1 F0/0 office
attach WS1 eth0 office
attach R1 F0/1 uplink
attach R2 F0/0 uplink
"""
topology = load_topology(doc)
print("\ndevices:", ", ".join(d.name for d in topology.devices))
print("who is on 'office':", topology.attached("office"))

# Rendering is canonical and round-trips exactly.
assert load_topology(render_topology(topology)) == topology
print("\ncanonical form:\n" + render_topology(topology))

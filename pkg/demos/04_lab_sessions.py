"""
Driving a lab session like a student
====================================

The `redesigned` scenario gives every group the same two pre-configured
demo neighbors, so a group can finish its tasks alone. Here we create a
fresh session, configure group 1 command by command at the console,
watch the task report change, and save the result as a project file.
"""

from netlab import SessionManager
from netlab.project import restore_project, save_project

manager = SessionManager()
session = manager.create("redesigned", groups=1)

report = session.report(1)
print("fresh session:", sum(t.status == "pass" for t in report.tasks), "of 17 tasks pass")

COMMANDS = [
    ("PR1", "interface F0/0 ip address 192.168.100.1/24"),
    ("PR1", "interface F0/1 ip address 192.168.101.1/24"),
    ("PR1", "interface F0/3/0.1 ip address 192.168.1.1/25"),
    ("PR1", "interface F0/3/0.2 ip address 192.168.1.129/25"),
    ("PR1", "interface F0/3/1 ip address 10.10.1.2/26"),
    ("PR1", "router bgp 101 neighbor 192.168.100.254 remote-as 201"),
    ("PR1", "router bgp 101 neighbor 192.168.101.254 remote-as 203"),
    ("PR1", "router bgp 101 network 192.168.100.0/24"),
    ("PR1", "router bgp 101 network 192.168.101.0/24"),
    ("PR1", "router bgp 101 network 192.168.1.0/25"),
    ("PR1", "router bgp 101 network 192.168.1.128/25"),
    ("PR1", "router bgp 101 network 10.10.1.0/26"),
    ("PR1", "router bgp 101 redistribute ospf"),
    ("PR1", "router ospf network 10.10.1.0/26 area 0"),
    ("PR1", "router ospf network 192.168.100.0/24 area 0"),
    ("PR1", "router ospf network 192.168.101.0/24 area 0"),
    ("PR1", "router ospf passive-interface F0/0"),
    ("PR1", "router ospf passive-interface F0/1"),
    ("PR1", "router ospf redistribute bgp"),
    ("SR1", "interface E1/0 ip address 10.10.1.1/26"),
    ("SR1", "interface E1/1 ip address 10.10.1.65/26"),
    ("SR1", "interface E1/2 ip address 10.10.1.129/26"),
    ("SR1", "interface E1/3 ip address 10.10.1.193/26"),
    ("SR1", "router ospf network 10.10.1.0/26 area 0"),
    ("SR1", "router ospf network 10.10.1.64/26 area 1"),
    ("SR1", "router ospf network 10.10.1.128/26 area 1"),
    ("SR1", "router ospf network 10.10.1.192/26 area 1"),
    ("WS1", "ip address 192.168.1.10/25 gateway 192.168.1.1"),
]
for device, line in COMMANDS:
    output, _ = session.exec(device, line)
    assert output == "ok", (line, output)
print(f"applied {len(COMMANDS)} commands; session reconverged after each")

report = session.report(1)
print("after configuring:", sum(t.status == "pass" for t in report.tasks), "of 17 tasks pass")

# The console is the same surface the web UI uses.
print("\n" + session.exec("WS1", "ping 172.16.2.1")[0], end="")
print(session.exec("WS1", "traceroute 172.16.2.1")[0], end="")
print("\nPR1 BGP table:")
print(session.exec("PR1", "show ip bgp")[0])

# Captures from that ping landed in the event log, ordered by sequence.
captures = [e for e in session.events if e.kind == "capture"]
print(f"capture records: {len(captures)} on segments",
      sorted({e.segment for e in captures}))

# Project files are small zip archives of plain text; restoring one
# rebuilds the exact converged state.
archive = save_project(session)
restored = restore_project(archive, "demo-restore")
assert save_project(restored) == archive
print(f"\nproject archive: {len(archive)} bytes; restore round-trips byte-identically")

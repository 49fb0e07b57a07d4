"""
The HTTP service end to end
===========================

Boot the service in-process, then act as a client: create a solved
session, click around devices, follow the live event stream. This is
exactly the surface the web UI consumes (`netlab serve` runs the same
app standalone).
"""

import json
import threading
import time

import httpx
import uvicorn

from netlab.api import create_app

config = uvicorn.Config(create_app(), host="127.0.0.1", port=0, log_level="warning")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.01)
port = server.servers[0].sockets[0].getsockname()[1]
base = f"http://127.0.0.1:{port}"
print("service at", base)

sid = httpx.post(
    f"{base}/sessions",
    json={"scenario": "redesigned", "params": {"groups": 2}, "mode": "solved"},
).json()["id"]
print("session:", sid)

topology = httpx.get(f"{base}/sessions/{sid}/topology").text
print(f"topology document: {len(topology.splitlines())} lines")

result = httpx.post(
    f"{base}/sessions/{sid}/devices/WS2/exec", json={"command": "ping 172.16.1.1"}
).json()
print("exec ping:", result["output"].strip(), f"(+{result['events_appended']} events)")

route_view = httpx.get(
    f"{base}/sessions/{sid}/devices/SR2/state", params={"view": "route"}
).text
print("\nSR2 routing table (first lines):")
print("\n".join(route_view.splitlines()[:6]))

report = httpx.get(f"{base}/sessions/{sid}/report", params={"group": 2}).json()
print("\ntask report:", sum(t["status"] == "pass" for t in report["tasks"]), "of 17 pass")

print("\nevent stream replay from the beginning:")
expected = 2 + result["events_appended"]  # created, converged, ping captures
shown = 0
with httpx.stream("GET", f"{base}/sessions/{sid}/events", params={"from": 0}, timeout=10) as stream:
    for line in stream.iter_lines():
        if not line.startswith("data: "):
            continue
        record = json.loads(line[len("data: "):])
        label = record.get("segment") or record.get("device") or ""
        print(f"  seq {record['seq']:>2} {record['kind']:<15} {label}")
        shown += 1
        if shown >= expected:
            break

server.should_exit = True
thread.join(timeout=5)
print("done")

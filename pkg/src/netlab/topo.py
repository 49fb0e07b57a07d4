"""Lab topology model and its text DSL.

A topology is a set of devices (routers, switches, hosts) with named
interfaces, a set of broadcast segments (links or VLANs), and an
attachment map from interfaces to segments. Switches are transparent:
scenario builders express a switch plus its VLANs as one segment per
VLAN, so declared switch devices take no part in simulation.

DSL (line oriented, `#` comments):

    device <name> <router|switch|host>
      interface <ifname>
    segment <name> [vlan <1-4094>]
    attach <device> <ifname> <segment>
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Tuple

if TYPE_CHECKING:  # pragma: no cover
    from .devconf import DeviceConfig

__all__ = [
    "Device",
    "Interface",
    "Segment",
    "Topology",
    "TopologyError",
    "Diagnostic",
    "load_topology",
    "render_topology",
    "validate",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*$")

DEVICE_KINDS = ("router", "switch", "host")


class TopologyError(ValueError):
    """Topology document error, carrying line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Interface:
    """A named port on a device. Subinterface `X.k` requires parent `X`."""

    name: str
    admin_up: bool = True


@dataclass(frozen=True)
class Device:
    name: str
    kind: str  # router | switch | host
    interfaces: Tuple[Interface, ...] = ()

    def interface_names(self) -> List[str]:
        return [i.name for i in self.interfaces]


@dataclass(frozen=True)
class Segment:
    """One broadcast domain (a link or a VLAN)."""

    name: str
    vlan: Optional[int] = None


@dataclass(frozen=True)
class Topology:
    devices: Tuple[Device, ...]
    segments: Tuple[Segment, ...]
    # (device name, interface name) -> segment name
    attachments: Mapping[Tuple[str, str], str]

    def device(self, name: str) -> Device:
        for dev in self.devices:
            if dev.name == name:
                return dev
        raise KeyError(name)

    def has_device(self, name: str) -> bool:
        return any(dev.name == name for dev in self.devices)

    def segment_of(self, device: str, interface: str) -> Optional[str]:
        return self.attachments.get((device, interface))

    def attached(self, segment: str) -> List[Tuple[str, str]]:
        """(device, interface) pairs on a segment, in attachment order."""
        return [key for key, seg in self.attachments.items() if seg == segment]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    subject: str
    message: str


def _check_name(name: str, what: str, line: int, column: int) -> None:
    if not _NAME_RE.match(name):
        raise TopologyError(f"invalid {what} name {name!r}", line, column)


def load_topology(document: str) -> Topology:
    """Parse and validate a topology DSL document."""
    devices: List[Device] = []
    device_index: Dict[str, int] = {}
    segments: List[Segment] = []
    segment_names: Dict[str, int] = {}
    attach_lines: List[Tuple[int, int, str, str, str]] = []
    current: Optional[str] = None  # device collecting interface lines

    for lineno, raw in enumerate(document.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        column = len(stripped) - len(stripped.lstrip()) + 1
        words = stripped.split()
        keyword = words[0]

        if keyword == "device":
            if len(words) != 3:
                raise TopologyError("expected: device <name> <kind>", lineno, column)
            name, kind = words[1], words[2]
            _check_name(name, "device", lineno, column)
            if kind not in DEVICE_KINDS:
                raise TopologyError(f"unknown device kind {kind!r}", lineno, column)
            if name in device_index:
                raise TopologyError(f"duplicate device {name!r}", lineno, column)
            device_index[name] = len(devices)
            devices.append(Device(name=name, kind=kind))
            current = name
        elif keyword == "interface":
            if len(words) != 2:
                raise TopologyError("expected: interface <name>", lineno, column)
            if current is None:
                raise TopologyError("interface line outside a device block", lineno, column)
            ifname = words[1]
            idx = device_index[current]
            dev = devices[idx]
            if ifname in dev.interface_names():
                raise TopologyError(
                    f"duplicate interface {ifname!r} on {current}", lineno, column
                )
            devices[idx] = Device(
                name=dev.name,
                kind=dev.kind,
                interfaces=dev.interfaces + (Interface(ifname),),
            )
        elif keyword == "segment":
            if len(words) not in (2, 4) or (len(words) == 4 and words[2] != "vlan"):
                raise TopologyError(
                    "expected: segment <name> [vlan <1-4094>]", lineno, column
                )
            name = words[1]
            _check_name(name, "segment", lineno, column)
            if name in segment_names:
                raise TopologyError(f"duplicate segment {name!r}", lineno, column)
            vlan = None
            if len(words) == 4:
                if not words[3].isdigit() or not 1 <= int(words[3]) <= 4094:
                    raise TopologyError(f"bad vlan id {words[3]!r}", lineno, column)
                vlan = int(words[3])
            segment_names[name] = len(segments)
            segments.append(Segment(name=name, vlan=vlan))
            current = None
        elif keyword == "attach":
            if len(words) != 4:
                raise TopologyError(
                    "expected: attach <device> <ifname> <segment>", lineno, column
                )
            attach_lines.append((lineno, column, words[1], words[2], words[3]))
            current = None
        else:
            raise TopologyError(f"unknown keyword {keyword!r}", lineno, column)

    attachments: Dict[Tuple[str, str], str] = {}
    for lineno, column, dev_name, ifname, seg_name in attach_lines:
        if dev_name not in device_index:
            raise TopologyError(f"attach: unknown device {dev_name!r}", lineno, column)
        dev = devices[device_index[dev_name]]
        if ifname not in dev.interface_names():
            raise TopologyError(
                f"attach: unknown interface {ifname!r} on {dev_name}", lineno, column
            )
        if seg_name not in segment_names:
            raise TopologyError(f"attach: unknown segment {seg_name!r}", lineno, column)
        if (dev_name, ifname) in attachments:
            raise TopologyError(
                f"attach: {dev_name} {ifname} already attached", lineno, column
            )
        attachments[(dev_name, ifname)] = seg_name

    for dev in devices:
        if dev.kind == "host" and len(dev.interfaces) != 1:
            raise TopologyError(
                f"host {dev.name} must have exactly one interface", 1, 1
            )
        names = set(dev.interface_names())
        for iface in dev.interfaces:
            parent, sep, sub = iface.name.rpartition(".")
            if sep and sub.isdigit() and parent not in names:
                raise TopologyError(
                    f"subinterface {iface.name!r} on {dev.name} has no parent {parent!r}",
                    1,
                    1,
                )

    return Topology(
        devices=tuple(devices),
        segments=tuple(segments),
        attachments=attachments,
    )


def render_topology(topology: Topology) -> str:
    """Canonical DSL rendering; load_topology(render_topology(t)) == t."""
    lines: List[str] = []
    for dev in topology.devices:
        lines.append(f"device {dev.name} {dev.kind}")
        for iface in dev.interfaces:
            lines.append(f"  interface {iface.name}")
    for seg in topology.segments:
        if seg.vlan is None:
            lines.append(f"segment {seg.name}")
        else:
            lines.append(f"segment {seg.name} vlan {seg.vlan}")
    for (dev_name, ifname), seg_name in topology.attachments.items():
        lines.append(f"attach {dev_name} {ifname} {seg_name}")
    return "\n".join(lines) + "\n"


def validate(
    topology: Topology, configs: Optional[Mapping[str, "DeviceConfig"]] = None
) -> List[Diagnostic]:
    """Sanity diagnostics over a structurally valid topology.

    With `configs`, also checks address-dependent conditions: more than
    two attachments on a segment addressed as a /30 or /31, and hosts
    left without a gateway.
    """
    diags: List[Diagnostic] = []

    for dev in topology.devices:
        if not any((dev.name, i.name) in topology.attachments for i in dev.interfaces):
            diags.append(
                Diagnostic("warning", dev.name, f"device {dev.name} is not attached to any segment")
            )

    if configs is None:
        return diags

    for seg in topology.segments:
        members = topology.attached(seg.name)
        if len(members) <= 2:
            continue
        lengths = []
        for dev_name, ifname in members:
            cfg = configs.get(dev_name)
            if cfg is None:
                continue
            ifc = cfg.interfaces.get(ifname)
            if ifc is not None and ifc.address is not None:
                lengths.append(ifc.address[1])
        if lengths and min(lengths) >= 30:
            diags.append(
                Diagnostic(
                    "error",
                    seg.name,
                    f"segment {seg.name} has {len(members)} attachments but is addressed as a /{min(lengths)}",
                )
            )

    for dev in topology.devices:
        if dev.kind != "host":
            continue
        cfg = configs.get(dev.name)
        if cfg is None or cfg.gateway is None:
            diags.append(
                Diagnostic("warning", dev.name, f"host {dev.name} has no gateway configured")
            )

    return diags

"""Per-device configuration state and the console command language.

Commands are single line and context free; each carries its full
context, so a saved config document is just the command lines that
rebuild it. Configuration commands are idempotent.

Grammar (one command per line):

    interface <if> ip address <a.b.c.d>/<len>
    interface <if> shutdown
    interface <if> no shutdown
    ip address <a.b.c.d>/<len> gateway <a.b.c.d>      (hosts)
    ip route <prefix> via <addr>
    router ospf network <prefix> area <n>
    router ospf passive-interface <if>
    router ospf redistribute bgp [metric <m>]
    router bgp <as> neighbor <addr> remote-as <as>
    router bgp <as> network <prefix>
    router bgp <as> redistribute ospf
    show ip route | show ip bgp | show ip ospf neighbor | show run
    ping <addr> | traceroute <addr>
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple, Union

from .netcore import (
    Address,
    AddressError,
    Prefix,
    as_number,
    parse_interface_address,
    parse_prefix,
)
from .topo import Device, Topology

__all__ = [
    "InterfaceConfig",
    "StaticRoute",
    "OspfProcess",
    "BgpProcess",
    "DeviceConfig",
    "CommandError",
    "ConfigCommand",
    "ShowCommand",
    "PingCommand",
    "TracerouteCommand",
    "parse_command",
    "apply_config_command",
    "render_config",
    "parse_config_document",
]

DEFAULT_EXTERNAL_METRIC = 20


@dataclass
class InterfaceConfig:
    address: Optional[Tuple[Address, int]] = None
    shutdown: bool = False


@dataclass
class StaticRoute:
    prefix: Prefix
    next_hop: Address


@dataclass
class OspfProcess:
    networks: List[Tuple[Prefix, int]] = field(default_factory=list)
    passive_interfaces: Set[str] = field(default_factory=set)
    redistribute_bgp: bool = False
    external_metric: int = DEFAULT_EXTERNAL_METRIC


@dataclass
class BgpProcess:
    local_as: int
    neighbors: List[Tuple[Address, int]] = field(default_factory=list)
    networks: List[Prefix] = field(default_factory=list)
    redistribute_ospf: bool = False


@dataclass
class DeviceConfig:
    interfaces: Dict[str, InterfaceConfig] = field(default_factory=dict)
    statics: List[StaticRoute] = field(default_factory=list)
    ospf: Optional[OspfProcess] = None
    bgp: Optional[BgpProcess] = None
    gateway: Optional[Address] = None  # hosts only


class CommandError(ValueError):
    """Parse or semantic error; renders with a caret under the bad token."""

    def __init__(self, message: str, line: str, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.rendered())

    def rendered(self) -> str:
        return "% {}\n  {}\n  {}^".format(self.message, self.line, " " * (self.column - 1))


@dataclass(frozen=True)
class ConfigCommand:
    action: str
    args: tuple


@dataclass(frozen=True)
class ShowCommand:
    view: str  # route | bgp | ospf_neighbor | run


@dataclass(frozen=True)
class PingCommand:
    dst: Address


@dataclass(frozen=True)
class TracerouteCommand:
    dst: Address


Command = Union[ConfigCommand, ShowCommand, PingCommand, TracerouteCommand]


class _Cursor:
    """Token stream over one command line, tracking column positions."""

    def __init__(self, line: str):
        self.line = line
        self.tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        self.pos = 0

    def error(self, message: str, column: Optional[int] = None) -> CommandError:
        if column is None:
            column = len(self.line.rstrip()) + 1
        return CommandError(message, self.line, column)

    def take(self, what: str) -> Tuple[str, int]:
        if self.pos >= len(self.tokens):
            raise self.error(f"expected {what}")
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, literal: str) -> None:
        text, col = self.take(f"'{literal}'")
        if text != literal:
            raise CommandError(f"expected '{literal}', got {text!r}", self.line, col)

    def peek(self) -> Optional[str]:
        if self.pos >= len(self.tokens):
            return None
        return self.tokens[self.pos][0]

    def end(self) -> None:
        if self.pos < len(self.tokens):
            text, col = self.tokens[self.pos]
            raise CommandError(f"unexpected trailing input {text!r}", self.line, col)

    def take_address(self, what: str = "address") -> Address:
        text, col = self.take(what)
        try:
            return Address.parse(text)
        except AddressError as exc:
            raise CommandError(str(exc), self.line, col) from exc

    def take_prefix(self, what: str = "prefix") -> Prefix:
        text, col = self.take(what)
        try:
            return parse_prefix(text)
        except AddressError as exc:
            raise CommandError(str(exc), self.line, col) from exc

    def take_ifaddr(self) -> Tuple[Address, int]:
        text, col = self.take("address/len")
        try:
            addr, length = parse_interface_address(text)
        except AddressError as exc:
            raise CommandError(str(exc), self.line, col) from exc
        if not 1 <= length <= 31:
            raise CommandError(f"interface mask length must be 1-31, got /{length}", self.line, col)
        return addr, length

    def take_int(self, what: str, lo: int, hi: int) -> int:
        text, col = self.take(what)
        if not text.isdigit() or not lo <= int(text) <= hi:
            raise CommandError(f"expected {what} ({lo}-{hi}), got {text!r}", self.line, col)
        return int(text)

    def take_as(self) -> int:
        text, col = self.take("AS number")
        if not text.isdigit():
            raise CommandError(f"expected AS number, got {text!r}", self.line, col)
        try:
            return as_number(int(text))
        except AddressError as exc:
            raise CommandError(str(exc), self.line, col) from exc


def parse_command(line: str) -> Command:
    """Parse one console command line."""
    cur = _Cursor(line)
    keyword, col = cur.take("command")

    if keyword == "interface":
        ifname, _ = cur.take("interface name")
        word, wcol = cur.take("'ip', 'shutdown' or 'no'")
        if word == "ip":
            cur.expect("address")
            addr, length = cur.take_ifaddr()
            cur.end()
            return ConfigCommand("if-address", (ifname, addr, length))
        if word == "shutdown":
            cur.end()
            return ConfigCommand("if-shutdown", (ifname,))
        if word == "no":
            cur.expect("shutdown")
            cur.end()
            return ConfigCommand("if-no-shutdown", (ifname,))
        raise CommandError(f"expected 'ip', 'shutdown' or 'no', got {word!r}", line, wcol)

    if keyword == "ip":
        word, wcol = cur.take("'address' or 'route'")
        if word == "address":
            addr, length = cur.take_ifaddr()
            cur.expect("gateway")
            gw = cur.take_address("gateway address")
            cur.end()
            return ConfigCommand("host-address", (addr, length, gw))
        if word == "route":
            prefix = cur.take_prefix()
            cur.expect("via")
            nh = cur.take_address("next-hop address")
            cur.end()
            return ConfigCommand("static-route", (prefix, nh))
        raise CommandError(f"expected 'address' or 'route', got {word!r}", line, wcol)

    if keyword == "router":
        word, wcol = cur.take("'ospf' or 'bgp'")
        if word == "ospf":
            sub, scol = cur.take("'network', 'passive-interface' or 'redistribute'")
            if sub == "network":
                prefix = cur.take_prefix()
                cur.expect("area")
                area = cur.take_int("area", 0, 4294967295)
                cur.end()
                return ConfigCommand("ospf-network", (prefix, area))
            if sub == "passive-interface":
                ifname, _ = cur.take("interface name")
                cur.end()
                return ConfigCommand("ospf-passive", (ifname,))
            if sub == "redistribute":
                cur.expect("bgp")
                metric = DEFAULT_EXTERNAL_METRIC
                if cur.peek() is not None:
                    cur.expect("metric")
                    metric = cur.take_int("metric", 1, 16777214)
                cur.end()
                return ConfigCommand("ospf-redistribute-bgp", (metric,))
            raise CommandError(
                f"expected 'network', 'passive-interface' or 'redistribute', got {sub!r}",
                line,
                scol,
            )
        if word == "bgp":
            local_as = cur.take_as()
            sub, scol = cur.take("'neighbor', 'network' or 'redistribute'")
            if sub == "neighbor":
                addr = cur.take_address("neighbor address")
                cur.expect("remote-as")
                remote = cur.take_as()
                cur.end()
                return ConfigCommand("bgp-neighbor", (local_as, addr, remote))
            if sub == "network":
                prefix = cur.take_prefix()
                cur.end()
                return ConfigCommand("bgp-network", (local_as, prefix))
            if sub == "redistribute":
                cur.expect("ospf")
                cur.end()
                return ConfigCommand("bgp-redistribute-ospf", (local_as,))
            raise CommandError(
                f"expected 'neighbor', 'network' or 'redistribute', got {sub!r}", line, scol
            )
        raise CommandError(f"expected 'ospf' or 'bgp', got {word!r}", line, wcol)

    if keyword == "show":
        word, wcol = cur.take("'ip' or 'run'")
        if word == "run":
            cur.end()
            return ShowCommand("run")
        if word == "ip":
            sub, scol = cur.take("'route', 'bgp' or 'ospf'")
            if sub == "route":
                cur.end()
                return ShowCommand("route")
            if sub == "bgp":
                cur.end()
                return ShowCommand("bgp")
            if sub == "ospf":
                cur.expect("neighbor")
                cur.end()
                return ShowCommand("ospf_neighbor")
            raise CommandError(f"expected 'route', 'bgp' or 'ospf', got {sub!r}", line, scol)
        raise CommandError(f"expected 'ip' or 'run', got {word!r}", line, wcol)

    if keyword == "ping":
        dst = cur.take_address("destination address")
        cur.end()
        return PingCommand(dst)

    if keyword == "traceroute":
        dst = cur.take_address("destination address")
        cur.end()
        return TracerouteCommand(dst)

    raise CommandError(f"unknown command {keyword!r}", line, col)


def _require_router(device: Device, line: str) -> None:
    if device.kind != "router":
        raise CommandError(f"{device.name} is a {device.kind}; routing commands need a router", line, 1)


def apply_config_command(
    config: DeviceConfig, command: ConfigCommand, device: Device, line: str = ""
) -> str:
    """Apply one configuration command to a device's config, in place.

    Raises CommandError on semantic problems (unknown interface, AS
    mismatch, wrong device kind). Returns a short confirmation.
    """
    action, args = command.action, command.args

    if action in ("if-address", "if-shutdown", "if-no-shutdown"):
        _require_router(device, line)
        ifname = args[0]
        if ifname not in device.interface_names():
            raise CommandError(f"unknown interface {ifname!r} on {device.name}", line, 1)
        ifc = config.interfaces.get(ifname)
        if ifc is None:
            ifc = InterfaceConfig()
        if action == "if-address":
            ifc.address = (args[1], args[2])
        elif action == "if-shutdown":
            ifc.shutdown = True
        else:
            ifc.shutdown = False
        if ifc.address is None and not ifc.shutdown:
            config.interfaces.pop(ifname, None)
        else:
            config.interfaces[ifname] = ifc
        return "ok"

    if action == "host-address":
        if device.kind != "host":
            raise CommandError(f"{device.name} is a {device.kind}; 'ip address ... gateway' needs a host", line, 1)
        addr, length, gw = args
        ifname = device.interfaces[0].name
        config.interfaces[ifname] = InterfaceConfig(address=(addr, length))
        config.gateway = gw
        return "ok"

    if action == "static-route":
        _require_router(device, line)
        prefix, nh = args
        if prefix.length == 32 and prefix.contains(nh):
            raise CommandError("next hop lies inside a /32 route", line, 1)
        for i, st in enumerate(config.statics):
            if st.prefix == prefix:
                config.statics[i] = StaticRoute(prefix, nh)
                return "ok"
        config.statics.append(StaticRoute(prefix, nh))
        return "ok"

    if action.startswith("ospf-"):
        _require_router(device, line)
        if config.ospf is None:
            config.ospf = OspfProcess()
        proc = config.ospf
        if action == "ospf-network":
            prefix, area = args
            if (prefix, area) not in proc.networks:
                proc.networks.append((prefix, area))
            return "ok"
        if action == "ospf-passive":
            ifname = args[0]
            if ifname not in device.interface_names():
                raise CommandError(f"unknown interface {ifname!r} on {device.name}", line, 1)
            proc.passive_interfaces.add(ifname)
            return "ok"
        if action == "ospf-redistribute-bgp":
            proc.redistribute_bgp = True
            proc.external_metric = args[0]
            return "ok"

    if action.startswith("bgp-"):
        _require_router(device, line)
        local_as = args[0]
        if config.bgp is None:
            config.bgp = BgpProcess(local_as=local_as)
        elif config.bgp.local_as != local_as:
            raise CommandError(
                f"BGP is already running as AS {config.bgp.local_as}", line, 1
            )
        proc = config.bgp
        if action == "bgp-neighbor":
            _, addr, remote = args
            for i, (a, _r) in enumerate(proc.neighbors):
                if a == addr:
                    proc.neighbors[i] = (addr, remote)
                    return "ok"
            proc.neighbors.append((addr, remote))
            return "ok"
        if action == "bgp-network":
            prefix = args[1]
            if prefix not in proc.networks:
                proc.networks.append(prefix)
            return "ok"
        if action == "bgp-redistribute-ospf":
            proc.redistribute_ospf = True
            return "ok"

    raise CommandError(f"unhandled action {action!r}", line, 1)


def render_config(config: DeviceConfig) -> str:
    """Canonical config document; re-parsing yields an equal DeviceConfig."""
    lines: List[str] = []
    for ifname in sorted(config.interfaces):
        ifc = config.interfaces[ifname]
        if config.gateway is not None:
            continue  # host form rendered below
        if ifc.address is not None:
            addr, length = ifc.address
            lines.append(f"interface {ifname} ip address {addr}/{length}")
        if ifc.shutdown:
            lines.append(f"interface {ifname} shutdown")
    if config.gateway is not None:
        for ifname in sorted(config.interfaces):
            ifc = config.interfaces[ifname]
            if ifc.address is not None:
                addr, length = ifc.address
                lines.append(f"ip address {addr}/{length} gateway {config.gateway}")
    for st in config.statics:
        lines.append(f"ip route {st.prefix} via {st.next_hop}")
    if config.ospf is not None:
        for prefix, area in config.ospf.networks:
            lines.append(f"router ospf network {prefix} area {area}")
        for ifname in sorted(config.ospf.passive_interfaces):
            lines.append(f"router ospf passive-interface {ifname}")
        if config.ospf.redistribute_bgp:
            if config.ospf.external_metric == DEFAULT_EXTERNAL_METRIC:
                lines.append("router ospf redistribute bgp")
            else:
                lines.append(f"router ospf redistribute bgp metric {config.ospf.external_metric}")
    if config.bgp is not None:
        asn = config.bgp.local_as
        for addr, remote in config.bgp.neighbors:
            lines.append(f"router bgp {asn} neighbor {addr} remote-as {remote}")
        for prefix in config.bgp.networks:
            lines.append(f"router bgp {asn} network {prefix}")
        if config.bgp.redistribute_ospf:
            lines.append(f"router bgp {asn} redistribute ospf")
    return "\n".join(lines) + "\n" if lines else ""


def parse_config_document(document: str, device: Device) -> DeviceConfig:
    """Rebuild a DeviceConfig from a saved config document."""
    config = DeviceConfig()
    for raw in document.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        command = parse_command(line)
        if not isinstance(command, ConfigCommand):
            raise CommandError("only configuration commands allowed in a config document", line, 1)
        apply_config_command(config, command, device, line)
    return config


@dataclass(frozen=True)
class ActiveInterface:
    """An attached, admin-up, addressed interface: what the protocols see."""

    device: str
    name: str
    address: Address
    length: int
    segment: str

    @property
    def prefix(self) -> Prefix:
        return Prefix.of(self.address, self.length)


def active_interfaces(
    topology: Topology, configs: Dict[str, DeviceConfig]
) -> Dict[str, List[ActiveInterface]]:
    """Per-device active interfaces, in interface declaration order.

    Switches are transparent and contribute nothing.
    """
    result: Dict[str, List[ActiveInterface]] = {}
    for device in topology.devices:
        entries: List[ActiveInterface] = []
        if device.kind != "switch":
            config = configs.get(device.name)
            for iface in device.interfaces:
                if not iface.admin_up:
                    continue
                segment = topology.segment_of(device.name, iface.name)
                if segment is None:
                    continue
                ifc = config.interfaces.get(iface.name) if config else None
                if ifc is None or ifc.address is None or ifc.shutdown:
                    continue
                entries.append(
                    ActiveInterface(device.name, iface.name, ifc.address[0], ifc.address[1], segment)
                )
        result[device.name] = entries
    return result

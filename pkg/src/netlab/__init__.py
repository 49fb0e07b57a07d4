"""netlab: a deterministic OSPF/BGP control-plane lab simulator.

The package models a teaching lab: a topology of routers, switches
(transparent) and hosts; per-device configuration driven by a console
command language; simplified multi-area OSPF and eBGP engines converged
to a joint deterministic fixpoint; data-plane queries (ping, traceroute,
AS-path lookup) with capture records; two built-in exercise scenarios
with automated task checking; and a multi-session service with project
persistence, exposed over HTTP for the companion web UI.
"""

from .bgp import BgpRoute, BgpSession, bgp_best_paths, bgp_sessions, originate
from .dataplane import (
    Forwarder,
    HopRecord,
    PingResult,
    TracerouteResult,
    as_path_query,
    ping,
    traceroute,
)
from .devconf import (
    BgpProcess,
    CommandError,
    DeviceConfig,
    InterfaceConfig,
    OspfProcess,
    StaticRoute,
    apply_config_command,
    parse_command,
    parse_config_document,
    render_config,
)
from .labs import (
    Scenario,
    TaskReport,
    build_original,
    build_redesigned,
    build_scenario,
    evaluate_tasks,
)
from .netcore import (
    Address,
    AddressError,
    Prefix,
    longest_prefix_match,
    parse_interface_address,
    parse_prefix,
)
from .ospf import OspfAdjacency, OspfRoute, ospf_adjacencies, ospf_routes
from .project import ProjectError, restore_project, save_project
from .rib import (
    ConvergedState,
    NonConvergence,
    RibEntry,
    canonical_state,
    converge,
    redistribution_filter,
)
from .session import Event, LabSession, SessionManager
from .topo import Topology, load_topology, render_topology, validate

__version__ = "0.1.0"

"""Project-file persistence: save a session, restore it later.

A project file is a small zip archive of human-readable text: a JSON
manifest, the topology document, and one config document per device.
Entries are written in sorted order with fixed metadata, so saving the
same session twice produces identical bytes, and save -> restore ->
save round-trips exactly.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass
from typing import Dict

from .devconf import parse_config_document, render_config
from .labs import build_scenario
from .session import LabSession
from .topo import load_topology, render_topology

__all__ = ["FORMAT_VERSION", "ProjectError", "save_project", "restore_project"]

FORMAT_VERSION = 1

_ZIP_DATE = (1980, 1, 1, 0, 0, 0)  # fixed so archives are byte-stable


class ProjectError(ValueError):
    pass


@dataclass(frozen=True)
class _ProjectData:
    scenario: str
    groups: int
    mode: str
    created_at: str
    topology_doc: str
    config_docs: Dict[str, str]


def save_project(session: LabSession) -> bytes:
    """Serialize a session to project-file bytes."""
    manifest = {
        "format_version": FORMAT_VERSION,
        "scenario": session.scenario.name,
        "params": {"groups": session.scenario.group_count},
        "mode": session.mode,
        "created_at": session.created_at,
    }
    files = [("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")]
    files.append(("topology.txt", render_topology(session.topology)))
    for device in sorted(d.name for d in session.topology.devices):
        config = session.configs.get(device)
        doc = render_config(config) if config is not None else ""
        files.append((f"configs/{device}.cfg", doc))

    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_STORED) as archive:
        for name, content in files:
            info = zipfile.ZipInfo(name, date_time=_ZIP_DATE)
            archive.writestr(info, content)
    return buffer.getvalue()


def _load(data: bytes) -> _ProjectData:
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
        names = set(archive.namelist())
        if "manifest.json" not in names or "topology.txt" not in names:
            raise ProjectError("corrupt archive: missing manifest or topology")
        manifest = json.loads(archive.read("manifest.json"))
    except (zipfile.BadZipFile, json.JSONDecodeError) as exc:
        raise ProjectError(f"corrupt archive: {exc}") from exc
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise ProjectError(f"unsupported project format version {version!r}")
    config_docs = {}
    for name in archive.namelist():
        if name.startswith("configs/") and name.endswith(".cfg"):
            device = name[len("configs/") : -len(".cfg")]
            config_docs[device] = archive.read(name).decode("utf-8")
    return _ProjectData(
        scenario=manifest["scenario"],
        groups=manifest["params"]["groups"],
        mode=manifest.get("mode", "unconfigured"),
        created_at=manifest["created_at"],
        topology_doc=archive.read("topology.txt").decode("utf-8"),
        config_docs=config_docs,
    )


def restore_project(data: bytes, session_id: str) -> LabSession:
    """Rebuild a session from project-file bytes."""
    pd = _load(data)
    scenario = build_scenario(pd.scenario, pd.groups)
    topology = load_topology(pd.topology_doc)
    configs = {}
    for device, doc in pd.config_docs.items():
        if not topology.has_device(device):
            raise ProjectError(f"corrupt archive: config for unknown device {device!r}")
        parsed = parse_config_document(doc, topology.device(device))
        if doc.strip():
            configs[device] = parsed
    return LabSession(
        session_id,
        scenario,
        mode=pd.mode,
        topology=topology,
        configs=configs,
        created_at=pd.created_at,
    )

import copy
from dataclasses import dataclass
from typing import Dict

import pytest

from netlab.devconf import DeviceConfig
from netlab.labs import Scenario, build_original, build_redesigned
from netlab.rib import ConvergedState, converge
from netlab.topo import Topology


@dataclass
class LabView:
    """Minimal session-like object for engine-level checks."""

    topology: Topology
    configs: Dict[str, DeviceConfig]
    converged: ConvergedState


def converged_view(scenario: Scenario, configs=None) -> LabView:
    cfg = scenario.solved_configs if configs is None else configs
    return LabView(scenario.topology, cfg, converge(scenario.topology, cfg))


def without_group(scenario: Scenario, *groups: int) -> Dict[str, DeviceConfig]:
    """Solved configs with the given groups left unconfigured."""
    skip = {name for g in groups for name in (f"PR{g}", f"SR{g}", f"WS{g}")}
    return {
        name: copy.deepcopy(cfg)
        for name, cfg in scenario.solved_configs.items()
        if name not in skip
    }


@pytest.fixture(scope="session")
def original() -> Scenario:
    return build_original()


@pytest.fixture(scope="session")
def original_view(original) -> LabView:
    return converged_view(original)


@pytest.fixture(scope="session")
def redesigned3() -> Scenario:
    return build_redesigned(3)


@pytest.fixture(scope="session")
def redesigned3_view(redesigned3) -> LabView:
    return converged_view(redesigned3)

"""Command line interface.

    netlab scenario list
    netlab run <scenario> [--groups n] [--solved] [--out FILE]
    netlab exec <project> <device> "<command>"
    netlab report <project> --group n
    netlab verify
    netlab serve [--host H] [--port P]

`run` converges a scenario and writes a project file; `exec` and
`report` operate on project files and persist any changes back.
"""

from __future__ import annotations

import argparse
import sys
import uuid
from pathlib import Path

from . import project
from .bgp import SESSION_ESTABLISHED
from .labs import MAX_REDESIGNED_GROUPS, SCENARIO_NAMES, build_scenario
from .rib import canonical_state, converge
from .session import LabSession, SessionManager


def _cmd_scenario_list(_args) -> int:
    print(f"original     4 fixed groups in an eBGP ring; groups depend on each other")
    print(
        f"redesigned   1-{MAX_REDESIGNED_GROUPS} groups (--groups), all peering with "
        "pre-configured demo networks; groups are independent"
    )
    return 0


def _cmd_run(args) -> int:
    manager = SessionManager()
    mode = "solved" if args.solved else "unconfigured"
    try:
        session = manager.create(args.scenario, groups=args.groups, mode=mode)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    state = session.converged
    established = sum(1 for s in state.sessions if s.state == SESSION_ESTABLISHED)
    out = Path(args.out or f"{args.scenario}.netlab")
    out.write_bytes(project.save_project(session))
    print(f"scenario: {session.scenario.name} ({session.scenario.group_count} groups, {mode})")
    print(f"devices: {len(session.topology.devices)}")
    print(f"bgp sessions established: {established}/{len(state.sessions)}")
    print(f"ospf adjacencies: {len(state.adjacencies)}")
    print(f"converged in {state.round_count} rounds")
    print(f"project written to {out}")
    return 0


def _load_session(path: str) -> LabSession:
    data = Path(path).read_bytes()
    return project.restore_project(data, uuid.uuid4().hex[:12])


def _cmd_exec(args) -> int:
    try:
        session = _load_session(args.project)
    except (OSError, project.ProjectError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    output, _ = session.exec(args.device, args.command_line)
    sys.stdout.write(output if output.endswith("\n") else output + "\n")
    Path(args.project).write_bytes(project.save_project(session))
    return 0


def _cmd_report(args) -> int:
    try:
        session = _load_session(args.project)
    except (OSError, project.ProjectError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = session.report(args.group)
    for task in report.tasks:
        print(f"task {task.id:>2}: {task.status:<4} - {task.evidence}")
    print("result:", "all tasks pass" if report.passed() else "some tasks fail")
    return 0


def _cmd_verify(_args) -> int:
    from .fuzz import random_lab
    from .labs import evaluate_tasks

    failures = 0

    def check(name: str, fn) -> None:
        nonlocal failures
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")

    def scenario_soundness() -> None:
        for name, groups in (("original", None), ("redesigned", 1), ("redesigned", 4)):
            scenario = build_scenario(name, groups)
            session = LabSession("verify", scenario, mode="solved")
            bound = 2 * len(scenario.topology.devices) + 10
            assert session.converged.round_count <= bound, f"{name}: round bound exceeded"
            for g in scenario.groups:
                report = evaluate_tasks(session, scenario, g)
                assert report.passed(), f"{name} group {g}: {report.to_dict()}"

    def independence() -> None:
        scenario = build_scenario("redesigned", 2)
        full = LabSession("verify", scenario, mode="solved")
        full_reports = {g: full.report(g).to_dict() for g in scenario.groups}
        for subset in ((), (1,), (2,)):
            session = LabSession("verify", scenario, mode="unconfigured")
            for g in subset:
                for name in (f"PR{g}", f"SR{g}", f"WS{g}"):
                    import copy

                    session.configs[name] = copy.deepcopy(scenario.solved_configs[name])
            session.reconverge()
            for g in subset:
                assert session.report(g).to_dict() == full_reports[g], f"group {g} differs"

    def dependence() -> None:
        scenario = build_scenario("original", None)
        for missing in scenario.groups:
            session = LabSession("verify", scenario, mode="solved")
            for name in (f"PR{missing}", f"SR{missing}", f"WS{missing}"):
                session.configs.pop(name, None)
            session.reconverge()
            hit = any(
                any(t.id in (6, 15) and t.status == "fail" for t in session.report(g).tasks)
                for g in scenario.groups
                if g != missing
            )
            assert hit, f"no ping failure with group {missing} missing"

    def determinism() -> None:
        for name, groups in (("original", None), ("redesigned", 4)):
            scenario = build_scenario(name, groups)
            a = canonical_state(converge(scenario.topology, scenario.solved_configs))
            b = canonical_state(converge(scenario.topology, scenario.solved_configs))
            assert a == b, f"{name}: serializations differ"

    def no_echo() -> None:
        for seed in range(40):
            topology, configs = random_lab(seed)
            state = converge(topology, configs)
            for table in state.bgp_tables.values():
                for route in table:
                    assert len(set(route.as_path)) == len(route.as_path), (
                        f"seed {seed}: AS path loop {route.as_path}"
                    )

    def persistence() -> None:
        scenario = build_scenario("redesigned", 2)
        session = LabSession("verify", scenario, mode="solved")
        session.exec("PR1", "interface F0/0 shutdown")
        saved = project.save_project(session)
        restored = project.restore_project(saved, "verify2")
        assert project.save_project(restored) == saved, "save/restore/save differs"
        assert canonical_state(restored.converged) == canonical_state(session.converged)

    check("scenario soundness (original, redesigned 1/4)", scenario_soundness)
    check("group independence (redesigned)", independence)
    check("group dependence (original)", dependence)
    check("deterministic convergence", determinism)
    check("no-echo on 40 random labs", no_echo)
    check("project persistence round-trip", persistence)
    return 1 if failures else 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="netlab", description="OSPF/BGP lab simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_scenario = sub.add_parser("scenario", help="scenario utilities")
    scenario_sub = p_scenario.add_subparsers(dest="scenario_command", required=True)
    p_list = scenario_sub.add_parser("list", help="list built-in scenarios")
    p_list.set_defaults(func=_cmd_scenario_list)

    p_run = sub.add_parser("run", help="build and converge a scenario")
    p_run.add_argument("scenario", choices=SCENARIO_NAMES)
    p_run.add_argument("--groups", type=int, default=None)
    p_run.add_argument("--solved", action="store_true", help="apply the solved configs")
    p_run.add_argument("--out", default=None, help="project file to write")
    p_run.set_defaults(func=_cmd_run)

    p_exec = sub.add_parser("exec", help="run a console command in a project")
    p_exec.add_argument("project")
    p_exec.add_argument("device")
    p_exec.add_argument("command_line", metavar="command")
    p_exec.set_defaults(func=_cmd_exec)

    p_report = sub.add_parser("report", help="task report for a group")
    p_report.add_argument("project")
    p_report.add_argument("--group", type=int, required=True)
    p_report.set_defaults(func=_cmd_report)

    p_verify = sub.add_parser("verify", help="run the built-in property suites")
    p_verify.set_defaults(func=_cmd_verify)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

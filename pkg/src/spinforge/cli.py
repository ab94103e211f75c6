"""Command-line front end: build, schedule, verify, simulate.

Every subcommand produces a CommandResult with a machine-readable payload
and a human summary; --json prints the payload document, --csv the CSV
mirror where one exists. Exit code 0 means every invoked check passed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import gates, oracle
from .config import PhysicalConfig, resolve_config
from .operators import pauli
from .tensor import basis_state, matrix_to_json, unitarity_defect
from .timing import (
    DERIVE_CONSTANTS,
    SHARED_CONSTANTS,
    ScheduleInfeasibleError,
    gate_timing_table,
)

EXACT_TOL = 1e-12
ORACLE_TOL = 1e-6

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INFEASIBLE = 2
EXIT_ERROR = 3

_STATUS_EXIT = {
    "ok": EXIT_OK,
    "verification_failed": EXIT_VERIFICATION_FAILED,
    "infeasible": EXIT_INFEASIBLE,
    "error": EXIT_ERROR,
}


@dataclass(frozen=True)
class CommandResult:
    status: str
    payload: dict
    human_summary: str

    @property
    def exit_code(self) -> int:
        return _STATUS_EXIT[self.status]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key-value config file")
    parser.add_argument("--omega", type=float, help="drive frequency, rad/s")
    parser.add_argument("--b0", type=float, help="static field, tesla")
    parser.add_argument("--b1", type=float, help="drive amplitude, tesla")
    parser.add_argument("--j", type=float, help="exchange coupling, rad/s")
    parser.add_argument("--b-prime", type=float, help="reference offset, rad/s")
    parser.add_argument("--gamma", type=float, help="gyromagnetic ratio, rad/s/T")
    parser.add_argument(
        "--natural-units",
        action="store_true",
        help="desk-scale defaults: gamma = 1, b0 = 1, omega = 1",
    )
    parser.add_argument("--json", action="store_true", help="print the JSON payload")


def _config_from_args(args) -> PhysicalConfig:
    overrides = {
        "omega": args.omega,
        "b0": args.b0,
        "b1": args.b1,
        "j_coupling": args.j,
        "b_prime": args.b_prime,
        "gamma": args.gamma,
    }
    return resolve_config(
        args.config, natural_units=args.natural_units, overrides=overrides
    )


def _check(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _summary_lines(checks: list[dict]) -> str:
    lines = []
    for c in checks:
        mark = "PASS" if c["passed"] else "FAIL"
        detail = f"  {c['detail']}" if c["detail"] else ""
        lines.append(f"[{mark}] {c['name']}{detail}")
    return "\n".join(lines)


def cmd_build(args) -> CommandResult:
    cfg = _config_from_args(args)
    try:
        build = gates.build_gate(args.gate, cfg)
    except ScheduleInfeasibleError as exc:
        return CommandResult("infeasible", {"message": str(exc)}, f"infeasible: {exc}")
    report = build.report
    payload = {
        "gate": build.label,
        "pulse_matrix": matrix_to_json(build.pulse),
        "ideal_matrix": matrix_to_json(build.ideal),
        "fidelity_report": report.to_json_dict(),
        "total_time_seconds": build.schedule.totals.get("T"),
    }
    summary = (
        f"{build.label}: fidelity={report.fidelity:.15f} "
        f"phase={report.global_phase_rad:+.12f} rad "
        f"max_dev={report.max_abs_dev:.3e}"
    )
    return CommandResult("ok", payload, summary)


def cmd_schedule(args) -> CommandResult:
    cfg = _config_from_args(args)
    mode = SHARED_CONSTANTS if args.mode == "shared-constants" else DERIVE_CONSTANTS
    name = args.gate.strip().lower()
    parsed = gates.parse_gate_name(name)
    if isinstance(parsed, gates.GateSpec):
        name = gates.COMPONENT_PARENT_GATE[parsed.n]
    try:
        schedule = gate_timing_table(name, cfg, mode=mode, search_bound=args.search_bound)
    except ScheduleInfeasibleError as exc:
        return CommandResult("infeasible", {"message": str(exc)}, f"infeasible: {exc}")
    payload = schedule.to_json_dict()
    if args.csv:
        summary = schedule.to_csv_text().rstrip("\n")
    else:
        lines = [f"schedule for {schedule.gate} ({schedule.mode})"]
        for label, sol in schedule.solutions.items():
            lines.append(
                f"  {label}: duration={sol.duration!r} s  residual={sol.residual:.2e} rad"
            )
        for total, value in schedule.totals.items():
            lines.append(f"  {total} = {value!r} s")
        summary = "\n".join(lines)
    return CommandResult("ok", payload, summary)


def _verify_not(cfg, checks, use_oracle):
    build = gates.build_gate("not", cfg)
    target = -1j * pauli("x")
    dev = float(np.max(np.abs(build.pulse - target)))
    checks.append(
        _check("not: composition equals -i*X", dev <= EXACT_TOL, f"max_dev={dev:.2e}")
    )
    r = build.report
    phase_ok = abs(r.global_phase_rad + math.pi / 2) <= EXACT_TOL
    checks.append(
        _check(
            "not: phase-invariant fidelity vs X",
            r.fidelity >= 1 - EXACT_TOL and phase_ok,
            f"F={r.fidelity:.15f} phase={r.global_phase_rad:+.12f}",
        )
    )
    if use_oracle:
        sched = build.schedule
        window_cfg = sched.window_config("t1")
        duration = sched.solutions["t1"].duration
        settings = oracle.IntegrationSettings(dt=duration / 20_000)
        u_lab = oracle.lab_propagator(window_cfg, 1, duration, settings)
        gate_window = gates.u_phi(1, sched.solutions["t1"], window_cfg)
        dev = float(np.max(np.abs(u_lab - gate_window)))
        checks.append(
            _check(
                "not: lab-frame integration reproduces the drive window",
                dev <= ORACLE_TOL,
                f"max_dev={dev:.2e}",
            )
        )


def _verify_diagonal_window(gate, cfg, checks, use_oracle):
    build = gates.build_gate(gate, cfg)
    dev = float(np.max(np.abs(build.pulse - build.ideal)))
    checks.append(
        _check(
            f"{gate}: pulse layer equals the canonical matrix",
            dev <= EXACT_TOL,
            f"max_dev={dev:.2e}",
        )
    )
    if use_oracle:
        sched = build.schedule
        window_cfg = sched.window_config("t1")
        duration = sched.solutions["t1"].duration
        settings = oracle.IntegrationSettings(dt=duration / 20_000)
        u_lab = oracle.lab_propagator(window_cfg, 2, duration, settings)
        u_gate = gates.u_phi(2, sched.solutions["t1"], window_cfg)
        phased = np.exp(-1j * window_cfg.b_prime * duration) * u_lab
        dev = float(np.max(np.abs(phased - u_gate)))
        checks.append(
            _check(
                f"{gate}: lab-frame window matches the evolution operator "
                "(offset phase applied)",
                dev <= ORACLE_TOL,
                f"max_dev={dev:.2e}",
            )
        )


def _verify_composed(gate, n, cfg, checks):
    sequence = gates.CCNOT_SEQUENCE if n == 3 else gates.CCCNOT_SEQUENCE
    target = gates.canonical_toffoli(n)
    ideal_prod = gates.ideal_sequence_product(sequence)
    dev_ideal = float(np.max(np.abs(ideal_prod - target)))
    checks.append(
        _check(
            f"{gate}: ideal-layer circuit identity",
            dev_ideal <= EXACT_TOL,
            f"max_dev={dev_ideal:.2e}",
        )
    )
    build = gates.build_gate(gate, cfg)
    dev_pulse = float(np.max(np.abs(build.pulse - target)))
    checks.append(
        _check(
            f"{gate}: pulse-layer product vs canonical target",
            dev_pulse <= EXACT_TOL,
            f"max_dev={dev_pulse:.2e}",
        )
    )
    udef = unitarity_defect(build.pulse)
    checks.append(
        _check(f"{gate}: pulse product unitary", udef <= EXACT_TOL, f"defect={udef:.2e}")
    )


def _verify_audit(cfg, checks):
    reports = gates.audit_components(cfg)
    flagged = gates.flagged_components(reports)
    checks.append(
        _check(
            "components: fidelity report produced for every pulse component",
            len(reports) == len(gates.AUDIT_SPECS_3Q) + len(gates.AUDIT_SPECS_4Q),
            f"{len(reports)} reports",
        )
    )
    checks.append(
        _check(
            "components: no pulse component deviates from its ideal target",
            not flagged,
            "; ".join(f"{r.gate_label} F={r.fidelity:.12f}" for r in flagged)
            or "all exact",
        )
    )
    return reports


def _verify_oracle_basics(cfg, checks):
    rng = np.random.default_rng(20240817)
    times = rng.uniform(0.0, 10.0 / cfg.omega, size=100)
    m_dev = oracle.check_m_constancy(cfg, times)
    checks.append(
        _check(
            "oracle: rotated drive direction is constant",
            m_dev <= EXACT_TOL,
            f"max_dev={m_dev:.2e}",
        )
    )
    rabi_cfg = cfg if cfg.b1 > 0 else cfg.replace(b1=0.05 * cfg.b0)
    t_pi = math.pi / (rabi_cfg.gamma * rabi_cfg.b1)
    settings = oracle.IntegrationSettings(dt=t_pi / 10_000)
    final = oracle.integrate_lab(rabi_cfg, 1, basis_state(1, "0"), t_pi, settings)
    residual = float(abs(final[0]) ** 2)
    checks.append(
        _check(
            "oracle: resonant pi pulse inverts the population",
            residual <= ORACLE_TOL,
            f"|a|^2={residual:.2e}",
        )
    )


def cmd_verify(args) -> CommandResult:
    cfg = _config_from_args(args)
    scope = args.scope.strip().lower()
    known = ("not", "cz", "cnot", "ccnot", "cccnot", "all")
    if scope not in known:
        return CommandResult(
            "error",
            {"message": f"unknown scope {args.scope!r}; expected one of {known}"},
            f"unknown scope {args.scope!r}",
        )
    checks: list[dict] = []
    try:
        if scope in ("not", "all"):
            _verify_not(cfg, checks, args.oracle)
        if scope in ("cz", "all"):
            _verify_diagonal_window("cz", cfg, checks, args.oracle)
        if scope in ("cnot", "all"):
            _verify_diagonal_window("cnot", cfg, checks, args.oracle)
        if scope in ("ccnot", "all"):
            _verify_composed("ccnot", 3, cfg, checks)
        if scope in ("cccnot", "all"):
            _verify_composed("cccnot", 4, cfg, checks)
        if scope in ("ccnot", "cccnot", "all"):
            _verify_audit(cfg, checks)
        if scope == "all" or args.oracle:
            _verify_oracle_basics(cfg, checks)
    except ScheduleInfeasibleError as exc:
        return CommandResult("infeasible", {"message": str(exc)}, f"infeasible: {exc}")

    all_passed = all(c["passed"] for c in checks)
    status = "ok" if all_passed else "verification_failed"
    payload = {"scope": scope, "checks": checks, "all_passed": all_passed}
    summary = _summary_lines(checks)
    summary += f"\n{'all checks passed' if all_passed else 'SOME CHECKS FAILED'}"
    return CommandResult(status, payload, summary)


def cmd_simulate(args) -> CommandResult:
    cfg = _config_from_args(args)
    n = args.n
    try:
        psi0 = basis_state(n, args.psi0)
    except ValueError as exc:
        return CommandResult("error", {"message": str(exc)}, str(exc))
    dt = args.dt if args.dt is not None else args.t_final / 10_000
    if args.t_final > 0:
        settings = oracle.IntegrationSettings(dt=dt)
    else:
        settings = None
    try:
        if args.trajectory:
            times, states = oracle.integrate_lab_trajectory(
                cfg, n, psi0, args.t_final, settings
            )
            oracle.write_trajectory_csv(args.trajectory, times, states)
            final = states[-1]
        else:
            final = oracle.integrate_lab(cfg, n, psi0, args.t_final, settings)
    except (oracle.IntegrationError, ValueError) as exc:
        return CommandResult("error", {"message": str(exc)}, str(exc))
    payload = {
        "n": n,
        "t_final": args.t_final,
        "dt": dt,
        "amplitudes": [[float(z.real), float(z.imag)] for z in final],
        "populations": [float(abs(z) ** 2) for z in final],
    }
    pops = " ".join(f"{p:.6f}" for p in payload["populations"])
    summary = f"final populations: {pops}"
    if args.trajectory:
        summary += f"\ntrajectory written to {args.trajectory}"
    return CommandResult("ok", payload, summary)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinforge",
        description="Pulse-level synthesis and verification of spin-qubit "
        "NOT/CNOT/CCNOT/CCCNOT gates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a gate and compare both layers")
    p_build.add_argument("gate", help="not|cz|cnot|ccnot|cccnot or kind:c,t[@n]")
    _add_config_flags(p_build)

    p_sched = sub.add_parser("schedule", help="emit the timing table of a gate")
    p_sched.add_argument("gate")
    p_sched.add_argument(
        "--mode",
        choices=[DERIVE_CONSTANTS, SHARED_CONSTANTS],
        default=DERIVE_CONSTANTS,
    )
    p_sched.add_argument("--csv", action="store_true", help="print the CSV table")
    p_sched.add_argument("--search-bound", type=int, default=50)
    _add_config_flags(p_sched)

    p_verify = sub.add_parser("verify", help="run verification checks")
    p_verify.add_argument("scope", help="gate name or 'all'")
    p_verify.add_argument(
        "--oracle",
        action="store_true",
        help="include lab-frame integration cross-checks",
    )
    _add_config_flags(p_verify)

    p_sim = sub.add_parser("simulate", help="integrate the lab-frame dynamics")
    p_sim.add_argument("--n", type=int, required=True, help="number of qubits")
    p_sim.add_argument("--psi0", required=True, help="initial basis bitstring, 0=up")
    p_sim.add_argument("--t-final", type=float, required=True)
    p_sim.add_argument("--dt", type=float)
    p_sim.add_argument("--trajectory", help="write per-step amplitudes to this CSV")
    _add_config_flags(p_sim)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {
        "build": cmd_build,
        "schedule": cmd_schedule,
        "verify": cmd_verify,
        "simulate": cmd_simulate,
    }
    try:
        result = handlers[args.command](args)
    except (ValueError, OSError) as exc:
        result = CommandResult("error", {"message": str(exc)}, f"error: {exc}")
    print(result.human_summary)
    if args.json:
        document = {"status": result.status, "payload": result.payload}
        print(json.dumps(document, indent=2, sort_keys=True))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

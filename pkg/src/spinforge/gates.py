"""Gate synthesis: resonance evolution operators, pulse programs, and the
exact ideal layer they are verified against.

Two layers are kept deliberately separate. The pulse layer evaluates the
literal right-to-left product of pulse factors at the solved timing
residues. The ideal layer builds controlled powers of X spectrally and is
the independent verification target; discrepancies between the layers are
reported, never patched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import PhysicalConfig
from .operators import pauli, pauli_string, pair_sites
from .tensor import (
    FidelityReport,
    dagger,
    expm_pauli,
    identity,
    kron,
    phase_fidelity,
)
from .timing import (
    COMPONENT_PARENT_GATE,
    COMPONENT_TOTALS,
    COMPONENT_WINDOWS,
    ConstraintKind,
    GateSchedule,
    PulseProgram,
    PulseSegment,
    TimingSolution,
    gate_timing_table,
)

GATE_KINDS = (
    "not",
    "cz",
    "cnot",
    "ccnot",
    "cccnot",
    "hadamard_like",
    "cx_half",
    "cx_neg_half",
    "cx_quarter",
    "cx_neg_quarter",
)

ADJOINT_BASE = {"cx_neg_half": "cx_half", "cx_neg_quarter": "cx_quarter"}

X_POWER_ALPHA = {
    "cx_half": 0.5,
    "cx_neg_half": -0.5,
    "cx_quarter": 0.25,
    "cx_neg_quarter": -0.25,
}

DRIVE_ELIMINATION_TOL = 1e-9


@dataclass(frozen=True)
class GateSpec:
    """A gate kind with optional control/target sites in an n-qubit register."""

    kind: str
    control: int | None = None
    target: int | None = None
    n: int = 1

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not 1 <= self.n <= 4:
            raise ValueError(f"system size {self.n} outside 1..4")
        for site in (self.control, self.target):
            if site is not None and not 1 <= site <= self.n:
                raise ValueError(f"site {site} outside 1..{self.n}")
        if self.control is not None and self.control == self.target:
            raise ValueError("control and target must differ")

    @property
    def base_kind(self) -> str:
        return ADJOINT_BASE.get(self.kind, self.kind)

    @property
    def is_adjoint(self) -> bool:
        return self.kind in ADJOINT_BASE

    @property
    def label(self) -> str:
        if self.control is not None and self.target is not None:
            return f"{self.kind}({self.control},{self.target})/{self.n}q"
        return f"{self.kind}/{self.n}q"


# ---------------------------------------------------------------------------
# Ideal layer
# ---------------------------------------------------------------------------

def hadamard_like() -> np.ndarray:
    """The combined y-rotation used in place of a true Hadamard.

    Equals exp(-i (pi/4) sigma_y) = [[1, -1], [1, 1]] / sqrt(2).
    """
    return np.array([[1, -1], [1, 1]], dtype=complex) / math.sqrt(2)


def x_power(alpha: float) -> np.ndarray:
    """Principal power of X: eigenvalue 1 on (|0>+|1>), e^{i pi alpha} on (|0>-|1>)."""
    x = pauli("x")
    eye = identity(2)
    p_plus = (eye + x) / 2
    p_minus = (eye - x) / 2
    return p_plus + np.exp(1j * math.pi * alpha) * p_minus


def _embed_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for s in range(1, n + 1):
        factor = op if s == site else identity(2)
        out = np.kron(out, factor)
    return out


def controlled_unitary(
    control: int, target: int, n: int, block: np.ndarray
) -> np.ndarray:
    """Apply ``block`` on the target qubit when the control qubit is |1>."""
    if control == target:
        raise ValueError("control and target must differ")
    z = pauli("z")
    p0 = _embed_op((identity(2) + z) / 2, control, n)
    p1 = _embed_op((identity(2) - z) / 2, control, n)
    return p0 + p1 @ _embed_op(block, target, n)


def controlled_x_power(control: int, target: int, n: int, alpha: float) -> np.ndarray:
    return controlled_unitary(control, target, n, x_power(alpha))


def cnot_matrix(control: int, target: int, n: int = 2) -> np.ndarray:
    return controlled_unitary(control, target, n, pauli("x"))


def canonical_toffoli(n: int) -> np.ndarray:
    """Multi-controlled NOT on qubit n: identity with the last two rows swapped."""
    if not 1 <= n <= 4:
        raise ValueError(f"system size {n} outside 1..4")
    m = identity(2**n)
    m[[-2, -1]] = m[[-1, -2]]
    return m


def ideal_component(spec: GateSpec) -> np.ndarray:
    """Exact verification target for a gate spec."""
    kind = spec.kind
    if kind == "not":
        return pauli("x")
    if kind == "hadamard_like":
        return hadamard_like()
    if kind == "cz":
        c = spec.control or 1
        t = spec.target or 2
        n = max(spec.n, 2)
        return controlled_unitary(c, t, n, pauli("z"))
    if kind == "cnot":
        c = spec.control or 1
        t = spec.target or 2
        n = max(spec.n, 2)
        return cnot_matrix(c, t, n)
    if kind == "ccnot":
        return canonical_toffoli(3)
    if kind == "cccnot":
        return canonical_toffoli(4)
    if kind in X_POWER_ALPHA:
        if spec.control is None or spec.target is None:
            raise ValueError(f"{kind} needs explicit control and target sites")
        return controlled_x_power(
            spec.control, spec.target, spec.n, X_POWER_ALPHA[kind]
        )
    raise ValueError(f"unknown gate kind {kind!r}")


# ---------------------------------------------------------------------------
# Pulse layer
# ---------------------------------------------------------------------------

def _sigma_angle(phase_over_pi: Fraction | None, divisor: int) -> float | None:
    """Reduce an exact knob phase (knob*t / pi) to a sigma-level angle.

    The generator at sigma level has period 2 pi, so the exact fraction is
    reduced mod 2 and mapped to (-pi, pi].
    """
    if phase_over_pi is None:
        return None
    frac = (phase_over_pi / divisor) % 2
    if frac > 1:
        frac -= 2
    return float(frac) * math.pi


def _float_angle(phase_rad: float) -> float:
    angle = math.fmod(phase_rad, 2 * math.pi)
    if angle > math.pi:
        angle -= 2 * math.pi
    elif angle <= -math.pi:
        angle += 2 * math.pi
    return angle


def _window_angle(
    timing: TimingSolution,
    kind: ConstraintKind,
    divisor: int,
    cfg: PhysicalConfig,
) -> float:
    """Sigma-level angle of one factor family, exact when a witness exists."""
    exact = _sigma_angle(timing.knob_phase_over_pi(kind), divisor)
    if exact is not None:
        return exact
    return _float_angle(kind.knob_value(cfg) * timing.duration / divisor)


def u_phi(n: int, timing: TimingSolution, cfg: PhysicalConfig) -> np.ndarray:
    """Resonance evolution operator of the coupled register at solved residues.

    The operator is the product of per-site z factors, per-site drive (x)
    factors, Ising pair factors and the reference-offset phase, each
    evaluated at the exact residue the timing solution pins down. With the
    drive factor eliminated the result is diagonal.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"system size {n} outside 1..4")
    if not cfg.at_resonance:
        raise ValueError("u_phi requires the resonance condition omega = gamma*b0")

    a_z = _window_angle(timing, ConstraintKind.ZEEMAN, 2, cfg)
    a_x = _window_angle(timing, ConstraintKind.DRIVE, 2, cfg)
    a_zz = _window_angle(timing, ConstraintKind.EXCHANGE, 4, cfg)
    a_offset = _window_angle(timing, ConstraintKind.OFFSET, 1, cfg)

    if n >= 3 and abs(_float_angle(2 * a_x)) > DRIVE_ELIMINATION_TOL:
        raise ValueError(
            f"drive factor is not eliminated: gamma*B1*t = {2 * a_x!r} mod 2*pi"
        )

    u = identity(2**n)
    for pair in reversed(pair_sites(n)):
        g = pauli_string({pair[0]: "z", pair[1]: "z"}, n)
        u = expm_pauli(g, -a_zz) @ u
    for site in range(n, 0, -1):
        u = expm_pauli(pauli_string({site: "x"}, n), a_x) @ u
    for site in range(n, 0, -1):
        u = expm_pauli(pauli_string({site: "z"}, n), a_z) @ u
    return np.exp(-1j * a_offset) * u


def program_matrix(program: PulseProgram) -> np.ndarray:
    """Replay a pulse program: time-ordered segments compose right-to-left."""
    u = identity(2**program.n)
    for seg in program.segments:
        if seg.sites:
            g = pauli_string(dict(zip(seg.sites, seg.axes)), program.n)
            u = expm_pauli(g, seg.angle) @ u
        else:
            u = np.exp(1j * seg.angle) * u
    return u


def _u_phi_segments(
    timing: TimingSolution, n: int, cfg: PhysicalConfig, label: str
) -> list[PulseSegment]:
    a_z = _window_angle(timing, ConstraintKind.ZEEMAN, 2, cfg)
    a_x = _window_angle(timing, ConstraintKind.DRIVE, 2, cfg)
    a_zz = _window_angle(timing, ConstraintKind.EXCHANGE, 4, cfg)
    a_offset = _window_angle(timing, ConstraintKind.OFFSET, 1, cfg)
    segments = [PulseSegment((), (), -a_offset, label)]
    for i, j in pair_sites(n):
        segments.append(PulseSegment((i, j), ("z", "z"), -a_zz, label))
    for site in range(1, n + 1):
        segments.append(PulseSegment((site,), ("x",), a_x, label))
    for site in range(1, n + 1):
        segments.append(PulseSegment((site,), ("z",), a_z, label))
    return segments


def _adjoint_program(program: PulseProgram, label: str) -> PulseProgram:
    segments = tuple(
        PulseSegment(s.sites, s.axes, -s.angle, s.duration_label)
        for s in reversed(program.segments)
    )
    return PulseProgram(label, program.n, segments, program.total_time)


def component_program(spec: GateSpec, schedule: GateSchedule) -> PulseProgram:
    """Time-ordered pulse list for one component of the 3q/4q circuits.

    Every component is a y-conjugated phase window: the target-qubit y
    pulse, single-z and pair-zz correction pulses on the spectator sites,
    and the phase-accumulation window between them.
    """
    key = (spec.n, spec.base_kind, spec.control, spec.target)
    if key not in COMPONENT_WINDOWS:
        raise ValueError(f"no pulse construction for component {spec.label}")
    if schedule.gate != COMPONENT_PARENT_GATE[spec.n]:
        raise ValueError(
            f"schedule is for {schedule.gate!r}, component {spec.label} "
            f"needs {COMPONENT_PARENT_GATE[spec.n]!r}"
        )
    labels = COMPONENT_WINDOWS[key]
    if spec.base_kind == "cnot":
        label_phi, label_y = labels
        label_d = label_y
    else:
        label_phi, label_y, label_d = labels
    sol_phi = schedule.solutions[label_phi]
    sol_y = schedule.solutions[label_y]
    sol_d = schedule.solutions[label_d]
    cfg_phi = schedule.window_config(label_phi)

    a_y = _window_angle(sol_y, ConstraintKind.ZEEMAN, 2, schedule.cfg)
    a_d = _window_angle(sol_d, ConstraintKind.ZEEMAN, 2, schedule.cfg)
    c, t = spec.control, spec.target
    spectators = [s for s in range(1, spec.n + 1) if s not in (c, t)]
    spectator_pairs = [p for p in pair_sites(spec.n) if p != (min(c, t), max(c, t))]

    segments: list[PulseSegment] = [PulseSegment((t,), ("y",), a_y, label_y)]
    for site in spectators:
        segments.append(PulseSegment((site,), ("z",), -a_d, label_d))
    for i, j in spectator_pairs:
        segments.append(PulseSegment((i, j), ("z", "z"), a_d, label_d))
    segments.extend(_u_phi_segments(sol_phi, spec.n, cfg_phi, label_phi))
    segments.append(PulseSegment((t,), ("y",), -a_y, label_y))

    total = schedule.totals[COMPONENT_TOTALS[key]]
    program = PulseProgram(spec.label, spec.n, tuple(segments), total)
    if spec.is_adjoint:
        program = _adjoint_program(program, spec.label)
    return program


def pulse_component(
    spec: GateSpec, cfg: PhysicalConfig, timings: GateSchedule
) -> np.ndarray:
    """Evaluate one component gate as the literal product of its pulses."""
    return program_matrix(component_program(spec, timings))


# ---------------------------------------------------------------------------
# Named gates
# ---------------------------------------------------------------------------

def _default_schedule(
    gate: str, cfg: PhysicalConfig | None, timings: GateSchedule | None
) -> tuple[PhysicalConfig, GateSchedule]:
    if cfg is None:
        cfg = PhysicalConfig.natural_units()
    if timings is None:
        timings = gate_timing_table(gate, cfg)
    return cfg, timings


def not_program(schedule: GateSchedule) -> PulseProgram:
    """Single-qubit inverter: drive flip, frame phase, then a z quarter turn."""
    t1 = schedule.solutions["t1"]
    t2 = schedule.solutions["t2"]
    cfg1 = schedule.window_config("t1")
    a_z = _window_angle(t1, ConstraintKind.ZEEMAN, 2, cfg1)
    a_x = _window_angle(t1, ConstraintKind.DRIVE, 2, cfg1)
    # The closing pulse is a full-angle rotation: omega*t2 = pi/2.
    a_pulse = _window_angle(t2, ConstraintKind.ZEEMAN, 1, schedule.cfg)
    segments = (
        PulseSegment((1,), ("x",), a_x, "t1"),
        PulseSegment((1,), ("z",), a_z, "t1"),
        PulseSegment((1,), ("z",), a_pulse, "t2"),
    )
    return PulseProgram("not/1q", 1, segments, schedule.totals["T"])


def not_gate_1q(
    cfg: PhysicalConfig | None = None, timings: GateSchedule | None = None
) -> np.ndarray:
    """Composed single-qubit NOT; equals X up to the global phase -i."""
    cfg, timings = _default_schedule("not", cfg, timings)
    return program_matrix(not_program(timings))


def controlled_z_2q(
    cfg: PhysicalConfig | None = None, timings: GateSchedule | None = None
) -> np.ndarray:
    """Two-qubit controlled-Z from the evolution operator alone."""
    cfg, timings = _default_schedule("cz", cfg, timings)
    return u_phi(2, timings.solutions["t1"], timings.window_config("t1"))


def cnot_2q(
    cfg: PhysicalConfig | None = None, timings: GateSchedule | None = None
) -> np.ndarray:
    """Controlled-Z conjugated by the target-qubit y rotation."""
    cfg, timings = _default_schedule("cnot", cfg, timings)
    cz = u_phi(2, timings.solutions["t1"], timings.window_config("t1"))
    u_h = kron(identity(2), hadamard_like())
    return u_h @ cz @ dagger(u_h)


CCNOT_SEQUENCE: tuple[GateSpec, ...] = (
    GateSpec("cx_half", 2, 3, 3),
    GateSpec("cnot", 1, 2, 3),
    GateSpec("cx_neg_half", 2, 3, 3),
    GateSpec("cnot", 1, 2, 3),
    GateSpec("cx_half", 1, 3, 3),
)

CCCNOT_SEQUENCE: tuple[GateSpec, ...] = (
    GateSpec("cx_quarter", 1, 4, 4),
    GateSpec("cnot", 1, 2, 4),
    GateSpec("cx_neg_quarter", 2, 4, 4),
    GateSpec("cnot", 1, 2, 4),
    GateSpec("cx_quarter", 2, 4, 4),
    GateSpec("cnot", 2, 3, 4),
    GateSpec("cx_neg_quarter", 3, 4, 4),
    GateSpec("cnot", 1, 3, 4),
    GateSpec("cx_quarter", 3, 4, 4),
    GateSpec("cnot", 2, 3, 4),
    GateSpec("cx_neg_quarter", 3, 4, 4),
    GateSpec("cnot", 1, 3, 4),
    GateSpec("cx_quarter", 3, 4, 4),
)


def _compose(sequence, cfg, timings) -> np.ndarray:
    u = identity(2 ** sequence[0].n)
    for spec in sequence:  # time order; each new factor multiplies from the left
        u = pulse_component(spec, cfg, timings) @ u
    return u


def compose_ccnot(
    cfg: PhysicalConfig | None = None, timings: GateSchedule | None = None
) -> np.ndarray:
    """Five-component doubly-controlled NOT on three qubits."""
    cfg, timings = _default_schedule("ccnot", cfg, timings)
    return _compose(CCNOT_SEQUENCE, cfg, timings)


def compose_cccnot(
    cfg: PhysicalConfig | None = None, timings: GateSchedule | None = None
) -> np.ndarray:
    """Thirteen-component triply-controlled NOT on four qubits."""
    cfg, timings = _default_schedule("cccnot", cfg, timings)
    return _compose(CCCNOT_SEQUENCE, cfg, timings)


def ideal_sequence_product(sequence) -> np.ndarray:
    u = identity(2 ** sequence[0].n)
    for spec in sequence:
        u = ideal_component(spec) @ u
    return u


# ---------------------------------------------------------------------------
# Pulse-vs-ideal audit
# ---------------------------------------------------------------------------

AUDIT_SPECS_3Q: tuple[GateSpec, ...] = (
    GateSpec("cx_half", 2, 3, 3),
    GateSpec("cx_neg_half", 2, 3, 3),
    GateSpec("cnot", 1, 2, 3),
    GateSpec("cx_half", 1, 3, 3),
)

AUDIT_SPECS_4Q: tuple[GateSpec, ...] = (
    GateSpec("cx_quarter", 1, 4, 4),
    GateSpec("cnot", 1, 2, 4),
    GateSpec("cx_neg_quarter", 2, 4, 4),
    GateSpec("cx_quarter", 2, 4, 4),
    GateSpec("cnot", 2, 3, 4),
    GateSpec("cx_neg_quarter", 3, 4, 4),
    GateSpec("cnot", 1, 3, 4),
    GateSpec("cx_quarter", 3, 4, 4),
)

AUDIT_FLAG_TOL = 1e-9


def audit_components(cfg: PhysicalConfig | None = None) -> list[FidelityReport]:
    """Fidelity report of every pulse component against its ideal target."""
    if cfg is None:
        cfg = PhysicalConfig.natural_units()
    reports = []
    for n, specs in ((3, AUDIT_SPECS_3Q), (4, AUDIT_SPECS_4Q)):
        schedule = gate_timing_table(COMPONENT_PARENT_GATE[n], cfg)
        for spec in specs:
            pulse = pulse_component(spec, cfg, schedule)
            ideal = ideal_component(spec)
            reports.append(phase_fidelity(pulse, ideal, gate_label=spec.label))
    return reports


def flagged_components(reports) -> list[FidelityReport]:
    """Reports whose fidelity falls short of exact agreement."""
    return [r for r in reports if r.fidelity < 1 - AUDIT_FLAG_TOL]


# ---------------------------------------------------------------------------
# Named builds (CLI surface)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateBuild:
    label: str
    pulse: np.ndarray
    ideal: np.ndarray
    report: FidelityReport
    schedule: GateSchedule


def parse_gate_name(text: str) -> GateSpec | str:
    """Parse a CLI gate name: a whole gate or 'kind:control,target[@n]'."""
    name = text.strip().lower()
    if ":" not in name:
        if name in ("not", "cz", "cnot", "ccnot", "cccnot", "hadamard_like"):
            return name
        raise ValueError(f"unknown gate {text!r}")
    kind, _, rest = name.partition(":")
    if kind not in GATE_KINDS:
        raise ValueError(f"unknown gate kind {kind!r}")
    sites, _, n_text = rest.partition("@")
    try:
        control_s, target_s = sites.split(",")
        control, target = int(control_s), int(target_s)
    except ValueError:
        raise ValueError(f"expected 'kind:control,target[@n]', got {text!r}") from None
    base = ADJOINT_BASE.get(kind, kind)
    if n_text:
        n = int(n_text)
    else:
        candidates = [
            nn for nn in (3, 4) if (nn, base, control, target) in COMPONENT_WINDOWS
        ]
        if not candidates:
            raise ValueError(f"no pulse construction for component {text!r}")
        n = candidates[0]
    spec = GateSpec(kind, control, target, n)
    if (n, spec.base_kind, control, target) not in COMPONENT_WINDOWS:
        raise ValueError(f"no pulse construction for component {text!r}")
    return spec


def build_gate(name: str, cfg: PhysicalConfig | None = None) -> GateBuild:
    """Build the pulse and ideal layers of a named gate and compare them."""
    if cfg is None:
        cfg = PhysicalConfig.natural_units()
    parsed = parse_gate_name(name)
    if isinstance(parsed, GateSpec):
        schedule = gate_timing_table(COMPONENT_PARENT_GATE[parsed.n], cfg)
        pulse = pulse_component(parsed, cfg, schedule)
        ideal = ideal_component(parsed)
        label = parsed.label
    else:
        if parsed == "hadamard_like":
            schedule = gate_timing_table("cnot", cfg)
            pulse = expm_pauli(pauli("y"), -math.pi / 4)
            ideal = hadamard_like()
        else:
            schedule = gate_timing_table(parsed, cfg)
            builders = {
                "not": not_gate_1q,
                "cz": controlled_z_2q,
                "cnot": cnot_2q,
                "ccnot": compose_ccnot,
                "cccnot": compose_cccnot,
            }
            pulse = builders[parsed](cfg, schedule)
            targets = {
                "not": GateSpec("not", n=1),
                "cz": GateSpec("cz", 1, 2, 2),
                "cnot": GateSpec("cnot", 1, 2, 2),
                "ccnot": GateSpec("ccnot", n=3),
                "cccnot": GateSpec("cccnot", n=4),
            }
            ideal = ideal_component(targets[parsed])
        label = parsed
    report = phase_fidelity(pulse, ideal, gate_label=label)
    return GateBuild(label, pulse, ideal, report, schedule)

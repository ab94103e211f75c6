"""Pulse-timing congruences: solving, inversion, and per-gate schedules.

Each gate needs durations t such that several angular phases (drive
frequency, exchange strength, reference offset, drive amplitude) land on
prescribed residues modulo 2 pi simultaneously. Residue targets are exact
rational multiples of pi and all congruence algebra happens on rationals;
floats appear only in the final durations and coefficients.
"""
from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable

from .config import PhysicalConfig

RESIDUAL_TOL = 1e-9
DEFAULT_SEARCH_BOUND = 50

# Rationalization guard for float coefficient ratios: anything that is not
# within RATIO_TOL of a fraction with denominator <= RATIO_MAX_DEN is
# treated as irrational.
RATIO_MAX_DEN = 10_000
RATIO_TOL = 1e-12


class EmptyConstraintsError(ValueError):
    """solve_timing was called with no constraints."""


class IncommensurateError(ValueError):
    """No duration satisfies all congruences within the witness bound."""


class ScheduleInfeasibleError(IncommensurateError):
    """A gate schedule could not be built; names the violated congruence."""


class ConstraintKind(enum.Enum):
    """Which physical knob a congruence constrains."""

    ZEEMAN = "zeeman"      # omega (= gamma * B0 at resonance)
    DRIVE = "drive"        # gamma * B1
    EXCHANGE = "exchange"  # J
    OFFSET = "offset"      # B'

    def knob_value(self, cfg: PhysicalConfig) -> float:
        if self is ConstraintKind.ZEEMAN:
            return cfg.omega
        if self is ConstraintKind.DRIVE:
            return cfg.gamma * cfg.b1
        if self is ConstraintKind.EXCHANGE:
            return cfg.j_coupling
        return cfg.b_prime

    @property
    def config_key(self) -> str:
        return {
            ConstraintKind.ZEEMAN: "omega",
            ConstraintKind.DRIVE: "b1",
            ConstraintKind.EXCHANGE: "j",
            ConstraintKind.OFFSET: "b_prime",
        }[self]


@dataclass(frozen=True)
class TimingConstraint:
    """One congruence: level * knob * t = 2 k pi + residue, integer k.

    ``level`` is the exact factor in front of the knob (e.g. 1/2 for the
    half-angle form, 1/4 for exchange quarters), ``residue_over_pi`` the
    exact target residue as a multiple of pi, and ``min_witness`` the
    smallest admissible integer k. ``coefficient`` (rad/s) is level * knob
    once bound to a config; unbound constraints leave it None.
    """

    kind: ConstraintKind
    level: Fraction
    residue_over_pi: Fraction
    description: str = ""
    min_witness: int = 1
    coefficient: float | None = None

    def __post_init__(self):
        if self.level <= 0:
            raise ValueError(f"level must be positive, got {self.level}")
        if not -2 < self.residue_over_pi < 2:
            raise ValueError(
                f"residue {self.residue_over_pi}*pi outside (-2*pi, 2*pi)"
            )
        if self.min_witness < 0:
            raise ValueError(f"min_witness must be >= 0, got {self.min_witness}")
        if self.coefficient is not None and self.coefficient < 0:
            raise ValueError(f"coefficient must be >= 0, got {self.coefficient}")

    @property
    def residue(self) -> float:
        return float(self.residue_over_pi) * math.pi

    def bound(self, cfg: PhysicalConfig) -> "TimingConstraint":
        return replace(self, coefficient=float(self.level) * self.kind.knob_value(cfg))


@dataclass(frozen=True)
class TimingWitness:
    """A constraint together with its chosen integer k."""

    constraint: TimingConstraint
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"witness must be >= 0, got {self.k}")

    @property
    def phase_over_pi(self) -> Fraction:
        """Exact (level * knob * t) / pi = 2k + residue."""
        return 2 * self.k + self.constraint.residue_over_pi

    @property
    def knob_phase_over_pi(self) -> Fraction:
        """Exact (knob * t) / pi."""
        return self.phase_over_pi / self.constraint.level


@dataclass(frozen=True)
class TimingSolution:
    """A duration plus the integer witnesses of every congruence it meets."""

    label: str
    duration: float
    witnesses: tuple[TimingWitness, ...]
    residual: float

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.residual > RESIDUAL_TOL:
            raise ValueError(
                f"residual {self.residual:.3e} exceeds {RESIDUAL_TOL:.0e} rad"
            )

    def witness_for(self, kind: ConstraintKind) -> TimingWitness | None:
        for w in self.witnesses:
            if w.constraint.kind is kind:
                return w
        return None

    def knob_phase_over_pi(self, kind: ConstraintKind) -> Fraction | None:
        w = self.witness_for(kind)
        return None if w is None else w.knob_phase_over_pi


def _rationalize(x: float) -> Fraction | None:
    frac = Fraction(x).limit_denominator(RATIO_MAX_DEN)
    if abs(x - float(frac)) <= RATIO_TOL * max(1.0, abs(x)):
        return frac
    return None


def _max_residual(
    duration: float, witnesses: Iterable[TimingWitness]
) -> float:
    worst = 0.0
    for w in witnesses:
        coeff = w.constraint.coefficient
        if coeff is None:
            continue
        target = float(w.phase_over_pi) * math.pi
        worst = max(worst, abs(coeff * duration - target))
    return worst


def solve_timing(
    constraints: list[TimingConstraint],
    search_bound: int = DEFAULT_SEARCH_BOUND,
    *,
    label: str = "t",
    should_cancel: Callable[[], bool] | None = None,
) -> TimingSolution:
    """Find the smallest duration meeting every congruence simultaneously.

    All constraints must be bound (numeric coefficients). The system is
    solved exactly when all coefficient ratios are rational: the witness
    of the smallest-coefficient constraint is enumerated upward and the
    other witnesses are derived on exact fractions, so the first hit is
    minimal. Irrational ratios, or exhaustion of the witness bound, raise
    IncommensurateError.
    """
    if not constraints:
        raise EmptyConstraintsError("at least one timing constraint is required")
    if search_bound < 1:
        raise ValueError(f"search_bound must be >= 1, got {search_bound}")
    for c in constraints:
        if c.coefficient is None:
            raise ValueError(f"constraint {c.description or c.kind} is not bound")

    trivial: list[TimingWitness] = []
    active: list[TimingConstraint] = []
    for c in constraints:
        if c.coefficient == 0.0:
            if c.residue_over_pi != 0:
                raise IncommensurateError(
                    f"zero coefficient cannot reach residue "
                    f"{c.residue_over_pi}*pi ({c.description})"
                )
            trivial.append(TimingWitness(c, 0))
        else:
            active.append(c)
    if not active:
        raise IncommensurateError(
            "all coefficients are zero; no duration is determined"
        )

    ref = min(active, key=lambda c: c.coefficient)
    others = [c for c in active if c is not ref]
    ratios: list[Fraction] = []
    for c in others:
        ratio = _rationalize(c.coefficient / ref.coefficient)
        if ratio is None:
            raise IncommensurateError(
                f"coefficient ratio {c.coefficient / ref.coefficient!r} of "
                f"({c.description or c.kind.value}) vs "
                f"({ref.description or ref.kind.value}) is not rational"
            )
        ratios.append(ratio)

    blockers: dict[str, int] = {}
    for k_ref in range(max(ref.min_witness, 0), search_bound + 1):
        if should_cancel is not None and should_cancel():
            raise IncommensurateError("timing search cancelled")
        phase_ref = 2 * k_ref + ref.residue_over_pi
        if phase_ref <= 0:
            continue
        witnesses = [TimingWitness(ref, k_ref)]
        ok = True
        for c, ratio in zip(others, ratios):
            k_frac = (ratio * phase_ref - c.residue_over_pi) / 2
            if k_frac.denominator != 1 or not (
                c.min_witness <= k_frac <= search_bound
            ):
                name = c.description or c.kind.value
                blockers[name] = blockers.get(name, 0) + 1
                ok = False
                break
            witnesses.append(TimingWitness(c, int(k_frac)))
        if not ok:
            continue
        duration = float(phase_ref) * math.pi / ref.coefficient
        witnesses.extend(trivial)
        return TimingSolution(
            label=label,
            duration=duration,
            witnesses=tuple(witnesses),
            residual=_max_residual(duration, witnesses),
        )

    detail = ""
    if blockers:
        worst = max(blockers, key=blockers.get)
        detail = f"; most often violated: {worst}"
    raise IncommensurateError(
        f"no simultaneous solution with witnesses <= {search_bound}{detail}"
    )


def invert_for_constants(
    duration: float,
    constraints: list[TimingConstraint],
    witnesses: list[int],
    *,
    gamma: float | None = None,
) -> dict[str, float]:
    """Given a duration and chosen witnesses, derive the exact knob values.

    Returns config deltas keyed by 'omega', 'b1', 'j' or 'b_prime'. Two
    constraints on the same knob must agree; a mismatch is infeasible.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if len(constraints) != len(witnesses):
        raise ValueError("need exactly one witness per constraint")
    deltas: dict[str, float] = {}
    for c, k in zip(constraints, witnesses):
        if k < 0:
            raise ValueError(f"witness must be >= 0, got {k}")
        phase = 2 * k + c.residue_over_pi
        if phase < 0:
            raise ValueError(
                f"witness {k} makes {c.description or c.kind.value} negative"
            )
        knob = float(phase) * math.pi / (float(c.level) * duration)
        if c.kind is ConstraintKind.DRIVE:
            if gamma is None:
                raise ValueError("gamma is required to invert a drive constraint")
            knob /= gamma
        key = c.kind.config_key
        if key in deltas:
            scale = max(abs(deltas[key]), abs(knob), 1e-300)
            if abs(deltas[key] - knob) > 1e-9 * scale:
                raise ScheduleInfeasibleError(
                    f"conflicting values for {key}: "
                    f"{deltas[key]!r} vs {knob!r} ({c.description})"
                )
        deltas[key] = knob
    return deltas


# ---------------------------------------------------------------------------
# Pulse programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PulseSegment:
    """One pulse: exp(i * angle * P) for a Pauli string P over sites.

    Empty ``sites`` means a scalar phase factor exp(i * angle).
    """

    sites: tuple[int, ...]
    axes: tuple[str, ...]
    angle: float
    duration_label: str = ""

    @property
    def generator_label(self) -> str:
        if not self.sites:
            return "phase"
        return "".join(f"{a}{s}" for s, a in zip(self.sites, self.axes))


@dataclass(frozen=True)
class PulseProgram:
    """Time-ordered pulse list; right-to-left replay reproduces the gate."""

    gate_label: str
    n: int
    segments: tuple[PulseSegment, ...]
    total_time: float


# ---------------------------------------------------------------------------
# Gate timing tables
# ---------------------------------------------------------------------------

def _c(
    kind: ConstraintKind,
    level: str,
    residue: str,
    min_witness: int,
    description: str,
) -> TimingConstraint:
    return TimingConstraint(
        kind=kind,
        level=Fraction(level),
        residue_over_pi=Fraction(residue),
        description=description,
        min_witness=min_witness,
    )


def _phase_window_half() -> tuple[TimingConstraint, ...]:
    return (
        _c(ConstraintKind.ZEEMAN, "1/2", "-1/8", 1, "omega*t/2 = 2n*pi - pi/8"),
        _c(ConstraintKind.EXCHANGE, "1/4", "-1/8", 1, "J*t/4 = 2m*pi - pi/8"),
        _c(ConstraintKind.OFFSET, "1", "-1/8", 1, "B'*t = 2p*pi - pi/8"),
        _c(ConstraintKind.DRIVE, "1/2", "0", 0, "gamma*B1*t/2 = 2m*pi"),
    )


def _cnot_window_3q() -> tuple[TimingConstraint, ...]:
    return (
        _c(ConstraintKind.ZEEMAN, "1/2", "1/4", 1, "omega*t/2 = 2n*pi + pi/4"),
        _c(ConstraintKind.EXCHANGE, "1/4", "1/4", 1, "J*t/4 = 2m*pi + pi/4"),
        _c(ConstraintKind.OFFSET, "1", "1/4", 1, "B'*t = 2p*pi + pi/4"),
        _c(ConstraintKind.DRIVE, "1/2", "0", 0, "gamma*B1*t/2 = 2m*pi"),
    )


def _phase_window_quarter() -> tuple[TimingConstraint, ...]:
    return (
        _c(ConstraintKind.ZEEMAN, "1/2", "-1/16", 1, "omega*t/2 = 2n*pi - pi/16"),
        _c(ConstraintKind.EXCHANGE, "1/4", "-1/16", 1, "J*t/4 = 2m*pi - pi/16"),
        _c(ConstraintKind.OFFSET, "1", "-1/16", 1, "B'*t = 2p*pi - pi/16"),
        _c(ConstraintKind.DRIVE, "1", "0", 0, "gamma*B1*t = 2m*pi"),
    )


def _cnot_window_4q() -> tuple[TimingConstraint, ...]:
    return (
        _c(ConstraintKind.ZEEMAN, "1/2", "1/4", 1, "omega*t/2 = 2n*pi + pi/4"),
        _c(ConstraintKind.EXCHANGE, "1/4", "1/4", 1, "J*t/4 = 2m*pi + pi/4"),
        _c(ConstraintKind.OFFSET, "1", "1/4", 1, "B'*t = 2p*pi + pi/4"),
        _c(ConstraintKind.DRIVE, "1", "0", 0, "gamma*B1*t = 2m*pi"),
    )


def _free_pulse(residue: str, min_witness: int, text: str) -> tuple[TimingConstraint, ...]:
    return (_c(ConstraintKind.ZEEMAN, "1/2", residue, min_witness, text),)


def _y_pulse() -> tuple[TimingConstraint, ...]:
    return _free_pulse("1/4", 1, "omega*t/2 = 2m*pi + pi/4")


def _d_pulse_3q() -> tuple[TimingConstraint, ...]:
    return _free_pulse("-1/8", 1, "omega*t/2 = 2n*pi - pi/8")


def _d_pulse_4q() -> tuple[TimingConstraint, ...]:
    return _free_pulse("-1/16", 1, "omega*t/2 = 2n*pi - pi/16")


def _cz_window() -> tuple[TimingConstraint, ...]:
    return (
        _c(ConstraintKind.ZEEMAN, "1", "1/2", 1, "omega*t = 2n*pi + pi/2"),
        _c(ConstraintKind.EXCHANGE, "1", "1", 0, "J*t = (2p+1)*pi"),
        _c(ConstraintKind.OFFSET, "1", "1/4", 0, "B'*t = (2q+1/4)*pi"),
        _c(ConstraintKind.DRIVE, "1", "0", 0, "gamma*B1*t = 2m*pi"),
    )


def _quarter_turn_pulse() -> tuple[TimingConstraint, ...]:
    return (_c(ConstraintKind.ZEEMAN, "1", "1/2", 0, "omega*t = pi/2"),)


@dataclass(frozen=True)
class GateTable:
    windows: tuple[tuple[str, tuple[TimingConstraint, ...]], ...]
    totals: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]


def _ccnot_table() -> GateTable:
    windows = (
        ("t1", _phase_window_half()),
        ("t2", _y_pulse()),
        ("t3", _d_pulse_3q()),
        ("t4", _cnot_window_3q()),
        ("t5", _y_pulse()),
        ("t6", _phase_window_half()),
        ("t7", _y_pulse()),
        ("t8", _d_pulse_3q()),
    )
    totals = (
        ("T1", (("t1", 1), ("t2", 2), ("t3", 3))),
        ("T2", (("t4", 1), ("t5", 5))),
        ("T3", (("t6", 1), ("t7", 2), ("t8", 3))),
        ("T", (("T1", 2), ("T2", 2), ("T3", 1))),
    )
    return GateTable(windows, totals)


def _cccnot_table() -> GateTable:
    windows = (
        ("t1", _phase_window_quarter()),
        ("t2", _y_pulse()),
        ("t3", _d_pulse_4q()),
        ("t4", _cnot_window_4q()),
        ("t5", _y_pulse()),
        ("t6", _phase_window_quarter()),
        ("t7", _y_pulse()),
        ("t8", _d_pulse_4q()),
        ("t9", _cnot_window_4q()),
        ("t10", _y_pulse()),
        ("t11", _phase_window_quarter()),
        ("t12", _y_pulse()),
        ("t13", _d_pulse_4q()),
        ("t14", _cnot_window_4q()),
        ("t15", _y_pulse()),
    )
    totals = (
        ("T1", (("t1", 1), ("t2", 2), ("t3", 7))),
        ("T2", (("t4", 1), ("t5", 9))),
        ("T3", (("t6", 1), ("t7", 2), ("t8", 7))),
        ("T4", (("t9", 1), ("t10", 9))),
        ("T5", (("t11", 1), ("t12", 2), ("t13", 7))),
        ("T6", (("t14", 1), ("t15", 9))),
        (
            "T",
            (("T1", 1), ("T2", 2), ("T3", 2), ("T4", 2), ("T5", 4), ("T6", 2)),
        ),
    )
    return GateTable(windows, totals)


GATE_TABLES: dict[str, GateTable] = {
    "not": GateTable(
        windows=(
            (
                "t1",
                (
                    _c(ConstraintKind.ZEEMAN, "1/2", "1/2", 1,
                       "gamma*B0*t/2 = 2n*pi + pi/2"),
                    _c(ConstraintKind.DRIVE, "1/2", "1/2", 0,
                       "gamma*B1*t/2 = 2m*pi + pi/2"),
                ),
            ),
            ("t2", _quarter_turn_pulse()),
        ),
        totals=(("T", (("t1", 1), ("t2", 1))),),
    ),
    "cz": GateTable(
        windows=(("t1", _cz_window()),),
        totals=(("T", (("t1", 1),)),),
    ),
    "cnot": GateTable(
        windows=(("t1", _cz_window()), ("t2", _quarter_turn_pulse())),
        totals=(("T", (("t1", 1), ("t2", 2))),),
    ),
    "ccnot": _ccnot_table(),
    "cccnot": _cccnot_table(),
}

# Timing labels used by each component gate, keyed by (n, kind, control, target).
COMPONENT_WINDOWS: dict[tuple[int, str, int, int], tuple[str, ...]] = {
    (3, "cx_half", 2, 3): ("t1", "t2", "t3"),
    (3, "cnot", 1, 2): ("t4", "t5"),
    (3, "cx_half", 1, 3): ("t6", "t7", "t8"),
    (4, "cx_quarter", 1, 4): ("t1", "t2", "t3"),
    (4, "cnot", 1, 2): ("t4", "t5"),
    (4, "cx_quarter", 2, 4): ("t6", "t7", "t8"),
    (4, "cnot", 2, 3): ("t9", "t10"),
    (4, "cx_quarter", 3, 4): ("t11", "t12", "t13"),
    (4, "cnot", 1, 3): ("t14", "t15"),
}

COMPONENT_TOTALS: dict[tuple[int, str, int, int], str] = {
    (3, "cx_half", 2, 3): "T1",
    (3, "cnot", 1, 2): "T2",
    (3, "cx_half", 1, 3): "T3",
    (4, "cx_quarter", 1, 4): "T1",
    (4, "cnot", 1, 2): "T2",
    (4, "cx_quarter", 2, 4): "T3",
    (4, "cnot", 2, 3): "T4",
    (4, "cx_quarter", 3, 4): "T5",
    (4, "cnot", 1, 3): "T6",
}

COMPONENT_PARENT_GATE = {3: "ccnot", 4: "cccnot"}

DERIVE_CONSTANTS = "derive-constants"
SHARED_CONSTANTS = "shared-constants"


@dataclass(frozen=True)
class GateSchedule:
    """All timing solutions for one gate, plus totals and derived knobs."""

    gate: str
    mode: str
    cfg: PhysicalConfig
    solutions: dict[str, TimingSolution]
    totals: dict[str, float]
    derived: dict[str, dict[str, float]] = field(default_factory=dict)
    flags: dict[str, object] = field(default_factory=dict)

    def window_config(self, label: str) -> PhysicalConfig:
        """Config with this window's derived constants applied."""
        deltas = self.derived.get(label, {})
        changes = {}
        if "j" in deltas:
            changes["j_coupling"] = deltas["j"]
        if "b_prime" in deltas:
            changes["b_prime"] = deltas["b_prime"]
        if "b1" in deltas:
            changes["b1"] = deltas["b1"]
        return self.cfg.replace(**changes) if changes else self.cfg

    def to_json_dict(self) -> dict:
        windows = []
        for label, sol in self.solutions.items():
            rows = []
            for w in sol.witnesses:
                rows.append(
                    {
                        "kind": w.constraint.kind.value,
                        "description": w.constraint.description,
                        "level": str(w.constraint.level),
                        "residue_over_pi": str(w.constraint.residue_over_pi),
                        "witness": w.k,
                        "coefficient": w.constraint.coefficient,
                    }
                )
            windows.append(
                {
                    "segment": label,
                    "duration_seconds": sol.duration,
                    "residual_rad": sol.residual,
                    "constraints": rows,
                    "derived": self.derived.get(label, {}),
                }
            )
        return {
            "gate": self.gate,
            "mode": self.mode,
            "config": self.cfg.to_json_dict(),
            "windows": windows,
            "totals": self.totals,
            "flags": self.flags,
        }

    def to_csv_text(self) -> str:
        out = io.StringIO()
        out.write("gate,segment,coefficient,residue,witness,duration_seconds\n")
        for label, sol in self.solutions.items():
            for w in sol.witnesses:
                coeff = w.constraint.coefficient
                coeff_text = "" if coeff is None else repr(coeff)
                residue = w.constraint.residue_over_pi
                residue_text = "0" if residue == 0 else f"{residue}*pi"
                out.write(
                    f"{self.gate},{label},{coeff_text},{residue_text},"
                    f"{w.k},{sol.duration!r}\n"
                )
        for name, value in self.totals.items():
            out.write(f"{self.gate},{name},,,,{value!r}\n")
        return out.getvalue()


_COMPONENT_KINDS_BY_SIZE = {"cx_half": 3, "cx_neg_half": 3, "cx_quarter": 4, "cx_neg_quarter": 4}


def _resolve_gate_name(gate: str) -> str:
    """Map component names (kind:c,t[@n]) to their parent gate."""
    name = gate.lower().strip()
    if ":" not in name:
        return name
    kind, _, rest = name.partition(":")
    _, _, n_text = rest.partition("@")
    try:
        if n_text:
            n = int(n_text)
        elif kind in _COMPONENT_KINDS_BY_SIZE:
            n = _COMPONENT_KINDS_BY_SIZE[kind]
        elif kind == "cnot":
            sites = tuple(int(s) for s in rest.split("@")[0].split(","))
            n = 3 if (3, "cnot", *sites) in COMPONENT_WINDOWS else 4
        else:
            return name
    except ValueError:
        return name
    return COMPONENT_PARENT_GATE.get(n, name)


def _derive_window(
    label: str, constraints: tuple[TimingConstraint, ...], cfg: PhysicalConfig
) -> tuple[TimingSolution, dict[str, float]]:
    clock = next(c for c in constraints if c.kind is ConstraintKind.ZEEMAN)
    others = [c for c in constraints if c is not clock]

    k = clock.min_witness
    while 2 * k + clock.residue_over_pi <= 0:
        k += 1
    clock_bound = clock.bound(cfg)
    duration = (
        float(2 * k + clock.residue_over_pi) * math.pi / clock_bound.coefficient
    )

    witnesses = [TimingWitness(clock_bound, k)]
    inversion_targets: list[TimingConstraint] = []
    chosen: list[int] = []
    for c in others:
        kc = c.min_witness
        if not (c.residue_over_pi == 0 and c.min_witness == 0):
            while 2 * kc + c.residue_over_pi <= 0:
                kc += 1
        inversion_targets.append(c)
        chosen.append(kc)
    deltas = invert_for_constants(
        duration, inversion_targets, chosen, gamma=cfg.gamma
    )
    for c, kc in zip(inversion_targets, chosen):
        knob = deltas[c.kind.config_key]
        if c.kind is ConstraintKind.DRIVE:
            knob *= cfg.gamma
        witnesses.append(TimingWitness(replace(c, coefficient=float(c.level) * knob), kc))

    solution = TimingSolution(
        label=label,
        duration=duration,
        witnesses=tuple(witnesses),
        residual=_max_residual(duration, witnesses),
    )
    return solution, deltas


def gate_timing_table(
    gate: str,
    cfg: PhysicalConfig,
    mode: str = DERIVE_CONSTANTS,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> GateSchedule:
    """Build the full timing schedule for a gate.

    In derive-constants mode the drive frequency fixes each duration and
    the remaining knobs (J, B', B1) are tuned to their congruences per
    window. In shared-constants mode every knob comes from ``cfg`` and the
    simultaneous system is solved outright; infeasibility is reported with
    the violated congruence named.

    Component names like ``cx_half:2,3`` resolve to the parent circuit's
    table, which contains the component's windows and aggregate totals.
    """
    name = _resolve_gate_name(gate)
    if name not in GATE_TABLES:
        raise ValueError(
            f"unknown gate {gate!r}; expected one of {sorted(GATE_TABLES)} "
            "or a component like 'cx_half:2,3'"
        )
    if mode not in (DERIVE_CONSTANTS, SHARED_CONSTANTS):
        raise ValueError(f"unknown mode {mode!r}")
    if cfg.omega <= 0:
        raise ValueError("schedules need a positive drive frequency omega")
    if not cfg.at_resonance:
        raise ValueError("schedules are defined at resonance (omega = gamma*b0)")

    table = GATE_TABLES[name]
    solutions: dict[str, TimingSolution] = {}
    derived: dict[str, dict[str, float]] = {}
    for label, constraints in table.windows:
        if mode == DERIVE_CONSTANTS:
            sol, deltas = _derive_window(label, constraints, cfg)
            solutions[label] = sol
            if deltas:
                derived[label] = deltas
        else:
            bound = [c.bound(cfg) for c in constraints]
            try:
                solutions[label] = solve_timing(
                    bound, search_bound, label=label
                )
            except IncommensurateError as exc:
                raise ScheduleInfeasibleError(
                    f"{name} window {label} is infeasible with the shared "
                    f"constants: {exc}"
                ) from exc

    totals: dict[str, float] = {}
    for total_label, terms in table.totals:
        value = 0.0
        for ref, weight in terms:
            base = totals[ref] if ref in totals else solutions[ref].duration
            value += weight * base
        totals[total_label] = value

    flags: dict[str, object] = {}
    if mode == DERIVE_CONSTANTS:
        j_values = {
            label: deltas["j"] for label, deltas in derived.items() if "j" in deltas
        }
        if j_values:
            values = list(j_values.values())
            spread = max(values) - min(values)
            flags["shared_j_consistent"] = bool(
                spread <= 1e-12 * max(abs(v) for v in values)
            )
            flags["derived_j_values"] = j_values

    return GateSchedule(
        gate=name,
        mode=mode,
        cfg=cfg,
        solutions=solutions,
        totals=totals,
        derived=derived,
        flags=flags,
    )

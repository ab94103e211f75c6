"""Tests for the dynamics oracle: RK4 integration vs the closed form."""

import math

import numpy as np
import pytest

from spinforge.config import PhysicalConfig
from spinforge.gates import u_phi
from spinforge.oracle import (
    IntegrationSettings,
    analytic_rotating,
    check_m_constancy,
    convergence_study,
    cross_validate,
    integrate_lab,
    integrate_lab_trajectory,
    lab_propagator,
    rabi_period,
    write_trajectory_csv,
)
from spinforge.tensor import basis_state
from spinforge.timing import gate_timing_table

CFG_DRIVEN = PhysicalConfig.natural_units(b1=0.05)


class TestIntegrateLab:
    def test_zero_time_echoes_input(self):
        psi0 = basis_state(1, "0")
        out = integrate_lab(CFG_DRIVEN, 1, psi0, 0.0)
        assert np.array_equal(out, psi0)

    def test_zeeman_eigenstate_keeps_population(self):
        cfg = PhysicalConfig.natural_units()  # b1 = 0
        t = 7.3
        out = integrate_lab(cfg, 1, basis_state(1, "0"), t, IntegrationSettings(1e-3))
        assert abs(out[0]) ** 2 == pytest.approx(1.0, abs=1e-10)
        # Pure phase e^{i gamma B0 t / 2} on the up amplitude.
        assert np.angle(out[0]) == pytest.approx(
            math.remainder(t / 2, 2 * math.pi), abs=1e-8
        )

    def test_rabi_pi_pulse_flips_population(self):
        t_pi = math.pi / (CFG_DRIVEN.gamma * CFG_DRIVEN.b1)
        out = integrate_lab(
            CFG_DRIVEN, 1, basis_state(1, "0"), t_pi, IntegrationSettings(t_pi / 10_000)
        )
        assert abs(out[0]) ** 2 <= 1e-6
        assert abs(out[1]) ** 2 == pytest.approx(1.0, abs=1e-6)

    def test_unstable_step_rejected(self):
        with pytest.raises(ValueError, match="stability"):
            integrate_lab(
                CFG_DRIVEN, 1, basis_state(1, "0"), 100.0, IntegrationSettings(dt=5.0)
            )

    def test_norm_preserved_without_renormalization(self):
        period = rabi_period(CFG_DRIVEN)
        out = integrate_lab(
            CFG_DRIVEN,
            1,
            basis_state(1, "0"),
            period,
            IntegrationSettings(period / 10_000),
        )
        assert abs(np.linalg.norm(out) - 1.0) <= 1e-8

    def test_renormalization_policy(self):
        period = rabi_period(CFG_DRIVEN)
        out = integrate_lab(
            CFG_DRIVEN,
            1,
            basis_state(1, "0"),
            period,
            IntegrationSettings(period / 5_000, renormalize_every=100),
        )
        assert abs(np.linalg.norm(out) - 1.0) <= 1e-10

    def test_norm_drift_halving_gives_32x_reduction(self):
        # Fixed interval, no renormalization: the accumulated
        # pre-renormalization drift scales one power below the step count,
        # so halving dt cuts it ~32x.
        cfg = CFG_DRIVEN
        psi0 = (basis_state(1, "0") + basis_state(1, "1")) / math.sqrt(2)
        t_final = 10.0

        def total_drift(dt):
            out = integrate_lab(cfg, 1, psi0, t_final, IntegrationSettings(dt))
            return abs(np.linalg.norm(out) - 1.0)

        d1 = total_drift(0.1)
        d2 = total_drift(0.05)
        assert d1 > 0 and d2 > 0
        assert d1 / d2 == pytest.approx(32, rel=0.35)

    def test_settings_validation(self):
        with pytest.raises(ValueError):
            IntegrationSettings(dt=0.0)
        with pytest.raises(ValueError):
            IntegrationSettings(dt=0.1, renormalize_every=-1)


class TestAnalyticRotating:
    def test_resonant_single_qubit_closed_form(self):
        # psi(t) = e^{i w t Sz} e^{i gamma B1 t Sx} psi(0) at resonance.
        cfg = CFG_DRIVEN
        t = 3.21
        psi0 = basis_state(1, "0")
        got = analytic_rotating(cfg, 1, psi0, t)
        a_z = cfg.omega * t / 2
        a_x = cfg.gamma * cfg.b1 * t / 2
        uz = np.diag([np.exp(1j * a_z), np.exp(-1j * a_z)])
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        ux = math.cos(a_x) * np.eye(2) + 1j * math.sin(a_x) * sx
        assert np.allclose(got, uz @ ux @ psi0, atol=1e-12)

    def test_pure_phase_without_drive(self):
        cfg = PhysicalConfig.natural_units()
        for t in (0.3, 2.0, 11.0):
            out = analytic_rotating(cfg, 1, basis_state(1, "1"), t)
            assert abs(out[1]) == pytest.approx(1.0, abs=1e-12)

    def test_two_qubit_diagonal_matches_gate_window(self):
        # J != 0, B1 = 0: diagonal phases agree with the evolution operator
        # once the bookkeeping offset is multiplied back in.
        sched = gate_timing_table("cz", PhysicalConfig.natural_units())
        wcfg = sched.window_config("t1")
        t1 = sched.solutions["t1"].duration
        gate = u_phi(2, sched.solutions["t1"], wcfg)
        for bits in ("00", "01", "10", "11"):
            psi = analytic_rotating(wcfg, 2, basis_state(2, bits), t1)
            phased = np.exp(-1j * wcfg.b_prime * t1) * psi
            assert np.allclose(phased, gate @ basis_state(2, bits), atol=1e-12)

    def test_exactly_unitary(self):
        cfg = PhysicalConfig.natural_units(b1=0.08, j_coupling=0.3)
        rng = np.random.default_rng(3)
        for _ in range(25):
            amps = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi0 = amps / np.linalg.norm(amps)
            out = analytic_rotating(cfg, 2, psi0, rng.uniform(0, 20))
            assert abs(np.linalg.norm(out) - 1.0) <= 1e-12

    def test_offset_phase_flag(self):
        cfg = PhysicalConfig.natural_units(b_prime=0.1)
        t = 2.0
        plain = analytic_rotating(cfg, 1, basis_state(1, "0"), t)
        shifted = analytic_rotating(cfg, 1, basis_state(1, "0"), t, include_offset=True)
        assert np.allclose(shifted, np.exp(-1j * 0.1 * t) * plain, atol=1e-15)


class TestMConstancy:
    def test_zero_time_is_exact(self):
        assert check_m_constancy(CFG_DRIVEN, [0.0]) == 0.0

    def test_hundred_random_times(self):
        rng = np.random.default_rng(11)
        times = rng.uniform(0.0, 10.0 / CFG_DRIVEN.omega, size=100)
        assert check_m_constancy(CFG_DRIVEN, times) <= 1e-12

    def test_zero_frequency_trivial(self):
        cfg = PhysicalConfig(gamma=1.0, b0=0.0, b1=0.0, omega=0.0)
        assert check_m_constancy(cfg, [0.0, 1.0, 5.0]) <= 1e-15

    def test_empty_samples_rejected(self):
        with pytest.raises(ValueError):
            check_m_constancy(CFG_DRIVEN, [])


class TestCrossValidation:
    def test_rabi_period_agreement(self):
        period = rabi_period(CFG_DRIVEN)
        cv = cross_validate(
            CFG_DRIVEN,
            1,
            basis_state(1, "0"),
            period,
            IntegrationSettings(period / 10_000),
        )
        assert cv.max_amp_dev <= 1e-6

    def test_driveless_case_is_exact(self):
        cfg = PhysicalConfig.natural_units(j_coupling=0.4, b_prime=0.0)
        cv = cross_validate(
            cfg, 2, basis_state(2, "10"), 5.0, IntegrationSettings(5e-4)
        )
        assert cv.max_amp_dev <= 1e-10

    def test_fourth_order_convergence(self):
        period = rabi_period(CFG_DRIVEN)
        devs = convergence_study(
            CFG_DRIVEN, 1, basis_state(1, "0"), period, period / 1_000, halvings=2
        )
        ratios = [devs[i] / devs[i + 1] for i in range(len(devs) - 1)]
        for r in ratios:
            assert r == pytest.approx(16, rel=0.3)

    def test_gate_window_corollary(self):
        # The lab propagator over the controlled-Z window reproduces the
        # evolution operator once the offset phase is applied.
        sched = gate_timing_table("cz", PhysicalConfig.natural_units())
        wcfg = sched.window_config("t1")
        duration = sched.solutions["t1"].duration
        u_lab = lab_propagator(wcfg, 2, duration, IntegrationSettings(duration / 20_000))
        gate = u_phi(2, sched.solutions["t1"], wcfg)
        dev = np.max(np.abs(np.exp(-1j * wcfg.b_prime * duration) * u_lab - gate))
        assert dev <= 1e-8

    def test_three_qubit_window_corollary(self):
        sched = gate_timing_table("ccnot", PhysicalConfig.natural_units())
        wcfg = sched.window_config("t1")
        duration = sched.solutions["t1"].duration
        u_lab = lab_propagator(wcfg, 3, duration, IntegrationSettings(duration / 10_000))
        gate = u_phi(3, sched.solutions["t1"], wcfg)
        dev = np.max(np.abs(np.exp(-1j * wcfg.b_prime * duration) * u_lab - gate))
        assert dev <= 1e-6

    def test_routes_agree_with_drive_and_exchange_together(self):
        # The closed form stays exact even when the drive and the exchange
        # term do not commute; the integrator must track it.
        cfg = PhysicalConfig.natural_units(b1=0.08, j_coupling=0.4)
        rng = np.random.default_rng(5)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi0 = amps / np.linalg.norm(amps)
        cv = cross_validate(cfg, 2, psi0, 30.0, IntegrationSettings(1e-3))
        assert cv.max_amp_dev <= 1e-8

    def test_active_drive_breaks_the_factored_window(self):
        # With the drive left on through a phase window, the true propagator
        # is not the product of the separate factors; the gap is order one.
        # This is why derived schedules switch the drive off in-window.
        base = PhysicalConfig.natural_units(j_coupling=2.0, b_prime=0.5)
        sched = gate_timing_table("cz", base, mode="shared-constants")
        duration = sched.solutions["t1"].duration
        driven = base.replace(b1=2 * np.pi / duration)  # one full drive cycle
        gate = u_phi(2, sched.solutions["t1"], driven)
        u_lab = lab_propagator(driven, 2, duration, IntegrationSettings(duration / 20_000))
        dev = np.max(np.abs(np.exp(-1j * driven.b_prime * duration) * u_lab - gate))
        assert dev > 1e-2


class TestTrajectory:
    def test_trajectory_shape_and_csv(self, tmp_path):
        t_final = 1.0
        times, states = integrate_lab_trajectory(
            CFG_DRIVEN, 1, basis_state(1, "0"), t_final, IntegrationSettings(0.01)
        )
        assert times[0] == 0.0
        assert times[-1] == pytest.approx(t_final)
        assert states.shape == (len(times), 2)
        path = tmp_path / "traj.csv"
        write_trajectory_csv(str(path), times, states)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,re_0,im_0,re_1,im_1"
        assert len(lines) == len(times) + 1
        # Values round-trip at double precision.
        first = lines[1].split(",")
        assert float(first[1]) == states[0][0].real

    def test_rabi_period_requires_drive(self):
        with pytest.raises(ValueError, match="b1"):
            rabi_period(PhysicalConfig.natural_units())

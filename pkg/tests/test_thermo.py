import numpy as np
import pytest

from conftest import diagram_params, random_params
from triterm import (
    MachineParams,
    NotSteadyError,
    currents_report,
    solve_ness,
    thermal_baseline,
)


def btransition_params(b1=2.0, t1=1.0, t2=6.0, t3=10.0) -> MachineParams:
    # solve B1/T1 - B2/T2 + B3/T3 = 0 for B2 given B1
    b2 = b1 * (1.0 / t1 - 1.0 / t3) / (1.0 / t2 - 1.0 / t3)
    return MachineParams(
        B1=b1, B2=b2, T1=t1, T2=t2, T3=t3,
        gamma1=8.7e-3, gamma2=5.7e-3, gamma3=7.5e-3,
    )


class TestThermalStructure:
    def test_currents_proportional_to_common_factor(self, rng):
        # Q1 = -B1 V, Q2 = +B2 V, Q3 = -B3 V
        for _ in range(20):
            p = random_params(rng, coherent=False)
            rep = currents_report(solve_ness(p), p)
            v = thermal_baseline(p).v_ss
            scale = max(abs(v) * p.B2, 1e-300)
            assert abs(rep.heat[0] + p.B1 * v) <= 1e-10 * scale
            assert abs(rep.heat[1] - p.B2 * v) <= 1e-10 * scale
            assert abs(rep.heat[2] + p.B3 * v) <= 1e-10 * scale

    def test_no_work_without_coherence(self, rng):
        p = random_params(rng, coherent=False)
        rep = currents_report(solve_ness(p), p)
        assert rep.work == (0.0, 0.0, 0.0)

    def test_everything_vanishes_at_the_transition_point(self):
        p = btransition_params()
        rep = currents_report(solve_ness(p), p)
        for value in (*rep.heat, *rep.work):
            assert abs(value) <= 1e-12


class TestLaws:
    def test_first_and_second_law(self, rng):
        for _ in range(50):
            p = random_params(rng)
            rep = currents_report(solve_ness(p), p)
            assert abs(rep.first_law_residual) <= 1e-10
            assert rep.entropy_rate >= -1e-10

    def test_currents_real(self, rng):
        # complex intermediates never leak: report fields are plain floats
        p = random_params(rng)
        rep = currents_report(solve_ness(p), p)
        for value in (*rep.heat, *rep.work):
            assert isinstance(value, float)


class TestReportInterface:
    def test_rejects_non_steady_state(self):
        p = diagram_params(lambda1=0.4)
        rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
        with pytest.raises(NotSteadyError, match="not a steady state"):
            currents_report(rho, p)

    def test_scaled_units(self):
        p = diagram_params(lambda1=0.4)
        rep = currents_report(solve_ness(p), p)
        unit = 0.5 * p.T1 * p.gamma1
        assert rep.power_unit == pytest.approx(unit)
        for q, qs in zip(rep.heat, rep.scaled_heat):
            assert qs == pytest.approx(q / unit)
        assert rep.scaled_work_total == pytest.approx(rep.work_total / unit)

    def test_entropy_rate_definition(self):
        p = diagram_params(lambda3=0.6)
        rep = currents_report(solve_ness(p), p)
        manual = -sum(b * q for b, q in zip(p.betas, rep.heat))
        assert rep.entropy_rate == pytest.approx(manual, rel=1e-14)


@pytest.fixture
def rng():
    return np.random.default_rng(55)

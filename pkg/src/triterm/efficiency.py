"""Multi-task efficiency of the machine.

The universal efficiency weighs every flux by its nonequilibrium free
energy content relative to a reference temperature T_r:

    eta = [-sum_neg(Wdot_a) + sum_pos(F_i)] / [sum_pos(Wdot_a) - sum_neg(F_i)]

with F_i = Qdot_i*(T_r/T_i - 1) and sum_pos/sum_neg(x) = (x +- |x|)/2
applied termwise.  Work consumed by the machine counts positive.  The
second law bounds eta by 1, and each labeled regime's textbook formula is
this expression at a fixed T_r (T2 for refrigeration-side regimes I, III,
V; T1 for pump-side regimes II, IV, VI).  Regimes VII and VIII perform no
useful task and carry no efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .regimes import Regime, sign_pattern
from .thermo import CurrentsReport

__all__ = [
    "EfficiencyReport",
    "RegimeMismatchError",
    "generic_efficiency",
    "regime_efficiency",
]

_DENOMINATOR_FLOOR = 1e-300


class RegimeMismatchError(ValueError):
    """Current signs do not match the claimed regime's pattern."""


def _pos(x: float) -> float:
    return 0.5 * (x + abs(x))


def _neg(x: float) -> float:
    return 0.5 * (x - abs(x))


def _free_energy_fluxes(heat, temps, t_ref) -> list[float]:
    return [q * (t_ref / t - 1.0) for q, t in zip(heat, temps)]


def generic_efficiency(
    report: CurrentsReport,
    temps: tuple[float, float, float],
    t_ref: float,
) -> float | None:
    """Universal efficiency at reference temperature ``t_ref``.

    Returns None when the denominator vanishes (idle machine: nothing is
    being consumed at this reference).
    """
    fluxes = _free_energy_fluxes(report.heat, temps, t_ref)
    numerator = -sum(_neg(w) for w in report.work) + sum(_pos(f) for f in fluxes)
    denominator = sum(_pos(w) for w in report.work) - sum(_neg(f) for f in fluxes)
    if denominator <= _DENOMINATOR_FLOOR:
        return None
    return numerator / denominator


@dataclass(frozen=True)
class EfficiencyReport:
    """Regime-bound efficiency with its split and Carnot factors.

    ``eta`` is None for regimes without a useful task (VII, VIII) and at
    equilibrium.  ``components`` holds the additive split of hybrid
    regimes (refrigeration/pumping for V, engine/absorption-pump for VI).
    ``output_power`` is the free-energy numerator at the regime's T_r
    (the combined useful output, e.g. the hybrid output powers of regimes
    V and VI).
    """

    regime: Regime
    eta: float | None
    reference_temperature: float | None
    components: dict[str, float] = field(default_factory=dict)
    carnot: dict[str, float] = field(default_factory=dict)
    output_power: float | None = None

    @property
    def defined(self) -> bool:
        return self.eta is not None


def _carnot_factors(temps: tuple[float, float, float]) -> dict[str, float]:
    t1, t2, t3 = temps
    return {
        "eta_carnot": 1.0 - t1 / t2,
        "cop_refrigerator_max": t1 / (t2 - t1),
        "cop_absorption_refrigerator_max": t1 * (t3 - t2) / (t3 * (t2 - t1)),
        "eta_pump_max_cold_ref": t3 / (t3 - t1),
        "eta_pump_max_mid_ref": t3 / (t3 - t2),
        "eta_absorption_pump_max": (t3 / t2) * (t2 - t1) / (t3 - t1),
    }


_REFERENCE = {
    Regime.I: 1,  # index into temps: T2
    Regime.III: 1,
    Regime.V: 1,
    Regime.II: 0,  # T1
    Regime.IV: 0,
    Regime.VI: 0,
}


def _check_signs(report: CurrentsReport, regime: Regime, eps: float) -> None:
    pattern = sign_pattern(regime)
    if pattern is None:
        return
    values = (report.scaled_work_total, *report.scaled_heat)
    for want, have in zip(pattern, values):
        if abs(have) < eps:
            continue
        got = 1 if have > 0 else -1
        if want == 0 or got != want:
            raise RegimeMismatchError(
                f"currents (W={values[0]:.3e}, Q={values[1:]} in diagram units) "
                f"do not match the sign pattern of regime {regime}"
            )


def regime_efficiency(
    report: CurrentsReport,
    regime: Regime,
    temps: tuple[float, float, float],
    eps: float = 1e-9,
) -> EfficiencyReport:
    """Efficiency of the machine operating in ``regime``.

    The closed forms below are algebraically identical to
    :func:`generic_efficiency` at the regime's reference temperature;
    tests enforce the equivalence pointwise.
    """
    carnot = _carnot_factors(temps)
    t1, t2, t3 = temps
    q1, q2, q3 = report.heat
    w = report.work_total

    if regime not in _REFERENCE:
        return EfficiencyReport(
            regime=regime, eta=None, reference_temperature=None, carnot=carnot
        )

    _check_signs(report, regime, eps)
    t_ref = temps[_REFERENCE[regime]]
    fluxes = _free_energy_fluxes(report.heat, temps, t_ref)
    output = -sum(_neg(wv) for wv in report.work) + sum(_pos(f) for f in fluxes)

    components: dict[str, float] = {}
    if regime is Regime.I:
        eta = q1 / (carnot["cop_absorption_refrigerator_max"] * q3)
    elif regime is Regime.II:
        eta = -q3 / (carnot["eta_absorption_pump_max"] * q2)
    elif regime is Regime.III:
        eta = q1 / (
            carnot["cop_absorption_refrigerator_max"] * q3
            + carnot["cop_refrigerator_max"] * w
        )
    elif regime is Regime.IV:
        eta = -q3 / (
            carnot["eta_absorption_pump_max"] * q2
            + carnot["eta_pump_max_cold_ref"] * w
        )
    elif regime is Regime.V:
        components["refrigeration"] = q1 / (carnot["cop_refrigerator_max"] * w)
        components["pumping"] = -q3 / (carnot["eta_pump_max_mid_ref"] * w)
        eta = components["refrigeration"] + components["pumping"]
    else:  # Regime.VI
        components["engine"] = -w / (carnot["eta_carnot"] * q2)
        components["absorption_pump"] = -q3 / (carnot["eta_absorption_pump_max"] * q2)
        eta = components["engine"] + components["absorption_pump"]

    return EfficiencyReport(
        regime=regime,
        eta=eta,
        reference_temperature=t_ref,
        components=components,
        carnot=carnot,
        output_power=output,
    )

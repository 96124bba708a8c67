"""Operational regimes, thermal baseline and coherence transition curves.

With purely thermal units every heat current is proportional to a single
rate V_ss, so only two regimes exist: absorption refrigeration (I) and
heat pumping (II), split at beta1*B1 - beta2*B2 + beta3*B3 = 0.  Coherent
units add a work channel and six more sign patterns (III-VIII).  The
closed-form amplitudes ``lambda_star`` (where both heat currents of the
other two reservoirs vanish) and ``lambda_ne`` (where the coherent
reservoir's own heat current vanishes) mark the boundaries between those
regimes in the (B, lambda) plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import MachineParams, occupations_and_rates
from .thermo import CurrentsReport

__all__ = [
    "Regime",
    "ThermalBaseline",
    "TransitionAmplitudes",
    "thermal_baseline",
    "classify",
    "sign_pattern",
    "transition_lambdas",
    "regime_VI_work_condition",
    "thermal_regime",
    "DEFAULT_EPS",
]

DEFAULT_EPS = 1e-9  # classification threshold, in diagram power units


class Regime(enum.Enum):
    """Operating mode labels keyed by the (W, Q1, Q2, Q3) sign pattern."""

    I = "I"            # absorption refrigerator
    II = "II"          # absorption heat pump
    III = "III"        # power and heat driven refrigerator
    IV = "IV"          # power and heat driven pump
    V = "V"            # hybrid power driven refrigerator and heat pump
    VI = "VI"          # hybrid heat engine and heat pump
    VII = "VII"        # dual sink accelerator
    VIII = "VIII"      # triple power driven pump
    EQUILIBRIUM = "EQUILIBRIUM"
    UNCLASSIFIED = "UNCLASSIFIED"

    def __str__(self) -> str:  # CSV/CLI rendering
        return self.value


# sign of (W_total, Q1, Q2, Q3); +1 into the machine
_PATTERNS = {
    (0, 1, -1, 1): Regime.I,
    (0, -1, 1, -1): Regime.II,
    (1, 1, -1, 1): Regime.III,
    (1, -1, 1, -1): Regime.IV,
    (1, 1, -1, -1): Regime.V,
    (-1, -1, 1, -1): Regime.VI,
    (1, -1, -1, 1): Regime.VII,
    (1, -1, -1, -1): Regime.VIII,
}


def sign_pattern(regime: Regime) -> tuple[int, int, int, int] | None:
    """(sgn W, sgn Q1, sgn Q2, sgn Q3) of a labeled regime, else None."""
    for pattern, label in _PATTERNS.items():
        if label is regime:
            return pattern
    return None


def classify(report: CurrentsReport, eps: float = DEFAULT_EPS) -> Regime:
    """Regime label from the current signs.

    ``eps`` is an absolute threshold in diagram power units; any current
    below it counts as zero.  All-zero currents classify as EQUILIBRIUM;
    sign patterns outside the table (e.g. all currents positive) come back
    UNCLASSIFIED rather than being force-fitted.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")

    def sgn(x: float) -> int:
        if abs(x) < eps:
            return 0
        return 1 if x > 0.0 else -1

    q = report.scaled_heat
    pattern = (sgn(report.scaled_work_total), sgn(q[0]), sgn(q[1]), sgn(q[2]))
    if pattern == (0, 0, 0, 0):
        return Regime.EQUILIBRIUM
    return _PATTERNS.get(pattern, Regime.UNCLASSIFIED)


@dataclass(frozen=True)
class ThermalBaseline:
    """Closed-form steady state and current factor for thermal units."""

    populations: tuple[float, float, float]
    normalization: float
    v_ss: float

    def heat_currents(self, p: MachineParams) -> tuple[float, float, float]:
        """(Q1, Q2, Q3) = (-B1, +B2, -B3) * V_ss."""
        return (-p.B1 * self.v_ss, p.B2 * self.v_ss, -p.B3 * self.v_ss)


def thermal_baseline(p: MachineParams) -> ThermalBaseline:
    """Analytic steady state for lambda = 0 (coherence amplitudes ignored)."""
    n1, n2, n3 = occupations_and_rates(p).nbar
    g1, g2, g3 = p.gammas
    norm = (
        g1 * g3 * (1.0 + 2.0 * n1 + n3 + 3.0 * n1 * n3)
        + g2 * g3 * (n2 + n3 + 3.0 * n2 * n3)
        + g1 * g2 * (1.0 + 2.0 * (n1 + n2) + 3.0 * n1 * n2)
    )
    p11 = (
        n3 * g2 * g3 * (1.0 + n2)
        + g1 * (1.0 + n1) * ((1.0 + n2) * g2 + (1.0 + n3) * g3)
    ) / norm
    p22 = (
        n1 * g1 * g2 * (1.0 + n2) + g3 * (1.0 + n3) * (n1 * g1 + n2 * g2)
    ) / norm
    p33 = (
        n2 * g1 * g2 * (1.0 + n1) + n3 * g3 * (n1 * g1 + n2 * g2)
    ) / norm
    cycle = -n1 * n3 + n2 * (1.0 + n1 + n3)
    v_ss = 2.0 * cycle * g1 * g2 * g3 / norm
    return ThermalBaseline(populations=(p11, p22, p33), normalization=norm, v_ss=v_ss)


def thermal_regime(p: MachineParams) -> Regime:
    """Regime on the lambda = 0 axis: refrigerator I iff V_ss < 0, i.e.
    beta1*B1 + beta3*B3 < beta2*B2; pump II otherwise; EQUILIBRIUM at the
    transition point."""
    v = thermal_baseline(p).v_ss
    if v == 0.0:
        return Regime.EQUILIBRIUM
    return Regime.I if v < 0.0 else Regime.II


@dataclass(frozen=True)
class TransitionAmplitudes:
    """Coherence amplitudes where steady currents change sign.

    ``lambda_star`` zeroes both heat currents of the *other* reservoirs;
    ``lambda_ne`` zeroes the coherent reservoir's own heat current.  A
    None entry means the corresponding radicand is negative: no such
    transition exists at these parameters.
    """

    reservoir: int
    lambda_star: float | None
    lambda_ne: float | None


def _sqrt_or_none(value: float) -> float | None:
    if value < 0.0 or not math.isfinite(value):
        return None
    return math.sqrt(value)


def _ratio(num: float, den: float) -> float:
    # a vanishing denominator pushes the transition to infinity: absent
    if den == 0.0:
        return math.inf if num != 0.0 else math.nan
    return num / den


def transition_lambdas(p: MachineParams, i: int) -> TransitionAmplitudes:
    """Closed-form transition amplitudes for coherence in reservoir ``i``."""
    if i not in (1, 2, 3):
        raise ValueError("reservoir index must be 1, 2 or 3")
    n1, n2, n3 = occupations_and_rates(p).nbar
    g1, g2, g3 = p.gammas
    cycle = -n1 * n3 + n2 * (1.0 + n1 + n3)

    if i == 1:
        b = p.B1
        s = (1.0 + 2.0 * n1) * g1 + n2 * g2 + n3 * g3
        star = _ratio(
            cycle * (b * b + s * s), 2.0 * (1.0 + 2.0 * n1) * (n3 - n2) * s
        )
        ne = _ratio(
            -cycle * g2 * g3 * (b * b + s * s),
            2.0 * (1.0 + 2.0 * n1) * g1 * s
            * ((1.0 + n2) * g2 + (1.0 + n3) * g3),
        )
    elif i == 2:
        b = p.B2
        s = n1 * g1 + (1.0 + 2.0 * n2) * g2 + (1.0 + n3) * g3
        star = _ratio(
            -cycle * (b * b + s * s),
            2.0 * (1.0 + 2.0 * n2) * (1.0 + n1 + n3) * s,
        )
        ne = _ratio(
            cycle * g1 * g3 * (b * b + s * s),
            2.0 * (1.0 + 2.0 * n2) * g2 * s * ((1.0 + n1) * g1 + n3 * g3),
        )
    else:
        b = p.B3
        s = (1.0 + n1) * g1 + (1.0 + n2) * g2 + (1.0 + 2.0 * n3) * g3
        star = _ratio(
            cycle * (b * b + s * s), 2.0 * (n1 - n2) * (1.0 + 2.0 * n3) * s
        )
        ne = _ratio(
            -cycle * g1 * g2 * (b * b + s * s),
            2.0 * (1.0 + 2.0 * n3) * g3 * s * (n1 * g1 + n2 * g2),
        )

    return TransitionAmplitudes(
        reservoir=i,
        lambda_star=_sqrt_or_none(star),
        lambda_ne=_sqrt_or_none(ne),
    )


def regime_VI_work_condition(p: MachineParams) -> bool:
    """True when coherence in the hot reservoir extracts work (Wdot_3 < 0).

    Work extraction requires population inversion on the |1><->|2|
    transition of the thermal steady state, which reduces to

        gamma1*gamma2*(nbar_2 - nbar_1) > gamma3*(nbar_1*gamma1 + nbar_2*gamma2).

    Equivalent to the logarithmic form
    beta2*B3 < -beta2*B1 + log[(e^{beta1 B1} gamma2 (gamma1-gamma3)
    + gamma3 (gamma1+gamma2)) / (gamma1 (gamma2+gamma3))]
    wherever that log is defined, but free of domain restrictions.  The
    inversion is independent of lambda_3, so the predicted sign holds for
    any coherence amplitude.
    """
    n1, n2, _ = occupations_and_rates(p).nbar
    g1, g2, g3 = p.gammas
    return g1 * g2 * (n2 - n1) > g3 * (n1 * g1 + n2 * g2)

"""Parameter sweeps: regime diagrams, performance curves, extremum finding.

Grid points are independent steady-state solves; results are assembled in
grid order so output is deterministic regardless of evaluation strategy.
Sweeping B1 or B2 re-derives B3 = B2 - B1 at every point; sweeping "B3"
moves B2 with B1 held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .efficiency import EfficiencyReport, regime_efficiency
from .lindblad import SolverError, liouvillian_parts, ness_from_liouvillian
from .linalg import DegenerateKernelError
from .model import MachineParams, ParameterError, occupations_and_rates
from .regimes import (
    DEFAULT_EPS,
    Regime,
    classify,
    transition_lambdas,
)
from .thermo import currents_from_state

__all__ = [
    "SweepAxis",
    "CurvePoint",
    "DiagramSpec",
    "CurveSpec",
    "RegimeDiagram",
    "EmptySweepError",
    "set_swept_value",
    "equilibrium_gap",
    "regime_diagram",
    "power_efficiency_curve",
    "find_max_power",
    "MAX_POWER_OBJECTIVES",
]

_PARAM_NAMES = {f.name for f in fields(MachineParams)}


class EmptySweepError(RuntimeError):
    """No in-regime points to optimize over."""


@dataclass(frozen=True)
class SweepAxis:
    """Linearly spaced sweep over one parameter."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError("a sweep axis needs at least 2 points")
        if self.name != "B3" and self.name not in _PARAM_NAMES:
            raise ValueError(f"unknown sweep parameter {self.name!r}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)


def set_swept_value(base: MachineParams, name: str, value: float) -> MachineParams:
    """Copy of ``base`` with one parameter replaced (B3 moves B2)."""
    if name == "B3":
        return base.with_values(B2=base.B1 + value)
    if name not in _PARAM_NAMES:
        raise ParameterError(f"unknown sweep parameter {name!r}")
    return base.with_values(**{name: value})


def equilibrium_gap(base: MachineParams, name: str) -> float | None:
    """Value of the swept gap where all thermal currents vanish.

    Solves beta1*B1 - beta2*B2 + beta3*B3 = 0 for the named gap with the
    other one fixed; None when the root is outside the physical domain.
    """
    b1, b2, b3 = base.betas
    if name == "B1":
        value = base.B2 * (b2 - b3) / (b1 - b3)
        ok = 0.0 < value < base.B2
    elif name == "B2":
        value = base.B1 * (b1 - b3) / (b2 - b3)
        ok = value > base.B1
    elif name == "B3":
        value = base.B1 * (b1 - b2) / (b2 - b3)
        ok = value > 0.0
    else:
        raise ValueError(f"not a gap parameter: {name!r}")
    return value if ok else None


@dataclass(frozen=True)
class DiagramSpec:
    """2D sweep over (gap, coherence amplitude) of one reservoir."""

    base: MachineParams
    reservoir: int
    gap_axis: SweepAxis
    lambda_axis: SweepAxis
    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        if self.reservoir not in (1, 2, 3):
            raise ValueError("reservoir must be 1, 2 or 3")
        if self.gap_axis.name not in ("B1", "B2", "B3"):
            raise ValueError("diagram gap axis must sweep B1, B2 or B3")
        if not self.lambda_axis.name.startswith("lambda"):
            raise ValueError("diagram lambda axis must sweep a lambda_i")
        if self.lambda_axis.start < 0.0:
            raise ValueError("coherence amplitudes are non-negative")


@dataclass(frozen=True)
class RegimeDiagram:
    """Classified grid plus the analytic boundary overlays."""

    spec: DiagramSpec
    gap_values: np.ndarray          # (nB,)
    lambda_values: np.ndarray       # (nL,)
    labels: list[list[Regime]]      # [nB][nL]
    heat: np.ndarray                # (nB, nL, 3) natural units
    work: np.ndarray                # (nB, nL, 3)
    lambda_star: np.ndarray         # (nB,) NaN where absent
    lambda_ne: np.ndarray           # (nB,) NaN where absent
    gap_transition: float | None    # thermal equilibrium gap, if in range


def regime_diagram(spec: DiagramSpec) -> RegimeDiagram:
    """Classify every grid cell and sample the analytic boundary curves.

    Solver failures at isolated points are recorded as UNCLASSIFIED with
    NaN currents rather than aborting the sweep.
    """
    res = spec.reservoir
    gaps = spec.gap_axis.values
    lams = spec.lambda_axis.values
    n_b, n_l = len(gaps), len(lams)

    labels: list[list[Regime]] = []
    heat = np.full((n_b, n_l, 3), np.nan)
    work = np.full((n_b, n_l, 3), np.nan)
    lam_star = np.full(n_b, np.nan)
    lam_ne = np.full(n_b, np.nan)

    for ib, gap in enumerate(gaps):
        p_col = set_swept_value(spec.base, spec.gap_axis.name, gap)
        trans = transition_lambdas(p_col, res)
        if trans.lambda_star is not None:
            lam_star[ib] = trans.lambda_star
        if trans.lambda_ne is not None:
            lam_ne[ib] = trans.lambda_ne

        thermal, drives = liouvillian_parts(p_col)
        rates = occupations_and_rates(p_col)
        base_lams = list(p_col.lambdas)
        fixed = thermal.copy()
        for j in range(3):
            if j != res - 1 and base_lams[j] != 0.0:
                fixed += base_lams[j] * drives[j]

        column: list[Regime] = []
        for il, lam in enumerate(lams):
            p_point = p_col.with_values(**{f"lambda{res}": lam})
            try:
                rho = ness_from_liouvillian(fixed + lam * drives[res - 1])
                report = currents_from_state(rho, p_point, rates)
            except (SolverError, DegenerateKernelError):
                column.append(Regime.UNCLASSIFIED)
                continue
            heat[ib, il] = report.heat
            work[ib, il] = report.work
            column.append(classify(report, spec.eps))
        labels.append(column)

    return RegimeDiagram(
        spec=spec,
        gap_values=gaps,
        lambda_values=lams,
        labels=labels,
        heat=heat,
        work=work,
        lambda_star=lam_star,
        lambda_ne=lam_ne,
        gap_transition=equilibrium_gap(spec.base, spec.gap_axis.name),
    )


@dataclass(frozen=True)
class CurvePoint:
    """One sweep point with its currents, label and efficiency."""

    swept_value: float
    params: MachineParams
    report: object  # CurrentsReport
    regime: Regime
    efficiency: EfficiencyReport
    in_regime: bool


@dataclass(frozen=True)
class CurveSpec:
    """1D sweep for a power-efficiency curve."""

    base: MachineParams
    axis: SweepAxis
    regime_filter: Regime | None = None
    eps: float = DEFAULT_EPS


def power_efficiency_curve(spec: CurveSpec) -> list[CurvePoint]:
    """Sweep the axis, classify each point and attach its efficiency.

    Points whose label differs from ``regime_filter`` are still emitted,
    flagged ``in_regime=False``, so downstream plots can cut curves at
    regime boundaries.
    """
    points: list[CurvePoint] = []
    for value in spec.axis.values:
        p = set_swept_value(spec.base, spec.axis.name, value)
        try:
            thermal, drives = liouvillian_parts(p)
            liou = thermal
            for lam, drive in zip(p.lambdas, drives):
                if lam != 0.0:
                    liou = liou + lam * drive
            rho = ness_from_liouvillian(liou)
            report = currents_from_state(rho, p)
        except (SolverError, DegenerateKernelError):
            continue
        regime = classify(report, spec.eps)
        eff = regime_efficiency(report, regime, p.temperatures, spec.eps)
        in_regime = spec.regime_filter is None or regime is spec.regime_filter
        points.append(
            CurvePoint(
                swept_value=float(value),
                params=p,
                report=report,
                regime=regime,
                efficiency=eff,
                in_regime=in_regime,
            )
        )
    return points


def _objective_q(index: int):
    def value(pt: CurvePoint) -> float:
        return abs(pt.report.heat[index])

    return value


MAX_POWER_OBJECTIVES = {
    "Q1": _objective_q(0),
    "Q2": _objective_q(1),
    "Q3": _objective_q(2),
    "W3": lambda pt: abs(pt.report.work[2]),
    "W": lambda pt: abs(pt.report.work_total),
    "Y": lambda pt: (
        pt.efficiency.output_power if pt.efficiency.output_power is not None else -np.inf
    ),
}


def find_max_power(points: list[CurvePoint], objective: str) -> CurvePoint:
    """Grid argmax of the named objective over the in-regime points.

    Ties break toward the smaller swept value.  Raises
    :class:`EmptySweepError` when no in-regime point exists.
    """
    try:
        measure = MAX_POWER_OBJECTIVES[objective]
    except KeyError:
        raise ValueError(
            f"unknown objective {objective!r}; choose from "
            f"{sorted(MAX_POWER_OBJECTIVES)}"
        ) from None
    candidates = sorted(
        (pt for pt in points if pt.in_regime), key=lambda pt: pt.swept_value
    )
    if not candidates:
        raise EmptySweepError("no in-regime points in the sweep")
    best = candidates[0]
    best_value = measure(best)
    for pt in candidates[1:]:
        v = measure(pt)
        if v > best_value:
            best, best_value = pt, v
    return best

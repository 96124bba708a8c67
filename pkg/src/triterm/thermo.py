"""Steady-state thermodynamic observables.

Heat currents and coherent powers are evaluated from closed forms in the
steady-state entries (the collisional route in `collision` provides the
independent cross-check):

    Qdot_1 = 2*B1*gamma1*(n1*rho_11 - (1+n1)*rho_22)
    Qdot_2 = 2*B2*gamma2*(n2*rho_11 - (1+n2)*rho_33)
    Qdot_3 = 2*B3*gamma3*(n3*rho_22 - (1+n3)*rho_33)
    Wdot_i = i*B_i*g_i*lambda_i*(e^{i phi_i} rho_ul - e^{-i phi_i} rho_lu)

where rho_ul / rho_lu are the coherences between the upper and lower level
of channel i.  Positive heat/work flows from the reservoir into the
machine.  At a steady state the first law reads sum_i (Qdot_i + Wdot_i) = 0
and the entropy production rate is Sdot = -sum_i beta_i*Qdot_i >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lindblad import build_liouvillian
from .linalg import vec
from .model import MachineParams, Rates, occupations_and_rates

__all__ = ["CurrentsReport", "NotSteadyError", "currents_report", "currents_from_state"]

# coherence entry (upper, lower) of each channel in the |0>,|1>,|2> basis
_CHANNEL_LEVELS = ((1, 0), (2, 0), (2, 1))


class NotSteadyError(ValueError):
    """The supplied state is not a steady state of the generator."""


@dataclass(frozen=True)
class CurrentsReport:
    """Steady-state currents, natural units (energy per inverse-gamma time).

    ``scaled_*`` views report in the diagram power unit T1*gamma1/2 used
    by the operational diagrams and performance curves.
    """

    heat: tuple[float, float, float]
    work: tuple[float, float, float]
    power_unit: float
    betas: tuple[float, float, float]

    @property
    def work_total(self) -> float:
        return sum(self.work)

    @property
    def first_law_residual(self) -> float:
        return sum(self.heat) + sum(self.work)

    @property
    def entropy_rate(self) -> float:
        return -sum(b * q for b, q in zip(self.betas, self.heat))

    @property
    def scaled_heat(self) -> tuple[float, float, float]:
        return tuple(q / self.power_unit for q in self.heat)

    @property
    def scaled_work(self) -> tuple[float, float, float]:
        return tuple(w / self.power_unit for w in self.work)

    @property
    def scaled_work_total(self) -> float:
        return self.work_total / self.power_unit

    @property
    def scaled_first_law_residual(self) -> float:
        return self.first_law_residual / self.power_unit

    @property
    def max_scale(self) -> float:
        return max(max(abs(q) for q in self.heat), max(abs(w) for w in self.work))


def currents_from_state(
    rho: np.ndarray, p: MachineParams, rates: Rates | None = None
) -> CurrentsReport:
    """Closed-form currents at a steady state, no residual check.

    Sweeps use this directly on states they just solved for; external
    callers should prefer :func:`currents_report`.
    """
    if rates is None:
        rates = occupations_and_rates(p)
    pops = np.diag(rho).real

    heat = []
    for i in range(3):
        upper, lower = _CHANNEL_LEVELS[i]
        heat.append(
            float(
                2.0
                * p.gaps[i]
                * p.gammas[i]
                * (rates.nbar[i] * pops[lower] - (1.0 + rates.nbar[i]) * pops[upper])
            )
        )

    work = []
    scale = max(np.max(np.abs(rho)), 1.0)
    for i in range(3):
        upper, lower = _CHANNEL_LEVELS[i]
        w = (
            1j
            * p.gaps[i]
            * rates.g[i]
            * p.lambdas[i]
            * (
                np.exp(1j * p.phis[i]) * rho[upper, lower]
                - np.exp(-1j * p.phis[i]) * rho[lower, upper]
            )
        )
        if abs(w.imag) > 1e-12 * max(abs(w.real), scale):
            raise NotSteadyError(
                f"work current {i + 1} has imaginary part {w.imag:.3e}; "
                "state is not Hermitian"
            )
        work.append(float(w.real))

    return CurrentsReport(
        heat=tuple(heat),
        work=tuple(work),
        power_unit=p.diagram_power_unit,
        betas=p.betas,
    )


def currents_report(rho_ness: np.ndarray, p: MachineParams) -> CurrentsReport:
    """Currents at a verified steady state.

    Rejects inputs that the generator does not annihilate to within
    1e-10 * |L|_inf.
    """
    liou = build_liouvillian(p)
    residual = np.max(np.abs(liou @ vec(rho_ness)))
    scale = max(np.max(np.abs(liou)), 1.0)
    if residual > 1e-10 * scale:
        raise NotSteadyError(
            f"generator residual {residual:.3e} exceeds 1e-10 * |L|; "
            "input is not a steady state"
        )
    return currents_from_state(rho_ness, p)

"""Three-level autonomous thermal machine with coherent collisional reservoirs.

A simulator and analysis toolkit for a three-level machine exchanging
excitations with three streams of qubit units whose initial states may
carry coherence.  The package computes steady states (closed form and
numeric), heat currents and coherent powers, entropy production, operating
regimes, transition curves and multi-task efficiencies, plus an exact
finite-time collision simulator that cross-validates the continuous limit.
"""

from .collision import (
    CollisionRecord,
    CollisionRun,
    CollisionSimulator,
    collide,
    effective_generator,
    run_collisions,
)
from .efficiency import EfficiencyReport, generic_efficiency, regime_efficiency
from .lindblad import (
    SolverError,
    StepInstabilityError,
    Trajectory,
    build_liouvillian,
    evolve,
    solve_ness,
)
from .model import (
    HamiltonianSet,
    MachineParams,
    ParameterError,
    Rates,
    ReservoirUnitState,
    UnitStateError,
    hamiltonians,
    max_coherence_amplitude,
    occupations_and_rates,
    reservoir_unit_state,
)
from .regimes import (
    Regime,
    ThermalBaseline,
    TransitionAmplitudes,
    classify,
    regime_VI_work_condition,
    thermal_baseline,
    thermal_regime,
    transition_lambdas,
)
from .sweep import (
    CurvePoint,
    CurveSpec,
    DiagramSpec,
    EmptySweepError,
    RegimeDiagram,
    SweepAxis,
    find_max_power,
    power_efficiency_curve,
    regime_diagram,
)
from .thermo import CurrentsReport, NotSteadyError, currents_report

__version__ = "0.1.0"

__all__ = [
    "CollisionRecord",
    "CollisionRun",
    "CollisionSimulator",
    "CurrentsReport",
    "CurvePoint",
    "CurveSpec",
    "DiagramSpec",
    "EfficiencyReport",
    "EmptySweepError",
    "HamiltonianSet",
    "MachineParams",
    "NotSteadyError",
    "ParameterError",
    "Rates",
    "Regime",
    "RegimeDiagram",
    "ReservoirUnitState",
    "SolverError",
    "StepInstabilityError",
    "SweepAxis",
    "ThermalBaseline",
    "Trajectory",
    "TransitionAmplitudes",
    "UnitStateError",
    "build_liouvillian",
    "classify",
    "collide",
    "currents_report",
    "effective_generator",
    "evolve",
    "find_max_power",
    "generic_efficiency",
    "hamiltonians",
    "max_coherence_amplitude",
    "occupations_and_rates",
    "power_efficiency_curve",
    "regime_VI_work_condition",
    "regime_diagram",
    "regime_efficiency",
    "reservoir_unit_state",
    "run_collisions",
    "solve_ness",
    "thermal_baseline",
    "thermal_regime",
    "transition_lambdas",
]

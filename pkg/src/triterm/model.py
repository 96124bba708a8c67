"""Physical model: machine parameters, Hamiltonians, reservoir units.

A three-level system (basis |0>, |1>, |2>, energies 0, B1, B2) exchanges
single excitations with three streams of qubit units at temperatures
T1 < T2 < T3.  Channel 1 drives |0><->|1| (gap B1), channel 2 |0><->|2|
(gap B2), channel 3 |1><->|2| (gap B3 = B2 - B1), so every exchange is
resonant and the joint free Hamiltonian commutes with the interaction.

Rate convention: the jump rates are 2*gamma_i*nbar_i (up) and
2*gamma_i*(nbar_i + 1) (down), with microscopic coupling
|g_i| = sqrt(2*gamma_i*(2*nbar_i + 1)).  This normalization is what makes
the closed-form steady-state currents (`thermo`), the thermal baseline and
the coherence transition curves (`regimes`) the exact observables of the
generator built in `lindblad` and of the collision simulator; the
acceptance suite pins it against independent routes.

Unit qubit basis is ordered (excited, ground) so the unit Hamiltonian is
(B_i/2)*sigma_z and sigma = (sigma_x - i*sigma_y)/2 lowers the unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .linalg import dagger, kron

__all__ = [
    "MachineParams",
    "ParameterError",
    "UnitStateError",
    "Rates",
    "HamiltonianSet",
    "ReservoirUnitState",
    "occupations_and_rates",
    "hamiltonians",
    "reservoir_unit_state",
    "max_coherence_amplitude",
    "bose_occupation",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_MINUS",
    "LOWERING",
]

TWO_PI = 2.0 * math.pi

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = 0.5 * (SIGMA_X - 1j * SIGMA_Y)  # |ground><excited|

_KET = [np.eye(3, dtype=complex)[:, i : i + 1] for i in range(3)]
# system lowering operator of each channel: |0><1|, |0><2|, |1><2|
LOWERING = (
    _KET[0] @ _KET[1].conj().T,
    _KET[0] @ _KET[2].conj().T,
    _KET[1] @ _KET[2].conj().T,
)


class ParameterError(ValueError):
    """Machine parameters violate a model invariant."""


class UnitStateError(ValueError):
    """Reservoir unit state is not positive semidefinite at this tau."""


def bose_occupation(gap: float, temperature: float) -> float:
    """Occupation nbar = 1/(exp(gap/T) - 1), overflow safe."""
    x = gap / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class MachineParams:
    """Full parameterization of the machine and its three reservoirs.

    Energies are in units of T1*k_B (k_B = 1); gamma_i are rates, so time
    is measured in their inverse units.  B3 is derived as B2 - B1.
    tau is the collision duration (collisional picture only); when omitted
    it defaults to 1e-3 / max(gamma_i).
    """

    B1: float
    B2: float
    T1: float
    T2: float
    T3: float
    gamma1: float
    gamma2: float
    gamma3: float
    lambda1: float = 0.0
    lambda2: float = 0.0
    lambda3: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    tau: float = field(default=0.0)

    def __post_init__(self) -> None:
        vals = [getattr(self, f.name) for f in fields(self)]
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("parameters must be finite")
        if not 0.0 < self.B1 < self.B2:
            raise ParameterError(f"need 0 < B1 < B2, got B1={self.B1}, B2={self.B2}")
        if not 0.0 < self.T1 < self.T2 < self.T3:
            raise ParameterError(
                f"need 0 < T1 < T2 < T3, got {self.T1}, {self.T2}, {self.T3}"
            )
        if min(self.gamma1, self.gamma2, self.gamma3) <= 0.0:
            raise ParameterError("coupling rates gamma_i must be positive")
        if min(self.lambda1, self.lambda2, self.lambda3) < 0.0:
            raise ParameterError("coherence amplitudes lambda_i must be >= 0")
        for name in ("phi1", "phi2", "phi3"):
            object.__setattr__(self, name, getattr(self, name) % TWO_PI)
        if self.tau == 0.0:
            object.__setattr__(self, "tau", 1e-3 / max(self.gammas))
        elif self.tau < 0.0:
            raise ParameterError("collision duration tau must be positive")

    @property
    def B3(self) -> float:
        return self.B2 - self.B1

    @property
    def gaps(self) -> tuple[float, float, float]:
        return (self.B1, self.B2, self.B3)

    @property
    def temperatures(self) -> tuple[float, float, float]:
        return (self.T1, self.T2, self.T3)

    @property
    def betas(self) -> tuple[float, float, float]:
        return (1.0 / self.T1, 1.0 / self.T2, 1.0 / self.T3)

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3)

    @property
    def lambdas(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)

    @property
    def phis(self) -> tuple[float, float, float]:
        return (self.phi1, self.phi2, self.phi3)

    @property
    def coherent_reservoirs(self) -> tuple[int, ...]:
        """1-based indices of reservoirs with lambda_i > 0."""
        return tuple(i + 1 for i, l in enumerate(self.lambdas) if l > 0.0)

    @property
    def diagram_power_unit(self) -> float:
        """Power unit of the operational diagrams and performance curves.

        All scaled outputs report powers in multiples of T1*gamma1/2.
        """
        return 0.5 * self.T1 * self.gamma1

    def with_values(self, **kwargs) -> "MachineParams":
        """Copy with replaced fields (re-validated)."""
        return replace(self, **kwargs)

    @classmethod
    def from_mapping(cls, mapping) -> "MachineParams":
        """Build from a flat key/value mapping; unknown keys are rejected."""
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
        missing = {"B1", "B2", "T1", "T2", "T3", "gamma1", "gamma2", "gamma3"} - set(
            mapping
        )
        if missing:
            raise ParameterError(f"missing required parameters: {sorted(missing)}")
        try:
            values = {k: float(v) for k, v in mapping.items()}
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"non-numeric parameter value: {exc}") from exc
        return cls(**values)

    def to_mapping(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


@dataclass(frozen=True)
class Rates:
    """Occupations, jump rates and couplings of the three channels."""

    nbar: tuple[float, float, float]
    gamma_plus: tuple[float, float, float]   # excitation rate, 2*gamma*nbar
    gamma_minus: tuple[float, float, float]  # decay rate, 2*gamma*(nbar+1)
    g: tuple[float, float, float]            # sqrt(2*gamma*(2*nbar+1))


def occupations_and_rates(p: MachineParams) -> Rates:
    """Thermal occupations and the jump rates/couplings they induce.

    Local detailed balance gamma_plus/gamma_minus = exp(-beta_i B_i) holds
    by construction.
    """
    nbar = tuple(bose_occupation(b, t) for b, t in zip(p.gaps, p.temperatures))
    gp = tuple(2.0 * g * n for g, n in zip(p.gammas, nbar))
    gm = tuple(2.0 * g * (n + 1.0) for g, n in zip(p.gammas, nbar))
    gg = tuple(
        math.sqrt(2.0 * g * (2.0 * n + 1.0)) for g, n in zip(p.gammas, nbar)
    )
    return Rates(nbar=nbar, gamma_plus=gp, gamma_minus=gm, g=gg)


@dataclass(frozen=True)
class ReservoirUnitState:
    """Fresh unit of reservoir ``index``: thermal qubit plus coherence."""

    index: int
    matrix: np.ndarray  # 2x2, Hermitian, trace 1, PSD


def _gibbs_qubit(gap: float, temperature: float) -> np.ndarray:
    beta = 1.0 / temperature
    # basis (excited, ground); analytically normalized
    w = np.array([math.exp(-beta * gap / 2.0), math.exp(beta * gap / 2.0)])
    return np.diag(w / w.sum()).astype(complex)


def max_coherence_amplitude(p: MachineParams, i: int) -> float:
    """Largest admissible lambda_i at this tau (PSD boundary).

    The unit state stays PSD iff lambda*sqrt(tau) <= sqrt(p_e*p_g).
    """
    gap, t = p.gaps[i - 1], p.temperatures[i - 1]
    n = bose_occupation(gap, t)
    pe = n / (2.0 * n + 1.0)
    pg = (n + 1.0) / (2.0 * n + 1.0)
    return math.sqrt(pe * pg) / math.sqrt(p.tau)


def reservoir_unit_state(p: MachineParams, i: int) -> ReservoirUnitState:
    """Initial state of a reservoir-``i`` unit at the configured tau.

    Gibbs state plus lambda_i*sqrt(tau)*(cos(phi_i) sigma_x + sin(phi_i)
    sigma_y).  Rejects amplitudes that break positivity; the error message
    reports the maximal admissible lambda_i*sqrt(tau).
    """
    if i not in (1, 2, 3):
        raise ValueError("reservoir index must be 1, 2 or 3")
    gap, t = p.gaps[i - 1], p.temperatures[i - 1]
    lam, phi = p.lambdas[i - 1], p.phis[i - 1]
    chi = math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y
    rho = _gibbs_qubit(gap, t) + lam * math.sqrt(p.tau) * chi
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -1e-14:
        limit = max_coherence_amplitude(p, i) * math.sqrt(p.tau)
        raise UnitStateError(
            f"reservoir {i} unit not PSD (min eigenvalue {eigs.min():.3e}): "
            f"lambda*sqrt(tau) = {lam * math.sqrt(p.tau):.6g} exceeds the "
            f"admissible maximum {limit:.6g}"
        )
    return ReservoirUnitState(index=i, matrix=rho)


@dataclass(frozen=True)
class HamiltonianSet:
    """System, unit and interaction Hamiltonians on the ordered joint space
    system (x) unit1 (x) unit2 (x) unit3 (24-dimensional)."""

    h_system: np.ndarray            # 3x3
    h_units: tuple[np.ndarray, ...]  # 2x2 each
    h_interactions: tuple[np.ndarray, ...]  # 24x24 each, carries g/sqrt(tau)
    h_free: np.ndarray              # 24x24, H_S + sum_i H_R^(i)
    h_total: np.ndarray             # 24x24


def _embed(ops: list[np.ndarray]) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def hamiltonians(p: MachineParams) -> HamiltonianSet:
    """All Hamiltonian pieces; interaction terms use the configured tau."""
    rates = occupations_and_rates(p)
    i2 = np.eye(2, dtype=complex)
    i3 = np.eye(3, dtype=complex)
    hs = np.diag([0.0, p.B1, p.B2]).astype(complex)
    h_units = tuple((b / 2.0) * SIGMA_Z for b in p.gaps)

    h_free = _embed([hs, i2, i2, i2])
    for i in range(3):
        ops = [i3, i2, i2, i2]
        ops[1 + i] = h_units[i]
        h_free = h_free + _embed(ops)

    sqrt_tau = math.sqrt(p.tau)
    h_int = []
    for i in range(3):
        ops = [LOWERING[i], i2, i2, i2]
        ops[1 + i] = dagger(SIGMA_MINUS)
        term = _embed(ops)
        h_int.append((rates.g[i] / sqrt_tau) * (term + dagger(term)))

    h_total = h_free + sum(h_int)
    return HamiltonianSet(
        h_system=hs,
        h_units=h_units,
        h_interactions=tuple(h_int),
        h_free=h_free,
        h_total=h_total,
    )

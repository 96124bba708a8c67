"""Continuous-limit generator on the three-level system.

The generator acts on column-vectorized 3x3 density matrices as a 9x9
matrix:

    L(rho) = -i[H_S + sum_i G_i, rho] + sum_i D_i(rho)

with drive terms G_i = lambda_i*g_i*(e^{i phi_i} A_i + h.c.) sourced by
the units' coherence, and thermal dissipators D_i with jump operators A_i
(decay, rate 2*gamma_i*(nbar_i+1)) and A_i^dag (excitation, rate
2*gamma_i*nbar_i).  See `model` for the rate convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, herm_part, kron, null_vector, unvec, vec
from .model import LOWERING, MachineParams, occupations_and_rates

__all__ = [
    "SolverError",
    "StepInstabilityError",
    "Trajectory",
    "build_liouvillian",
    "liouvillian_parts",
    "ness_from_liouvillian",
    "solve_ness",
    "evolve",
]

_I3 = np.eye(3, dtype=complex)
TRACE_ROW = vec(_I3).conj()


class SolverError(RuntimeError):
    """Steady-state solve failed or produced an invalid state."""


class StepInstabilityError(RuntimeError):
    """Fixed-step integration lost trace/Hermiticity; reduce dt."""


def _commutator_superop(h: np.ndarray) -> np.ndarray:
    return -1j * (kron(_I3, h) - kron(h.T, _I3))


def _dissipator_superop(c: np.ndarray, rate: float) -> np.ndarray:
    cdc = dagger(c) @ c
    return rate * (
        kron(c.conj(), c)
        - 0.5 * kron(_I3, cdc)
        - 0.5 * kron(cdc.T, _I3)
    )


def liouvillian_parts(p: MachineParams) -> tuple[np.ndarray, list[np.ndarray]]:
    """Thermal generator and per-reservoir drive generators at unit lambda.

    The full generator is ``L = thermal + sum_i lambda_i * drives[i]``;
    the split lets sweeps over lambda reuse the expensive pieces.
    """
    rates = occupations_and_rates(p)
    hs = np.diag([0.0, p.B1, p.B2]).astype(complex)
    thermal = _commutator_superop(hs)
    for i in range(3):
        thermal += _dissipator_superop(LOWERING[i], rates.gamma_minus[i])
        thermal += _dissipator_superop(dagger(LOWERING[i]), rates.gamma_plus[i])
    drives = []
    for i in range(3):
        gi = rates.g[i] * (
            np.exp(1j * p.phis[i]) * LOWERING[i]
            + np.exp(-1j * p.phis[i]) * dagger(LOWERING[i])
        )
        drives.append(_commutator_superop(gi))
    return thermal, drives


def build_liouvillian(p: MachineParams) -> np.ndarray:
    """9x9 generator for the given parameters."""
    thermal, drives = liouvillian_parts(p)
    out = thermal
    for lam, drive in zip(p.lambdas, drives):
        if lam != 0.0:
            out = out + lam * drive
    return out


def ness_from_liouvillian(liouvillian: np.ndarray) -> np.ndarray:
    """Steady state of a prebuilt generator (see :func:`solve_ness`)."""
    x = null_vector(liouvillian, TRACE_ROW)
    rho = herm_part(unvec(x, 3))
    eigs, vecs = np.linalg.eigh(rho)
    if eigs.min() < -1e-12:
        raise SolverError(
            f"steady state not PSD: min eigenvalue {eigs.min():.3e} < -1e-12"
        )
    if eigs.min() < 0.0:
        # roundoff-scale negativity: clip and renormalize
        eigs = np.clip(eigs, 0.0, None)
        rho = (vecs * eigs) @ dagger(vecs)
        rho = herm_part(rho / np.trace(rho).real)
    return rho


def solve_ness(p: MachineParams) -> np.ndarray:
    """Steady state of the generator: Hermitian, unit trace, PSD.

    The null-space solve leaves ``|L rho|_inf <= 1e-10 * |L|_inf``;
    eigenvalues in [-1e-12, 0) are clipped to zero and the state is
    renormalized, anything lower raises :class:`SolverError`.
    """
    return ness_from_liouvillian(build_liouvillian(p))


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step integration output."""

    times: np.ndarray            # (n+1,)
    states: np.ndarray           # (n+1, 3, 3)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def evolve(
    rho0: np.ndarray,
    p: MachineParams,
    t_final: float,
    dt: float,
    store_every: int = 1,
) -> Trajectory:
    """Integrate d(rho)/dt = L(rho) with classic fixed-step RK4.

    Raises :class:`StepInstabilityError` when trace or Hermiticity drift
    beyond 1e-10 over the run, which indicates dt is too large for the
    fastest frequency (~B2) in the generator.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_final < 0.0:
        raise ValueError("t_final must be >= 0")
    rho0 = np.asarray(rho0, dtype=complex)
    liou = build_liouvillian(p)

    def rhs(v: np.ndarray) -> np.ndarray:
        return liou @ v

    n_steps = int(round(t_final / dt))
    v = vec(rho0)
    times = [0.0]
    states = [rho0.copy()]
    for k in range(n_steps):
        k1 = rhs(v)
        k2 = rhs(v + 0.5 * dt * k1)
        k3 = rhs(v + 0.5 * dt * k2)
        k4 = rhs(v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        # density-matrix entries are bounded by the trace; a blowup means
        # dt is outside the stability region of the fastest mode (~B2)
        if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > 1e3:
            raise StepInstabilityError(
                f"integration diverged at step {k + 1}; reduce dt below {dt}"
            )
        if (k + 1) % store_every == 0 or k == n_steps - 1:
            times.append((k + 1) * dt)
            states.append(unvec(v, 3))

    final = states[-1]
    trace_drift = abs(np.trace(final).real - np.trace(rho0).real)
    herm_drift = np.max(np.abs(final - dagger(final)))
    if trace_drift > 1e-10 or herm_drift > 1e-10:
        raise StepInstabilityError(
            f"trace drift {trace_drift:.3e} / Hermiticity drift {herm_drift:.3e} "
            f"exceed 1e-10; reduce dt below {dt}"
        )
    return Trajectory(times=np.array(times), states=np.array(states))

import numpy as np
import pytest

from triterm import MachineParams, Regime

# caption parameters shared by the operational-diagram tests
DIAGRAM_TEMPS = dict(T1=1.0, T2=6.0, T3=10.0)
GAMMAS = dict(gamma1=8.7e-3, gamma2=5.7e-3, gamma3=7.5e-3)


def diagram_params(**overrides) -> MachineParams:
    kwargs = dict(B1=4.0, B2=12.0, **DIAGRAM_TEMPS, **GAMMAS)
    kwargs.update(overrides)
    return MachineParams(**kwargs)


def random_params(rng: np.random.Generator, coherent: bool = True) -> MachineParams:
    """A random valid parameter set in the desk-scale ranges."""
    t1 = rng.uniform(0.5, 2.0)
    t2 = t1 * rng.uniform(1.5, 6.0)
    t3 = t2 * rng.uniform(1.5, 6.0)
    b2 = rng.uniform(2.0, 12.0)
    b1 = b2 * rng.uniform(0.1, 0.9)
    lam = [0.0, 0.0, 0.0]
    if coherent:
        lam[rng.integers(0, 3)] = rng.uniform(0.0, 0.9)
    return MachineParams(
        B1=b1,
        B2=b2,
        T1=t1,
        T2=t2,
        T3=t3,
        gamma1=rng.uniform(1e-3, 5e-2),
        gamma2=rng.uniform(1e-3, 5e-2),
        gamma3=rng.uniform(1e-3, 5e-2),
        lambda1=lam[0],
        lambda2=lam[1],
        lambda3=lam[2],
        phi1=rng.uniform(0.0, 2 * np.pi),
        phi2=rng.uniform(0.0, 2 * np.pi),
        phi3=rng.uniform(0.0, 2 * np.pi),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(991)


_UNLABELED = (Regime.EQUILIBRIUM, Regime.UNCLASSIFIED)


def boundary_violations(diagram) -> list[str]:
    """Check each grid column's label flips against the analytic curves.

    Every analytic transition amplitude lying inside the swept lambda
    window must have a classification flip within one grid step, and every
    interior flip must have an analytic curve within one grid step.  Flips
    off the lambda = 0 axis (thermal regime to its coherent counterpart)
    are exempt, as are curves within one step of the axis.
    """
    lams = diagram.lambda_values
    step = lams[1] - lams[0]
    problems: list[str] = []
    for ib, gap in enumerate(diagram.gap_values):
        labels = diagram.labels[ib]
        # walk labeled cells only; a cell caught inside the eps-band of a
        # transition classifies UNCLASSIFIED and must not hide the flip
        marked = [
            (lam, lab)
            for lam, lab in zip(lams, labels)
            if lab not in _UNLABELED
        ]
        runs: list[list] = []  # [label, first_lam, last_lam]
        for lam, lab in marked:
            if runs and runs[-1][0] is lab:
                runs[-1][2] = lam
            else:
                runs.append([lab, lam, lam])
        flips = []
        for lower, upper in zip(runs, runs[1:]):
            if lower[1] == 0.0 and lower[0] in (Regime.I, Regime.II):
                # axis band: the thermal label persists until the coherent
                # work (quadratic in lambda) clears the eps threshold; not
                # an analytic-curve crossing
                continue
            flips.append(0.5 * (lower[2] + upper[1]))
        curves = [
            v
            for v in (diagram.lambda_star[ib], diagram.lambda_ne[ib])
            if np.isfinite(v) and step < v <= lams[-1]
        ]
        for v in curves:
            if not any(abs(v - f) <= step for f in flips):
                problems.append(
                    f"column B={gap:.4f}: curve at lambda={v:.4f} has no "
                    f"flip within one step"
                )
        for f in flips:
            if not any(abs(v - f) <= step for v in curves):
                problems.append(
                    f"column B={gap:.4f}: flip at lambda={f:.4f} has no "
                    f"curve within one step"
                )
    return problems


def diagram_inventory(diagram) -> set:
    out = set()
    for column in diagram.labels:
        out.update(column)
    return out - set(_UNLABELED)

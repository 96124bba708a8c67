"""Command-line interface.

Subcommands: ness, classify, diagram, curve, collide, transitions,
validate.  Parameters come from ``--config`` (flat ``key = value`` lines,
``#`` comments) and/or flags of the same names; flags win.  Outputs are
deterministic: fixed column schemas, floats at 12 significant digits, so
identical configs give byte-identical artifacts.

Exit codes: 0 success, 1 invalid configuration, 2 solver failure,
3 validation-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .collision import CollisionSimulator
from .efficiency import regime_efficiency
from .lindblad import (
    SolverError,
    StepInstabilityError,
    build_liouvillian,
    solve_ness,
)
from .linalg import DegenerateKernelError, vec
from .model import (
    MachineParams,
    ParameterError,
    UnitStateError,
    occupations_and_rates,
)
from .regimes import (
    DEFAULT_EPS,
    Regime,
    classify,
    thermal_baseline,
    transition_lambdas,
)
from .sweep import (
    CurveSpec,
    DiagramSpec,
    SweepAxis,
    power_efficiency_curve,
    regime_diagram,
)
from .thermo import NotSteadyError, currents_report

__all__ = ["main"]

PARAM_KEYS = [f.name for f in fields(MachineParams)]
REQUIRED_KEYS = ("B1", "B2", "T1", "T2", "T3", "gamma1", "gamma2", "gamma3")

DIAGRAM_HEADER = [
    "B", "lambda", "regime",
    "Qdot1", "Qdot2", "Qdot3", "Wdot1", "Wdot2", "Wdot3",
    "first_law_residual", "Sdot_tot",
]
OVERLAY_HEADER = ["B", "lambda_star", "lambda_ne"]
CURVE_HEADER = [
    "swept_value",
    "Qdot1", "Qdot2", "Qdot3", "Wdot1", "Wdot2", "Wdot3",
    "eta", "eta_refrigeration", "eta_pumping", "eta_engine", "eta_absorption_pump",
    "Y_output", "regime", "in_regime",
    "first_law_residual", "Sdot_tot",
]
COLLIDE_HEADER = [
    "step", "time", "rho11", "rho22", "rho33",
    "Q1", "Q2", "Q3", "W1", "W2", "W3", "W_mec", "S_tot",
    "cumQ1", "cumQ2", "cumQ3", "cumW1", "cumW2", "cumW3", "delta_inf",
]


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # usage problems are configuration problems: exit 1, not argparse's 2
    def error(self, message):
        raise CliError(f"{self.prog}: {message}", 1)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if v != v or v in (float("inf"), float("-inf")):
        return "nan"
    return f"{v:.12g}"


def _round12(obj):
    """Round floats to 12 significant digits recursively (JSON stability)."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def parse_config_file(path: str) -> dict[str, float]:
    """Flat key = value file; rejects unknown keys and malformed lines."""
    out: dict[str, float] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'", 1)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in PARAM_KEYS:
            raise CliError(f"{path}:{lineno}: unknown parameter {key!r}", 1)
        try:
            out[key] = float(value.strip())
        except ValueError:
            raise CliError(f"{path}:{lineno}: non-numeric value for {key!r}", 1)
    return out


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value parameter file")
    for key in PARAM_KEYS:
        parser.add_argument(f"--{key}", type=float, default=None)


def _params_from_args(args) -> MachineParams:
    mapping: dict[str, float] = {}
    if args.config:
        mapping.update(parse_config_file(args.config))
    for key in PARAM_KEYS:
        value = getattr(args, key)
        if value is not None:
            mapping[key] = value
    missing = [k for k in REQUIRED_KEYS if k not in mapping]
    if missing:
        raise CliError(f"missing required parameters: {', '.join(missing)}", 1)
    try:
        return MachineParams.from_mapping(mapping)
    except ParameterError as exc:
        raise CliError(str(exc), 1)


def _config_stamp(p: MachineParams, extra: dict | None = None) -> str:
    items = [f"{k}={_fmt(v)}" for k, v in p.to_mapping().items()]
    if extra:
        items += [f"{k}={_fmt(v)}" for k, v in extra.items()]
    return "# config: " + " ".join(items)


def _write_csv(path: str, stamp: str, header: list[str], rows) -> None:
    lines = [stamp, ",".join(header)]
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _scale(p: MachineParams, natural: bool) -> float:
    return 1.0 if natural else p.diagram_power_unit


# --------------------------------------------------------------------------
# subcommands


def _cmd_ness(args) -> int:
    p = _params_from_args(args)
    rho = solve_ness(p)
    report = currents_report(rho, p)
    regime = classify(report, args.eps)
    eff = regime_efficiency(report, regime, p.temperatures, args.eps)
    payload = {
        "params": p.to_mapping(),
        "populations": [float(x) for x in np.diag(rho).real],
        "rho_re": rho.real.tolist(),
        "rho_im": rho.imag.tolist(),
        "currents": {
            "heat": list(report.heat),
            "work": list(report.work),
            "work_total": report.work_total,
            "first_law_residual": report.first_law_residual,
            "entropy_rate": report.entropy_rate,
        },
        "currents_scaled": {
            "unit": report.power_unit,
            "heat": list(report.scaled_heat),
            "work": list(report.scaled_work),
            "work_total": report.scaled_work_total,
        },
        "regime": str(regime),
        "efficiency": None if eff.eta is None else eff.eta,
    }
    text = json.dumps(_round12(payload), indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def _cmd_classify(args) -> int:
    p = _params_from_args(args)
    report = currents_report(solve_ness(p), p)
    print(str(classify(report, args.eps)))
    return 0


def _cmd_transitions(args) -> int:
    p = _params_from_args(args)
    rows = []
    for i in (1, 2, 3):
        t = transition_lambdas(p, i)
        rows.append(
            {
                "reservoir": i,
                "lambda_star": t.lambda_star,
                "lambda_ne": t.lambda_ne,
            }
        )
    if args.json:
        print(json.dumps(_round12(rows), indent=2, sort_keys=True))
    else:
        print("reservoir  lambda_star     lambda_ne")
        for r in rows:
            star = _fmt(r["lambda_star"]) or "absent"
            ne = _fmt(r["lambda_ne"]) or "absent"
            print(f"{r['reservoir']:>9}  {star:<14}  {ne}")
    return 0


def _cmd_diagram(args) -> int:
    p = _params_from_args(args)
    spec = DiagramSpec(
        base=p,
        reservoir=args.coherent,
        gap_axis=SweepAxis(args.axis, args.b_min, args.b_max, args.b_count),
        lambda_axis=SweepAxis(
            f"lambda{args.coherent}", args.lambda_min, args.lambda_max,
            args.lambda_count,
        ),
        eps=args.eps,
    )
    result = regime_diagram(spec)
    unit = _scale(p, args.natural_units)
    stamp_extra = {
        "axis": args.axis,
        "coherent": args.coherent,
        "eps": args.eps,
        "units": "natural" if args.natural_units else "diagram",
        "b_transition": result.gap_transition,
    }
    rows = []
    for ib, gap in enumerate(result.gap_values):
        for il, lam in enumerate(result.lambda_values):
            q = result.heat[ib, il] / unit
            w = result.work[ib, il] / unit
            betas = p.betas
            first_law = float(q.sum() + w.sum())
            sdot = float(-(np.array(betas) * result.heat[ib, il]).sum()) / unit
            rows.append(
                (gap, lam, str(result.labels[ib][il]),
                 q[0], q[1], q[2], w[0], w[1], w[2], first_law, sdot)
            )
    _write_csv(args.output, _config_stamp(p, stamp_extra), DIAGRAM_HEADER, rows)

    overlay_path = args.overlay_output or str(
        Path(args.output).with_name(Path(args.output).stem + "_overlay.csv")
    )
    overlay_rows = [
        (
            gap,
            None if np.isnan(result.lambda_star[ib]) else result.lambda_star[ib],
            None if np.isnan(result.lambda_ne[ib]) else result.lambda_ne[ib],
        )
        for ib, gap in enumerate(result.gap_values)
    ]
    _write_csv(overlay_path, _config_stamp(p, stamp_extra), OVERLAY_HEADER, overlay_rows)
    print(f"wrote {args.output} and {overlay_path}", file=sys.stderr)
    return 0


def _cmd_curve(args) -> int:
    p = _params_from_args(args)
    regime_filter = Regime[args.regime] if args.regime else None
    spec = CurveSpec(
        base=p,
        axis=SweepAxis(args.sweep, args.min, args.max, args.count),
        regime_filter=regime_filter,
        eps=args.eps,
    )
    points = power_efficiency_curve(spec)
    unit = _scale(p, args.natural_units)
    rows = []
    for pt in points:
        q = [x / unit for x in pt.report.heat]
        w = [x / unit for x in pt.report.work]
        comp = pt.efficiency.components
        output = pt.efficiency.output_power
        rows.append(
            (
                pt.swept_value, q[0], q[1], q[2], w[0], w[1], w[2],
                pt.efficiency.eta,
                comp.get("refrigeration"), comp.get("pumping"),
                comp.get("engine"), comp.get("absorption_pump"),
                None if output is None else output / unit,
                str(pt.regime), pt.in_regime,
                pt.report.first_law_residual / unit,
                pt.report.entropy_rate / unit,
            )
        )
    stamp_extra = {
        "sweep": args.sweep,
        "regime_filter": args.regime or "none",
        "eps": args.eps,
        "units": "natural" if args.natural_units else "diagram",
    }
    _write_csv(args.output, _config_stamp(p, stamp_extra), CURVE_HEADER, rows)
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def _cmd_collide(args) -> int:
    p = _params_from_args(args)
    sim = CollisionSimulator(p)
    if args.start == "mixed":
        rho0 = np.eye(3, dtype=complex) / 3.0
    elif args.start == "ground":
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
    else:
        rho0 = np.diag(thermal_baseline(p).populations).astype(complex)

    rows = []
    cum_q = np.zeros(3)
    cum_w = np.zeros(3)
    rho = rho0
    for step in range(1, args.steps + 1):
        rec = sim.collide(rho)
        cum_q += rec.heat
        cum_w += rec.work
        delta = float(np.max(np.abs(rec.rho_after - rho)))
        pops = np.diag(rec.rho_after).real
        rows.append(
            (
                step, step * p.tau, pops[0], pops[1], pops[2],
                *rec.heat, *rec.work, rec.work_mechanical,
                rec.entropy_production, *cum_q, *cum_w, delta,
            )
        )
        rho = rec.rho_after
        if delta <= 1e-12:
            break
    stamp = _config_stamp(p, {"steps": args.steps, "start": args.start})
    _write_csv(args.output, stamp, COLLIDE_HEADER, rows)
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    p = _params_from_args(args)
    failures: list[str] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        line = f"{'ok' if ok else 'FAIL'}: {name}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
        if not ok:
            failures.append(name)

    liou = build_liouvillian(p)
    scale = max(np.max(np.abs(liou)), 1.0)
    trace_row = vec(np.eye(3, dtype=complex)).conj()
    check(
        "generator trace preservation",
        float(np.max(np.abs(trace_row @ liou))) <= 1e-12 * scale,
    )

    rho = solve_ness(p)
    residual = float(np.max(np.abs(liou @ vec(rho))))
    check("steady-state residual <= 1e-10*|L|", residual <= 1e-10 * scale,
          f"residual={residual:.3e}")

    report = currents_report(rho, p)
    power_scale = max(report.max_scale, 1e-30)
    check(
        "first law at steady state",
        abs(report.first_law_residual) <= 1e-10 * max(power_scale, 1.0),
        f"residual={report.first_law_residual:.3e}",
    )
    check(
        "second law at steady state",
        report.entropy_rate >= -1e-10,
        f"Sdot={report.entropy_rate:.3e}",
    )

    thermal = p.with_values(lambda1=0.0, lambda2=0.0, lambda3=0.0)
    base = thermal_baseline(thermal)
    rho_th = solve_ness(thermal)
    dev = float(
        np.max(np.abs(np.diag(rho_th).real - np.array(base.populations)))
    )
    check("thermal baseline matches null-space solve", dev <= 1e-10,
          f"max dev={dev:.3e}")
    rep_th = currents_report(rho_th, thermal)
    expected = base.heat_currents(thermal)
    dev_q = max(abs(a - b) for a, b in zip(rep_th.heat, expected))
    check(
        "thermal currents proportional to V_ss",
        dev_q <= 1e-10 * max(abs(base.v_ss) * thermal.B2, 1e-30),
        f"max dev={dev_q:.3e}",
    )

    rng = np.random.default_rng(20240817)
    laws_ok, worst = True, 0.0
    for _ in range(100):
        t1 = rng.uniform(0.5, 2.0)
        t2 = t1 * rng.uniform(1.5, 6.0)
        t3 = t2 * rng.uniform(1.5, 6.0)
        b2 = rng.uniform(2.0, 12.0)
        b1 = b2 * rng.uniform(0.1, 0.9)
        lam = [0.0, 0.0, 0.0]
        lam[rng.integers(0, 3)] = rng.uniform(0.0, 0.9)
        q = MachineParams(
            B1=b1, B2=b2, T1=t1, T2=t2, T3=t3,
            gamma1=rng.uniform(1e-3, 5e-2),
            gamma2=rng.uniform(1e-3, 5e-2),
            gamma3=rng.uniform(1e-3, 5e-2),
            lambda1=lam[0], lambda2=lam[1], lambda3=lam[2],
            phi1=rng.uniform(0, 6.28), phi2=rng.uniform(0, 6.28),
            phi3=rng.uniform(0, 6.28),
        )
        rep = currents_report(solve_ness(q), q)
        worst = max(worst, abs(rep.first_law_residual), -min(rep.entropy_rate, 0.0))
        if abs(rep.first_law_residual) > 1e-10 or rep.entropy_rate < -1e-10:
            laws_ok = False
    check("laws of thermodynamics on 100 random parameter sets", laws_ok,
          f"worst={worst:.3e}")

    try:
        sim = CollisionSimulator(p)
        rec = sim.collide(rho)
        e_scale = max(abs(p.B2) * p.tau * max(p.gammas), 1e-30)
        check(
            "collision mechanical work is zero",
            abs(rec.work_mechanical) <= 1e-11 * max(1.0, e_scale),
            f"W_mec={rec.work_mechanical:.3e}",
        )
        check(
            "collision entropy production non-negative",
            rec.entropy_production >= -1e-11,
            f"S_tot={rec.entropy_production:.3e}",
        )
    except UnitStateError as exc:
        check("collision checks (unit state PSD at this tau)", False, str(exc))

    if failures:
        print(f"validation failed: {len(failures)} invariant(s) violated",
              file=sys.stderr)
        return 3
    print("all invariants hold")
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="triterm",
        description="Three-level autonomous thermal machine with coherent "
        "collisional reservoirs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name: str, **kwargs) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, **kwargs)
        _add_param_flags(sp)
        sp.add_argument("--eps", type=float, default=DEFAULT_EPS,
                        help="classification threshold in diagram units")
        return sp

    sp = common("ness", help="steady state and currents as JSON")
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=_cmd_ness)

    sp = common("classify", help="operating-regime label at one point")
    sp.set_defaults(func=_cmd_classify)

    sp = common("transitions", help="coherence transition amplitudes")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_transitions)

    sp = common("diagram", help="regime map over (gap, lambda) as CSV")
    sp.add_argument("--coherent", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--axis", choices=("B1", "B2", "B3"), required=True)
    sp.add_argument("--b-min", type=float, required=True)
    sp.add_argument("--b-max", type=float, required=True)
    sp.add_argument("--b-count", type=int, default=400)
    sp.add_argument("--lambda-min", type=float, default=0.0)
    sp.add_argument("--lambda-max", type=float, default=1.0)
    sp.add_argument("--lambda-count", type=int, default=400)
    sp.add_argument("--natural-units", action="store_true")
    sp.add_argument("--output", required=True)
    sp.add_argument("--overlay-output", default=None)
    sp.set_defaults(func=_cmd_diagram)

    sp = common("curve", help="power-efficiency curve along one gap as CSV")
    sp.add_argument("--sweep", choices=("B1", "B2", "B3"), required=True)
    sp.add_argument("--min", type=float, required=True)
    sp.add_argument("--max", type=float, required=True)
    sp.add_argument("--count", type=int, default=400)
    sp.add_argument("--regime", choices=[r.value for r in Regime
                                         if r.value not in ("EQUILIBRIUM",
                                                            "UNCLASSIFIED")],
                    default=None)
    sp.add_argument("--natural-units", action="store_true")
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=_cmd_curve)

    sp = common("collide", help="collisional trajectory and ledgers as CSV")
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--start", choices=("mixed", "ground", "baseline"),
                    default="mixed")
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=_cmd_collide)

    sp = common("validate", help="run the invariant suite (exit 0 iff clean)")
    sp.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except (ParameterError, UnitStateError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    except (SolverError, DegenerateKernelError, NotSteadyError,
            StepInstabilityError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands::

    hivbrn eval        threshold record: R_fm, R_mf, R0, I0, ISA, verdict
    hivbrn trajectory  per-age series: viral load, per-act probability, activity
    hivbrn phase       R0 = 1 hyperbolae, fixed point and rectangle corners
    hivbrn sweep       I0 under rescaled transmission probabilities
    hivbrn simulate    Monte Carlo estimate vs quadrature, per sex

Exit codes: 0 success, 2 configuration error, 3 numerical failure.  Given
the same scenario, flags and seed, every command writes byte-identical
output; JSON and CSV numbers carry full round-trip precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .behavior import activity_fraction
from .errors import (
    DomainError,
    InconsistentResult,
    NoRootError,
    QuadratureFailure,
    ScenarioError,
    SolverError,
)
from .mc_oracle import estimate_sex_integral
from .natural_history import log_viral_load, transmission_prob
from .reproduction import (
    composite_r0,
    evaluate_brn,
    hyperbola_locus,
    sensitivity_sweep,
    sex_brn,
    sex_integral,
    threshold_check,
)
from .scenario import Scenario, load_scenario

# plausible contact-rate ranges for the high-activity groups, acts/year
FEASIBLE_DELTA_M = (26.0, 104.0)
FEASIBLE_DELTA_F = (208.0, 468.0)

_NUMERIC_ERRORS = (
    DomainError,
    NoRootError,
    SolverError,
    QuadratureFailure,
    InconsistentResult,
)


def _metadata(scenario: Scenario, seed: int | None) -> dict:
    return {
        "tool": "hivbrn",
        "version": __version__,
        "config_hash": scenario.config_hash(),
        "seed": seed,
    }


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit_csv(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(
            ["" if v is None else repr(float(v)) if isinstance(v, float) else v
             for v in row]
        )
    return buf.getvalue()


def _emit_table(columns: list[str], rows: list[list]) -> str:
    cells = [[("" if v is None else f"{v:.6g}" if isinstance(v, float) else str(v)) for v in row] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _emit_series(args, columns, rows, metadata) -> str:
    if args.format == "json":
        records = [dict(zip(columns, row)) for row in rows]
        return _emit_json({"series": records, "metadata": metadata})
    if args.format == "table":
        return _emit_table(columns, rows)
    return _emit_csv(columns, rows)


def _parse_factors(raw: str) -> list[float]:
    if raw.strip() == "":
        return []
    try:
        return [float(part) for part in raw.split(",")]
    except ValueError as exc:
        raise ScenarioError(f"invalid factor list {raw!r}") from exc


def _parse_grid(raw: str) -> np.ndarray:
    try:
        start, stop, count = raw.split(":")
        grid = np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ScenarioError(f"invalid grid {raw!r}; expected start:stop:count") from exc
    if grid.size == 0 or np.any(grid <= 0):
        raise ScenarioError("grid values must be positive and non-empty")
    return grid


def cmd_eval(scenario: Scenario, args) -> str:
    result = evaluate_brn(scenario.population, scenario.quadrature)
    verdict = threshold_check(result).value
    fields = {
        "integral_f": result.integral_f,
        "integral_m": result.integral_m,
        "r_fm": result.r_fm,
        "r_mf": result.r_mf,
        "r0": result.r0,
        "i0": result.i0,
        "isa": result.isa,
        "epidemic": result.epidemic,
        "verdict": verdict,
    }
    if args.format == "table":
        lines = [
            f"R_fm     {result.r_fm:.3f}",
            f"R_mf     {result.r_mf:.3f}",
            f"R0       {result.r0:.3f}",
            f"I0       {result.i0:.2f}",
            f"ISA      {result.isa:.2f}",
            f"verdict  {verdict}",
        ]
        return "\n".join(lines) + "\n"
    if args.format == "csv":
        return _emit_csv(["key", "value"], [[k, v] for k, v in fields.items()])
    return _emit_json({"result": fields, "metadata": _metadata(scenario, None)})


def cmd_trajectory(scenario: Scenario, args) -> str:
    pop = scenario.population
    profile = pop.female if args.sex == "female" else pop.male
    if args.step <= 0:
        raise ScenarioError("--step must be > 0")
    if args.iad < 0 or args.iad > pop.omega:
        raise ScenarioError(f"--iad must lie in [0, omega={pop.omega:g}]")
    steps = int(np.floor(args.iad / args.step + 1e-9))
    ia = np.arange(steps + 1) * args.step
    lvl = log_viral_load(ia, args.iad, profile.viral, profile.x_plateau)
    ptr = transmission_prob(
        ia, args.iad, profile.viral, profile.transmission, profile.x_plateau
    )
    g = activity_fraction(ia, args.iad, profile.activity)
    nca = profile.activity.annual_acts * g
    columns = ["ia", "LVl", "ptr", "ptr_x1000", "G", "NCA"]
    rows = [
        [float(ia[i]), float(lvl[i]), float(ptr[i]), float(1000.0 * ptr[i]),
         float(g[i]), float(nca[i])]
        for i in range(ia.size)
    ]
    return _emit_series(args, columns, rows, _metadata(scenario, None))


def cmd_phase(scenario: Scenario, args) -> str:
    pop = scenario.population
    factors = _parse_factors(args.factors)
    grid = _parse_grid(args.grid)
    all_factors = [1.0] + [f for f in factors if f != 1.0]
    swept = dict(
        sensitivity_sweep(pop, all_factors, "scale_function", scenario.quadrature)
    )
    int_f = sex_integral(pop.female, pop.omega, scenario.quadrature)
    int_m = sex_integral(pop.male, pop.omega, scenario.quadrature)
    columns = ["series", "factor", "delta_m", "delta_f", "r_fm", "r_mf", "r0"]
    rows = []
    for factor in all_factors:
        for dm, df in hyperbola_locus(swept[factor], grid):
            rows.append(["hyperbola", factor, dm, df, None, None, None])
    i0 = swept[1.0]
    rows.append(["fixed_point", 1.0, i0, i0, None, None, None])
    for dm in FEASIBLE_DELTA_M:
        for df in FEASIBLE_DELTA_F:
            r_fm = sex_brn(df, int_f)
            r_mf = sex_brn(dm, int_m)
            rows.append(["corner", 1.0, dm, df, r_fm, r_mf, composite_r0(r_fm, r_mf)])
    return _emit_series(args, columns, rows, _metadata(scenario, None))


def cmd_sweep(scenario: Scenario, args) -> str:
    factors = _parse_factors(args.factors)
    pairs = sensitivity_sweep(
        scenario.population, factors, args.mode, scenario.quadrature
    )
    columns = ["factor", "i0", "mode"]
    rows = [[factor, i0, args.mode] for factor, i0 in pairs]
    return _emit_series(args, columns, rows, _metadata(scenario, None))


def cmd_simulate(scenario: Scenario, args) -> str:
    pop = scenario.population
    spec = scenario.simulation
    labels = ("female", "male") if args.sex == "both" else (args.sex,)
    result = {}
    for label in labels:
        profile = pop.female if label == "female" else pop.male
        est = estimate_sex_integral(profile, spec, workers=args.workers)
        quad_value = sex_integral(profile, pop.omega, scenario.quadrature)
        ratio = (
            abs(est.mean - quad_value) / est.std_error
            if est.std_error
            else None
        )
        result[label] = {
            "mean": est.mean,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "act_process": spec.act_process,
            "quadrature": quad_value,
            "abs_diff_over_se": ratio,
        }
    if args.format == "table":
        columns = ["sex", "mean", "std_error", "quadrature", "abs_diff_over_se"]
        rows = [
            [label, r["mean"], r["std_error"], r["quadrature"], r["abs_diff_over_se"]]
            for label, r in result.items()
        ]
        return _emit_table(columns, rows)
    if args.format == "csv":
        columns = [
            "sex", "mean", "std_error", "samples", "seed", "act_process",
            "quadrature", "abs_diff_over_se",
        ]
        rows = [[label] + [r[c] for c in columns[1:]] for label, r in result.items()]
        return _emit_csv(columns, rows)
    return _emit_json({"result": result, "metadata": _metadata(scenario, spec.seed)})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hivbrn",
        description="Two-sex basic reproduction number toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format):
        p.add_argument("--config", help="scenario file (defaults to baseline)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument(
            "--format", choices=("json", "csv", "table"), default=default_format
        )
        p.add_argument("--seed", type=int, help="override the simulation seed")

    p = sub.add_parser("eval", help="threshold record for the scenario")
    common(p, "json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("trajectory", help="within-course series for one sex")
    common(p, "csv")
    p.add_argument("--iad", type=float, default=7.0, help="age at death, years")
    p.add_argument("--step", type=float, default=0.1, help="grid step, years")
    p.add_argument("--sex", choices=("female", "male"), default="female")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("phase", help="contact-rate phase-space data")
    common(p, "csv")
    p.add_argument(
        "--factors", default="0.5,2",
        help="comma-separated transmission scale factors",
    )
    p.add_argument(
        "--grid", default="10:150:71", help="delta_m grid as start:stop:count"
    )
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("sweep", help="I0 sensitivity to transmission scaling")
    common(p, "csv")
    p.add_argument(
        "--factors", default="0.5,1,2",
        help="comma-separated transmission scale factors",
    )
    p.add_argument(
        "--mode", choices=("scale_function", "scale_endpoints"),
        default="scale_function",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo estimate vs quadrature")
    common(p, "json")
    p.add_argument("--samples", type=int, help="override [simulation] samples")
    p.add_argument("--sex", choices=("female", "male", "both"), default="both")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if getattr(args, "samples", None) is not None:
            overrides["samples"] = args.samples
        if overrides:
            scenario = scenario.replace_simulation(**overrides)
        if getattr(args, "workers", 1) < 1:
            raise ScenarioError("--workers must be >= 1")
        text = args.func(scenario, args)
    except ScenarioError as exc:
        print(f"hivbrn: configuration error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"hivbrn: numerical failure: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: bound tables, verification sweeps, metrology CSVs.

Subcommands
-----------
bounds     evaluate every applicable bound (and the oracle) for one model
mi         brute-force oracle quantities for one model
verify     seeded random models, every bound checked against its oracle
metrology  noisy-phase MI-cap sweep over (eta, N), CSV output

Models are either builtin names (``cos2``, ``cos2-gaussian``, ``noon``,
``dephasing-qubit``, ``ampdamp-qubit``, ``erasure-qutrit``, optionally with
``name:key=value,...`` parameters) or JSON files described in the README.
All computation is in nats; ``--units bits`` rescales displayed nats values
by 1/ln 2.  Default seed: 42.  Identical configurations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bounds as bnd
from .mi_oracle import mutual_information
from .numerics import NumericError, ParameterGrid
from .quantum_metrology import channel_outcome_model, noon_outcome_model, transition_sweep
from .random_models import random_joint_model
from .stat_model import ConditionalModel, JointModel, PriorDensity, cos2_model, fisher_information

DEFAULT_SEED = 42
DEFAULT_GRID_POINTS = 2001

MI_MARGIN_TOL = -1e-3   # dominance slack for MI bounds, in nats
MSE_MARGIN_TOL = -1e-9  # slack for MSE lower bounds


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _parse_model_name(spec: str):
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, raw = item.partition("=")
            if not key or not raw:
                raise ValueError(f"malformed model parameter {item!r} (expected key=value)")
            try:
                params[key] = int(raw)
            except ValueError:
                params[key] = float(raw)
    return name, params


def build_builtin(spec: str, grid_points: int | None = None) -> JointModel:
    """Instantiate a builtin model, e.g. ``cos2`` or ``dephasing-qubit:eta=0.8``."""
    name, params = _parse_model_name(spec)
    points = grid_points or DEFAULT_GRID_POINTS
    if name == "cos2":
        grid = ParameterGrid(0.0, math.pi, points)
        return JointModel(PriorDensity.rectangle(grid), cos2_model(grid))
    if name == "cos2-gaussian":
        mean = float(params.pop("mean", math.pi / 2.0))
        sigma = float(params.pop("sigma", 0.4))
        _reject_unknown(name, params)
        grid = ParameterGrid(mean - 8.0 * sigma, mean + 8.0 * sigma, points)
        return JointModel(PriorDensity.gaussian(grid, mean, sigma), cos2_model(grid))
    if name == "noon":
        n = int(params.pop("n", 4))
        _reject_unknown(name, params)
        grid = ParameterGrid(0.0, 2.0 * math.pi, points)
        return JointModel(PriorDensity.rectangle(grid), noon_outcome_model(n, grid=grid))
    channel_kinds = {"dephasing-qubit": "dephasing", "ampdamp-qubit": "amplitude-damping",
                     "erasure-qutrit": "erasure"}
    if name in channel_kinds:
        eta = float(params.pop("eta", 0.9))
        _reject_unknown(name, params)
        grid = ParameterGrid(0.0, 2.0 * math.pi, points)
        cond = channel_outcome_model(channel_kinds[name], eta, grid)
        return JointModel(PriorDensity.rectangle(grid), cond)
    raise ValueError(
        f"unknown builtin model {name!r}; available: cos2, cos2-gaussian, noon, "
        "dephasing-qubit, ampdamp-qubit, erasure-qutrit")


def _reject_unknown(name: str, params: dict) -> None:
    if params:
        raise ValueError(f"unknown parameters for builtin {name!r}: {sorted(params)}")


def load_model_file(path: str, grid_points: int | None = None) -> JointModel:
    """Load a JSON model definition; see README for the schema."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            cfg = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc

    def need(mapping, key, where):
        if key not in mapping:
            raise ValueError(f"{path}: missing {key!r} in {where}")
        return mapping[key]

    gspec = need(cfg, "grid", "model")
    points = grid_points or int(need(gspec, "points", "grid"))
    grid = ParameterGrid(float(need(gspec, "lower", "grid")),
                         float(need(gspec, "upper", "grid")), points)

    pspec = need(cfg, "prior", "model")
    kind = need(pspec, "kind", "prior")
    if kind == "rectangle":
        prior = PriorDensity.rectangle(grid)
    elif kind == "gaussian":
        prior = PriorDensity.gaussian(grid, float(need(pspec, "mean", "prior")),
                                      float(need(pspec, "sigma", "prior")))
    elif kind == "tabulated":
        density = np.asarray(need(pspec, "density", "prior"), dtype=float)
        if grid_points is not None and density.size != grid.points:
            raise ValueError(f"{path}: tabulated priors cannot be re-gridded")
        prior = PriorDensity.tabulated(grid, density, smooth=bool(pspec.get("smooth", True)))
    else:
        raise ValueError(f"{path}: unknown prior kind {kind!r}")

    cspec = need(cfg, "conditional", "model")
    if "builtin" in cspec:
        name = cspec["builtin"]
        if name == "cos2":
            cond = cos2_model(grid)
        elif name == "noon":
            cond = noon_outcome_model(int(cspec.get("n", 4)), grid=grid)
        elif name in ("dephasing", "amplitude-damping", "erasure"):
            cond = channel_outcome_model(name, float(cspec.get("eta", 0.9)), grid)
        else:
            raise ValueError(f"{path}: unknown builtin conditional {name!r}")
    elif "matrix" in cspec:
        matrix = np.asarray(cspec["matrix"], dtype=float)
        if grid_points is not None and matrix.shape[-1] != grid.points:
            raise ValueError(f"{path}: tabulated conditionals cannot be re-gridded")
        cond = ConditionalModel.from_probs(grid, matrix)
    else:
        raise ValueError(f"{path}: conditional needs either 'builtin' or 'matrix'")
    return JointModel(prior, cond)


def load_model(spec: str, grid_points: int | None = None) -> JointModel:
    if spec.endswith(".json"):
        return load_model_file(spec, grid_points)
    return build_builtin(spec, grid_points)


def _convert_units(rows: list[dict], units: str) -> list[dict]:
    if units == "nats":
        return rows
    out = []
    for row in rows:
        row = dict(row)
        if row.get("units") == "nats" and isinstance(row.get("value"), float):
            row["value"] = row["value"] / math.log(2.0)
            row["units"] = "bits"
        out.append(row)
    return out


def _emit(rows: list[dict], fieldnames: list[str], out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow([_fmt(row.get(k)) for k in fieldnames])
        return
    widths = {k: max(len(k), *(len(_fmt(r.get(k))) for r in rows)) for k in fieldnames}
    print("  ".join(k.ljust(widths[k]) for k in fieldnames))
    for row in rows:
        print("  ".join(_fmt(row.get(k)).ljust(widths[k]) for k in fieldnames))


def _report_row(report: bnd.BoundReport) -> dict:
    return {
        "name": report.name,
        "value": report.value,
        "units": report.units,
        "direction": report.direction,
        "flags": ";".join(report.flags),
    }


def _bounds_rows(joint: JointModel) -> list[dict]:
    oracle = mutual_information(joint)
    profile = fisher_information(joint.conditional)
    rows = [
        _report_row(bnd.mi_bound_finite_support(profile)),
        _report_row(bnd.mi_bound_general_prior(joint)),
        _report_row(bnd.efroimovich_mi_bound(joint)),
        {"name": "oracle-mi", "value": oracle.mi, "units": "nats", "direction": "oracle"},
        _report_row(bnd.van_trees(joint)),
    ]
    mse_fs = bnd.mse_bound_finite_support(joint)
    rows.append(_report_row(mse_fs))
    if "rectangle-closed-form" in mse_fs.extras:
        rows.append({"name": "mse-rectangle-closed-form",
                     "value": mse_fs.extras["rectangle-closed-form"],
                     "units": bnd.SQUARED_UNITS, "direction": bnd.LOWER_MSE})
    rows.append(_report_row(bnd.mse_bound_general_prior(joint)))
    rows.append({"name": "entropy-mse-floor", "value": bnd.entropy_mse_floor(oracle.h_posterior),
                 "units": bnd.SQUARED_UNITS, "direction": bnd.LOWER_MSE})
    rows.append({"name": "oracle-bayes-mse", "value": oracle.bayes_mse,
                 "units": bnd.SQUARED_UNITS, "direction": "oracle"})

    fin = profile.values[1:-1][~profile.divergent[1:-1]]
    f_constant = fin.size > 0 and np.ptp(fin) <= 1e-6 * max(1.0, float(np.max(fin)))
    if joint.prior.kind == "gaussian" and f_constant:
        exact, simplified = bnd.gaussian_prior_mse_bounds(
            float(np.median(fin)), joint.prior.params["sigma"])
        rows.append(_report_row(exact))
        rows.append(_report_row(simplified))

    vt = next(r for r in rows if r["name"] == "van-trees")
    for row in rows:
        if row.get("units") == bnd.SQUARED_UNITS and isinstance(row.get("value"), float) \
                and isinstance(vt.get("value"), float) and row["value"] > 0:
            row["vt_ratio"] = vt["value"] / row["value"]
    return rows


def cmd_bounds(args) -> int:
    joint = load_model(args.model, args.grid_points)
    rows = _convert_units(_bounds_rows(joint), args.units)
    _emit(rows, ["name", "value", "units", "direction", "flags", "vt_ratio"], args.out)
    return 0


def cmd_mi(args) -> int:
    joint = load_model(args.model, args.grid_points)
    oracle = mutual_information(joint)
    rows = [
        {"name": "mi", "value": oracle.mi, "units": "nats"},
        {"name": "h-prior", "value": oracle.h_prior, "units": "nats"},
        {"name": "h-posterior", "value": oracle.h_posterior, "units": "nats"},
        {"name": "bayes-mse", "value": oracle.bayes_mse, "units": bnd.SQUARED_UNITS},
        {"name": "estimator", "value": oracle.estimator, "units": ""},
    ]
    rows = _convert_units(rows, args.units)
    _emit(rows, ["name", "value", "units"], args.out)
    return 0


def _verify_one(joint: JointModel) -> list[dict]:
    oracle = mutual_information(joint)
    profile = fisher_information(joint.conditional)
    checks = [
        bnd.mi_bound_finite_support(profile),
        bnd.mi_bound_general_prior(joint),
        bnd.efroimovich_mi_bound(joint),
        bnd.mse_bound_finite_support(joint),
        bnd.mse_bound_general_prior(joint),
        bnd.van_trees(joint),
    ]
    rows = []
    for report in checks:
        if report.value is None:
            rows.append({"bound": report.name, "value": None, "oracle": None,
                         "margin": None, "flags": ";".join(report.flags)})
            continue
        target = oracle.mi if report.direction == bnd.UPPER_MI else oracle.bayes_mse
        rows.append({"bound": report.name, "value": report.value, "oracle": target,
                     "margin": bnd.oracle_margin(report, target), "flags": ""})
    return rows


def cmd_verify(args) -> int:
    if args.count < 1:
        raise ValueError(f"--count must be >= 1, got {args.count}")
    rng = np.random.default_rng(args.seed)
    grid = ParameterGrid(0.0, 1.0, args.grid_points or DEFAULT_GRID_POINTS)
    rows = []
    worst: dict[str, float] = {}
    failures = 0
    for index in range(args.count):
        joint = random_joint_model(rng, grid)
        for row in _verify_one(joint):
            row = {"model": index, **row}
            rows.append(row)
            if row["margin"] is None:
                continue
            name = row["bound"]
            worst[name] = min(worst.get(name, math.inf), row["margin"])
            tol = MI_MARGIN_TOL if name.startswith("mi") or "efroimovich" in name \
                else MSE_MARGIN_TOL
            if row["margin"] < tol:
                failures += 1
                print(f"VIOLATION model={index} bound={name} margin={row['margin']:.3e}",
                      file=sys.stderr)
                print(f"  reproduce with seed={args.seed} (model index {index})",
                      file=sys.stderr)
    if args.out:
        _emit(rows, ["model", "bound", "value", "oracle", "margin", "flags"], args.out)
    for name in sorted(worst):
        print(f"worst margin {name}: {worst[name]:.6e}")
    print(f"checked {args.count} models: {'FAIL' if failures else 'PASS'}")
    return 1 if failures else 0


def cmd_metrology(args) -> int:
    etas = [float(e) for e in args.eta.split(",") if e]
    if not etas:
        raise ValueError("--eta needs at least one value")
    n_values = np.unique(np.logspace(0.0, math.log10(args.n_max),
                                     args.n_count).astype(np.int64))
    rows = []
    for eta in etas:
        rows.extend(transition_sweep(eta, n_values, regime=args.regime))
    _emit(rows, ["eta", "N", "mi_cap_nats", "hs_ref", "sql_ref", "slope"], args.out)
    if args.out:
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infobounds",
        description="Fisher-information bounds on mutual information, with oracles.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="builtin name (optionally name:key=value,...) or JSON file path")
        p.add_argument("--grid-points", type=int, default=None, metavar="ODD_INT",
                       help="override the grid resolution (odd)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--units", choices=("nats", "bits"), default="nats")
        p.add_argument("--out", default=None, help="write CSV here instead of stdout")

    p_bounds = sub.add_parser("bounds", help="evaluate every applicable bound for a model")
    add_common(p_bounds)
    p_bounds.set_defaults(func=cmd_bounds)

    p_mi = sub.add_parser("mi", help="brute-force oracle quantities for a model")
    add_common(p_mi)
    p_mi.set_defaults(func=cmd_mi)

    p_verify = sub.add_parser("verify", help="random models, bounds checked against oracles")
    add_common(p_verify, model=False)
    p_verify.add_argument("--count", type=int, default=200)
    p_verify.set_defaults(func=cmd_verify)

    p_met = sub.add_parser("metrology", help="noisy-phase MI cap sweep, CSV output")
    add_common(p_met, model=False)
    p_met.add_argument("--eta", default="0.5,0.9,0.99", help="comma-separated noise parameters")
    p_met.add_argument("--n-max", type=int, default=1_000_000)
    p_met.add_argument("--n-count", type=int, default=121)
    p_met.add_argument("--regime", choices=("finite-N", "asymptotic"), default="finite-N")
    p_met.set_defaults(func=cmd_metrology)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NumericError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""JSON-configured command line front end.

Subcommands: energy, verify, optimize, capacity, riesz.  Each reads one JSON
config, writes report.json (and trials.csv / sweep.csv where applicable)
into --out, and exits 0 on success, 1 on config or usage errors, 2 when an
asserted inequality failed (a bug flag, not a crash).

Numbers in CSV files carry 17 significant digits so they round-trip double
precision exactly; identical config and seed give byte-identical output at
any worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import capacity as _capacity
from . import energy as _energy
from . import extremal as _extremal
from .domains import Ball, Domain, FreeSpace, HalfSpace
from .geometry import AngleSet, Circle, Dimension, build_configuration, symmetric_angles

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2


class ConfigError(ValueError):
    """Config problem addressed by the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"config error at '{path}': {message}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(cfg: dict, path: str, key: str):
    if key not in cfg:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return cfg[key]


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


def _as_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {value!r}")
    return value


def _build_dimension(cfg: dict) -> Dimension:
    d = _as_int(_require(cfg, "", "dimension"), "dimension")
    try:
        return Dimension(d)
    except ValueError as exc:
        raise ConfigError("dimension", str(exc)) from exc


def _build_domain(cfg: dict, dim: Dimension) -> Domain:
    spec = _require(cfg, "", "domain")
    if not isinstance(spec, dict):
        raise ConfigError("domain", "expected an object with a 'kind' field")
    kind = _require(spec, "domain", "kind")
    if kind == "ball":
        radius = _as_number(_require(spec, "domain", "radius"), "domain.radius")
        try:
            return Ball(dim, radius)
        except ValueError as exc:
            raise ConfigError("domain.radius", str(exc)) from exc
    if kind == "half_space":
        return HalfSpace(dim)
    if kind == "free_space":
        return FreeSpace(dim)
    raise ConfigError("domain.kind", f"unknown domain kind {kind!r}")


def _build_circles(cfg: dict, dim: Dimension) -> tuple[Circle, ...]:
    raw = _as_list(_require(cfg, "", "circles"), "circles")
    if not raw:
        raise ConfigError("circles", "must list at least one circle")
    circles = []
    for i, entry in enumerate(raw):
        path = f"circles[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(path, "expected an object with rho0 and xprime0")
        rho0 = _as_number(_require(entry, path, "rho0"), f"{path}.rho0")
        xp = _as_list(_require(entry, path, "xprime0"), f"{path}.xprime0")
        if len(xp) != dim.d - 2:
            raise ConfigError(f"{path}.xprime0", f"expected length {dim.d - 2} for d={dim.d}")
        try:
            circles.append(
                Circle(rho0, tuple(_as_number(v, f"{path}.xprime0[{j}]") for j, v in enumerate(xp)))
            )
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from exc
    return tuple(circles)


def _angle_scale(cfg: dict) -> float:
    return math.pi / 180.0 if cfg.get("degrees") else 1.0


def _build_angles(cfg: dict, m: int | None) -> AngleSet:
    spec = _require(cfg, "", "angles")
    scale = _angle_scale(cfg)
    if spec == "symmetric":
        if m is None:
            raise ConfigError("m", "missing required field (needed for symmetric angles)")
        return symmetric_angles(m)
    if isinstance(spec, dict) and "random" in spec:
        block = spec["random"]
        if not isinstance(block, dict):
            raise ConfigError("angles.random", "expected an object with a seed")
        if m is None:
            raise ConfigError("m", "missing required field (needed for random angles)")
        seed = _as_int(_require(block, "angles.random", "seed"), "angles.random.seed")
        return _extremal.random_trial_angles(m, np.random.default_rng([seed, 0]))
    if isinstance(spec, list):
        vals = [_as_number(v, f"angles[{i}]") * scale for i, v in enumerate(spec)]
        if m is not None and len(vals) != m:
            raise ConfigError("angles", f"{len(vals)} angles listed but m={m}")
        try:
            return AngleSet(tuple(vals))
        except ValueError as exc:
            raise ConfigError("angles", str(exc)) from exc
    raise ConfigError("angles", "expected 'symmetric', a list, or {'random': {'seed': N}}")


def _config_m(cfg: dict) -> int | None:
    if "m" not in cfg:
        return None
    m = _as_int(cfg["m"], "m")
    if m < 1:
        raise ConfigError("m", f"must be >= 1, got {m}")
    return m


def _build_charge_spec(cfg: dict, n_circles: int) -> tuple[str, tuple[float, ...]]:
    spec = _require(cfg, "", "charge")
    if not isinstance(spec, dict):
        raise ConfigError("charge", "expected an object with pattern and magnitudes")
    pattern = _require(spec, "charge", "pattern")
    if pattern not in ("per_circle_equal", "alternating"):
        raise ConfigError("charge.pattern", f"unknown pattern {pattern!r}")
    mags = _as_list(_require(spec, "charge", "magnitudes"), "charge.magnitudes")
    if len(mags) != n_circles:
        raise ConfigError("charge.magnitudes", f"expected one value per circle ({n_circles})")
    values = tuple(_as_number(v, f"charge.magnitudes[{i}]") for i, v in enumerate(mags))
    return pattern, values


def _build_problem(cfg: dict, dim: Dimension, dom: Domain) -> _extremal.ExtremalProblem:
    circles = _build_circles(cfg, dim)
    m = _config_m(cfg)
    if m is None:
        raise ConfigError("m", "missing required field")
    pattern, values = _build_charge_spec(cfg, len(circles))
    direction = _extremal.MINIMIZE if pattern == "per_circle_equal" else _extremal.MAXIMIZE
    try:
        return _extremal.ExtremalProblem(direction, dim, dom, circles, m, values)
    except ValueError as exc:
        raise ConfigError("charge", str(exc)) from exc


def _seed_for(block: dict, path: str, override: int | None) -> int:
    if override is not None:
        return override
    if "seed" not in block:
        raise ConfigError(f"{path}.seed", "missing required field (or pass --seed)")
    return _as_int(block["seed"], f"{path}.seed")


def _write_json(out: Path, payload: dict) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(out: Path, header: list[str], rows: list[list[str]]) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_energy(cfg: dict, args) -> int:
    dim = _build_dimension(cfg)
    dom = _build_domain(cfg, dim)
    circles = _build_circles(cfg, dim)
    m = _config_m(cfg)
    angles = _build_angles(cfg, m)
    config = build_configuration(dim, circles, angles)
    pattern, values = _build_charge_spec(cfg, len(circles))
    if pattern == "per_circle_equal":
        charge = _energy.per_circle_equal(config, values)
    else:
        charge = _energy.alternating_by_half_plane(config, values)
    G = dom.green_matrix(config.cart)
    delta = charge.array
    total = float(delta @ G @ delta)

    print(f"energy = {_fmt(total)}")
    print("k,l,delta_k,delta_l,green,contribution")
    pairs = []
    for k in range(config.n):
        for l in range(k + 1, config.n):
            contrib = 2.0 * delta[k] * delta[l] * G[k, l]
            print(
                f"{k},{l},{_fmt(delta[k])},{_fmt(delta[l])},{_fmt(G[k, l])},{_fmt(contrib)}"
            )
            pairs.append(
                {
                    "k": k,
                    "l": l,
                    "delta_k": delta[k],
                    "delta_l": delta[l],
                    "green": G[k, l],
                    "contribution": contrib,
                }
            )
    if args.format in ("json", "both"):
        _write_json(Path(args.out) / "report.json", {"command": "energy", "energy": total, "pairs": pairs})
    return EXIT_OK


def _explicit_trials(spec: list, scale: float) -> list[AngleSet]:
    trials = []
    for i, entry in enumerate(spec):
        path = f"verify.trials[{i}]"
        vals = [_as_number(v, f"{path}[{j}]") * scale for j, v in enumerate(_as_list(entry, path))]
        try:
            trials.append(AngleSet(tuple(vals)))
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from exc
    return trials


def _cmd_verify(cfg: dict, args) -> int:
    dim = _build_dimension(cfg)
    dom = _build_domain(cfg, dim)
    problem = _build_problem(cfg, dim, dom)
    block = cfg.get("verify", {})
    if not isinstance(block, dict):
        raise ConfigError("verify", "expected an object")
    trials_spec = _require(block, "verify", "trials")

    if isinstance(trials_spec, list):
        trials = _explicit_trials(trials_spec, _angle_scale(cfg))
        reports = [_extremal.verify(problem, t) for t in trials]
    else:
        count = _as_int(trials_spec, "verify.trials")
        if count < 1:
            raise ConfigError("verify.trials", f"must be >= 1, got {count}")
        seed = _seed_for(block, "verify", args.seed)
        reports = _extremal.run_random_trials(problem, count, seed, workers=args.workers)

    rows = [
        [str(i), _fmt(r.e_trial), _fmt(r.e_star), _fmt(r.gap), str(r.inequality_holds).lower()]
        for i, r in enumerate(reports)
    ]
    violations = sum(not r.inequality_holds for r in reports)
    if args.format in ("csv", "both"):
        _write_csv(
            Path(args.out) / "trials.csv",
            ["trial_id", "e_trial", "e_star", "gap", "holds"],
            rows,
        )
    if args.format in ("json", "both"):
        _write_json(
            Path(args.out) / "report.json",
            {
                "command": "verify",
                "direction": problem.direction,
                "m": problem.m,
                "trials": len(reports),
                "violations": violations,
                "e_star": reports[0].e_star if reports else None,
                "min_gap": min(r.gap for r in reports),
                "max_gap": max(r.gap for r in reports),
            },
        )
    print(f"verify: {len(reports)} trials, {violations} violations")
    return EXIT_VIOLATION if violations else EXIT_OK


def _cmd_optimize(cfg: dict, args) -> int:
    dim = _build_dimension(cfg)
    dom = _build_domain(cfg, dim)
    problem = _build_problem(cfg, dim, dom)
    block = cfg.get("optimize", {})
    if not isinstance(block, dict):
        raise ConfigError("optimize", "expected an object")
    starts = _as_int(block.get("starts", 8 * problem.m), "optimize.starts")
    seed = _seed_for(block, "optimize", args.seed)
    result = _extremal.optimize_angles(problem, starts, seed)
    payload = {
        "command": "optimize",
        "direction": problem.direction,
        "best_angles": list(result.best_angles.angles),
        "best_energy": result.best_energy,
        "starts_used": result.starts_used,
        "converged": result.converged,
        "gauge_fixed_angles": list(result.gauge_fixed_angles.angles),
    }
    if args.format in ("json", "both"):
        _write_json(Path(args.out) / "report.json", payload)
    print(
        f"optimize: best_energy={_fmt(result.best_energy)} converged={result.converged} "
        f"gauge_fixed={[round(a, 9) for a in result.gauge_fixed_angles.angles]}"
    )
    return EXIT_OK


def _build_condenser(cfg: dict, dim: Dimension, dom: Domain) -> tuple[_capacity.GeneralizedCondenser, dict]:
    block = _require(cfg, "", "capacity")
    if not isinstance(block, dict):
        raise ConfigError("capacity", "expected an object")
    pts_raw = _as_list(_require(block, "capacity", "points"), "capacity.points")
    points = []
    for i, p in enumerate(pts_raw):
        row = _as_list(p, f"capacity.points[{i}]")
        if len(row) != dim.d:
            raise ConfigError(f"capacity.points[{i}]", f"expected {dim.d} coordinates")
        points.append([_as_number(v, f"capacity.points[{i}][{j}]") for j, v in enumerate(row)])
    levels = tuple(
        _as_number(v, f"capacity.levels[{i}]")
        for i, v in enumerate(_as_list(_require(block, "capacity", "levels"), "capacity.levels"))
    )
    factors = tuple(
        _as_number(v, f"capacity.radius_factors[{i}]")
        for i, v in enumerate(
            _as_list(_require(block, "capacity", "radius_factors"), "capacity.radius_factors")
        )
    )
    t = _as_number(_require(block, "capacity", "t"), "capacity.t")
    try:
        cond = _capacity.GeneralizedCondenser(dom, np.asarray(points), levels, factors, t)
    except ValueError as exc:
        raise ConfigError("capacity", str(exc)) from exc
    return cond, block


def _cmd_capacity(cfg: dict, args) -> int:
    dim = _build_dimension(cfg)
    dom = _build_domain(cfg, dim)
    cond, block = _build_condenser(cfg, dim, dom)

    asym = _capacity.asymptotic_modulus(cond)
    oracle = _capacity.point_charge_modulus(cond)
    payload = {
        "command": "capacity",
        "t": cond.t,
        "asymptotic": asym,
        "point_charge": oracle,
        "abs_error": abs(asym - oracle),
    }

    exit_code = EXIT_OK
    sweep_rows: list[list[str]] = []
    if "t_sweep" in block:
        ts = [
            _as_number(v, f"capacity.t_sweep[{i}]")
            for i, v in enumerate(_as_list(block["t_sweep"], "capacity.t_sweep"))
        ]
        try:
            reports = _capacity.modulus_sweep(cond, ts)
        except ValueError as exc:
            raise ConfigError("capacity.t_sweep", str(exc)) from exc
        sweep_rows = [
            [_fmt(r.t), _fmt(r.asymptotic), _fmt(r.oracle), _fmt(r.abs_error)] for r in reports
        ]
        payload["sweep"] = [
            {"t": r.t, "asymptotic": r.asymptotic, "oracle": r.oracle, "abs_error": r.abs_error}
            for r in reports
        ]
        if not _capacity.sweep_errors_decrease(reports):
            payload["sweep_monotone"] = False
            exit_code = EXIT_VIOLATION
        else:
            payload["sweep_monotone"] = True

    if "grid_h" in block and block["grid_h"] is not None:
        h = _as_number(block["grid_h"], "capacity.grid_h")
        try:
            cap = _capacity.fdm_capacity(cond, h)
        except ValueError as exc:
            raise ConfigError("capacity.grid_h", str(exc)) from exc
        payload["fdm_capacity"] = cap
        payload["fdm_modulus"] = 1.0 / cap

    if args.format in ("json", "both"):
        _write_json(Path(args.out) / "report.json", payload)
    if sweep_rows and args.format in ("csv", "both"):
        _write_csv(
            Path(args.out) / "sweep.csv",
            ["t", "asymptotic", "oracle", "abs_error"],
            sweep_rows,
        )
    print(f"capacity: asymptotic={_fmt(asym)} point_charge={_fmt(oracle)}")
    return exit_code


def _cmd_riesz(cfg: dict, args) -> int:
    dim = _build_dimension(cfg)
    block = _require(cfg, "", "riesz")
    if not isinstance(block, dict):
        raise ConfigError("riesz", "expected an object")
    n = _as_int(_require(block, "riesz", "n"), "riesz.n")
    trials = _as_int(_require(block, "riesz", "trials"), "riesz.trials")
    alternating = bool(block.get("alternating", False))
    seed = _seed_for(block, "riesz", args.seed)
    try:
        summary = _extremal.riesz_extremal_check(n, dim.d, trials, seed, alternating)
    except ValueError as exc:
        raise ConfigError("riesz", str(exc)) from exc
    payload = {
        "command": "riesz",
        "n": summary.n,
        "d": summary.d,
        "s": summary.s,
        "trials": summary.trials,
        "alternating": summary.alternating,
        "reference_energy": summary.reference_energy,
        "min_gap": summary.min_gap,
        "max_gap": summary.max_gap,
        "violations": summary.violations,
    }
    if args.format in ("json", "both"):
        _write_json(Path(args.out) / "report.json", payload)
    print(
        f"riesz: n={n} s={summary.s} trials={trials} violations={summary.violations}"
    )
    return EXIT_VIOLATION if summary.violations else EXIT_OK


_COMMANDS = {
    "energy": _cmd_energy,
    "verify": _cmd_verify,
    "optimize": _cmd_optimize,
    "capacity": _cmd_capacity,
    "riesz": _cmd_riesz,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotgreen",
        description="Green-energy experiments for charges on circles in rotation domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("energy", "evaluate the energy of one configuration"),
        ("verify", "compare trial angle sets against the equally spaced reference"),
        ("optimize", "multistart search for the extremal angles"),
        ("capacity", "condenser modulus: asymptotic vs oracles"),
        ("riesz", "unit-circle Riesz energy checks against roots of unity"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="override every config seed")
        p.add_argument("--out", default="./out", help="output directory (default ./out)")
        p.add_argument("--format", choices=("json", "csv", "both"), default="both")
        p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    return parser


def run_command(argv) -> int:
    """Dispatch a parsed command; returns the process exit code."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"config is not valid JSON (line {exc.lineno}, col {exc.colno}): {exc.msg}", file=sys.stderr)
        return EXIT_CONFIG
    if not isinstance(cfg, dict):
        print("config error at '': top level must be an object", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

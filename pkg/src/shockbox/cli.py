"""Command-line front end: scenario runs, violation search, table export.

Three subcommands share one configuration surface:

  pipeline  run a scenario file end to end, write the verification report
            (exit 0 only if every check passes, 1 on a failed check);
  search    batch-scan seeded random discrete max/min scenarios for
            rectangle-inequality violations of the same-corner copula pair
            (exploratory: exit 0 whether or not witnesses turn up);
  emit      export generator tables, copula surfaces, marginal bounds and
            bivariate-bound surfaces as CSV.

Malformed configuration or scenario input exits 2. All outputs are
deterministic for a fixed seed (sorted keys, no timestamps, shortest
round-trip float formatting) and written atomically: content goes to a
temporary file in the target directory which is renamed over the final
path only once complete, so failures never leave partial files.

Scenario files are JSON:

    {"model": "marshall" | "maxmin",
     "x": {"lower": LAW, "upper": LAW} | LAW,
     "y": {"lower": LAW, "upper": LAW} | LAW,
     "z": LAW,
     "grid": 101}

where LAW is a parametric law object such as {"type": "exponential",
"rate": 1.0} or {"type": "discrete", "atoms": [[1.0, 0.5], [2.0, 0.5]]};
a bare LAW for x or y means a precise (degenerate) p-box. z is always
precise. A --grid flag overrides the file's grid.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .copulas import MaxminCopula, copula_grid
from .distfn import DistFn, from_spec, paramspec_from_json
from .errors import ConfigError, ShockboxError
from .generators import build_chi, build_phi
from .imprecise import CopulaPair, search_ic_violation, verify_witness
from .pbox import PBox
from .shockmodel import (
    Scenario,
    ScenarioResult,
    _probe_xs,
    _thin,
    random_discrete_scenario,
    run_scenario,
)

COMMANDS = ("pipeline", "search", "emit")
FORMATS = ("json", "csv")

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 42
DEFAULT_SEARCH_COUNT = 1000
DEFAULT_SEARCH_GRID = 51


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: Path | None = None
    grid: int | None = None
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    out: Path = Path(".")
    fmt: str = "json"
    count: int = DEFAULT_SEARCH_COUNT

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.grid is not None and self.grid < 2:
            raise ConfigError("grid must be at least 2")
        if not self.tol > 0.0:
            raise ConfigError("tolerance must be positive")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.count < 0:
            raise ConfigError("count must be non-negative")


# ---------------------------------------------------------------------------
# input / output plumbing


def _law(obj, label: str) -> DistFn:
    try:
        return from_spec(paramspec_from_json(obj))
    except ShockboxError as exc:
        raise ConfigError(f"bad law for {label}: {exc}") from exc


def _law_pair(obj, label: str) -> PBox:
    try:
        if isinstance(obj, dict) and {"lower", "upper"} <= obj.keys():
            return PBox(_law(obj["lower"], label), _law(obj["upper"], label))
        return PBox.precise(_law(obj, label))
    except ShockboxError as exc:
        raise ConfigError(f"bad p-box for {label}: {exc}") from exc


def load_scenario(path: Path, grid_override: int | None = None) -> Scenario:
    """Parse a scenario file; every malformation becomes a ConfigError."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must hold a JSON object")
    missing = [k for k in ("model", "x", "y", "z") if k not in raw]
    if missing:
        raise ConfigError(f"scenario is missing fields: {', '.join(missing)}")
    grid = grid_override if grid_override is not None else raw.get("grid", 101)
    if not isinstance(grid, int):
        raise ConfigError("grid must be an integer")
    try:
        return Scenario(
            x_pbox=_law_pair(raw["x"], "x"),
            y_pbox=_law_pair(raw["y"], "y"),
            z=_law(raw["z"], "z"),
            model=raw["model"],
            grid=grid,
        )
    except ShockboxError as exc:
        raise ConfigError(str(exc)) from exc


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def _unit_grid(n: int) -> np.ndarray:
    # arange/(n-1) rounds each i/(n-1) correctly, so decimal grids print as
    # decimals; linspace accumulates step rounding (0.20000000000000004).
    return np.arange(n, dtype=float) / (n - 1)


def _surface_rows(pair_low, pair_up, us, vs):
    low = copula_grid(pair_low, us, vs)
    up = copula_grid(pair_up, us, vs)
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            yield (float(u), float(v), float(low[i, j]), float(up[i, j]))


def _write_surfaces(res: ScenarioResult, out: Path, n: int) -> list[Path]:
    us = _unit_grid(n)
    paths = [out / "copula_surface.csv"]
    _write_atomic(
        paths[0],
        _csv_text(
            ["u", "v", "low_c", "up_c"],
            _surface_rows(res.imprecise_pair.low, res.imprecise_pair.up, us, us),
        ),
    )
    xs = _thin(_probe_xs([res.low_f, res.up_f, res.low_second, res.up_second]), n)
    rows = []
    low_hx = [[res.low_h.at(float(x), float(y)) for y in xs] for x in xs]
    up_hx = [[res.up_h.at(float(x), float(y)) for y in xs] for x in xs]
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            rows.append((float(x), float(y), float(low_hx[i][j]), float(up_hx[i][j])))
    paths.append(out / "h_surface.csv")
    _write_atomic(paths[1], _csv_text(["x", "y", "low_h", "up_h"], rows))
    return paths


def cmd_pipeline(cfg: RunConfig) -> int:
    if cfg.scenario is None:
        raise ConfigError("pipeline needs --scenario")
    scenario = load_scenario(cfg.scenario, cfg.grid)
    result = run_scenario(scenario, tol=cfg.tol)
    _write_atomic(cfg.out / "report.json", _json_text(result.to_report()))
    if cfg.fmt == "csv":
        _write_surfaces(result, cfg.out, scenario.grid)
    return 0 if result.all_passed else 1


def cmd_search(cfg: RunConfig) -> int:
    """Scan seeded random max/min scenarios for same-corner pair violations.

    The same-corner pair composes into the bivariate bounds but is not in
    general an imprecise copula on the unit square; this command gathers
    grid evidence. Each witness is re-verified two ways: recomputed directly
    on its rectangle, and re-found by a scan at doubled resolution.
    """
    grid = cfg.grid if cfg.grid is not None else DEFAULT_SEARCH_GRID
    findings = []
    by_condition: dict[str, int] = {}
    for index in range(cfg.count):
        scenario = random_discrete_scenario([cfg.seed, index], model="maxmin", grid=grid)
        low_phi = build_phi(scenario.x_pbox.lower, scenario.z)
        up_phi = build_phi(scenario.x_pbox.upper, scenario.z)
        low_chi = build_chi(scenario.y_pbox.lower, scenario.z)
        up_chi = build_chi(scenario.y_pbox.upper, scenario.z)
        pair = CopulaPair(MaxminCopula(low_phi, low_chi), MaxminCopula(up_phi, up_chi))
        witnesses = search_ic_violation(pair, n=grid, tol=cfg.tol)
        if not witnesses:
            continue
        doubled = {w.condition for w in search_ic_violation(pair, n=2 * grid - 1, tol=cfg.tol)}
        findings.append(
            {
                "scenario_index": index,
                "witnesses": [w.to_dict() for w in witnesses],
                "reverified_exact": all(verify_witness(pair, w, tol=cfg.tol) for w in witnesses),
                "reverified_doubled_grid": all(w.condition in doubled for w in witnesses),
            }
        )
        for w in witnesses:
            by_condition[w.condition] = by_condition.get(w.condition, 0) + 1
    summary = {
        "command": "search",
        "model": "maxmin",
        "pair": "same-corner",
        "scenarios_scanned": cfg.count,
        "grid": grid,
        "tol": cfg.tol,
        "seed": cfg.seed,
        "scenarios_with_violations": len(findings),
        "violations_by_condition": by_condition,
        "findings": findings,
    }
    _write_atomic(cfg.out / "search_summary.json", _json_text(summary))
    return 0


def cmd_emit(cfg: RunConfig) -> int:
    """Write generator, marginal and surface tables for one scenario."""
    if cfg.scenario is None:
        raise ConfigError("emit needs --scenario")
    scenario = load_scenario(cfg.scenario, cfg.grid)
    result = run_scenario(scenario, tol=cfg.tol)
    n = scenario.grid
    grid_us = _unit_grid(n)
    for name, gen in (
        ("low_phi", result.low_phi),
        ("up_phi", result.up_phi),
        ("low_companion", result.low_companion),
        ("up_companion", result.up_companion),
    ):
        us = np.unique(np.concatenate([grid_us, np.asarray(gen.knot_us)]))
        rows = [(float(u), float(gen.eval(float(u)))) for u in us]
        _write_atomic(cfg.out / f"generator_{name}.csv", _csv_text(["u", "value"], rows))
    xs = _thin(
        _probe_xs([result.low_f, result.up_f, result.low_second, result.up_second]), max(n, 101)
    )
    rows = [
        (
            float(x),
            float(result.low_f.eval(float(x))),
            float(result.up_f.eval(float(x))),
            float(result.low_second.eval(float(x))),
            float(result.up_second.eval(float(x))),
        )
        for x in xs
    ]
    _write_atomic(
        cfg.out / "marginals.csv",
        _csv_text(["x", "low_f", "up_f", "low_second", "up_second"], rows),
    )
    _write_surfaces(result, cfg.out, n)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shockbox",
        description="Shock-model copula bounds: run, search, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "pipeline": "run a scenario and write its verification report",
        "search": "scan random scenarios for same-corner pair violations",
        "emit": "export generator/copula/marginal tables as CSV",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", type=Path, default=None, help="scenario JSON file")
        p.add_argument("--grid", type=int, default=None, help="grid resolution override")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="check tolerance")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--format", choices=FORMATS, default="json", dest="fmt")
        if name == "search":
            p.add_argument(
                "--count", type=int, default=DEFAULT_SEARCH_COUNT, help="scenarios to scan"
            )
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = RunConfig(
            command=args.command,
            scenario=args.scenario,
            grid=args.grid,
            tol=args.tol,
            seed=args.seed,
            out=args.out,
            fmt=args.fmt,
            count=getattr(args, "count", DEFAULT_SEARCH_COUNT),
        )
        handler = {"pipeline": cmd_pipeline, "search": cmd_search, "emit": cmd_emit}[cfg.command]
        return handler(cfg)
    except ConfigError as exc:
        print(f"shockbox: {exc}", file=sys.stderr)
        return 2
    except ShockboxError as exc:
        print(f"shockbox: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

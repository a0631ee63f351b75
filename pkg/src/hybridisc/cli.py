"""Experiment runner: reads a sectioned key-value config, writes CSV artifacts.

Five experiment kinds are supported (see the README for the full config
grammar and examples):

  two-disc-error       boundary error vs truncation for the chosen schemes
  modes-vs-separation  modes needed to reach a target error, per separation
  nine-disc-dipole     converged far-field dipole of the 3x3 benchmark array
  exact-eval           boundary samples of the exact two-disc potential
  decay-diagnostics    weighted decay sups of the exact Laurent coefficients

Sweep cells run on a bounded thread pool (--threads, or HYBRIDISC_THREADS);
results are merged in input order, so the CSV bytes do not depend on the
thread count.  Exit codes: 0 success, 2 malformed config, 3 degenerate
least-squares system, 4 series convergence failure, 1 other module errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .basis import SchemeKind, far_field_dipole
from .errors import ConvergenceFailure, DegenerateSystem, HybridiscError
from .geometry import BCKind, two_disc_config
from .multidisc import (
    DEFAULT_MODE_GRID,
    NINE_DISC_THRESHOLD,
    modes_vs_separation,
    nine_disc_config,
    MultiDiscProblem,
    solve_multidisc,
)
from .solver import (
    assemble,
    boundary_error,
    exact_solution_for,
    modes_for_accuracy,
    solve_least_squares,
)
from .special import ExactSolution, exact_W, omega_coeffs
from .conformal import annulus_map
from .diagnostics import decay_profile


class ConfigError(HybridiscError):
    """Malformed or incomplete experiment configuration."""


EXPERIMENT_KINDS = (
    "two-disc-error",
    "modes-vs-separation",
    "nine-disc-dipole",
    "exact-eval",
    "decay-diagnostics",
)


def _fmt(value) -> str:
    """CSV cell formatting: 15 significant digits, scientific notation."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.14e}"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _write_reports(path: Path, records: list[dict]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _report_record(row_key: dict, report) -> dict:
    return {
        "row": row_key,
        "scheme": report.expansion.scheme.value,
        "N": report.expansion.N,
        "residual_norm": report.residual_norm,
        "rank_estimate": report.rank_estimate,
        "gammas": [float(g) for g in report.gammas],
        "max_boundary_error": report.max_boundary_error,
        "wall_time": report.wall_time,
    }


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _load_config(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return parser


def _get(cfg: configparser.ConfigParser, section: str, key: str, default=None) -> str:
    if cfg.has_option(section, key):
        return cfg.get(section, key)
    if default is not None:
        return default
    raise ConfigError(f"missing [{section}] {key}")


def _get_float(cfg, section, key, default=None) -> float:
    raw = _get(cfg, section, key, default)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from exc


def _get_int(cfg, section, key, default=None) -> int:
    raw = _get(cfg, section, key, default)
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from exc


def _parse_complex_pair(raw: str, where: str) -> complex:
    parts = raw.split()
    if len(parts) != 2:
        raise ConfigError(f"{where}: expected two floats 're im', got {raw!r}")
    try:
        return float(parts[0]) + 1j * float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_floats(raw: str, where: str) -> list[float]:
    try:
        vals = [float(tok) for tok in raw.split()]
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if not vals:
        raise ConfigError(f"{where}: empty list")
    return vals


def _parse_int_grid(raw: str, where: str) -> list[int]:
    """Integers, given either space-separated or as start:stop:step ranges
    (stop inclusive); mixtures are allowed."""
    out: list[int] = []
    for tok in raw.split():
        if ":" in tok:
            try:
                start, stop, step = (int(p) for p in tok.split(":"))
            except ValueError as exc:
                raise ConfigError(f"{where}: bad range {tok!r}") from exc
            if step <= 0 or stop < start:
                raise ConfigError(f"{where}: bad range {tok!r}")
            out.extend(range(start, stop + 1, step))
        else:
            try:
                out.append(int(tok))
            except ValueError as exc:
                raise ConfigError(f"{where}: bad integer {tok!r}") from exc
    if not out or sorted(out) != out:
        raise ConfigError(f"{where}: grid must be non-empty and ascending")
    return out


def _parse_schemes(raw: str) -> list[SchemeKind]:
    try:
        return [SchemeKind(tok) for tok in raw.split()]
    except ValueError as exc:
        raise ConfigError(f"unknown scheme in {raw!r}: {exc}") from exc


def _bc_kind(cfg) -> BCKind:
    raw = _get(cfg, "field", "bc", "flow")
    try:
        return BCKind(raw)
    except ValueError as exc:
        raise ConfigError(f"[field] bc: unknown kind {raw!r}") from exc


def _u0(cfg) -> complex:
    return _parse_complex_pair(_get(cfg, "field", "u0", "1 0"), "[field] u0")


# ---------------------------------------------------------------------------
# experiment kinds
# ---------------------------------------------------------------------------

def _run_two_disc_error(cfg, pool, dump: bool):
    d = _get_float(cfg, "geometry", "d", "1.0")
    s = _get_float(cfg, "geometry", "s")
    schemes = _parse_schemes(_get(cfg, "sweep", "schemes", "z zeta hybrid"))
    n_values = _parse_int_grid(_get(cfg, "sweep", "n_values"), "[sweep] n_values")
    ncf = _get_int(cfg, "sweep", "n_colloc_factor", "4")
    n_test = _get_int(cfg, "sweep", "n_test", "2048")
    config = two_disc_config(d, s, _u0(cfg), _bc_kind(cfg))
    exact = exact_solution_for(config)

    def cell(args):
        scheme, N = args
        report = solve_least_squares(assemble(config, scheme, N, ncf * N))
        err = boundary_error(report, exact, n_test)
        return scheme, N, err, report

    cells = [(scheme, N) for scheme in schemes for N in n_values]
    rows, records = [], []
    for scheme, N, err, report in pool.map(cell, cells):
        rows.append([scheme.value, N, err])
        if dump:
            records.append(_report_record({"scheme": scheme.value, "N": N}, report))
    return ["scheme", "N", "max_error"], rows, records


def _run_modes_vs_separation(cfg, pool, dump: bool):
    d = _get_float(cfg, "geometry", "d", "1.0")
    schemes = _parse_schemes(_get(cfg, "sweep", "schemes", "hybrid"))
    separations = _parse_floats(_get(cfg, "sweep", "separations"), "[sweep] separations")
    target = _get_float(cfg, "sweep", "target", "1e-6")
    n_max = _get_int(cfg, "sweep", "n_max", "300")
    n_step = _get_int(cfg, "sweep", "n_step", "5")
    u0, bc = _u0(cfg), _bc_kind(cfg)

    def cell(args):
        scheme, sep = args
        if not 0 < sep < d:
            raise ConfigError(f"separation {sep} outside (0, d)")
        config = two_disc_config(d, d - sep, u0, bc)
        reports = [] if dump else None
        modes = modes_for_accuracy(config, scheme, target, n_max,
                                   N_step=n_step, reports=reports)
        return scheme, sep, modes, (reports[-1] if reports else None)

    cells = [(scheme, sep) for scheme in schemes for sep in separations]
    rows, records = [], []
    for scheme, sep, modes, report in pool.map(cell, cells):
        if len(schemes) == 1:
            rows.append([sep, modes])
        else:
            rows.append([scheme.value, sep, modes])
        if dump and report is not None:
            records.append(
                _report_record({"scheme": scheme.value, "separation": sep,
                                "modes": modes}, report)
            )
    header = (["separation", "modes"] if len(schemes) == 1
              else ["scheme", "separation", "modes"])
    return header, rows, records


def _run_nine_disc(cfg, pool, dump: bool):
    half = _get_float(cfg, "geometry", "half_spacing", "0.2")
    separations = _parse_floats(_get(cfg, "geometry", "separations"), "[geometry] separations")
    threshold = _get_float(cfg, "sweep", "threshold", str(NINE_DISC_THRESHOLD))
    target = _get_float(cfg, "sweep", "target", "1e-4")
    raw_grid = _get(cfg, "sweep", "mode_grid", " ".join(str(n) for n in DEFAULT_MODE_GRID))
    mode_grid = tuple(_parse_int_grid(raw_grid, "[sweep] mode_grid"))
    u0 = _u0(cfg)

    def factory(sep, N):
        return MultiDiscProblem(
            config=nine_disc_config(sep, half, u0), N=N, threshold=threshold
        )

    def cell(sep):
        [row] = modes_vs_separation(factory, [sep], target, mode_grid)
        return row

    rows, records = [], []
    for row in pool.map(cell, separations):
        mag = abs(row.dipole) if row.dipole is not None else None
        rows.append([row.separation, mag, row.modes])
        if dump and row.modes is not None:
            report = solve_multidisc(factory(row.separation, row.modes))
            records.append(
                _report_record(
                    {"separation": row.separation, "modes": row.modes,
                     "dipole_magnitude": mag},
                    report,
                )
            )
    return ["separation", "dipole_magnitude", "modes"], rows, records


def _run_exact_eval(cfg, pool, dump: bool):
    d = _get_float(cfg, "geometry", "d", "1.0")
    s = _get_float(cfg, "geometry", "s")
    n_points = _get_int(cfg, "eval", "n_points", "1024")
    amap = annulus_map(d, s)
    sol = ExactSolution(map=amap, U0=_u0(cfg))
    th = 2.0 * np.pi * np.arange(n_points) / n_points
    rows = []
    for circle, zeta in ((0, amap.rho * np.exp(1j * th)), (1, np.exp(1j * th))):
        w = exact_W(sol, zeta)
        rows.extend([circle, t, wv.real, wv.imag] for t, wv in zip(th, w))
    return ["circle", "theta", "re_w", "im_w"], rows, []


def _run_decay_diagnostics(cfg, pool, dump: bool):
    d = _get_float(cfg, "geometry", "d", "1.0")
    s = _get_float(cfg, "geometry", "s")
    j_max = _get_int(cfg, "diag", "j_max", "256")
    k_max = _get_int(cfg, "diag", "k_max", "3")
    n_quad = _get_int(cfg, "diag", "n_quad", str(max(1024, 8 * j_max)))
    amap = annulus_map(d, s)
    sol = ExactSolution(map=amap, U0=_u0(cfg))
    c, dd = omega_coeffs(sol, j_max, n_quad)
    rows = []
    for family, coefs in (("c", c), ("d", dd)):
        profile = decay_profile(coefs, amap.T, k_max)
        js = np.arange(1, j_max + 1, dtype=float)
        mags = np.abs(coefs)
        for j, mag in zip(js, mags):
            rows.append([family, int(j), mag] + [j**k * mag for k in range(1, k_max + 1)])
    header = ["family", "j", "abs_coef"] + [f"j{k}_abs_coef" for k in range(1, k_max + 1)]
    return header, rows, []


_RUNNERS = {
    "two-disc-error": _run_two_disc_error,
    "modes-vs-separation": _run_modes_vs_separation,
    "nine-disc-dipole": _run_nine_disc,
    "exact-eval": _run_exact_eval,
    "decay-diagnostics": _run_decay_diagnostics,
}


def run(config_path: str, out_dir: str, threads: int = 1, dump_reports: bool = False) -> Path:
    """Execute one experiment config; returns the CSV path it wrote."""
    cfg = _load_config(config_path)
    kind = _get(cfg, "experiment", "kind")
    if kind not in _RUNNERS:
        raise ConfigError(f"unknown experiment kind {kind!r}; expected one of {EXPERIMENT_KINDS}")
    csv_name = _get(cfg, "output", "csv", f"{kind}.csv")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        header, rows, records = _RUNNERS[kind](cfg, pool, dump_reports)
    csv_path = out / csv_name
    _write_csv(csv_path, header, rows)
    if dump_reports:
        _write_reports(csv_path.with_suffix(csv_path.suffix + ".reports.jsonl"), records)
    return csv_path


def _default_threads() -> int:
    raw = os.environ.get("HYBRIDISC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hybridisc",
        description="Run a hybrid-basis disc-potential experiment from a config file.",
    )
    parser.add_argument("--config", required=True, help="experiment config file")
    parser.add_argument("--out", default=".", help="output directory for CSV artifacts")
    parser.add_argument("--threads", type=int, default=None,
                        help="sweep worker threads (default: HYBRIDISC_THREADS or 1)")
    parser.add_argument("--dump-reports", action="store_true",
                        help="also write a .reports.jsonl with one solve report per CSV row")
    args = parser.parse_args(argv)
    threads = args.threads if args.threads is not None else _default_threads()
    try:
        csv_path = run(args.config, args.out, threads, args.dump_reports)
    except ConfigError as exc:
        print(f"hybridisc: config error: {exc}", file=sys.stderr)
        return 2
    except DegenerateSystem as exc:
        print(f"hybridisc: degenerate least-squares system: {exc}", file=sys.stderr)
        return 3
    except ConvergenceFailure as exc:
        print(f"hybridisc: series convergence failure: {exc}", file=sys.stderr)
        return 4
    except HybridiscError as exc:
        print(f"hybridisc: {exc}", file=sys.stderr)
        return 1
    print(csv_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

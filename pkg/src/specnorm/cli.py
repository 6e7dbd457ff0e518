"""Command-line front end: constants tables, single norms, Monte Carlo runs.

Exit codes: 0 success, 2 numerical non-convergence or failed experiment,
3 oracle disagreement, 64 usage error. CSV output uses '.' decimals and
12 significant digits so golden files reproduce across platforms.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .extremes import dominance_check, g_c_quantile, gumbel_model, gumbel_quantile, theta_c
from .montecarlo import (
    ExperimentConfig,
    ExperimentError,
    collect_samples,
    reference_constant,
    run_experiment,
    sweep_ratios,
)
from .norms import scaled_norm, spectral_norm_dense, spectral_norm_fast
from .sinekernel import k_estimate, k_table
from .structured import DISTRIBUTIONS, FAMILIES, MatrixSpec, build_symbol, dense_materialize

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_ORACLE = 3
EXIT_USAGE = 64

_DEFAULT_SEED = 12345


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 64
        raise UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _emit(rows: list[dict], columns: list[str], args) -> None:
    if args.format == "json":
        payload = [{col: row[col] for col in columns} for row in rows]
        text = json.dumps(payload, indent=2, default=_fmt) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(row[col]) for col in columns) for row in rows]
        text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like start:step:stop, got {text!r}")
    try:
        start, step, stop = (float(part) for part in parts)
    except ValueError:
        raise UsageError(f"grid must contain numbers, got {text!r}") from None
    if step == 0:
        if start != stop:
            raise UsageError("grid with zero step needs start == stop")
        return [start]
    if step < 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-6)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SPECNORM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SPECNORM_SEED must be an integer, got {env!r}") from None
    return _DEFAULT_SEED


def cmd_ktable(args) -> int:
    grid = _parse_grid(args.grid)
    for r in grid:
        if not 0 < r <= 1:
            raise UsageError(f"ratios must lie in (0, 1], got {r}")
    try:
        rows = k_table(
            sorted(grid, reverse=True),
            p_base=args.p_base,
            p_step=args.p_step,
            outer_tol=args.outer_tol,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = [
        {
            "ratio": est.ratio,
            "k_value": est.k_value,
            "bracket_lo": est.bracket_lo,
            "bracket_hi": est.bracket_hi,
            "iterations": est.outer_iterations,
            "converged": est.converged,
        }
        for est in sorted(rows, key=lambda est: est.ratio)
    ]
    _emit(out, ["ratio", "k_value", "bracket_lo", "bracket_hi", "iterations", "converged"], args)
    return EXIT_OK if all(est.converged for est in rows) else EXIT_NUMERIC


def cmd_theta(args) -> int:
    grid = _parse_grid(args.grid)
    for c in grid:
        if not 0 < c <= 1:
            raise UsageError(f"aspect ratios must lie in (0, 1], got {c}")
    rows = [{"c": c, "theta": theta_c(c, args.tol)} for c in grid]
    _emit(rows, ["c", "theta"], args)
    return EXIT_OK


def cmd_norm(args) -> int:
    try:
        spec = MatrixSpec(
            family=args.family,
            p=args.p,
            n=args.n,
            symmetric=args.symmetric,
            dist=args.dist,
            seed=_resolve_seed(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sym = build_symbol(spec)
    result = spectral_norm_fast(sym, spec, tol=args.tol, max_iter=args.max_iter)
    if spec.family in ("circulant", "reverse_circulant"):
        reference = 1.0
    else:
        reference = k_estimate(spec.p, spec.n)[0].k_value
    row = {
        "family": spec.family,
        "symmetric": spec.symmetric,
        "p": spec.p,
        "n": spec.n,
        "seed": spec.seed,
        "sigma_max": result.sigma_max,
        "scaled_norm": scaled_norm(result.sigma_max, spec),
        "reference": reference,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    columns = list(row)
    code = EXIT_OK if result.converged else EXIT_NUMERIC
    if args.dense_check:
        dense = spectral_norm_dense(dense_materialize(sym, spec))
        rel = abs(result.sigma_max - dense.sigma_max) / dense.sigma_max
        row["dense_sigma_max"] = dense.sigma_max
        row["dense_rel_error"] = rel
        columns += ["dense_sigma_max", "dense_rel_error"]
        if rel > 1e-8:
            code = EXIT_ORACLE
    _emit([row], columns, args)
    return code


_CONFIG_ALIASES = {"seed": "base_seed", "probes": "quantile_probes"}
_CONFIG_EXTRAS = ("ratios", "raw_output")
_CONFIG_FIELDS = (
    "family",
    "p",
    "n",
    "symmetric",
    "dist",
    "replicates",
    "base_seed",
    "statistics",
    "quantile_probes",
    "workers",
    "norm_tol",
    "norm_max_iter",
    "center_offset",
)


def _parse_scalar(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config(path: str) -> dict:
    """Read an experiment config: JSON document or flat key=value lines."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("JSON config must be an object")
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            data[key.strip()] = _parse_scalar(value.strip())
    out = {}
    for key, value in data.items():
        key = _CONFIG_ALIASES.get(key, key)
        if key not in _CONFIG_FIELDS and key not in _CONFIG_EXTRAS:
            raise UsageError(f"unknown config key {key!r}")
        out[key] = value
    return out


def _as_tuple(value, cast) -> tuple:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)):
        value = [value]
    return tuple(cast(part) for part in value)


def _experiment_config(data: dict, args) -> tuple[ExperimentConfig, list[float] | None, str | None]:
    data = dict(data)
    ratios = data.pop("ratios", None)
    if ratios is not None:
        ratios = list(_as_tuple(ratios, float))
    raw_output = data.pop("raw_output", None)
    if "statistics" in data:
        data["statistics"] = _as_tuple(data["statistics"], str)
    if "quantile_probes" in data:
        data["quantile_probes"] = _as_tuple(data["quantile_probes"], float)
    data.setdefault("base_seed", _resolve_seed(args))
    data.setdefault("workers", args.threads)
    if "p" not in data:
        raise UsageError("config must set p")
    if "n" not in data:
        if ratios:
            data["n"] = math.floor(data["p"] / max(ratios))
        else:
            raise UsageError("config must set n (or ratios for a sweep)")
    try:
        cfg = ExperimentConfig(**data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid experiment config: {exc}") from None
    return cfg, ratios, raw_output


def cmd_mc(args) -> int:
    cfg, ratios, raw_output = _experiment_config(load_config(args.config), args)
    if len(cfg.statistics) != 1:
        raise UsageError("the mc summary covers one statistic per run")
    probes = tuple(sorted(set(cfg.quantile_probes) | {0.05, 0.5, 0.95}))
    cfg = replace(cfg, quantile_probes=probes)
    try:
        if ratios:
            rows = [
                {
                    "ratio": row.ratio,
                    "p": row.p,
                    "n": row.n,
                    "count": row.count,
                    "mean": row.mean,
                    "q05": row.q05,
                    "median": row.median,
                    "q95": row.q95,
                    "reference": row.reference,
                }
                for row in sweep_ratios(cfg, ratios, cfg.p)
            ]
        else:
            summary = run_experiment(cfg, raw_path=raw_output)[cfg.statistics[0]]
            probes = dict(summary.quantiles)
            rows = [
                {
                    "ratio": cfg.p / cfg.n,
                    "p": cfg.p,
                    "n": cfg.n,
                    "count": summary.count,
                    "mean": summary.mean,
                    "q05": probes.get(0.05, summary.quantile(0.05)),
                    "median": summary.median,
                    "q95": probes.get(0.95, summary.quantile(0.95)),
                    "reference": reference_constant(cfg),
                }
            ]
    except ExperimentError as exc:
        print(f"experiment failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(rows, ["ratio", "p", "n", "count", "mean", "q05", "median", "q95", "reference"], args)
    return EXIT_OK


def cmd_gumbel_compare(args) -> int:
    cfg, ratios, raw_output = _experiment_config(load_config(args.config), args)
    if cfg.family != "circulant" or cfg.symmetric or cfg.dist != "gaussian":
        raise UsageError("gumbel-compare needs a non-symmetric Gaussian circulant")
    cfg = replace(cfg, statistics=("scaled_norm", "centered_norm_sq"))
    configs = []
    if ratios:
        if args.dominance_output:
            raise UsageError("--dominance-output needs a single-experiment config, not a sweep")
        for ratio in ratios:
            n = math.floor(cfg.p / ratio)
            configs.append(replace(cfg, n=n))
    else:
        configs.append(cfg)

    levels = (0.05, 0.5, 0.95)
    rows = []
    dominance_rows = []
    try:
        for sub in configs:
            samples, _ = collect_samples(sub, raw_path=raw_output)
            scaled = np.sort(samples["scaled_norm"])
            c = sub.p / sub.n
            row = {"ratio": c, "p": sub.p, "n": sub.n, "count": int(scaled.size)}
            for q, label in zip(levels, ("q05", "q50", "q95")):
                row[f"{label}_empirical"] = float(np.quantile(scaled, q))
                row[f"{label}_model"] = g_c_quantile(q, c, sub.n)
            rows.append(row)
            if args.dominance_output and scaled.size >= 500:
                model = gumbel_model(c)
                probes = [gumbel_quantile(q, model) for q in (0.05, 0.25, 0.5, 0.75, 0.95)]
                report = dominance_check(samples["centered_norm_sq"], model, probes)
                dominance_rows.extend(report.probes)
    except ExperimentError as exc:
        print(f"experiment failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    columns = ["ratio", "p", "n", "count"]
    for label in ("q05", "q50", "q95"):
        columns += [f"{label}_empirical", f"{label}_model"]
    _emit(rows, columns, args)
    if args.dominance_output and dominance_rows:
        with open(args.dominance_output, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "empirical_cdf", "gumbel_cdf", "diff", "flag"])
            for check in dominance_rows:
                writer.writerow([_fmt(check.x), _fmt(check.empirical_cdf),
                                 _fmt(check.gumbel_cdf), _fmt(check.diff), _fmt(check.flag)])
    return EXIT_OK


def build_parser() -> _Parser:
    root = _Parser(prog="specnorm", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--output", help="write results to this path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=None,
                        help="seed (default: $SPECNORM_SEED or %d)" % _DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for Monte Carlo commands")
    common.add_argument("-v", "--verbose", action="count", default=0)

    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ktable", parents=[common],
                       help="limiting-constant table over a ratio grid")
    p.add_argument("--grid", required=True, help="ratio grid start:step:stop")
    p.add_argument("--p-base", type=int, default=1000, dest="p_base")
    p.add_argument("--p-step", type=int, default=10, dest="p_step")
    p.add_argument("--outer-tol", type=float, default=1e-13, dest="outer_tol")
    p.set_defaults(func=cmd_ktable)

    p = sub.add_parser("theta", parents=[common], help="Gumbel shift table over a ratio grid")
    p.add_argument("--grid", required=True, help="aspect-ratio grid start:step:stop")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("norm", parents=[common], help="spectral norm of one random draw")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="gaussian")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    p.add_argument("--dense-check", action="store_true", dest="dense_check",
                   help="cross-check against the dense oracle (exit 3 on disagreement)")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo summary from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gumbel-compare", parents=[common],
                       help="empirical vs shifted-Gumbel quantiles for circulant draws")
    p.add_argument("--config", required=True)
    p.add_argument("--dominance-output", dest="dominance_output",
                   help="also write the CDF dominance report to this CSV")
    p.set_defaults(func=cmd_gumbel_compare)

    return root


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"specnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

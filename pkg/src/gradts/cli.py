"""Command-line front end: experiment drivers with CSV/JSON result emission.

Configs are TOML (or a previously emitted meta.json); command-line flags
override config values. Every run writes `results.csv` in long format plus
`meta.json` with the fully resolved configuration, and is byte-for-byte
reproducible for a fixed seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import subprocess
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__, benchmarks, harness
from .acquire import AcquisitionConfig
from .candidates import MaskVariant
from .harness import RunConfig, RunTrace

ENV_OUT_ROOT = "GRADTS_OUT"

DEFAULTS = {
    "problem": "quadratic",
    "dim": 10,
    "method": "grad-raasp",
    "iterations": 100,
    "n_init": 30,
    "repeats": 10,
    "seed": 0,
    "jobs": 1,
    "candidates": 10_000,
    "batch_size": 1,
    "turbo": False,
    "mask_variant": "l2",
    "mask_c": 20.0,
    "noise_sd": 0.0,
    "budget": 1_000_000,
    "n_models": 10,
    "n_draws": 100,
    "snapshot_iterations": 200,
}


class ConfigError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    if p.suffix == ".json":
        blob = json.loads(p.read_text())
        return blob.get("config", blob)
    with open(p, "rb") as fh:
        return tomllib.load(fh)


def _resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(args.config))
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if args.turbo is not None:
        cfg["turbo"] = args.turbo
    unknown = set(cfg) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _out_dir(args: argparse.Namespace) -> Path:
    root = args.out or os.environ.get(ENV_OUT_ROOT) or "."
    out = Path(root)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        if np.isnan(v):
            return ""
        if np.isneginf(v):
            return "-inf"
        return f"{v:.17g}"
    return str(v)


def _write_csv(path: Path, header: list[str], rows) -> None:
    """Atomic CSV write: UTF-8, LF endings, temp + rename."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(buf.getvalue(), encoding="utf-8")
    tmp.replace(path)


def _git_hash() -> str:
    try:
        return subprocess.run(
            ["git", "rev-parse", "HEAD"], capture_output=True, text=True,
            cwd=Path(__file__).parent, timeout=5,
        ).stdout.strip() or "unknown"
    except OSError:
        return "unknown"


def _write_meta(out: Path, cfg: dict, subcommand: str) -> None:
    meta = {
        "subcommand": subcommand,
        "config": cfg,
        "version": __version__,
        "git_hash": _git_hash(),
    }
    tmp = out / "meta.json.tmp"
    tmp.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    tmp.replace(out / "meta.json")


def _run_config(cfg: dict, seed: int, q: int = 1) -> RunConfig:
    return RunConfig(
        problem=cfg["problem"], d=int(cfg["dim"]),
        iterations=int(cfg["iterations"]), n_init=int(cfg["n_init"]),
        noise_sd=float(cfg["noise_sd"]), seed=seed,
        acquisition=AcquisitionConfig(
            M=int(cfg["candidates"]), policy=cfg["method"],
            mask_variant=MaskVariant(cfg["mask_variant"], float(cfg["mask_c"])),
            use_turbo=bool(cfg["turbo"]), q=q,
        ),
    )


RESULT_COLS = ["run_id", "seed", "t", "best_so_far", "y_t", "log_volume",
               "tr_length", "grad_cov_trace"]


def _trace_rows(run_id: str, trace: RunTrace):
    for t in range(trace.n):
        yield [run_id, trace.cfg.seed, t, float(trace.best[t]),
               float(trace.y[t]), float(trace.log_volume[t]),
               float(trace.tr_length[t]), float(trace.grad_cov_trace[t])]


def _write_traces(out: Path, traces: list[RunTrace], method_col: bool = False):
    rows = []
    header = list(RESULT_COLS)
    if method_col:
        header.insert(1, "method")
    for i, tr in enumerate(traces):
        run_id = f"run{i:03d}"
        for row in _trace_rows(run_id, tr):
            if method_col:
                row.insert(1, tr.cfg.acquisition.policy)
            rows.append(row)
        _write_csv(out / f"queries_{run_id}.csv",
                   ["t"] + [f"x{j}" for j in range(tr.cfg.d)],
                   ([t] + [float(v) for v in tr.X[t]] for t in range(tr.n)))
    _write_csv(out / "results.csv", header, rows)


def _cmd_run(args, cfg: dict, out: Path, q: int = 1) -> None:
    base = _run_config(cfg, seed=0, q=q)
    traces = harness.run_many(base, int(cfg["repeats"]),
                              base_seed=int(cfg["seed"]), n_jobs=int(cfg["jobs"]))
    _write_traces(out, traces)


def _cmd_sample_quality(args, cfg: dict, out: Path) -> None:
    problem = benchmarks.make(cfg["problem"], int(cfg["dim"]))
    models = harness.make_snapshots(
        cfg["problem"], int(cfg["dim"]), n_models=int(cfg["n_models"]),
        iterations=int(cfg["snapshot_iterations"]), base_seed=int(cfg["seed"]),
        n_jobs=int(cfg["jobs"]),
    )
    policies = ["sobol", "raasp", "grad-raasp"]
    res = harness.experiment_sample_quality(
        models, problem, policies, M=int(cfg["candidates"]),
        n_draws=int(cfg["n_draws"]), base_seed=int(cfg["seed"]),
        n_sets=int(cfg.get("n_sets", 1)))
    rows = []
    for policy, blobs in res.items():
        ts, obj = blobs["ts_max"], blobs["objective"]
        for m in range(ts.shape[0]):
            for k in range(ts.shape[1]):
                rows.append([cfg["problem"], m, policy, k,
                             float(ts[m, k]), float(obj[m, k])])
    _write_csv(out / "samples.csv",
               ["problem", "model_id", "policy", "draw", "ts_max", "objective"],
               rows)


def _cmd_curse_of_dim(args, cfg: dict, out: Path) -> None:
    problem = benchmarks.make(cfg["problem"], int(cfg["dim"]))
    res = harness.experiment_curse_of_dim(
        problem, int(cfg["budget"]), seed=int(cfg["seed"]))
    rows = []
    for policy in ("sobol", "uniform"):
        for budget, best in zip(res["grid"], res[policy]):
            rows.append([cfg["problem"], int(cfg["dim"]), policy,
                         int(budget), float(best)])
    _write_csv(out / "curse.csv",
               ["problem", "d", "policy", "budget", "best_found"], rows)


def _cmd_locality(args, cfg: dict, out: Path) -> None:
    base = _run_config(cfg, seed=0)
    traces = harness.run_many(base, int(cfg["repeats"]),
                              base_seed=int(cfg["seed"]), n_jobs=int(cfg["jobs"]))
    rows = []
    for i, tr in enumerate(traces):
        mean_step, tour = harness.metric_locality(tr)
        rows.append([f"run{i:03d}", tr.cfg.seed, cfg["method"], mean_step, tour])
    _write_csv(out / "locality.csv",
               ["run_id", "seed", "method", "mean_step_dist", "greedy_tour"], rows)


def _cmd_gradient_uncertainty(args, cfg: dict, out: Path) -> None:
    rows = []
    for i in range(int(cfg["repeats"])):
        rcfg = _run_config(cfg, seed=int(cfg["seed"]) + i)
        res = harness.metric_gradient_uncertainty(rcfg)
        for t, vals in sorted(res.items()):
            rows.append([f"run{i:03d}", rcfg.seed, t,
                         vals["cov_trace"], vals["minority"]])
    _write_csv(out / "gradunc.csv",
               ["run_id", "seed", "t", "grad_cov_trace", "minority_sign_frac"],
               rows)


def _cmd_ablate(args, cfg: dict, out: Path) -> None:
    d = int(cfg["dim"])
    variants = [MaskVariant("l2", c) for c in (20.0, d / 10.0, float(d))]
    variants += [MaskVariant(k, 20.0) for k in ("l1", "l3", "topk", "softmax")]
    base = _run_config(cfg, seed=0)
    groups = harness.ablation_driver(
        base, mask_variants=variants, policies=("grad-raasp",),
        repeats=int(cfg["repeats"]), base_seed=int(cfg["seed"]),
        n_jobs=int(cfg["jobs"]))
    traces = []
    labels = []
    for (policy, kind, c), trs in groups.items():
        for tr in trs:
            traces.append(tr)
            labels.append(f"{policy}/{kind}/c={c:g}")
    rows = []
    for i, (tr, label) in enumerate(zip(traces, labels)):
        for row in _trace_rows(f"run{i:03d}", tr):
            row.insert(1, label)
            rows.append(row)
    header = list(RESULT_COLS)
    header.insert(1, "method")
    _write_csv(out / "results.csv", header, rows)


def _cmd_volume_trace(args, cfg: dict, out: Path) -> None:
    base = _run_config(cfg, seed=0)
    traces = harness.run_many(base, int(cfg["repeats"]),
                              base_seed=int(cfg["seed"]), n_jobs=int(cfg["jobs"]))
    rows = []
    for i, tr in enumerate(traces):
        for t in range(tr.n):
            rows.append([f"run{i:03d}", tr.cfg.seed, t,
                         float(tr.log_volume[t]), float(tr.tr_length[t])])
    _write_csv(out / "volume.csv",
               ["run_id", "seed", "t", "log_volume", "tr_length"], rows)


COMMANDS = {
    "run": lambda a, c, o: _cmd_run(a, c, o, q=1),
    "batch": lambda a, c, o: _cmd_run(a, c, o, q=int(c["batch_size"])),
    "sample-quality": _cmd_sample_quality,
    "curse-of-dim": _cmd_curse_of_dim,
    "locality": _cmd_locality,
    "gradient-uncertainty": _cmd_gradient_uncertainty,
    "ablate": _cmd_ablate,
    "volume-trace": _cmd_volume_trace,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gradts",
        description="Thompson-sampling optimization benchmarks with "
                    "gradient-guided candidate sets",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--repeats", type=int, default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--method", default=None)
        p.add_argument("--problem", default=None)
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--iterations", type=int, default=None)
        p.add_argument("--batch-size", dest="batch_size", type=int, default=None)
        p.add_argument("--candidates", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--turbo", dest="turbo", action="store_true", default=None)
        p.add_argument("--no-turbo", dest="turbo", action="store_false")
        p.add_argument("--mask-variant", dest="mask_variant", default=None)
        p.add_argument("--mask-c", dest="mask_c", type=float, default=None)
        p.add_argument("--noise-sd", dest="noise_sd", type=float, default=None)
        p.add_argument("-v", "--verbose", action="count", default=0)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        cfg = _resolve(args)
        out = _out_dir(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        COMMANDS[args.subcommand](args, cfg, out)
        _write_meta(out, cfg, args.subcommand)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        if args.verbose:
            raise
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

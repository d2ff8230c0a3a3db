"""Command-line runner: ``hetpop run CONFIG.json [--out DIR] [--threads N]``.

The config is a flat JSON object. ``experiment`` and ``seed`` are always
required; the remaining keys depend on the experiment (see ``SCHEMAS``).
Unknown keys are errors. Exit status: 0 success, 1 config error, 2 runtime
failure. All output files are written once, after every replica finished,
and removed again if writing fails part way.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .experiments import run_experiment

log = logging.getLogger("hetpop")


class ConfigError(ValueError):
    pass


def _int(lo=None):
    def check(key, v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{key}: expected an integer, got {v!r}")
        if lo is not None and v < lo:
            raise ConfigError(f"{key}: must be >= {lo}, got {v}")
        return v
    return check


def _real(lo=None, hi=None, lo_open=True, hi_open=False):
    def check(key, v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {v!r}")
        v = float(v)
        if lo is not None and (v <= lo if lo_open else v < lo):
            raise ConfigError(f"{key}: out of range, got {v}")
        if hi is not None and (v >= hi if hi_open else v > hi):
            raise ConfigError(f"{key}: out of range, got {v}")
        return v
    return check


def _int_list(lo=1):
    item = _int(lo)

    def check(key, v):
        if not isinstance(v, list) or not v:
            raise ConfigError(f"{key}: expected a non-empty list of integers")
        return [item(key, x) for x in v]
    return check


def _choice(*options):
    def check(key, v):
        if v not in options:
            raise ConfigError(f"{key}: expected one of {', '.join(options)}, got {v!r}")
        return v
    return check


def _string(key, v):
    if not isinstance(v, str):
        raise ConfigError(f"{key}: expected a string")
    return v


PROB = _real(0.0, 1.0)           # (0, 1]
PROB_OPEN = _real(0.0, 1.0, hi_open=True)
POS = _real(0.0)
REAL = _real()
NONNEG = _real(0.0, lo_open=False)

COMMON = {"experiment": (_string, True), "seed": (_int(0), True), "output_dir": (_string, False)}

# key -> (validator, required)
SCHEMAS = {
    "growth": {"a": (PROB_OPEN, True), "horizon": (_int(0), True), "replicas": (_int(2), True),
               "initial_sizes": (_int_list(1), True), "checkpoints": (_int_list(0), False)},
    "compare": {"c": (PROB, True), "a": (PROB_OPEN, True), "horizon": (_int(0), True)},
    "dist-eq": {"a": (PROB, True), "horizon": (_int(0), True), "replicas": (_int(2), True),
                "permutations": (_int(1), False)},
    "poisson-gof": {"law": (_choice("uniform", "powerlaw"), False), "w": (POS, True), "z": (POS, True),
                    "lo": (REAL, True), "hi": (REAL, True), "scales": (_int_list(1), True),
                    "replicas": (_int(100), True), "alpha": (PROB_OPEN, False),
                    "location": (POS, False), "beta": (_real(1.0), False)},
    "accumulation": {"a": (PROB, False), "b": (PROB_OPEN, True), "K": (_int(0), True),
                     "replicas": (_int(2), True)},
    "fms": {"mode": (_choice("constant", "random_env"), True), "c": (PROB, False),
            "a": (PROB, False), "horizon": (_int(0), True), "level": (_int(1), False),
            "replicas": (_int(2), True)},
}


def validate_config(raw) -> dict:
    """Check a parsed config against its schema and return a normalised copy."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if "experiment" not in raw:
        raise ConfigError("experiment: missing required key")
    name = raw["experiment"]
    if name not in SCHEMAS:
        raise ConfigError(f"experiment: unknown experiment {name!r}; expected one of {', '.join(SCHEMAS)}")
    schema = {**COMMON, **SCHEMAS[name]}
    for key in raw:
        if key not in schema:
            raise ConfigError(f"{key}: unknown key for experiment {name!r}")
    cfg = {}
    for key, (check, required) in schema.items():
        if key in raw:
            cfg[key] = check(key, raw[key])
        elif required:
            raise ConfigError(f"{key}: missing required key")

    if name == "poisson-gof":
        if cfg["w"] > cfg["z"]:
            raise ConfigError("z: must be >= w")
        if cfg["lo"] > cfg["hi"]:
            raise ConfigError("hi: must be >= lo")
        if cfg.get("law", "uniform") == "powerlaw":
            for key in ("alpha", "location"):
                if key not in cfg:
                    raise ConfigError(f"{key}: required when law is 'powerlaw'")
        else:
            if cfg["lo"] < 0:
                raise ConfigError("lo: must be >= 0 for the uniform law")
            for key in ("alpha", "location", "beta"):
                if key in cfg:
                    raise ConfigError(f"{key}: only valid when law is 'powerlaw'")
    if name == "fms":
        needed = "c" if cfg["mode"] == "constant" else "a"
        if needed not in cfg:
            raise ConfigError(f"{needed}: required for mode {cfg['mode']!r}")
    if name == "growth" and "checkpoints" in cfg:
        if max(cfg["checkpoints"]) > cfg["horizon"]:
            raise ConfigError("checkpoints: must not exceed horizon")
    return cfg


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return validate_config(raw)


def write_outputs(files: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name in sorted(files):
            p = out_dir / name
            p.write_text(files[name])
            written.append(p)
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise


def run(config_path, out=None, threads: int = 1) -> int:
    """Execute one experiment config; returns the process exit status."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(out or cfg.get("output_dir") or "results")
    try:
        files = run_experiment(cfg, workers=max(1, threads))
        write_outputs(files, out_dir)
    except ValueError as exc:
        # parameter combinations only detectable once objects are built
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.exception("experiment failed")
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    log.info("wrote %d files to %s", len(files), out_dir)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="hetpop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--threads", type=int, default=1, help="worker processes")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    return run(args.config, args.out, args.threads)


if __name__ == "__main__":
    sys.exit(main())

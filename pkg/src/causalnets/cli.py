"""``verify``: run verification suites and write report.json plus plot data.

    verify all --seed 7
    verify geometry --window 8x8 --h 0.1
    verify --suite lattice --lattice-n 256 --out results
    verify explain mc.pauli_jordan

Exit codes: 0 when every check passes, 1 when a check fails (the report is
still written), 2 on a configuration error (nothing is written).
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .explain import EXPLAIN
from .plotting import render
from .suites import (
    KEYS,
    RUNNERS,
    SCHEMA_VERSION,
    SUITES,
    ConfigError,
    RunConfig,
    coerce,
    read_config_file,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verify", description="Run causal-structure verification suites.")
    p.add_argument("target", nargs="*", help="suite name (%s, all) or 'explain <check-id>'" % ", ".join(SUITES))
    p.add_argument("--suite")
    p.add_argument("--seed")
    p.add_argument("--out")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--window", help="t_max x x_max, e.g. 8x8")
    p.add_argument("--h")
    p.add_argument("--lattice-n", dest="lattice_n")
    p.add_argument("--mass")
    p.add_argument("--spacing")
    p.add_argument("--qubits")
    p.add_argument("--depth")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    if len(args.target) > 1:
        raise ConfigError(f"unexpected arguments {args.target[1:]}")
    if args.target:
        values["suite"] = args.target[0]
    for key in KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = coerce(key, flag)
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e)) from None


def assemble_report(cfg: RunConfig, results) -> dict:
    checks = [c for r in results for c in r.checks]
    failed = [c["id"] for c in checks if c["kind"] == "check" and not c["passed"]]
    extra = {}
    for r in results:
        if "proofs" in r.plot_data:
            extra["proofs"] = r.plot_data["proofs"]
    return {
        "schema_version": SCHEMA_VERSION,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.to_json(),
        "suites": [r.name for r in results],
        "checks": checks,
        **extra,
        "summary": {
            "checks": sum(c["kind"] == "check" for c in checks),
            "controls": sum(c["kind"] == "control" for c in checks),
            "failed": failed,
            "passed": not failed,
        },
    }


def run_suite(cfg: RunConfig) -> tuple[int, dict]:
    """Run the configured suites, write outputs, return (exit code, report)."""
    names = cfg.suites
    with ThreadPoolExecutor(max_workers=len(names)) as pool:
        futures = [pool.submit(RUNNERS[n], cfg) for n in names]
        results = [f.result() for f in futures]
    os.makedirs(cfg.out, exist_ok=True)
    report = assemble_report(cfg, results)
    for r in results:
        for fname, text in r.tables.items():
            with open(os.path.join(cfg.out, fname), "w", encoding="utf-8") as fh:
                fh.write(text)
        render(r, cfg.out)
    with open(os.path.join(cfg.out, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return (EXIT_OK if report["summary"]["passed"] else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.target and args.target[0] == "explain":
        if len(args.target) != 2:
            print("usage: verify explain <check-id>", file=sys.stderr)
            return EXIT_CONFIG
        text = EXPLAIN.get(args.target[1])
        if text is None:
            print(f"unknown check id {args.target[1]!r}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"{args.target[1]}: {text}")
        return EXIT_OK
    try:
        cfg = resolve_config(args)
        code, report = run_suite(cfg)
    except ConfigError as e:
        print(f"verify: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    s = report["summary"]
    for c in report["checks"]:
        mark = "ok  " if c["passed"] else "FAIL"
        print(f"{mark} {c['kind']:<7} {c['id']}")
    print(f"{s['checks']} checks, {s['controls']} controls, {len(s['failed'])} failed -> {cfg.out}")
    return code


if __name__ == "__main__":
    sys.exit(main())

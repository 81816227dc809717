"""Command-line harness: ``bvworldline check <ids...>`` and ``bvworldline list``.

Exit codes: 0 when every check passes (or is infeasible at the solver's
bounds, which is allowed), 1 when any check fails, 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from .checks import REGISTRY, CheckConfig, CheckReport, ConfigError, expand_ids, list_checks, resolve, run_check

log = logging.getLogger("bvworldline")

OK_STATUSES = {"pass", "infeasible_at_bounds", "skipped"}

# key=value config file keys and the CheckConfig fields they set
CONFIG_KEYS = {
    "ghost_cutoff": ("K", int),
    "K": ("K", int),
    "tower": ("N", int),
    "N": ("N", int),
    "jets": ("J", int),
    "J": ("J", int),
    "simplex_depth": ("kmax", int),
    "kmax": ("kmax", int),
    "samples": ("samples", int),
    "seed": ("seed", int),
    "charts": ("charts", int),
    "timing": ("timing", lambda v: v.lower() in ("1", "true", "yes", "on")),
}


def read_config(path: str) -> dict:
    """Parse a key=value file; ``bounds.<field>`` keys set solver DegreeBounds."""
    out: dict = {}
    bounds: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            if key.startswith("bounds."):
                bounds[key[7:]] = int(value)
            elif key in CONFIG_KEYS:
                name, conv = CONFIG_KEYS[key]
                out[name] = conv(value)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from e
    if bounds:
        out["bounds"] = bounds
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bvworldline", description="Exact verification suites for the BV worldline models.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("list", help="list the registered checks")
    ls.add_argument("--json", action="store_true", help="one JSON object per check")

    ck = sub.add_parser("check", help="run checks by id, group name (e.g. tw) or 'all'")
    ck.add_argument("ids", nargs="+")
    ck.add_argument("--ghost-cutoff", "-K", type=int, dest="K", help="filtration cutoff K")
    ck.add_argument("--tower", "-N", type=int, dest="N", help="spinor tower depth N")
    ck.add_argument("--jets", "-J", type=int, dest="J", help="jet order J")
    ck.add_argument("--simplex-depth", type=int, dest="kmax", help="largest simplex dimension for chart tuples")
    ck.add_argument("--charts", type=int, help="number of charts (2..10)")
    ck.add_argument("--samples", type=int, help="random samples for property checks")
    ck.add_argument("--seed", type=int, help="RNG seed")
    ck.add_argument("--jobs", "-j", type=int, default=1, help="run checks in this many processes")
    ck.add_argument("--report", choices=("json", "text"), default="text")
    ck.add_argument("--config", help="key=value file; its values override the flags")
    ck.add_argument("--bound", action="append", default=[], metavar="FIELD=INT",
                    help="solver DegreeBounds override, repeatable")
    ck.add_argument("--no-timing", action="store_true", help="report duration_ms as 0 (byte-identical reruns)")
    ck.add_argument("--plot", metavar="PATH", help="write a PNG summary of the run")
    return ap


def config_from_args(args) -> CheckConfig:
    kw: dict = {}
    for name in ("K", "N", "J", "kmax", "samples", "seed", "charts"):
        v = getattr(args, name)
        if v is not None:
            kw[name] = v
    bounds = {}
    for item in args.bound:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--bound expects FIELD=INT, got {item!r}")
        try:
            bounds[key.strip()] = int(value)
        except ValueError as e:
            raise ConfigError(f"--bound {item!r}: not an integer") from e
    if bounds:
        kw["bounds"] = bounds
    if args.no_timing:
        kw["timing"] = False
    if args.config:
        extra = read_config(args.config)
        if "bounds" in extra:
            kw["bounds"] = {**kw.get("bounds", {}), **extra.pop("bounds")}
        kw.update(extra)
    return CheckConfig(**kw)


def _run_one(item):
    cid, cfg = item
    return run_check(cid, cfg)


def run(ids: list[str], cfg: CheckConfig, jobs: int = 1, emit=None) -> tuple[int, list[CheckReport]]:
    """Run checks in registry order; ``emit`` receives each report as it is ready."""
    ids = expand_ids(ids)
    for cid in ids:  # reject bad configurations before anything runs
        resolve(REGISTRY[cid], cfg)
    reports: list[CheckReport] = []
    if jobs <= 1 or len(ids) == 1:
        results = map(_run_one, ((cid, cfg) for cid in ids))
        for r in results:
            reports.append(r)
            if emit:
                emit(r)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map keeps submission order, so the stream is the same for any job count
            for r in pool.map(_run_one, [(cid, cfg) for cid in ids]):
                reports.append(r)
                if emit:
                    emit(r)
    code = 0 if all(r.status in OK_STATUSES for r in reports) else 1
    return code, reports


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")

    if args.command == "list":
        for spec, line in zip(REGISTRY.values(), list_checks()):
            if args.json:
                print(json.dumps({"check_id": spec.check_id, "description": spec.description}, ensure_ascii=False))
            else:
                print(line)
        return 0

    try:
        cfg = config_from_args(args)
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")

        def emit(r: CheckReport) -> None:
            print(r.to_json() if args.report == "json" else r.to_text(), flush=True)

        code, reports = run(args.ids, cfg, args.jobs, emit)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.report == "text":
        counts: dict[str, int] = {}
        for r in reports:
            counts[r.status] = counts.get(r.status, 0) + 1
        print("summary: " + ", ".join(f"{v} {k}" for k, v in sorted(counts.items())))
    if args.plot:
        from .plotting import plot_reports

        plot_reports(reports, args.plot)
    return code


if __name__ == "__main__":
    sys.exit(main())

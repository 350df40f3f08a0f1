"""Command-line front end.

Exit status: 0 when the null is not rejected (or the command succeeded),
2 when it is rejected, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .dependence import AncillaryKind, dcov_v
from .errors import AncileError
from .gof import GofKind, gof_test
from .simulation import alternatives
from .stat_core import require_spread
from .simulation.calibration import DEFAULT_CALIB, MIN_CALIB, TEST_TAGS, calibrate, normalize_tag
from .simulation.engine import THREADS_ENV, worker_count
from .simulation.lab import LAB_STATISTICS, independence_lab
from .simulation.power import PowerStudyConfig, power_study
from .simulation.tables import CriticalValueTable
from .symmetry import DEFAULT_SEARCH, ORIENTATIONS, combined_test, with_bracket

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 1, 2

BUNDLED_CONFIGS = ("table1", "table2")


class DataFileError(AncileError):
    pass


def _parse_number(tok: str, path, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise DataFileError(f"{path}:{lineno}: cannot parse {tok.strip()!r} as a number") from None
    if not np.isfinite(v):
        raise DataFileError(f"{path}:{lineno}: value {tok.strip()!r} is not finite")
    return v


def read_points(path) -> np.ndarray:
    """Rows of comma-separated reals; a non-numeric first line is a header."""
    rows = []
    width = None
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if not rows and lineno == _first_content_line(text):
            try:
                [float(c) for c in cells]
            except ValueError:
                continue
        vals = [_parse_number(c, path, lineno) for c in cells]
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DataFileError(f"{path}:{lineno}: expected {width} column(s), got {len(vals)}")
        rows.append(vals)
    if not rows:
        raise DataFileError(f"{path}: no data")
    return np.array(rows, dtype=np.float64)


def _first_content_line(text: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            return i
    return 0


def read_sample(path) -> np.ndarray:
    pts = read_points(path)
    if pts.shape[1] != 1:
        raise DataFileError(f"{path}: expected a single column, got {pts.shape[1]}")
    return pts[:, 0]


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _result_payload(res) -> dict:
    d = res.to_dict()
    d["decision"] = "reject" if res.reject else "accept"
    return d


def _result_lines(res) -> list[str]:
    p = "n/a" if res.p_value is None else f"{res.p_value:.6g}"
    out = [
        f"test:        {res.kind} ({res.tail} tail), n={res.n}",
        f"statistic:   {res.statistic:.10g}",
        f"p-value:     {p}",
        f"alpha:       {res.alpha:g}",
        f"calibration: {res.calibration_id}",
        f"decision:    {'reject H0' if res.reject else 'do not reject H0'}",
    ]
    for k, v in res.details.items():
        label = f"{k}:".ljust(13)
        out.append(f"{label}{v:.10g}" if isinstance(v, float) else f"{label}{v}")
    return out


def _table_for(args, tag: str, n: int):
    if args.table:
        return CriticalValueTable.load(args.table)
    print(f"calibrating {tag} for n={n} with {args.n_calib} null samples, seed={args.seed}",
          file=sys.stderr)
    search = _search_from(args) if tag == "Tc" else DEFAULT_SEARCH
    return calibrate(tag, n, args.n_calib, args.seed, threads=args.threads, cfg=search)


def _search_from(args):
    cfg = DEFAULT_SEARCH
    if getattr(args, "bracket", None):
        cfg = with_bracket(cfg, *args.bracket)
    if getattr(args, "orientation", None):
        from dataclasses import replace
        cfg = replace(cfg, orientation=args.orientation)
    return cfg


def cmd_test(args) -> int:
    x = read_sample(args.data)
    require_spread(x)
    tag = normalize_tag(args.kind)
    if tag in ("Tt", "Ts"):
        raise AncileError("use the 'symmetry' command (with --bracket 0 0 for the t test)")
    if tag == "Tc":
        calib = "asymptotic" if args.asymptotic else _table_for(args, tag, x.size)
        res = combined_test(x, args.alpha, _search_from(args), calib)
    else:
        if args.asymptotic:
            raise AncileError(f"{tag} has no asymptotic calibration; give --table or let it calibrate")
        res = gof_test(x, GofKind.parse(tag), _table_for(args, tag, x.size), args.alpha)
    payload = _result_payload(res)
    payload["seed"] = args.seed
    lines = _result_lines(res) + [f"seed:        {args.seed}"]
    _emit(args, payload, lines)
    return EXIT_REJECT if res.reject else EXIT_OK


def cmd_symmetry(args) -> int:
    x = read_sample(args.data)
    require_spread(x)
    cfg = _search_from(args)
    if args.calib == "mc":
        print(f"calibrating Tc for n={x.size} with {args.n_calib} null samples, seed={args.seed}",
              file=sys.stderr)
        calib = calibrate("Tc", x.size, args.n_calib, args.seed, threads=args.threads, cfg=cfg)
    elif args.table:
        calib = CriticalValueTable.load(args.table)
    else:
        calib = "asymptotic"
    res = combined_test(x, args.alpha, cfg, calib)
    payload = _result_payload(res)
    payload["seed"] = args.seed
    _emit(args, payload, _result_lines(res) + [f"seed:        {args.seed}"])
    return EXIT_REJECT if res.reject else EXIT_OK


def cmd_calibrate(args) -> int:
    if args.n_calib < MIN_CALIB:
        raise AncileError(f"--n-calib must be at least {MIN_CALIB} for stable tail quantiles, "
                          f"got {args.n_calib}")
    out = Path(args.out)
    if out.exists() and not args.force:
        raise AncileError(f"{out} exists; use --force to overwrite")
    tag = normalize_tag(args.kind)
    table = calibrate(tag, args.n, args.n_calib, args.seed, threads=args.threads,
                      cfg=_search_from(args))
    table.save(out, force=True)
    crit = table.critical_value(args.alpha)
    payload = {"path": str(out), "table_id": table.table_id, "kind": table.kind, "n": table.n,
               "n_calib": table.n_calib, "seed": table.seed, "tail": table.tail,
               "alpha": args.alpha, "critical_value": crit}
    _emit(args, payload, [f"wrote {out} ({table.table_id})",
                          f"{table.tail}-tail critical value at alpha={args.alpha:g}: {crit:.6g}",
                          f"seed: {table.seed}"])
    return EXIT_OK


def load_config(name_or_path) -> PowerStudyConfig:
    p = Path(name_or_path)
    if not p.exists():
        stem = p.stem if p.suffix == ".json" else str(name_or_path)
        if stem in BUNDLED_CONFIGS:
            text = resources.files("ancile").joinpath("data", f"{stem}.json").read_text()
            return PowerStudyConfig.from_dict(json.loads(text))
        raise AncileError(f"config {name_or_path} not found (bundled: {', '.join(BUNDLED_CONFIGS)})")
    return PowerStudyConfig.load(p)


def cmd_power(args) -> int:
    from dataclasses import replace

    cfg = load_config(args.config)
    over = {}
    if args.reps is not None:
        over["n_reps"] = args.reps
    if args.n_calib is not None:
        over["n_calib"] = args.n_calib
    if args.seed is not None:
        over["seed"] = args.seed
    if over:
        cfg = replace(cfg, **over)
    print(f"power study: {len(cfg.alternatives)} alternative(s), tests {','.join(cfg.tests)}, "
          f"reps={cfg.n_reps}, seed={cfg.seed}", file=sys.stderr)
    table = power_study(cfg, threads=args.threads,
                        progress=lambda c: print(f"  done: {c.label}", file=sys.stderr))
    text = table.to_csv() if args.format == "csv" else table.to_json()
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dcov(args) -> int:
    lab = args.stat or args.ancillary or args.spec
    if lab:
        if not (args.stat and args.ancillary and args.spec):
            raise AncileError("lab mode needs --stat, --ancillary and --spec")
        spec = alternatives.parse(args.spec)
        est = independence_lab(args.stat, args.ancillary, spec, args.n, args.reps, args.seed,
                               threads=args.threads)
        payload = {"mode": "lab", "stat": args.stat, "ancillary": args.ancillary,
                   "spec": spec.to_json(), "n": args.n, "reps": args.reps, "seed": args.seed,
                   **est.to_dict()}
    else:
        if not (args.x and args.y):
            raise AncileError("give --x and --y files, or lab flags --stat/--ancillary/--spec")
        x, y = read_points(args.x), read_points(args.y)
        est = dcov_v(x, y)
        payload = {"mode": "files", "x": str(args.x), "y": str(args.y), **est.to_dict()}
    lines = [f"dcov2:   {est.dcov2:.10g}", f"dvar_x:  {est.dvar_x:.10g}",
             f"dvar_y:  {est.dvar_y:.10g}", f"dcor:    {est.dcor:.10g}", f"M:       {est.m}"]
    if est.degenerate:
        lines.append("note:    a distance variance is zero; dcor set to 0")
    if lab:
        lines.append(f"seed:    {args.seed}")
    _emit(args, payload, lines)
    return EXIT_OK


def _common(seed_default, seed_help) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=seed_default, help=seed_help)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1); speed only")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(0, "random seed (default 0)")

    p = argparse.ArgumentParser(prog="ancile", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ancile {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", parents=[common], help="normality test on a data file")
    t.add_argument("data")
    t.add_argument("--kind", required=True, help=f"one of {', '.join(TEST_TAGS)}")
    t.add_argument("--alpha", type=float, default=0.05)
    g = t.add_mutually_exclusive_group()
    g.add_argument("--table", help="critical-value table from 'ancile calibrate'")
    g.add_argument("--asymptotic", action="store_true", help="normal threshold (Tc only)")
    t.add_argument("--n-calib", type=int, default=20_000,
                   help="null samples when calibrating on the fly (default 20000)")
    t.set_defaults(func=cmd_test)

    s = sub.add_parser("symmetry", parents=[common], help="combined center-of-symmetry test")
    s.add_argument("data")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"),
                   help="search interval for the weight a (default -10 10)")
    s.add_argument("--orientation", choices=ORIENTATIONS,
                   help="weight objective orientation (default signal)")
    s.add_argument("--calib", choices=("asymptotic", "mc"), default="asymptotic")
    s.add_argument("--table", help="Tc critical-value table")
    s.add_argument("--n-calib", type=int, default=20_000)
    s.set_defaults(func=cmd_symmetry)

    c = sub.add_parser("calibrate", parents=[common], help="build a critical-value table")
    c.add_argument("--kind", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--n-calib", type=int, default=DEFAULT_CALIB)
    c.add_argument("--out", required=True)
    c.add_argument("--force", action="store_true")
    c.add_argument("--alpha", type=float, default=0.05, help="level for the reported quantile")
    c.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"))
    c.add_argument("--orientation", choices=ORIENTATIONS)
    c.set_defaults(func=cmd_calibrate)

    w = sub.add_parser("power", parents=[_common(None, "override the config seed")],
                       help="run a power study")
    w.add_argument("config", help=f"JSON config path or bundled name ({', '.join(BUNDLED_CONFIGS)})")
    w.add_argument("--out")
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--reps", type=int)
    w.add_argument("--n-calib", type=int)
    w.set_defaults(func=cmd_power)

    d = sub.add_parser("dcov", parents=[common], help="distance covariance / independence lab")
    d.add_argument("--x")
    d.add_argument("--y")
    d.add_argument("--stat", help=f"lab statistic ({', '.join(LAB_STATISTICS)})")
    d.add_argument("--ancillary", choices=[k.value for k in AncillaryKind])
    d.add_argument("--spec", help="distribution, e.g. exp:1 or diff(exp:1,exp:1)")
    d.add_argument("--n", type=int, default=30)
    d.add_argument("--reps", type=int, default=1000)
    d.set_defaults(func=cmd_dcov)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = worker_count()
    try:
        return args.func(args)
    except (AncileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

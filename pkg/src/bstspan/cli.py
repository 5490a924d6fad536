"""Command-line front end.

Every command prints (or writes with ``--out``) either CSV with a header row
or JSON validated by ``schemas/output.schema.json``.  Rationals are always
written as separate numerator/denominator columns.

Exit codes: 0 success, 2 bad arguments, 3 resource cap exceeded, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .closedform import F_numeric, GfPoint, phi, series_F, series_phi
from .exactdist import (
    TableTooLarge,
    WeightedDistTable,
    build_tables,
    pmf,
    vslice_table,
)
from .moments import moment_report, quasi_power_model
from .mqs import run_mqs_batch
from .stats import gof_report, quasi_power_ratio
from .treesim import run_batch

DEFAULT_SEED = 20040401
CACHE_ENV = "BSTSPAN_CACHE_DIR"

EXIT_OK, EXIT_ARGS, EXIT_CAP, EXIT_CONSISTENCY = 0, 2, 3, 4


class ConsistencyError(RuntimeError):
    pass


# ---------------------------------------------------------------- table cache

def _cache_dir(args) -> Path | None:
    d = args.cache_dir or os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def _cache_path(root: Path, kind: str, n_max: int, p_max: int) -> Path:
    return root / f"table_{kind}_{n_max}_{p_max}.json"


def _load_cached(root: Path, kind: str, n: int, p: int) -> WeightedDistTable | None:
    if not root.is_dir():
        return None
    for path in sorted(root.glob(f"table_{kind}_*_*.json")):
        try:
            _, _, n_max, p_max = path.stem.split("_")
            if int(n_max) < n or int(p_max) < p:
                continue
            doc = json.loads(path.read_text())
            body = json.dumps(doc["table"], separators=(",", ":"), sort_keys=True)
            if hashlib.sha256(body.encode()).hexdigest() != doc["sha256"]:
                continue
            return WeightedDistTable.from_dict(doc["table"])
        except (ValueError, KeyError, OSError):
            continue
    return None


def _store(root: Path, table: WeightedDistTable) -> None:
    root.mkdir(parents=True, exist_ok=True)
    d = table.to_dict()
    body = json.dumps(d, separators=(",", ":"), sort_keys=True)
    doc = {"sha256": hashlib.sha256(body.encode()).hexdigest(), "table": d}
    path = _cache_path(root, table.kind, table.n_max, table.p_max)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, separators=(",", ":"), sort_keys=True))
    tmp.replace(path)


def get_table(kind: str, n: int, p: int, cache: Path | None) -> WeightedDistTable:
    kind = kind.upper()
    if cache is not None:
        hit = _load_cached(cache, kind, n, p)
        if hit is not None:
            return hit
    xt, yt = build_tables(n, p)
    if cache is not None:
        _store(cache, xt)
        _store(cache, yt)
    return xt if kind == "X" else yt


# ---------------------------------------------------------------- emitters

def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------- commands

def cmd_dist(args) -> str:
    _need(args, "n", "p")
    table = get_table(args.kind, args.n, args.p, _cache_dir(args))
    rows = [(m, pr.numerator, pr.denominator, repr(float(pr))) for m, pr in pmf(table, args.n, args.p)]
    if args.format == "csv":
        return _csv(("m", "num", "den", "prob"), rows)
    return _json({
        "command": "dist", "kind": args.kind.upper(), "n": args.n, "p": args.p,
        "rows": [{"m": m, "num": str(a), "den": str(b), "prob": float(c)} for m, a, b, c in rows],
    })


def cmd_moments(args) -> str:
    _need(args, "n", "p")
    n, p = args.n, args.p
    reports = [("lemma", moment_report("Y", n, p))]
    xt = get_table("X", n, p, _cache_dir(args))
    yt = get_table("Y", n, p, _cache_dir(args))
    reports.append(("dp", moment_report("X", n, p, table=xt)))
    from .exactdist import moments_from_table

    dp_y = moments_from_table(yt, n, p)
    reports.append(("dp", dp_y))
    if args.verify:
        lem = reports[0][1]
        if (lem.mean_exact, lem.variance_exact) != (dp_y.mean_exact, dp_y.variance_exact):
            raise ConsistencyError(
                f"closed-form moments disagree with the DP at n={n}, p={p} (possible typo)"
            )
    if args.format == "csv":
        from .moments import MomentReport

        return _csv(("source",) + MomentReport.CSV_HEADER, [(src,) + r.csv_row() for src, r in reports])
    return _json({
        "command": "moments", "n": n, "p": p, "verified": bool(args.verify),
        "reports": [dict(r.to_dict(), source=src) for src, r in reports],
    })


def cmd_simulate(args) -> str:
    _need(args, "n", "p")
    s = run_batch(args.n, args.p, args.trials, args.seed, threads=args.threads, method=args.method)
    if args.format == "csv":
        return _csv(("kind", "m", "count"), s.csv_rows())
    return _json(dict(s.to_dict(), command="simulate"))


def cmd_mqs_run(args) -> str:
    if args.n is None:
        raise ValueError("--n is required")
    ranks = [int(r) for r in args.ranks.split(",")] if args.ranks else None
    p = None if ranks else (args.p if args.p is not None else 1)
    hist = run_mqs_batch(args.n, args.trials, args.seed, p=p, ranks=ranks, threads=args.threads)
    if args.format == "csv":
        return _csv(("passes", "count"), sorted(hist.items()))
    return _json({
        "command": "mqs-run", "n": args.n, "p": p, "ranks": ranks, "trials": args.trials,
        "seed": args.seed, "hist_passes": {str(k): v for k, v in sorted(hist.items())},
    })


def cmd_gof(args) -> str:
    _need(args, "n", "p")
    kind = args.kind.upper()
    exact = None
    if args.source == "exact":
        table = get_table(kind, args.n, args.p, _cache_dir(args))
        hist = {m: float(pr) for m, pr in pmf(table, args.n, args.p)}
    else:
        s = run_batch(args.n, args.p, args.trials, args.seed, threads=args.threads)
        hist = s.hist_x if kind == "X" else s.hist_y
        if args.n <= args.exact_cap:
            table = get_table(kind, args.n, args.p, _cache_dir(args))
            exact = {m: float(pr) for m, pr in pmf(table, args.n, args.p)}
    r = gof_report(hist, args.n, args.p, kind, exact_pmf=exact, mode=args.mode)
    if args.format == "csv":
        return _csv(r.CSV_HEADER, [r.csv_row()])
    return _json(dict(r.to_dict(), command="gof", source=args.source))


def cmd_quasipower(args) -> str:
    if args.p is None:
        raise ValueError("--p is required")
    ns = [int(x) for x in args.n_list.split(",")]
    kind = args.kind.upper()
    table = get_table(kind, max(ns), args.p, _cache_dir(args))
    model = quasi_power_model(kind, args.p)
    rows = []
    for n in ns:
        r = quasi_power_ratio(table, model, n, args.p, args.s)
        rows.append((n, repr(r), repr(abs(r - 1))))
    if args.format == "csv":
        return _csv(("n", "ratio", "deviation"), rows)
    return _json({
        "command": "quasipower", "kind": kind, "p": args.p, "s": args.s,
        "rows": [{"n": n, "ratio": float(r), "deviation": float(d)} for n, r, d in rows],
    })


def cmd_gfcheck(args) -> str:
    pt = GfPoint(args.z, args.u, args.v)
    N = args.trunc
    ph = phi(pt)
    sp = series_phi(pt, N, vslice_table("X", N, pt.v))
    fn = F_numeric(pt)
    sf = series_F(pt, N, vslice_table("Y", N, pt.v))

    def rel(a, b):
        return abs(a - b) / abs(a) if a != 0 else abs(a - b)

    vals = {
        "phi": ph, "series_phi": sp, "F": fn, "series_F": sf,
    }
    res = {"residual_phi": rel(ph, sp), "residual_F": rel(fn, sf)}
    if args.format == "csv":
        rows = [(k, repr(v.real), repr(v.imag)) for k, v in vals.items()]
        rows += [(k, repr(v), "0.0") for k, v in res.items()]
        return _csv(("quantity", "real", "imag"), rows)
    return _json({
        "command": "gf-check", "z": args.z, "u": args.u, "v": args.v, "trunc": N,
        "values": {k: {"real": v.real, "imag": v.imag} for k, v in vals.items()},
        **res,
    })


COMMANDS = {
    "dist": cmd_dist,
    "moments": cmd_moments,
    "simulate": cmd_simulate,
    "mqs-run": cmd_mqs_run,
    "gof": cmd_gof,
    "quasipower": cmd_quasipower,
    "gf-check": cmd_gfcheck,
}


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", type=str.upper, choices=["X", "Y"], default="Y")
    common.add_argument("--n", type=int)
    common.add_argument("--p", type=int)
    common.add_argument("--trials", type=int, default=10000)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--s", type=float, default=math.log(1.1))
    common.add_argument("--z", type=float, default=0.3)
    common.add_argument("--u", type=float, default=0.5)
    common.add_argument("--v", type=float, default=1.2)
    common.add_argument("--trunc", type=int, default=200)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", type=Path)
    common.add_argument("--cache-dir", type=Path)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--verify", action="store_true")

    parser = argparse.ArgumentParser(prog="bstspan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dist", parents=[common], help="exact pmf from the DP tables")
    sub.add_parser("moments", parents=[common], help="exact and asymptotic moments")
    sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo histograms of X and Y")
    sim.add_argument("--method", choices=["lazy", "tree"], default="lazy")
    mq = sub.add_parser("mqs-run", parents=[common], help="Multiple Quickselect pass counts")
    mq.add_argument("--ranks", type=str, help="comma separated fixed rank set")
    gof = sub.add_parser("gof", parents=[common], help="normal-law goodness of fit")
    gof.add_argument("--source", choices=["sim", "exact"], default="sim")
    gof.add_argument("--mode", choices=["leading", "exact"], default="leading")
    gof.add_argument("--exact-cap", type=int, default=60,
                     help="largest n for which a simulated run is also compared to the exact pmf")
    qp = sub.add_parser("quasipower", parents=[common], help="exact pgf over the limit form")
    qp.add_argument("--n-list", default="30,60,120")
    sub.add_parser("gf-check", parents=[common], help="closed forms against truncated series")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "trials", 1) < 1 or args.threads < 1:
            raise ValueError("--trials and --threads must be positive")
        text = COMMANDS[args.command](args)
    except TableTooLarge as exc:
        print(f"bstspan: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsistencyError as exc:
        print(f"bstspan: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (ValueError, IndexError) as exc:
        print(f"bstspan: {exc}", file=sys.stderr)
        return EXIT_ARGS
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

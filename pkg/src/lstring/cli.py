"""Command-line front end: ``lstring <command> [flags] WORD [WORD ...]``.

Loop words look like ``"@(0,0) +1 +2 -1 -2"``; separate the loops of a
sequence with ``;`` inside one argument or pass them as separate arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .coefficients import load_cache, save_cache
from .lattice import LoopSequence, parse_loop, parse_path
from .ops import operation_catalog
from .series import f_value, master_residual_limit, reduced_f0_residual
from .trajectories import (FIGURE7_WEIGHT, ZERO, BudgetExceeded, enumerate_vanishing, figure7_trajectory,
                           trajectory_weight)

log = logging.getLogger("lstring")


class UsageError(ValueError):
    pass


def parse_loop_word(text: str, dim: int | None = None) -> LoopSequence:
    """Parse ``;``-separated loop words into a canonical sequence."""
    loops = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        l = parse_loop(part)
        if len(l.codes) != len(parse_path(part)):
            log.warning("backtracks erased in %r", part)
        if not l.codes:
            raise UsageError("empty sequence: a component has a null core")
        if dim is not None and l.dim != dim:
            raise UsageError(f"dimension mismatch: {part!r} is {l.dim}-dimensional, expected {dim}")
        loops.append(l)
    if not loops:
        raise UsageError("empty sequence")
    dims = {l.dim for l in loops}
    if len(dims) > 1:
        raise UsageError(f"dimension mismatch between components: {sorted(dims)}")
    return LoopSequence(loops)


def _sequence(args) -> LoopSequence:
    if not args.words:
        raise UsageError("no loop words given")
    return parse_loop_word(" ; ".join(args.words), args.dim)


def _decimal(text: str) -> str:
    """Validated real number kept as text so the series code can read it exactly."""
    float(text)
    return text


def _frac(x: Fraction) -> str:
    return str(x)


def _emit(report: dict, args, rows: list | None = None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    print(text)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")
        if rows:
            with open(out.with_suffix(".csv"), "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(rows[0]))
                w.writeheader()
                w.writerows(rows)


# -- commands --------------------------------------------------------------


def cmd_core(args) -> int:
    s = _sequence(args)
    _emit({"command": "core", "loops": s.words(), "length": s.length, "size": s.size,
           "index": s.index, "ell": s.ell, "dim": s.dim}, args)
    return 0


def cmd_catalog(args) -> int:
    cat = operation_catalog(_sequence(args))
    entries = [json.loads(line) for line in cat.to_jsonl().splitlines() if line]
    _emit({"command": "catalog", "source": cat.source.word(),
           "counts": {k.value if hasattr(k, "value") else str(k): v for k, v in cat.counts().items()},
           "entries": entries}, args)
    return 0


def cmd_enumerate(args) -> int:
    s = _sequence(args)
    try:
        Xs = enumerate_vanishing(s, args.a, args.b, args.c, args.d, max_nodes=args.max_nodes)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    signed, absolute = ZERO, ZERO
    for X in Xs:
        w = trajectory_weight(X, validate=False)
        signed, absolute = signed + w, absolute + abs(w)
    _emit({"command": "enumerate", "sequence": s.word(), "counts": [args.a, args.b, args.c, args.d],
           "trajectories": len(Xs), "signed_sum": str(signed), "absolute_sum": str(absolute)}, args)
    return 0


def cmd_coeff(args) -> int:
    s = _sequence(args)
    table = load_cache()
    a, b = table.compute(args.i, args.k, s)
    saved = save_cache(table)
    _emit({"command": "coeff", "i": args.i, "k": args.k, "sequence": s.word(),
           "a": _frac(a), "b": _frac(b), "cache": str(saved) if saved else None}, args)
    return 0


def cmd_series(args) -> int:
    s = _sequence(args)
    table = load_cache()
    v = f_value(args.k, s, args.beta, args.imax, args.dim)
    for i in range(args.imax + 1):
        table.compute(i, args.k, s)
    save_cache(table)
    rep = {"command": "series", "sequence": s.word(), **v.report(),
           "coefficients": [_frac(c) for c in v.coefficients]}
    rows = [{"i": i, "a": _frac(c)} for i, c in enumerate(v.coefficients)]
    _emit(rep, args, rows)
    return 0


def cmd_verify_master(args) -> int:
    if args.figure7:
        X = figure7_trajectory()
        w = trajectory_weight(X)
        ok = w == FIGURE7_WEIGHT and X.vanishing and X.counts == (6, 1, 2, 1)
        _emit({"command": "verify-master", "figure7": True, "weight": str(w), "expected": str(FIGURE7_WEIGHT),
               "counts": list(X.counts), "ok": ok}, args)
        return 0 if ok else 1
    s = _sequence(args)
    r = master_residual_limit(s, args.k, args.beta, args.imax, args.dim)
    ok = r.within_budget and all(c == 0 for c in r.exact_coefficients)
    rep = {"command": "verify-master", "sequence": s.word(), "k": args.k, "beta": args.beta,
           "imax": args.imax, "symmetric": r.report()}
    if args.k == 0:
        red = reduced_f0_residual(s, args.beta, args.imax, args.dim)
        rep["reduced_f0"] = red.report()
        ok = ok and red.within_budget and all(c == 0 for c in red.exact_coefficients)
    rep["ok"] = ok
    _emit(rep, args)
    return 0 if ok else 1


def _run_config(args):
    from .gauge.config import RunConfig, load_config
    cfg = load_config(args.config) if args.config else RunConfig()
    over = {}
    for name in ("group", "N", "beta", "sweeps", "seed", "threads", "burn_in", "replicas", "hits", "epsilon"):
        v = getattr(args, name, None)
        if v is not None:
            over[name] = v
    if args.box:
        over["box"] = tuple(int(t) for t in args.box.split(","))
        over["dimension"] = len(over["box"])
    elif args.dim and args.dim != cfg.dimension:
        over["dimension"] = args.dim
        over["box"] = (cfg.box[0],) * args.dim
        over["origin"] = None
    return cfg.with_(**over)


def cmd_mc_estimate(args) -> int:
    from .gauge.observables import estimate_phi, report
    cfg = _run_config(args)
    s = _sequence(args)
    est = estimate_phi(s, cfg)
    _emit(report(cfg, {"command": "mc-estimate", "sequence": s.word(), "phi": est.to_dict()}), args)
    return 0


def cmd_mc_verify(args) -> int:
    from .gauge.observables import master_residual_mc, report
    cfg = _run_config(args)
    s = _sequence(args)
    chk = master_residual_mc(s, cfg)
    ok = chk.z <= args.zmax
    _emit(report(cfg, {"command": "mc-verify", **chk.to_dict(), "zmax": args.zmax, "ok": ok}), args)
    return 0 if ok else 1


def cmd_compare_so_su(args) -> int:
    from .gauge.observables import correspondence, report
    cfg = _run_config(args)
    s = _sequence(args)
    if len(s) != 1:
        raise UsageError("compare-so-su takes a single loop")
    rows = []
    results = []
    for n in args.ladder or [cfg.N]:
        c = correspondence(s[0], cfg.with_(N=n))
        results.append(c.to_dict())
        rows.append({"N": n, "su_at_2beta": c.su.real, "so_at_beta": c.so.real, "deficit": c.deficit,
                     "stderr": c.stderr, "budget": c.budget()})
    ok = all(r["within_budget"] for r in results)
    _emit(report(cfg, {"command": "compare-so-su", "loop": s.word(), "results": results, "ok": ok}), args, rows)
    return 0 if ok else 1


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("words", nargs="*", help="loop words; ';' separates loops of one sequence")
    common.add_argument("--dim", type=int, default=None, help="expected lattice dimension")
    common.add_argument("--out", default=None, help="write the JSON report (and CSV table) here")
    common.add_argument("--threads", type=int, default=None, help="worker processes for replica chains")
    common.add_argument("-v", "--verbose", action="store_true")

    series = argparse.ArgumentParser(add_help=False)
    series.add_argument("-k", "--k", type=int, default=0, help="genus grade k of f_{2k}")
    series.add_argument("--beta", type=_decimal, default="1e-4")
    series.add_argument("--imax", type=int, default=3)

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--config", default=None, help="INI run configuration")
    mc.add_argument("--group", choices=("SU", "SO"), default=None)
    mc.add_argument("--N", dest="N", type=int, default=None)
    mc.add_argument("--beta", type=float, default=None)
    mc.add_argument("--box", default=None, help="comma-separated vertex extents, e.g. 4,4")
    mc.add_argument("--sweeps", type=int, default=None)
    mc.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    mc.add_argument("--replicas", type=int, default=None)
    mc.add_argument("--hits", type=int, default=None)
    mc.add_argument("--epsilon", type=float, default=None)
    mc.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="lstring", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("core", parents=[common], help="canonical form and statistics of a sequence").set_defaults(fn=cmd_core)
    sub.add_parser("catalog", parents=[common], help="every admissible operation and its result").set_defaults(fn=cmd_catalog)
    e = sub.add_parser("enumerate", parents=[common], help="vanishing trajectories with given counts")
    for name in ("a", "b", "c", "d"):
        e.add_argument(f"--{name}", type=int, default=0)
    e.add_argument("--max-nodes", dest="max_nodes", type=int, default=5_000_000)
    e.set_defaults(fn=cmd_enumerate)
    c = sub.add_parser("coeff", parents=[common], help="exact a_{i,k} and b_{i,k}")
    c.add_argument("--i", type=int, required=True)
    c.add_argument("-k", "--k", type=int, default=0)
    c.set_defaults(fn=cmd_coeff)
    sub.add_parser("series", parents=[common, series], help="truncated f_{2k} with tail bound").set_defaults(fn=cmd_series)
    v = sub.add_parser("verify-master", parents=[common, series], help="loop-equation residuals")
    v.add_argument("--figure7", action="store_true", help="replay the shipped eleven-step trajectory")
    v.set_defaults(fn=cmd_verify_master)
    sub.add_parser("mc-estimate", parents=[common, mc], help="Monte Carlo phi_N(s)").set_defaults(fn=cmd_mc_estimate)
    m = sub.add_parser("mc-verify", parents=[common, mc], help="finite-N master equation by Monte Carlo")
    m.add_argument("--zmax", type=float, default=3.0)
    m.set_defaults(fn=cmd_mc_verify)
    so = sub.add_parser("compare-so-su", parents=[common, mc], help="SU(N) at 2 beta against SO(N) at beta")
    so.add_argument("--ladder", type=int, nargs="+", default=None, help="list of N values")
    so.set_defaults(fn=cmd_compare_so_su)
    return p


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.fn(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

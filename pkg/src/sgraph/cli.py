"""Command-line front end.

    sgraph analyze   --set odd --lambda 1
    sgraph scan      --set set:0,3 --lambda 1:4:300
    sgraph giant     --set ge:1 --lambda 0.3:2:50
    sgraph core      --set ge:0 --lambda 4 --k 2,3
    sgraph simulate  --set even --lambda 2 --n 100000 --reps 5 --seed 1
    sgraph enumerate --set set:0,2 --n 4 --p 0.1,0.3,0.7
    sgraph partition --set even --lambda 2 --n 20,40,80

Every option ``--foo-bar`` can also be given as the environment variable
``SGRAPH_FOO_BAR``; the command line wins.  Exit status: 0 success,
2 usage error, 1 numerical failure (a JSON error record goes to stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .chareq import CharEqError, TiedMaximizersError, scan_phases, solve_char_eq
from .degree_set import DegreeSetError, parse_degree_set
from .genfun import pos_mean, psi, q_value
from .sim.exact import enumerate_exact
from .sim.experiment import mc_experiment
from .sim.partition import PartitionError, multigraph_partition_series
from .sim.sampling import SamplingError, SimplicityRejectionError
from .structure import StructureError, core_prediction, giant_prediction

ENV_PREFIX = "SGRAPH_"

# unit tags used in column headers
FRAC, COUNT, REAL, PERV, FLAG, LABEL = "fraction", "count", "real", "per_vertex", "bool", "label"


class UsageError(Exception):
    pass


# -- argument parsing -------------------------------------------------------


def _parse_lambda(text: str):
    """``A`` or ``A:B:POINTS`` -> list of lambdas and the raw triple."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lam = float(parts[0])
            if not lam > 0:
                raise ValueError
            return [lam]
        if len(parts) == 3:
            a, b, pts = float(parts[0]), float(parts[1]), int(parts[2])
            if not (0 < a < b) or pts < 2:
                raise ValueError
            return (a, b, pts)
    except ValueError:
        pass
    raise UsageError(f"--lambda expects A or A:B:POINTS with 0 < A < B, got {text!r}")


def _int_list(text: str):
    try:
        out = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise UsageError("empty integer list")
    return out


def _float_list(text: str):
    try:
        out = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if not out:
        raise UsageError("empty number list")
    return out


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _add(p, flag, **kw):
    name = flag.lstrip("-")
    env = _env(name)
    if env is not None:
        kw["default"] = env
        kw.pop("required", None)
    p.add_argument(flag, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgraph",
        description="Random graphs with vertex degrees restricted to a set S.",
        epilog="Degree sets: even | odd | ge:s | set:a,b,... | pow2:K, optionally |cut:K.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    _add(common, "--set", dest="set", required=True, help="degree set S")
    _add(common, "--tol", type=float, default=1e-10, help="numerical tolerance")
    _add(common, "--format", choices=("csv", "json"), default="csv")
    _add(common, "--out", default="-", help="output file ('-' for stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="mu*, nu, psi and Q at lambda")
    _add(p, "--lambda", dest="lam", required=True, help="A or A:B:POINTS")

    p = sub.add_parser("scan", parents=[common], help="mu*(lambda) table and transitions")
    _add(p, "--lambda", dest="lam", required=True, help="A:B:POINTS")
    _add(p, "--log", action="store_true", help="log-spaced lambda grid")

    p = sub.add_parser("giant", parents=[common], help="giant-component prediction")
    _add(p, "--lambda", dest="lam", required=True, help="A or A:B:POINTS")

    p = sub.add_parser("core", parents=[common], help="k-core prediction")
    _add(p, "--lambda", dest="lam", required=True, help="A or A:B:POINTS")
    _add(p, "--k", default="2,3", help="comma-separated core orders")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo replicates")
    _add(p, "--lambda", dest="lam", required=True, help="A")
    _add(p, "--n", type=int, required=True)
    _add(p, "--reps", type=int, default=1)
    _add(p, "--k", default="", help="comma-separated core orders")
    _add(p, "--seed", type=int, default=0)
    _add(p, "--multigraph", action="store_true",
         help="keep configuration multigraphs instead of rejecting to simple graphs")
    _add(p, "--max-attempts", dest="max_attempts", type=int, default=200)

    p = sub.add_parser("enumerate", parents=[common], help="exact laws for n <= 7")
    _add(p, "--n", type=int, required=True)
    _add(p, "--p", default="0.5", help="comma-separated edge probabilities")

    p = sub.add_parser("partition", parents=[common], help="multigraph partition series")
    _add(p, "--n", required=True, help="comma-separated vertex counts")
    _add(p, "--lambda", dest="lam", help="edge weight nu = lambda / n")
    _add(p, "--nu", type=float, help="edge weight nu (same for every n)")
    return parser


def _flag(v) -> bool:
    if isinstance(v, str):
        return v.strip().lower() not in ("", "0", "false", "no")
    return bool(v)


# -- output -----------------------------------------------------------------


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def _csv_value(x):
    x = _num(x)
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else str(x)


def emit(config: dict, columns, records, fmt: str, out: str, extra: dict | None = None):
    """Write records; the config and column units travel with the data."""
    names = [c for c, _ in columns]
    if fmt == "json":
        doc = {"config": config, "columns": [{"name": c, "unit": u} for c, u in columns],
               "records": [{k: _num(r.get(k)) for k in names} for r in records]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        buf.write("# units: " + " ".join(f"{c}={u}" for c, u in columns) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for r in records:
            w.writerow([_csv_value(r.get(k)) for k in names])
        text = buf.getvalue()
    if out in ("-", "", None):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


# -- commands ---------------------------------------------------------------


def _lambdas(spec, log=False):
    lam = _parse_lambda(spec)
    if isinstance(lam, list):
        return lam
    a, b, pts = lam
    grid = np.geomspace(a, b, pts) if log else np.linspace(a, b, pts)
    return [float(x) for x in grid]


def cmd_analyze(S, args):
    cols = [("lambda", REAL), ("branch", COUNT), ("unique", FLAG), ("mu_star", REAL),
            ("nu", PERV), ("psi", REAL), ("Q", REAL), ("n_roots", COUNT)]
    rows = []
    for lam in _lambdas(args.lam):
        res = solve_char_eq(S, lam, tol=args.tol)
        for b, mu in enumerate(res.maximizers):
            rows.append({"lambda": lam, "branch": b, "unique": res.unique, "mu_star": mu,
                         "nu": pos_mean(S, mu), "psi": psi(S, mu), "Q": q_value(S, mu),
                         "n_roots": len(res.roots)})
    return cols, rows, None


def cmd_scan(S, args):
    lam = _parse_lambda(args.lam)
    if isinstance(lam, list):
        raise UsageError("scan needs --lambda A:B:POINTS")
    a, b, pts = lam
    res = scan_phases(S, a, b, pts, tol=min(1e-9, max(args.tol, 1e-12)),
                      spacing="log" if _flag(args.log) else "linear")
    cols = [("row_type", LABEL), ("lambda", REAL), ("mu_star_min", REAL), ("mu_star_max", REAL),
            ("unique", FLAG), ("transition", LABEL), ("mu_left", REAL), ("mu_right", REAL),
            ("detail", LABEL)]
    rows = [{"row_type": "grid", "lambda": l, "mu_star_min": lo, "mu_star_max": hi, "unique": u}
            for l, lo, hi, u in zip(res.lambdas, res.mu_star_min, res.mu_star_max, res.unique)]
    rows += [{"row_type": "transition", "lambda": t.lambda_c, "transition": t.type,
              "mu_left": t.mu_left, "mu_right": t.mu_right, "detail": t.detail}
             for t in res.transitions]
    extra = {"warnings": res.warnings} if res.warnings else None
    return cols, rows, extra


def cmd_giant(S, args):
    cols = [("lambda", REAL), ("mu_star", REAL), ("Q", REAL), ("case", LABEL),
            ("xi_star", REAL), ("gamma_star", FRAC), ("zeta_star", PERV)]
    rows = []
    for lam in _lambdas(args.lam):
        g = giant_prediction(S, lam=lam)
        rows.append({"lambda": lam, "mu_star": g.mu, "Q": g.Q, "case": g.case,
                     "xi_star": g.xi_star, "gamma_star": g.gamma_star, "zeta_star": g.zeta_star})
    return cols, rows, None


def cmd_core(S, args):
    cols = [("lambda", REAL), ("k", COUNT), ("mu_star", REAL), ("r_hat", REAL),
            ("vertex_fraction", FRAC), ("edge_fraction", PERV), ("degenerate_boundary", FLAG)]
    rows = []
    ks = _int_list(args.k)
    if min(ks) < 2:
        raise UsageError("--k values must be >= 2")
    for lam in _lambdas(args.lam):
        mu = solve_char_eq(S, lam, tol=args.tol).mu_star
        for k in ks:
            c = core_prediction(S, k=k, mu=mu)
            rows.append({"lambda": lam, "k": k, "mu_star": mu, "r_hat": c.r_hat,
                         "vertex_fraction": c.vertex_fraction, "edge_fraction": c.edge_fraction,
                         "degenerate_boundary": c.degenerate_boundary})
    return cols, rows, None


def cmd_simulate(S, args):
    lams = _lambdas(args.lam)
    if len(lams) != 1:
        raise UsageError("simulate needs a single --lambda")
    if args.n < 1 or args.reps < 1:
        raise UsageError("--n and --reps must be positive")
    ks = _int_list(args.k) if str(args.k).strip() else []
    if ks and min(ks) < 2:
        raise UsageError("--k values must be >= 2")
    exp = mc_experiment(S, lams[0], args.n, args.reps, ks, seed=args.seed,
                        simple=not _flag(args.multigraph), max_attempts=args.max_attempts)
    core_cols = [(f"core{k}_fraction", FRAC) for k in ks]
    cols = [("row_type", LABEL), ("replicate", COUNT), ("attempts", COUNT), ("simple", FLAG),
            ("tv", FRAC), ("edges_per_n", PERV), ("deg0_fraction", FRAC),
            ("largest_fraction", FRAC), ("second_fraction", FRAC)] + core_cols
    p = exp.prediction
    rows = [{"row_type": "prediction", "tv": 0.0, "edges_per_n": p.half_nu,
             "deg0_fraction": p.p0, "largest_fraction": p.gamma, "second_fraction": 0.0,
             **{f"core{k}_fraction": v for k, v in p.core.items()}}]
    for r in exp.replicates:
        rows.append({"row_type": "replicate", "replicate": r.r, "attempts": r.attempts,
                     "simple": r.simple, "tv": r.tv, "edges_per_n": r.edges_per_n,
                     "deg0_fraction": r.deg0_fraction, "largest_fraction": r.largest_fraction,
                     "second_fraction": r.second_fraction,
                     **{f"core{k}_fraction": v for k, v in r.core_fraction.items()}})
    rows.append({"row_type": "max_abs_deviation", **exp.deviations()})
    return cols, rows, {"mu_star": p.mu}


def cmd_enumerate(S, args):
    if not 0 <= args.n <= 7:
        raise UsageError("enumerate supports 0 <= n <= 7")
    ps = _float_list(args.p)
    if any(not 0 < p < 1 for p in ps):
        raise UsageError("--p values must lie in (0, 1)")
    cols = [("p", REAL), ("Z", REAL), ("graphs", COUNT), ("expected_edges", COUNT),
            ("expected_triangles", COUNT)]
    rows, laws = [], []
    for p in ps:
        r = enumerate_exact(S, args.n, p)
        rows.append({"p": p, "Z": r.Z, "graphs": r.graphs, "expected_edges": r.expected_edges,
                     "expected_triangles": r.expected_triangles})
        laws.append({"p": p, "edge_law": [float(x) for x in r.edge_law],
                     "component_law": {str(k): v for k, v in r.component_law.items()},
                     "law_of_degree_counts": {",".join(map(str, k)): v
                                              for k, v in r.law_of_degree_counts.items()}})
    return cols, rows, {"laws": laws}


def cmd_partition(S, args):
    ns = _int_list(args.n)
    if (args.lam is None) == (args.nu is None):
        raise UsageError("partition needs exactly one of --lambda and --nu")
    lam = None
    if args.lam is not None:
        lam = _parse_lambda(args.lam)
        if not isinstance(lam, list):
            raise UsageError("partition needs a single --lambda")
        lam = lam[0]
    ref = None
    if lam is not None and not S.is_trivial:
        res = solve_char_eq(S, lam, tol=args.tol)
        ref = psi(S, res.mu_star) if res.mu_star > 0 else 0.0
    cols = [("n", COUNT), ("nu", REAL), ("log_Z_star", REAL), ("log_Z_star_per_vertex", REAL),
            ("psi_mu_star", REAL), ("abs_error", REAL), ("tail_estimate", FRAC),
            ("N_cutoff", COUNT)]
    rows = []
    for n in ns:
        if n < 1:
            raise UsageError("--n values must be positive")
        nu = lam / n if lam is not None else float(args.nu)
        r = multigraph_partition_series(S, n, nu)
        rows.append({"n": n, "nu": nu, "log_Z_star": r.log_Z_star,
                     "log_Z_star_per_vertex": r.per_vertex, "psi_mu_star": ref,
                     "abs_error": abs(r.per_vertex - ref) if ref is not None else None,
                     "tail_estimate": r.tail_estimate, "N_cutoff": r.N_cutoff})
    return cols, rows, None


COMMANDS = {"analyze": cmd_analyze, "scan": cmd_scan, "giant": cmd_giant, "core": cmd_core,
            "simulate": cmd_simulate, "enumerate": cmd_enumerate, "partition": cmd_partition}

NUMERICAL = (CharEqError, TiedMaximizersError, StructureError, SimplicityRejectionError,
             PartitionError, ArithmeticError)


def _error(kind: str, exc: Exception, command=None) -> dict:
    rec = {"error": kind, "type": type(exc).__name__, "message": str(exc), "command": command}
    if isinstance(exc, TiedMaximizersError):
        rec["lambda"] = exc.lam
        rec["branches"] = list(exc.maximizers)
    if isinstance(exc, SimplicityRejectionError):
        rec["attempts"] = exc.attempts
        rec["acceptance_upper_95"] = exc.acceptance_upper_95
    sys.stderr.write(json.dumps(rec) + "\n")
    return rec


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse reports usage errors itself
        return int(e.code) if e.code is not None else 0
    # the destination is not a parameter of the result
    config = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    config["version"] = __version__
    try:
        S = parse_degree_set(args.set)
        cols, rows, extra = COMMANDS[args.command](S, args)
    except (UsageError, DegreeSetError, SamplingError) as e:
        _error("usage", e, args.command)
        return 2
    except NUMERICAL as e:
        _error("numerical", e, args.command)
        return 1
    except ValueError as e:
        _error("usage", e, args.command)
        return 2
    config["set"] = S.label
    emit(config, cols, rows, args.format, args.out, extra)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

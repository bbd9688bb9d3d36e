"""Command-line front end: gen, solve, eval, oracle, bench.

Exit codes: 0 success, 2 usage or bad parameters, 3 solver error,
4 enumeration limit, 5 I/O or input format error.
"""

from __future__ import annotations

import argparse
import io as _io
import json
import sys
import time
from pathlib import Path

from . import io as tio
from .bench import bench_instances, bench_trips, rows_to_csv, rows_to_objs
from .errors import (EnumerationTooLarge, InstanceFormatError, MalformedTriples, OddCardinality,
                     ParseError, TSRMBError, UncoveredElement)
from .evaluate import (DEFAULT_ENUM_LIMIT, brute_force_opt, eval_stochastic, eval_tsrm, evaluate)
from .instances import generators as gen
from .instances.trips import DEFAULT_BBOX, WindowSpec, parse_time
from .model import decision_from_drivers, surplus
from .solvers import (solve_greedy, solve_k1, solve_no_surplus, solve_p_scenarios,
                      solve_single_scenario, solve_small_surplus, solve_two_scenarios)
from .variants import (ScenarioDistribution, solve_tsrm_balanced, solve_tsrm_greedy,
                       solve_tsrm_no_surplus, solve_tssmb_no_surplus, tsrbb_cost1)

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_LIMIT, EXIT_IO = 0, 2, 3, 4, 5

SOLVERS = {
    "greedy": solve_greedy,
    "single": solve_single_scenario,
    "two": solve_two_scenarios,
    "pscen": solve_p_scenarios,
    "nosurplus": solve_no_surplus,
    "smallsurplus": solve_small_surplus,
    "k1": solve_k1,
    "tssmb": None,
    "tsrm-greedy": solve_tsrm_greedy,
    "tsrm-ns": solve_tsrm_no_surplus,
    "tsrm-balanced": solve_tsrm_balanced,
}
TSRM_SOLVERS = {"tsrm-greedy", "tsrm-ns", "tsrm-balanced"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = _io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(tio._fmt_float(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


# gen

def cmd_gen(args) -> int:
    try:
        if args.family == "line":
            inst = gen.gen_line_counterexample(args.m, args.eps)
        elif args.family == "surplus":
            inst = gen.gen_surplus_counterexample(args.m, args.eps, args.gap)
        elif args.family == "random":
            inst = gen.gen_random_euclidean(args.n_r1, args.n_r2, args.n_d, args.scenarios,
                                            args.box, args.seed)
        elif args.family == "3dm":
            U, V, W, T = gen.planted_3dm(args.n, args.planted == "yes", args.seed)
            inst = gen.gen_from_3dm(U, V, W, T, args.n_scenarios)
        elif args.family == "setcover":
            sets = [_int_list(s) for s in args.sets.split(";")]
            inst = gen.gen_from_set_cover(args.universe, sets, args.p)
        else:
            inst = gen.gen_from_2partition(_int_list(args.s), args.P)
    except (ValueError, MalformedTriples, UncoveredElement, OddCardinality) as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from None
    _emit(tio.dumps_instance(inst), args.out)
    try:
        ell = surplus(inst)
    except TSRMBError:
        ell = "n/a"
    sc = inst.scenario_set
    kind = f"{len(sc.explicit)} explicit" if sc.is_explicit else f"implicit k={sc.k}"
    print(f"{args.family}: |R1|={inst.n_r1} |R2|={inst.n_r2} |D|={inst.n_d} "
          f"scenarios={kind} surplus={ell}", file=sys.stderr)
    return EXIT_OK


# solve / eval

def _probs(args, inst):
    if getattr(args, "probs", None):
        return _float_list(args.probs)
    p = len(inst.scenarios())
    return [1.0 / p] * p


def _report_obj(inst, d1, name, objective, args):
    if objective == "tsrm":
        rep = eval_tsrm(inst, d1, solver_name=name)
    else:
        try:
            rep = evaluate(inst, d1, args.enum_limit, solver_name=name)
        except EnumerationTooLarge as exc:
            obj = {"solver": name, "decision": tio.decision_to_obj(d1), "total": None,
                   "note": f"exact evaluation skipped: {exc}"}
            return obj, None
    obj = tio.report_to_obj(rep)
    obj["objective"] = objective
    if objective == "stochastic":
        obj["expected_total"] = eval_stochastic(inst, d1, _probs(args, inst))
    if objective == "tsrbb":
        c1b = tsrbb_cost1(inst, d1)
        obj["tsrbb_cost1"] = c1b
        obj["tsrbb_total"] = c1b + rep.worst_cost2
    return obj, rep


def _write_report(obj, rep, args):
    if args.format == "csv":
        rows = []
        if rep is not None:
            for s, v in rep.per_scenario_cost2.items():
                rows.append([obj["solver"], " ".join(map(str, s)), rep.cost1, float(v), rep.total])
        _emit(_csv(["solver", "scenario", "cost1", "cost2", "total"], rows), args.out)
    else:
        _emit(tio.dumps_canonical(obj) + "\n", args.out)


def cmd_solve(args) -> int:
    inst = tio.read_instance(args.instance)
    start = time.perf_counter()
    if args.solver == "tssmb":
        d1 = solve_tssmb_no_surplus(inst, ScenarioDistribution(tuple(_probs(args, inst))))
        objective = "stochastic"
    else:
        d1 = SOLVERS[args.solver](inst)
        objective = "tsrm" if args.solver in TSRM_SOLVERS else "robust"
    wall = time.perf_counter() - start
    obj, rep = _report_obj(inst, d1, args.solver, objective, args)
    obj["wall_time"] = wall
    _write_report(obj, rep, args)
    return EXIT_OK


def cmd_eval(args) -> int:
    inst = tio.read_instance(args.instance)
    if args.decision:
        with open(args.decision, encoding="utf-8") as fh:
            try:
                drivers = json.load(fh)["decision"]["drivers"]
            except (KeyError, TypeError, json.JSONDecodeError):
                raise InstanceFormatError("decision file lacks decision.drivers") from None
    elif args.drivers is not None:
        drivers = _int_list(args.drivers)
    else:
        raise UsageError("eval needs --drivers or --decision")
    try:
        d1 = decision_from_drivers(inst, drivers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj, rep = _report_obj(inst, d1, "eval", args.objective, args)
    _write_report(obj, rep, args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = tio.read_instance(args.instance)
    probs = _probs(args, inst) if args.objective == "stochastic" else None
    opt = brute_force_opt(inst, args.enum_limit, objective=args.objective, probs=probs)
    obj = {"objective": args.objective, "opt1": opt.opt1, "opt2": opt.opt2, "total": opt.total,
           "decision": tio.decision_to_obj(opt.optimal_d1)}
    if args.format == "csv":
        _emit(_csv(["objective", "opt1", "opt2", "total", "drivers"],
                   [[args.objective, opt.opt1, opt.opt2, opt.total,
                     " ".join(map(str, opt.optimal_d1.drivers))]]), args.out)
    else:
        _emit(tio.dumps_canonical(obj) + "\n", args.out)
    return EXIT_OK


# bench

def cmd_bench(args) -> int:
    errors: list = []
    if args.instances:
        paths = sorted(str(p) for p in Path(args.instances).glob("*.json"))
        if not paths:
            raise FileNotFoundError(f"no *.json instances in {args.instances}")
        rows = bench_instances(paths, errors)
    elif args.trips:
        if not args.window:
            raise UsageError("bench --trips needs at least one --window")
        try:
            offsets = tuple(_int_list(args.offsets))
            windows = [WindowSpec(parse_time(w), scenario_day_offsets=offsets) for w in args.window]
            bbox = tuple(_float_list(args.bbox)) if args.bbox else DEFAULT_BBOX
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if len(bbox) != 4:
            raise UsageError("--bbox needs lon,lat,half_width_lon,half_width_lat")
        rows = bench_trips(args.trips, windows, args.repeats, args.seed, bbox, errors)
    else:
        raise UsageError("bench needs --trips or --instances")
    for label, msg in errors:
        print(f"window {label}: {msg}", file=sys.stderr)
    if args.format == "json":
        _emit(tio.dumps_canonical(rows_to_objs(rows)) + "\n", args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tsrmb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--out", help="output file (default stdout)")
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("family", choices=["line", "surplus", "random", "3dm", "setcover", "2partition"])
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--eps", type=float, default=None)
    g.add_argument("--gap", type=float, default=0.1)
    g.add_argument("--n-r1", type=int, default=3)
    g.add_argument("--n-r2", type=int, default=6)
    g.add_argument("--n-d", type=int, default=8)
    g.add_argument("--scenarios", default="explicit:2x3")
    g.add_argument("--box", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--planted", choices=["yes", "no"], default="yes")
    g.add_argument("--n-scenarios", type=int, choices=[2, 3], default=None)
    g.add_argument("--universe", type=int, default=3)
    g.add_argument("--sets", default="0,1,2;0;1")
    g.add_argument("--p", type=int, default=1)
    g.add_argument("--s", default="1,1,1,1")
    g.add_argument("--P", type=float, default=None)
    common(g, fmt=False)

    s = sub.add_parser("solve", help="run a solver and report the evaluated cost")
    s.add_argument("--solver", choices=sorted(SOLVERS), required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--probs", help="scenario probabilities for tssmb (default uniform)")
    s.add_argument("--enum-limit", type=_positive, default=DEFAULT_ENUM_LIMIT)
    common(s)

    e = sub.add_parser("eval", help="evaluate a given first-stage driver set")
    e.add_argument("--instance", required=True)
    e.add_argument("--drivers", help="comma-separated driver indices")
    e.add_argument("--decision", help="report JSON from solve")
    e.add_argument("--objective", choices=["robust", "stochastic", "tsrm", "tsrbb"],
                   default="robust")
    e.add_argument("--probs")
    e.add_argument("--enum-limit", type=_positive, default=DEFAULT_ENUM_LIMIT)
    common(e)

    o = sub.add_parser("oracle", help="exhaustive optimum")
    o.add_argument("--instance", required=True)
    o.add_argument("--objective", choices=["robust", "stochastic", "tsrm"], default="robust")
    o.add_argument("--probs")
    o.add_argument("--enum-limit", type=_positive, default=DEFAULT_ENUM_LIMIT)
    common(o)

    b = sub.add_parser("bench", help="out-of-sample comparison table")
    b.add_argument("--trips", help="trip CSV")
    b.add_argument("--window", action="append", help="window start 'YYYY-MM-DD HH:MM:SS'")
    b.add_argument("--instances", help="directory of instance JSON files")
    b.add_argument("--repeats", type=_positive, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--offsets", default="7,14", help="scenario day offsets")
    b.add_argument("--bbox", help="lon,lat,half_width_lon,half_width_lat")
    b.add_argument("--out")
    b.add_argument("--format", choices=["json", "csv"], default="csv")
    return ap


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "eval": cmd_eval, "oracle": cmd_oracle,
            "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen":
        if args.eps is None:
            args.eps = 0.1 if args.family == "line" else 0.5
        if args.n_scenarios is None:
            args.n_scenarios = 2 if args.planted == "yes" else 3
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationTooLarge as exc:
        print(f"EnumerationTooLarge: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (OSError, InstanceFormatError, ParseError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except TSRMBError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

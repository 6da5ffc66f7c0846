"""Command-line entry point: ``uavecon <group> <command> [options]``.

Exit codes: 0 success, 1 infeasible instance, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Optional, Sequence

from . import harness, placement
from .deployment import (
    InfeasibleError,
    brute_force_oracle,
    load_fleet,
    minmax_colocated,
    minmax_general,
    minsum_dp,
)
from .patrol import (
    PatrolParams,
    build_cell_graph,
    compare_schemes,
    cpp_tour,
    load_graph,
    multicell_cost,
    required_speed,
    split_k_tours,
)
from .power import power_from_dict

EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2

log = logging.getLogger("uavecon")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=argparse.SUPPRESS, help="ScenarioConfig JSON file")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return p


def _config(args) -> harness.ScenarioConfig:
    path = getattr(args, "config", None)
    cfg = harness.load_config(path) if path else harness.ScenarioConfig()
    seed = getattr(args, "seed", None)
    if seed is not None:
        cfg.seed = seed
    return cfg


def _fmt(args, default="json") -> str:
    return getattr(args, "format", None) or default


def _write(args, text: str) -> None:
    path = getattr(args, "out", None)
    if not text.endswith("\n"):
        text += "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _table(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{x:.9g}" if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _json_only(args) -> None:
    if _fmt(args) != "json":
        raise ValueError(f"{args.group} {args.command} only emits JSON")


# ---------------------------------------------------------------------------
# handlers

def cmd_place_solve(args) -> int:
    _json_only(args)
    profile = placement.load_profile(args.profile)
    mech = placement.get_mechanism(args.mechanism) if args.mechanism else placement.benchmark_for(profile.kind)
    point = mech(profile)
    value = (placement.social_cost if profile.kind is placement.Kind.FACILITY else placement.social_utility)(point, profile)
    _write(args, _json({"mechanism": mech.name, "location": list(point.as_array().tolist()),
                        "social_value": value}))
    return EXIT_OK


def cmd_place_fuzz(args) -> int:
    _json_only(args)
    rep = placement.fuzz_strategyproof(args.mechanism, args.profiles, seed=getattr(args, "seed", 0) or 0,
                                       max_users=args.max_users, grid=args.grid)
    _write(args, rep.to_json())
    return EXIT_OK


def _emit_deployment(args, fleet, dep, objective: str) -> None:
    if _fmt(args) == "csv":
        rows = [(i, u.x0, "" if p is None else p, e)
                for i, (u, p, e) in enumerate(zip(fleet.uavs, dep.positions, dep.energies))]
        _write(args, _table(("uav", "x0", "position", "energy"), rows))
    else:
        _write(args, _json(dep.to_dict(fleet, objective)))


def cmd_deploy_minmax(args) -> int:
    fleet = load_fleet(args.fleet)
    dep = minmax_colocated(fleet) if args.colocated else minmax_general(fleet, args.epsilon)
    _emit_deployment(args, fleet, dep, "minmax")
    return EXIT_OK


def cmd_deploy_minsum(args) -> int:
    fleet = load_fleet(args.fleet)
    _emit_deployment(args, fleet, minsum_dp(fleet, args.delta), "minsum")
    return EXIT_OK


def cmd_deploy_oracle(args) -> int:
    fleet = load_fleet(args.fleet)
    dep = brute_force_oracle(fleet, args.delta, args.objective, order_preserving=not args.unrestricted)
    _emit_deployment(args, fleet, dep, args.objective)
    return EXIT_OK


def _graph(args):
    if args.graph:
        return load_graph(args.graph)
    if args.rows is None or args.cols is None:
        raise ValueError("give --graph FILE or --rows and --cols")
    return build_cell_graph(args.rows, args.cols, args.side)


def _patrol_params(args) -> PatrolParams:
    power = power_from_dict(json.loads(args.power)) if args.power else power_from_dict(None)
    return PatrolParams(args.L, args.deltaL, args.n, args.D, args.c, power)


def cmd_patrol_compare(args) -> int:
    p = _patrol_params(args)
    best, costs = compare_schemes(p)
    rows = [(s.value, required_speed(s, p), costs[s]) for s in costs]
    if _fmt(args) == "csv":
        _write(args, _table(("scheme", "speed", "cost"), rows))
    else:
        _write(args, _json({"best": best.value,
                            "schemes": {name: {"speed": v, "cost": c} for name, v, c in rows}}))
    return EXIT_OK


def cmd_patrol_tour(args) -> int:
    _json_only(args)
    g = _graph(args)
    tour = cpp_tour(g)
    out = tour.to_dict()
    if args.L is not None:
        out["cost"] = multicell_cost(tour, _patrol_params(args))
    _write(args, _json(out))
    return EXIT_OK


def cmd_patrol_split(args) -> int:
    _json_only(args)
    g = _graph(args)
    tour = cpp_tour(g)
    res = split_k_tours(tour, g, args.k)
    _write(args, _json({"tour": tour.to_dict(), "split": res.to_dict()}))
    return EXIT_OK


def cmd_patrol_build_graph(args) -> int:
    _json_only(args)
    _write(args, _json(build_cell_graph(args.rows, args.cols, args.side).to_dict()))
    return EXIT_OK


def cmd_experiment_tradeoff(args) -> int:
    cfg = _config(args)
    records = harness.run_tradeoff_experiment(cfg)
    harness.emit_results(records, _fmt(args, "csv"), getattr(args, "out", None))
    return EXIT_OK


def cmd_experiment_mechanisms(args) -> int:
    _json_only(args)
    cfg = _config(args)
    if args.profiles is not None:
        cfg.mech_profiles = args.profiles
    _write(args, _json(harness.run_mechanism_suite(cfg)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="uavecon", description="UAV placement, deployment and patrol solvers.",
                   parents=[common])
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func, command=name)
        return p

    place = groups.add_parser("place", help="placement mechanisms").add_subparsers(dest="command", required=True)
    p = leaf(place, "solve", cmd_place_solve, "run a mechanism on a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--mechanism", help="defaults to the benchmark for the profile's user kind")
    p = leaf(place, "fuzz", cmd_place_fuzz, "random strategyproofness search")
    p.add_argument("--mechanism", default="mechanism1")
    p.add_argument("--profiles", type=int, default=1000)
    p.add_argument("--max-users", type=int, default=8)
    p.add_argument("--grid", type=int, default=9)

    deploy = groups.add_parser("deploy", help="coverage deployment").add_subparsers(dest="command", required=True)
    p = leaf(deploy, "minmax", cmd_deploy_minmax, "minimize the bottleneck energy")
    p.add_argument("--fleet", required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--colocated", action="store_true", help="use the shared-station greedy")
    p = leaf(deploy, "minsum", cmd_deploy_minsum, "minimize the total energy")
    p.add_argument("--fleet", required=True)
    p.add_argument("--delta", type=float)
    p = leaf(deploy, "oracle", cmd_deploy_oracle, "exhaustive grid search (n <= 5)")
    p.add_argument("--fleet", required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--objective", choices=("minmax", "minsum"), default="minmax")
    p.add_argument("--unrestricted", action="store_true", help="drop the order-preserving constraint")

    patrol = groups.add_parser("patrol", help="patrol planning").add_subparsers(dest="command", required=True)

    def params(p, required=True):
        p.add_argument("--L", type=float, required=required, help="cell perimeter")
        p.add_argument("--deltaL", type=float, default=0.0)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--D", type=float, default=1.0, help="target service delay")
        p.add_argument("--c", type=float, default=0.0, help="per-UAV equipment cost")
        p.add_argument("--power", help='power model JSON, e.g. {"kind":"affine_quadratic","a":1,"b":0.5}')

    def lattice(p, required=False):
        p.add_argument("--rows", type=int, required=required)
        p.add_argument("--cols", type=int, required=required)
        p.add_argument("--side", type=float, default=1.0)

    params(leaf(patrol, "compare", cmd_patrol_compare, "partition vs cyclic"))
    p = leaf(patrol, "tour", cmd_patrol_tour, "Chinese Postman tour")
    p.add_argument("--graph")
    lattice(p)
    params(p, required=False)
    p = leaf(patrol, "split", cmd_patrol_split, "split the tour into k closed routes")
    p.add_argument("--graph")
    p.add_argument("--k", type=int, required=True)
    lattice(p)
    lattice(leaf(patrol, "build-graph", cmd_patrol_build_graph, "hexagonal cell lattice"), required=True)

    exp = groups.add_parser("experiment", help="seeded studies").add_subparsers(dest="command", required=True)
    leaf(exp, "tradeoff", cmd_experiment_tradeoff, "min-max vs min-sum over fleet sizes")
    p = leaf(exp, "mechanisms", cmd_experiment_mechanisms, "strategyproofness and ratio suite")
    p.add_argument("--profiles", type=int)
    return root


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, KeyError, TypeError, OSError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

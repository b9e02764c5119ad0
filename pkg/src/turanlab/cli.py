"""Command-line front end.

Every subcommand parses its graphs, calls one library function and prints
the result as JSON (or CSV for scans).  Exit status: 0 on success, 1 on bad
input or a violated precondition, 2 when an exact search refuses an instance
over its size guard.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from turanlab import covering, density, extremal, probability, randomsim
from turanlab.errors import GuardExceeded, PreconditionError, TuranLabError
from turanlab.graphs import complete, enumerate_copies, parse_graph, to_graph6


class InputError(TuranLabError):
    pass


@dataclass(frozen=True)
class Config:
    seed: int = 0
    trials: int = 10
    max_n_ex: int = extremal.DEFAULT_MAX_N
    max_pool_exx: int = extremal.DEFAULT_MAX_POOL
    max_edges_sample_solver: int = randomsim.DEFAULT_MAX_EDGES
    output_format: str = "json"
    deterministic: bool = False
    threads: int = 1

    def __post_init__(self):
        for name in ("max_n_ex", "max_pool_exx", "max_edges_sample_solver", "threads"):
            if getattr(self, name) < 1:
                raise InputError(f"{name.replace('_', '-')} must be positive")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.output_format not in ("json", "csv"):
            raise InputError(f"unknown output format {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _rational(text: str) -> Fraction:
    try:
        return density.parse_rational(text)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None


def _family(args, cfg: Config, t, h):
    kind = args.family
    if kind == "fano":
        return [covering.covering_type(covering.fano_covering())]
    if h is None:
        raise InputError(f"--family {kind} needs --H")
    if kind == "fe":
        return [covering.covering_type(covering.build_special_covering(t, h))]
    if kind == "all":
        return [ty for ty in covering.enumerate_covering_types(t, h) if not ty.is_singleton]
    res = covering.t_resolution(t, h)
    types = list(res.types)
    if kind == "min":
        return [ty for ty, d in zip(types, res.densities) if d == res.densities[0]]
    if args.prefix is not None:
        types = types[: args.prefix]
    return types


# -- subcommands ------------------------------------------------------------------

def cmd_density(args, cfg):
    g = args.graph
    return _dump({"m2": density.format_rational(density.two_density(g).value),
                  "two_balanced": density.is_two_balanced(g)})


def cmd_resolution(args, cfg):
    return _dump(covering.t_resolution(args.T, args.H, relax=args.relax).to_json())


def cmd_coverings(args, cfg):
    cap = None if args.max_density is None else _rational(args.max_density)
    out = []
    for ty in covering.enumerate_covering_types(args.T, args.H, max_density=cap):
        d = ty.density
        item = {
            "copy_count": ty.copy_count,
            "union_vertices": ty.union_vertices,
            "union_edges": ty.union_edges,
            "singleton": ty.is_singleton,
            "density": None if d is None else density.format_rational(d),
            "covering": ty.representative.to_json(),
        }
        out.append(item)
    return _dump(out)


def cmd_ex(args, cfg):
    res = extremal.ex_exact(args.n, args.T, args.H, max_n=cfg.max_n_ex)
    return _dump(res.to_json(cfg.deterministic))


def cmd_exx(args, cfg):
    fam = _family(args, cfg, args.T, args.H)
    res = extremal.exx_exact(args.n, args.T, fam, max_pool=cfg.max_pool_exx)
    return _dump(res.to_json(cfg.deterministic))


def cmd_pi_seq(args, cfg):
    return _dump(extremal.pi_sequence_surrogate(args.n, args.T, args.H, max_pool=cfg.max_pool_exx).to_json())


def cmd_psi(args, cfg):
    value, witness = probability.psi_T(args.T, args.n, args.p)
    out = {"value": value, "witness_graph6": to_graph6(witness),
           "witness_vertices": witness.n, "witness_edges": witness.edge_count}
    if args.T.edge_count >= 2 and density.is_two_balanced(args.T):
        out["closed_form"] = probability.psi_closed_form(args.T, args.n, args.p)
    return _dump(out)


def cmd_janson(args, cfg):
    host = args.host if args.host is not None else complete(args.n)
    pool = enumerate_copies(args.T, host)
    mu, _ = probability.janson_parameters(pool, args.p)
    if (args.shortfall is None) == (args.shortfall_frac is None):
        raise InputError("give exactly one of --shortfall and --shortfall-frac")
    t = args.shortfall if args.shortfall is not None else args.shortfall_frac * mu
    return _dump(probability.janson_lower_tail(pool, args.p, t).to_json())


def cmd_scan(args, cfg):
    exps = [_rational(x) for x in args.exponents.split(",") if x.strip()]
    if not exps:
        raise InputError("--exponents is empty")
    rows = randomsim.phase_scan(args.T, args.H, args.n, exps, cfg.trials, cfg.seed, threads=cfg.threads,
                                max_edges=cfg.max_edges_sample_solver, max_n=cfg.max_n_ex)
    if cfg.output_format == "csv":
        return randomsim.scan_csv(rows)
    return _dump([r.to_json() for r in rows])


def cmd_concentration(args, cfg):
    stats = randomsim.concentration_check(args.T, args.n, args.p, cfg.trials, cfg.seed, threads=cfg.threads)
    return _dump(stats.to_json())


def cmd_core(args, cfg):
    if args.graph is not None:
        g = args.graph
    elif args.n is not None and args.p is not None:
        g = randomsim.sample_gnp(args.n, args.p, cfg.seed, args.trial).graph
    else:
        raise InputError("core needs --graph or both --n and --p")
    core = randomsim.extract_disjoint_core(g, args.T)
    return _dump({"input_graph6": to_graph6(g), "core_graph6": to_graph6(core),
                  "edges": core.edge_count, "copies": len(enumerate_copies(args.T, core))})


COMMANDS = {
    "density": cmd_density, "resolution": cmd_resolution, "coverings": cmd_coverings, "ex": cmd_ex,
    "exx": cmd_exx, "pi-seq": cmd_pi_seq, "psi": cmd_psi, "janson": cmd_janson, "scan": cmd_scan,
    "concentration": cmd_concentration, "core": cmd_core,
}


def _graph_arg(text: str):
    try:
        return parse_graph(text)
    except TuranLabError as exc:
        # keep our message (with the offending token) instead of argparse's generic one
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", dest="output_format", choices=["json", "csv"], default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $TURANLAB_THREADS or 1)")
    common.add_argument("--deterministic", action="store_true",
                        help="sequential search and no timing fields, for byte-identical output")
    common.add_argument("--max-n-ex", type=int, default=extremal.DEFAULT_MAX_N)
    common.add_argument("--max-pool-exx", type=int, default=extremal.DEFAULT_MAX_POOL)
    common.add_argument("--max-edges-sample-solver", type=int, default=randomsim.DEFAULT_MAX_EDGES)

    parser = _Parser(prog="turanlab", description="Generalized random Turan toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", parents=[common], help="2-density and 2-balancedness")
    p.add_argument("--graph", type=_graph_arg, required=True)

    for name, hlp in (("resolution", "T-resolution of H"), ("coverings", "all covering types of H")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--T", type=_graph_arg, required=True)
        p.add_argument("--H", type=_graph_arg, required=True)
        if name == "resolution":
            p.add_argument("--relax", action="store_true", help="allow H inside a blow-up of T")
        else:
            p.add_argument("--max-density", default=None, help="only types at most this dense")

    p = sub.add_parser("ex", parents=[common], help="exact ex(n, T, H)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--H", type=_graph_arg, required=True)

    p = sub.add_parser("exx", parents=[common], help="exact covering-free maximum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--H", type=_graph_arg, default=None)
    p.add_argument("--family", choices=["resolution", "min", "all", "fe", "fano"], default="resolution")
    p.add_argument("--prefix", type=int, default=None, help="use only the first k resolution types")

    p = sub.add_parser("pi-seq", parents=[common], help="finite-n (mu, pi) sequence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--H", type=_graph_arg, required=True)

    p = sub.add_parser("psi", parents=[common], help="minimum expected subgraph count")
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("janson", parents=[common], help="Janson lower-tail bound for the T-copies of a host")
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--host", type=_graph_arg, default=None)
    p.add_argument("--n", type=int, default=None, help="use K_n as host")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--shortfall", type=float, default=None)
    p.add_argument("--shortfall-frac", type=float, default=None, help="shortfall as a fraction of mu")

    p = sub.add_parser("scan", parents=[common], help="Monte-Carlo phase scan")
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--H", type=_graph_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exponents", required=True, help="comma-separated rationals a, p = n^-a")

    p = sub.add_parser("concentration", parents=[common], help="N_T(G(n,p)) against its mean")
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("core", parents=[common], help="edge-disjoint core of a graph or a sample")
    p.add_argument("--T", type=_graph_arg, required=True)
    p.add_argument("--graph", type=_graph_arg, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--trial", type=int, default=0)
    return parser


def config_from(args) -> Config:
    fmt = args.output_format or ("csv" if args.command == "scan" else "json")
    threads = 1 if args.deterministic else randomsim.resolve_threads(args.threads)
    return Config(seed=args.seed, trials=args.trials, max_n_ex=args.max_n_ex, max_pool_exx=args.max_pool_exx,
                  max_edges_sample_solver=args.max_edges_sample_solver, output_format=fmt,
                  deterministic=args.deterministic, threads=threads)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from(args)
        text = COMMANDS[args.command](args, cfg)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return 0
    except GuardExceeded as exc:
        stderr.write(f"refused: {exc}\n")
        return 2
    except (TuranLabError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())

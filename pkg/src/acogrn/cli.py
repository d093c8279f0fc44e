"""Command-line front end: correlate, infer, oracle, eval, reproduce, export-dot.

Exit codes: 0 success, 2 input or validation error, 3 fewer than three
genes, 4 a reproduction check failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import secrets
import sys

from . import _backend
from .aco import AcoParams, run_aco, tour_score, tour_to_edges
from .correlation import (
    build_correlation_matrix,
    format_correlation_file,
    parse_correlation_file,
    parse_expression_file,
)
from .datasets import SOS_TOUR_SCORE, BenchmarkName, dump_fixtures, load_benchmark
from .errors import InputError, OutOfRange, TooFewGenes
from .evaluation import evaluation_report_render, match_edges, parse_gold_standard
from .oracle import brute_force_optimum
from .results import dumps, format_edge_list, oracle_to_dict, parse_edge_list, result_to_dict, to_dot

log = logging.getLogger("acogrn")

CONFIG_ENV = "ACOGRN_CONFIG"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_TOO_SMALL = 3
EXIT_REPRODUCTION = 4

# config-file key -> (AcoParams field, converter)
_PARAM_KEYS = {
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "rho": ("rho", float),
    "ants": ("n_ants", int),
    "iterations": ("n_iterations", int),
    "trials": ("n_trials", int),
    "seed": ("seed", None),
    "objective": ("objective_mode", str),
    "visibility": ("visibility_mode", str),
    "epsilon": ("epsilon_visibility", float),
    "restart_after": ("restart_after", None),
}


class ReproductionFailure(Exception):
    pass


def _seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(64)
    try:
        value = int(text, 0)
    except ValueError:
        raise InputError(f"seed must be an integer or 'random', got {text!r}") from None
    if not 0 <= value < 2**64:
        raise InputError(f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _restart(text: str) -> int | None:
    if str(text).lower() in ("none", "off", "0"):
        return None
    return int(text)


def _read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config file {path!r}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in _PARAM_KEYS and key != "workers":
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _convert(key: str, value):
    field, conv = _PARAM_KEYS[key]
    if key == "seed":
        return field, _seed(str(value))
    if key == "restart_after":
        return field, _restart(value)
    try:
        return field, conv(value)
    except (TypeError, ValueError):
        raise InputError(f"invalid value for {key}: {value!r}") from None


def build_params(args) -> tuple[AcoParams, int]:
    """Merge defaults, config file and flags (flags win). Returns (params, workers)."""
    config_path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    file_values = _read_config(config_path) if config_path else {}
    fields = {}
    for key, value in file_values.items():
        if key != "workers":
            f, v = _convert(key, value)
            fields[f] = v
    for key in _PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            f, v = _convert(key, flag)
            fields[f] = v
    workers = args.workers if getattr(args, "workers", None) is not None \
        else int(file_values.get("workers", 1))
    if workers < 1:
        raise InputError(f"workers must be >= 1, got {workers}")
    return AcoParams(**fields), workers


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_correlation(args):
    """Resolve the single correlation source selected on the command line."""
    if getattr(args, "expression", None):
        return build_correlation_matrix(parse_expression_file(_read_bytes(args.expression)))
    if getattr(args, "correlation", None):
        return parse_correlation_file(_read_bytes(args.correlation))
    if getattr(args, "benchmark", None):
        case = load_benchmark(args.benchmark)
        if case.correlation is None:
            raise InputError(
                f"benchmark {args.benchmark!r} has no embedded correlation matrix; "
                "supply --expression")
        return case.correlation
    return None


def cmd_correlate(args) -> int:
    expr = parse_expression_file(_read_bytes(args.expression))
    corr = build_correlation_matrix(expr)
    _write(args.output, format_correlation_file(corr))
    log.info("wrote %dx%d correlation matrix", corr.n, corr.n)
    return EXIT_OK


def cmd_infer(args) -> int:
    params, workers = build_params(args)
    corr = _load_correlation(args)
    result = run_aco(corr, params, workers=workers, backend=args.backend)
    _write(args.output, dumps(result_to_dict(result, corr)))
    if args.edges:
        _write(args.edges, format_edge_list(tour_to_edges(result), corr))
    log.info("best circuit score %.6f over %d genes", result.best_tour.score, corr.n)
    return EXIT_OK


def cmd_oracle(args) -> int:
    corr = _load_correlation(args)
    if corr.n < 3:
        raise TooFewGenes(f"a Hamiltonian circuit needs at least 3 genes, got {corr.n}")
    result = brute_force_optimum(corr, args.objective, backend=args.backend)
    _write(args.output, dumps(oracle_to_dict(result, corr, args.objective)))
    log.info("optimum %.6f, %d circuits examined, %d tied optima",
             result.best_score, result.n_cycles_examined, len(result.all_optima))
    return EXIT_OK


def cmd_eval(args) -> int:
    predicted = [(a, b) for a, b, _ in parse_edge_list(_read_bytes(args.predicted))]
    gold = parse_gold_standard(_read_bytes(args.gold), source_label=args.gold)
    if args.directed and not gold.directed:
        gold = type(gold)(gold.edges, True, gold.source_label)
    corr = _load_correlation(args)
    report = match_edges(predicted, gold, corr.gene_names if corr is not None else None)
    _write(args.output, evaluation_report_render(report, args.format))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.dump_fixtures:
        for path in dump_fixtures(args.dump_fixtures):
            log.info("wrote %s", path)
        if args.case is None:
            return EXIT_OK
    if args.case is None:
        raise InputError("reproduce needs a case (sos, irma-on, irma-off) or --dump-fixtures")

    case = load_benchmark(args.case)
    gold = parse_gold_standard(_read_bytes(case.gold_file_path), source_label=case.gold_file_path)
    out: list[str] = []
    failures: list[str] = []

    published_report = match_edges(case.published_edges(), gold, case.gene_names)
    published_yes = {frozenset(r[:2]) for r in published_report.rows if r.matched}
    if published_report.n_matched != case.expected_matches or published_yes != case.published_yes_edges:
        failures.append(
            f"published tour matched {published_report.n_matched} gold edges, "
            f"expected {case.expected_matches}")

    corr = None
    if args.expression:
        corr = build_correlation_matrix(parse_expression_file(_read_bytes(args.expression)))
    elif case.correlation is not None:
        corr = case.correlation

    if corr is None:
        out.append(f"{case.name.value}: replay of the published tour\n")
        out.append(evaluation_report_render(published_report, "table"))
    else:
        params, workers = build_params(args)
        result = run_aco(corr, params, workers=workers, backend=args.backend)
        inferred = tour_to_edges(result)
        report = match_edges(inferred, gold, corr.gene_names)
        out.append(f"{case.name.value}: inferred circuit (seed {params.seed}), "
                   f"score {result.best_tour.score:.4f}\n")
        out.append(evaluation_report_render(report, "table"))
        same = ({frozenset(e) for e in inferred}
                == {frozenset(e) for e in case.published_edges()})
        line = (f"published tour: {' -> '.join(case.published_tour)}; "
                f"{published_report.n_matched} of {published_report.n_predicted} matched")
        if case.name is BenchmarkName.SOS and not args.expression:
            idx = [corr.index(g) for g in case.published_tour]
            published_score = tour_score(idx, corr, "raw")
            line += f"; score {published_score:.4f}"
            if abs(published_score - SOS_TOUR_SCORE) > 1e-9:
                failures.append(f"published tour scores {published_score!r}, expected {SOS_TOUR_SCORE}")
            if not same:
                failures.append("inferred circuit differs from the published tour")
            if report.n_predicted != len(case.published_tour):
                failures.append(f"inferred {report.n_predicted} edges, expected {len(case.published_tour)}")
        out.append(line + "\n")
        out.append(f"inferred circuit identical to published tour: {'yes' if same else 'no'}\n")

    _write(args.output, "".join(out))
    if failures:
        for f in failures:
            log.error("reproduction check failed: %s", f)
        raise ReproductionFailure("; ".join(failures))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    edges = parse_edge_list(_read_bytes(args.edges))
    corr = _load_correlation(args)
    _write(args.output, to_dot(edges, corr))
    return EXIT_OK


def _add_source(p, required=True, expression=True):
    g = p.add_mutually_exclusive_group(required=required)
    if expression:
        g.add_argument("--expression", metavar="FILE", help="gene expression table")
    g.add_argument("--correlation", metavar="FILE", help="correlation matrix file")
    g.add_argument("--benchmark", choices=[b.value for b in BenchmarkName],
                   help="embedded benchmark instance")


def _add_params(p):
    g = p.add_argument_group("solver parameters")
    g.add_argument("--alpha", type=float, help="pheromone exponent (default 1.0)")
    g.add_argument("--beta", type=float, help="visibility exponent (default 2.0)")
    g.add_argument("--rho", type=float, help="evaporation rate (default 0.5)")
    g.add_argument("--ants", type=int, help="number of ants (default: one per gene)")
    g.add_argument("--iterations", type=int, help="iterations per trial (default 100)")
    g.add_argument("--trials", type=int, help="independent trials (default 1)")
    g.add_argument("--seed", help="integer seed or 'random' (default 0)")
    g.add_argument("--objective", choices=["raw", "abs"], help="score signed or absolute correlations")
    g.add_argument("--visibility", choices=["abs", "shift", "positive"],
                   help="visibility transform (default: matched to the objective)")
    g.add_argument("--epsilon", type=float, help="visibility floor (default 0.05)")
    g.add_argument("--restart-after", dest="restart_after",
                   help="reset trails after this many stagnant iterations; 'none' disables")
    g.add_argument("--workers", type=int, help="threads building ants (default 1)")
    g.add_argument("--config", metavar="FILE",
                   help=f"key=value parameter file (or set {CONFIG_ENV})")
    g.add_argument("--backend", choices=_backend.available(), help="kernel implementation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acogrn",
        description="Infer key gene interactions with a Max-Min Ant System.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", help="expression table -> correlation matrix")
    p.add_argument("--expression", required=True, metavar="FILE")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("infer", help="run the ant colony solver")
    _add_source(p)
    _add_params(p)
    p.add_argument("-o", "--output", default="-", help="result JSON (default stdout)")
    p.add_argument("--edges", metavar="FILE", help="also write a gene1/gene2/correlation edge list")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("oracle", help="exhaustive optimum for up to 12 genes")
    _add_source(p)
    p.add_argument("--objective", choices=["raw", "abs"], default="raw")
    p.add_argument("--backend", choices=_backend.available())
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("eval", help="match predicted edges against a gold standard")
    p.add_argument("--predicted", required=True, metavar="FILE")
    p.add_argument("--gold", required=True, metavar="FILE")
    p.add_argument("--directed", action="store_true", help="treat the gold edges as directed")
    p.add_argument("--format", choices=["table", "json"], default="table")
    _add_source(p, required=False)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reproduce", help="rerun a published benchmark")
    p.add_argument("case", nargs="?", choices=["sos", "irma-on", "irma-off"])
    p.add_argument("--expression", metavar="FILE", help="expression data for full inference")
    p.add_argument("--dump-fixtures", metavar="DIR", help="write the embedded fixtures to DIR")
    _add_params(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("export-dot", help="edge list -> Graphviz DOT")
    p.add_argument("--edges", required=True, metavar="FILE")
    _add_source(p, required=False)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except TooFewGenes as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_SMALL
    except (InputError, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ReproductionFailure as exc:
        print(f"reproduction failed: {exc}", file=sys.stderr)
        return EXIT_REPRODUCTION


if __name__ == "__main__":
    sys.exit(main())

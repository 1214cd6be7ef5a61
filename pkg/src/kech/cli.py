"""Command-line surface over the chain complex and embedding toolkits.

Every subcommand renders one rectangular report in the selected output
format (table, json, csv).  Exit codes: 0 success, 1 usage error, 2 invalid
input, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

from .census import generators_up_to_action, load_slice, save_slice
from .diff import differential
from .homology import betti, d_squared_report
from .paths import (
    PathError,
    action,
    format_path,
    grading,
    grading_lattice,
    parse_path,
    total_class,
    validate,
)
from .spectrum import capacity, weyl_series
from .toric import (
    embedding_obstructed,
    format_convex_generator,
    gromov_upper,
    parse_domain,
    toric_capacity_detail,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

_SCHEMA = "kech/1"


class _UsageError(Exception):
    """Argument combinations the grammar cannot express in argparse."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract reserves 2 for bad
    input data, so usage failures are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


@dataclass(frozen=True)
class RunConfig:
    tolerance: float
    threads: int
    cache_dir: str | None
    output_format: str


def _build_parser() -> _Parser:
    parser = _Parser(prog="kech", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("table", "json", "csv"),
                        default="table", help="output format")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="numeric tolerance (default 1e-9)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker hint; orchestration stays deterministic")
    parser.add_argument("--cache-dir", default=None,
                        help="directory for enumeration slice caches")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", help="check a path spec")
    p.add_argument("spec")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("grade", help="grading, action, and class of a path")
    p.add_argument("spec")
    p.set_defaults(handler=_cmd_grade)

    p = sub.add_parser("diff", help="differential of a path")
    p.add_argument("spec")
    p.set_defaults(handler=_cmd_diff)

    p = sub.add_parser("enumerate", help="generators up to an action bound")
    p.add_argument("--max-action", type=float, required=True)
    p.add_argument("--grading", type=int, default=None)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("d2check", help="verify the differential squares to zero")
    p.add_argument("--max-action", type=float, required=True)
    p.set_defaults(handler=_cmd_d2check)

    p = sub.add_parser("homology", help="betti numbers of an action slice")
    p.add_argument("--max-action", type=float, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(handler=_cmd_homology)

    p = sub.add_parser("capacity", help="spectrum values")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(handler=_cmd_capacity)

    p = sub.add_parser("weyl", help="growth diagnostic c_k^2/k")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(handler=_cmd_weyl)

    p = sub.add_parser("cap-toric", help="toric domain capacity")
    p.add_argument("--domain", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=_cmd_cap_toric)

    p = sub.add_parser("gromov", help="embedding-constant upper bounds")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(handler=_cmd_gromov)

    p = sub.add_parser("obstruct", help="embedding obstruction for a generator")
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda-prime", required=True, dest="lambda_prime")
    p.set_defaults(handler=_cmd_obstruct)
    return parser


def _resolve_config(args, parser: _Parser) -> RunConfig:
    def from_env(name, cast, default):
        raw = os.environ.get(name)
        if raw is None or raw == "":
            return default
        try:
            return cast(raw)
        except ValueError:
            parser.error("environment variable %s=%r is not a valid %s"
                         % (name, raw, cast.__name__))

    tol = args.tolerance if args.tolerance is not None else \
        from_env("KECH_TOLERANCE", float, 1e-9)
    threads = args.threads if args.threads is not None else \
        from_env("KECH_THREADS", int, 1)
    cache = args.cache_dir if args.cache_dir is not None else \
        os.environ.get("KECH_CACHE") or None
    if not tol > 0:
        parser.error("tolerance must be positive")
    if threads < 1:
        parser.error("threads must be >= 1")
    return RunConfig(tol, threads, cache, args.format)


# ---------------------------------------------------------------------------
# Handlers: each returns (columns, rows, exit_code)


def _class_cell(path) -> str:
    cls = total_class(path)
    return "(%d, %d, %d)" % (cls.n, cls.a, cls.b)


def _cmd_validate(args, config):
    path = parse_path(args.spec)
    kind = validate(path)
    return (("spec", "type"), [{"spec": format_path(path), "type": kind}], EXIT_OK)


def _cmd_grade(args, config):
    path = parse_path(args.spec)
    kind = validate(path)
    row = {
        "spec": format_path(path),
        "type": kind,
        "grading": grading(path),
        "grading_lattice": grading_lattice(path),
        "action": action(path),
        "class": _class_cell(path),
    }
    return (("spec", "type", "grading", "grading_lattice", "action", "class"),
            [row], EXIT_OK)


def _cmd_diff(args, config):
    path = parse_path(args.spec)
    validate(path)
    rows = [{"spec": format_path(term), "grading": grading(term),
             "action": action(term)}
            for term in differential(path).terms()]
    return (("spec", "grading", "action"), rows, EXIT_OK)


def _slice_for(max_action: float, cache_dir):
    if max_action <= 0:
        raise ValueError("action bound must be positive")
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        file_path = os.path.join(cache_dir, "slice-%r.txt" % max_action)
        if os.path.exists(file_path):
            cached = load_slice(file_path, max_action)
            if cached is not None:
                return cached
        sl = generators_up_to_action(max_action)
        save_slice(sl, file_path)
        return sl
    return generators_up_to_action(max_action)


def _cmd_enumerate(args, config):
    sl = _slice_for(args.max_action, config.cache_dir)
    rows = []
    for degree in sl.degrees():
        if args.grading is not None and degree != args.grading:
            continue
        for path in sl.generators(degree):
            rows.append({"spec": format_path(path), "grading": degree,
                         "action": action(path)})
    return (("spec", "grading", "action"), rows, EXIT_OK)


def _cmd_d2check(args, config):
    if args.max_action <= 0:
        raise ValueError("action bound must be positive")
    violations = d_squared_report(args.max_action)
    rows = [{"spec": spec, "survivor": surv}
            for spec, survivors in violations for surv in survivors]
    return (("spec", "survivor"), rows,
            EXIT_OK if not rows else EXIT_INTERNAL)


def _cmd_homology(args, config):
    if args.max_action <= 0:
        raise ValueError("action bound must be positive")
    if args.max_degree < 0:
        raise ValueError("degree bound must be nonnegative")
    rows = [{"degree": k, "betti": betti(k, args.max_action)}
            for k in range(args.max_degree + 1)]
    return (("degree", "betti"), rows, EXIT_OK)


def _cmd_capacity(args, config):
    if args.k is None and args.kmax is None:
        raise _UsageError("capacity needs --k or --kmax")
    if args.kmax is not None:
        start = args.k if args.k is not None else 0
        if start < 0 or args.kmax < start:
            raise ValueError("need 0 <= k <= kmax")
        indices = range(start, args.kmax + 1)
    else:
        if args.k < 0:
            raise ValueError("capacity index must be nonnegative")
        indices = (args.k,)
    rows = []
    for k in indices:
        result = capacity(k)
        rows.append({"k": result.k, "value": result.value,
                     "witness": format_path(result.witness)})
    return (("k", "value", "witness"), rows, EXIT_OK)


def _cmd_weyl(args, config):
    if args.kmax < 1:
        raise ValueError("kmax must be >= 1")
    rows = [{"k": k, "value": value, "ratio": ratio}
            for k, value, ratio in weyl_series(args.kmax)]
    return (("k", "value", "ratio"), rows, EXIT_OK)


def _cmd_cap_toric(args, config):
    domain = parse_domain(args.domain)
    if args.k < 0:
        raise ValueError("capacity index must be nonnegative")
    value, witness = toric_capacity_detail(domain, args.k)
    row = {"domain": domain.describe(), "k": args.k, "value": value,
           "witness": format_convex_generator(witness)}
    return (("domain", "k", "value", "witness"), [row], EXIT_OK)


def _cmd_gromov(args, config):
    if args.kmax < 0:
        raise ValueError("kmax must be nonnegative")
    report = gromov_upper(args.kmax)
    rows = []
    for record, running in zip(report.records, report.running_inf):
        rows.append({
            "k": record.k,
            "generator": record.generator_spec,
            "rhs_action": record.rhs_action,
            "min_lhs_action": record.min_lhs_action,
            "witness": record.witness_spec,
            "bound": record.bound,
            "flat_candidate_bound": record.flat_candidate_bound,
            "running_inf": running,
        })
    return (("k", "generator", "rhs_action", "min_lhs_action", "witness",
             "bound", "flat_candidate_bound", "running_inf"), rows, EXIT_OK)


def _cmd_obstruct(args, config):
    domain = parse_domain(args.domain)
    path = parse_path(args.lambda_prime)
    validate(path)
    result = embedding_obstructed(domain, path, config.tolerance)
    row = {"domain": domain.describe(), "generator": format_path(path),
           "obstructed": result}
    return (("domain", "generator", "obstructed"), [row], EXIT_OK)


# ---------------------------------------------------------------------------
# Rendering


def _cell(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(config: RunConfig, command: str, columns, rows, out) -> None:
    if config.output_format == "json":
        payload = {"schema": _SCHEMA, "command": command,
                   "columns": list(columns), "rows": rows}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    if config.output_format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
        return
    cells = [[_cell(row[c]) for c in columns] for row in rows]
    widths = [max(len(str(c)), *(len(r[i]) for r in cells)) if cells else len(str(c))
              for i, c in enumerate(columns)]
    header = "  ".join(str(c).ljust(w) for c, w in zip(columns, widths))
    out.write(header.rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths).rstrip() + "\n")
    for r in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = _resolve_config(args, parser)
    try:
        columns, rows, code = args.handler(args, config)
    except _UsageError as exc:
        print("%s: error: %s" % (parser.prog, exc), file=sys.stderr)
        return EXIT_USAGE
    except PathError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print("internal invariant violation: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL
    _emit(config, args.command, columns, rows, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())

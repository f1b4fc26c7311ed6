"""
Command-line driver of rtlcheck.

    rtlcheck analyze FILE [--domain interval|facts] [--entry-state JSON] [--fuel N]
                          [--emit OUT] [--jobs N] [--fallback-top]
    rtlcheck check FILE INVARIANT [--entry-state JSON]
    rtlcheck validate SRC TGT [--live r1,r2]
    rtlcheck cse FILE [--invariant JSON] [--emit OUT]
    rtlcheck poly check|include|project ...
    rtlcheck bench join-scaling|dag-scaling|set-scaling
    rtlcheck gen [--locations N] [--registers R] [--params P]
    rtlcheck run FILE --inputs V ... [--function NAME] [--fuel N]

Exit codes: 0 success, 1 rejection or failure, 2 usage error.
"""

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import tomli

from rtlcheck.analysis.facts import apply_cse, fact_check, fact_kildall
from rtlcheck.analysis.interval import AbsState, IntervalDomain
from rtlcheck.analysis.invariant_io import (
    FACTS,
    INTERVAL,
    abs_state_from_json,
    dump_fact_invariant,
    dump_interval_invariant,
    read_invariants,
    read_json,
    write_json,
)
from rtlcheck.analysis.solver import (
    Failure,
    Invariant,
    check_inductive,
    kildall,
    top_invariant,
)
from rtlcheck.cli import bench
from rtlcheck.cli.report import ExitCode, Report, format_table
from rtlcheck.config import Settings
from rtlcheck.errors import RtlcheckError, UncheckedInvariantError, UsageError
from rtlcheck.ir.cfg import is_renumbered, renumber
from rtlcheck.ir.function import Function
from rtlcheck.ir.generate import random_function
from rtlcheck.ir.interpreter import OutOfFuel, Returned, Trapped, interpret
from rtlcheck.ir.parser import parse_block, parse_program, print_program
from rtlcheck.polycert.farkas import (
    check_entailment,
    check_inclusion,
    fm_project_all,
)
from rtlcheck.polycert.polyio import (
    cert_to_json,
    certs_from_json,
    constraint_from_json,
    parse_variable,
    polyhedron_from_json,
    polyhedron_to_json,
)
from rtlcheck.rtl_logging import init_logging
from rtlcheck.structures.hset import SetArena
from rtlcheck.structures.ptrie import ShareStats
from rtlcheck.symexec.validator import validate

logger = logging.getLogger(__name__)


def read_text(path: Path) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def load_program(path: Path) -> list[Function]:
    """
    Parse a program file and renumber the functions that need it

    Raises
    ------
    UsageError
        on a syntax error or an empty file
    """
    functions = parse_program(read_text(path))
    if not functions:
        raise UsageError(f"{path}: no function")
    result = []
    for f in functions:
        if not is_renumbered(f):
            logger.info(f"function {f.name}: locations renumbered in reverse postorder")
            f = renumber(f)
        result.append(f)
    return result


def parse_registers(text: str) -> list[int]:
    regs = []
    for name in text.replace(",", " ").split():
        if not (name.startswith("r") and name[1:].isdigit() and int(name[1:]) >= 1):
            raise UsageError(f"invalid register {name!r}")
        regs.append(int(name[1:]))
    return regs


@dataclass
class AnalysisResult:
    function: Function
    invariant: Invariant | None
    data: dict[str, Any] | None
    failure: str = ""
    stats: dict[str, int] = field(default_factory=dict)


def analyze_function(
    f: Function,
    domain_name: str,
    entry_state: AbsState | None,
    fuel: int,
    fallback_top: bool,
) -> AnalysisResult:
    """
    Run one engine on one function, then its checker on the result.

    Each call builds its own domain, counters and arenas.
    """
    if domain_name == INTERVAL:
        domain = IntervalDomain(entry_state, stats=ShareStats())
        result = kildall(f, domain, fuel=fuel)
        if isinstance(result, Failure):
            if not fallback_top:
                return AnalysisResult(f, None, None, f"function {f.name}: {result}")
            logger.warning(f"function {f.name}: {result}, falling back to the top invariant")
            result = top_invariant(f, domain.top())
        verdict = check_inductive(f, result, domain.entry_state(), domain)
        data = dump_interval_invariant(f.name, result, domain.entry_state())
        stats = domain.stats.as_dict() | {"picks": result.picks}
    else:
        sets = SetArena()
        solved = fact_kildall(f, fuel=fuel, sets=sets)
        if isinstance(solved, Failure):
            return AnalysisResult(f, None, None, f"function {f.name}: {solved}")
        result, table = solved
        verdict = fact_check(f, result, table)
        data = dump_fact_invariant(f.name, result, table)
        stats = sets.stats.as_dict() | {"picks": result.picks, "facts": len(table)}

    if not verdict:
        return AnalysisResult(f, result, data, f"function {f.name}: checker rejected: {verdict}", stats)
    return AnalysisResult(f, result, data, stats=stats)


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("analyze")
    functions = load_program(args.file)
    entry_state = None
    if args.entry_state is not None:
        if args.domain != INTERVAL:
            raise UsageError("--entry-state only applies to the interval domain")
        entry_state = abs_state_from_json(read_json(args.entry_state))

    def run(f: Function) -> AnalysisResult:
        fuel = args.fuel if args.fuel is not None else settings.fuel_for(len(f))
        return analyze_function(f, args.domain, entry_state, fuel, args.fallback_top)

    if args.jobs > 1 and len(functions) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, functions))
    else:
        results = [run(f) for f in functions]

    invariants = []
    for res in results:
        report.merge_stats(res.function.name, res.stats)
        if res.failure:
            report.fail(res.failure)
        if res.data is None:
            continue
        invariants.append(res.data)
        report.lines.append(f"function {res.function.name}:")
        for loc, state in res.data["states"].items():
            report.lines.append(f"  {loc}: {json.dumps(state)}")

    report.payload["invariants"] = invariants
    if args.emit is not None and invariants:
        write_json(args.emit, invariants[0] if len(invariants) == 1 else invariants)
        report.lines.append(f"invariant written to {args.emit}")
    return report


def cmd_check(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("check")
    functions = {f.name: f for f in load_program(args.file)}
    override = None
    if args.entry_state is not None:
        override = abs_state_from_json(read_json(args.entry_state))

    results = []
    for loaded in read_invariants(args.invariant):
        f = functions.get(loaded.function)
        if f is None:
            raise UsageError(f"no function {loaded.function} in {args.file}")
        if loaded.kind == INTERVAL:
            entry_state = override if override is not None else loaded.entry_state
            domain = IntervalDomain(entry_state)
            verdict = check_inductive(f, loaded.invariant, entry_state, domain)
        else:
            verdict = fact_check(f, loaded.invariant, loaded.table)
        if verdict:
            report.lines.append(f"function {f.name}: ok")
            results.append({"function": f.name, "ok": True})
        else:
            report.fail(f"function {f.name}: {verdict}")
            results.append(
                {
                    "function": f.name,
                    "ok": False,
                    "reason": verdict.reason.value,
                    "edge": list(verdict.edge),
                    "produced": repr(verdict.produced),
                    "claimed": repr(verdict.claimed),
                }
            )
    report.payload["results"] = results
    return report


def cmd_validate(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("validate")
    src = parse_block(read_text(args.src))
    tgt = parse_block(read_text(args.tgt))
    live = parse_registers(args.live) if args.live is not None else None
    verdict = validate(src, tgt, live_out=live)
    report.stats.update(verdict.dag.as_dict())
    report.payload["verdict"] = {
        "equivalent": verdict.equivalent,
        "reason": verdict.reason.value if verdict.reason is not None else None,
        "register": f"r{verdict.register}" if verdict.register is not None else None,
        "source_term": verdict.src_term,
        "target_term": verdict.tgt_term,
    }
    if verdict:
        report.lines.append(str(verdict))
    else:
        report.fail(str(verdict))
    return report


def cmd_cse(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("cse")
    functions = load_program(args.file)
    supplied = {}
    if args.invariant is not None:
        supplied = {loaded.function: loaded for loaded in read_invariants(args.invariant)}

    output = []
    for f in functions:
        if f.name in supplied:
            loaded = supplied[f.name]
            if loaded.kind != FACTS:
                raise UsageError(f"function {f.name}: cse needs a facts invariant")
            inv, table = loaded.invariant, loaded.table
        else:
            fuel = args.fuel if args.fuel is not None else settings.fuel_for(len(f))
            solved = fact_kildall(f, fuel=fuel)
            if isinstance(solved, Failure):
                report.fail(f"function {f.name}: {solved}, left unchanged")
                output.append(f)
                continue
            inv, table = solved
        try:
            transformed = apply_cse(f, inv, table)
        except UncheckedInvariantError as e:
            logger.info(str(e))
            report.fail(f"{e}, left unchanged")
            output.append(f)
            continue
        changed = sum(
            1 for loc, instr in transformed.code.bindings() if f.instr(loc) != instr
        )
        report.merge_stats(f.name, {"replaced": changed})
        output.append(transformed)

    text = print_program(output)
    report.payload["program"] = text
    if args.emit is not None:
        args.emit.parent.mkdir(parents=True, exist_ok=True)
        args.emit.write_text(text, encoding="utf-8")
        report.lines.append(f"program written to {args.emit}")
    else:
        report.lines.append(text.rstrip("\n"))
    return report


def cmd_poly(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report(f"poly {args.poly_command}")
    p = polyhedron_from_json(read_json(args.polyhedron))
    match args.poly_command:
        case "check":
            c = constraint_from_json(read_json(args.constraint))
            certs = certs_from_json(read_json(args.cert))
            if len(certs) != 1:
                raise UsageError("poly check takes a single certificate")
            ok = check_entailment(p, c, certs[0])
            report.payload["entailed"] = ok
            if ok:
                report.lines.append(f"certificate accepted: {c}")
            else:
                report.fail(f"certificate rejected: {c}")
        case "include":
            q = polyhedron_from_json(read_json(args.other))
            certs = certs_from_json(read_json(args.certs))
            ok = check_inclusion(p, q, certs)
            report.payload["included"] = ok
            if ok:
                report.lines.append("inclusion certified")
            else:
                report.fail("inclusion not certified")
        case "project":
            variables = [parse_variable(v) for v in args.eliminate]
            projected, certs = fm_project_all(p, variables)
            # the projection is an untrusted oracle, its certificates are re-checked
            checked = check_inclusion(p, projected, certs)
            report.payload["polyhedron"] = polyhedron_to_json(projected)
            report.payload["certificates"] = [cert_to_json(cert) for cert in certs]
            report.stats["constraints"] = len(projected)
            report.lines.extend(
                f"{c}    # {cert}" for c, cert in zip(projected, certs)
            )
            if not checked:
                report.fail("projection certificates rejected")
            if args.emit is not None:
                write_json(args.emit, report.payload)
                report.lines.append(f"projection written to {args.emit}")
    return report


def cmd_bench(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report(f"bench {args.scenario}")
    config = settings.bench
    touched = args.touched if args.touched is not None else int(config["touched_keys"])
    match args.scenario:
        case "join-scaling":
            sizes = args.sizes or config["join_sizes"]
            rows = bench.join_scaling(sizes, touched)
            sharing = [r.sharing_visited for r in rows]
            naive = [r.naive_visited for r in rows]
            report.lines.extend(
                format_table(
                    ["keys", "touched", "sharing_visited", "naive_visited"],
                    [[r.keys, r.touched, r.sharing_visited, r.naive_visited] for r in rows],
                )
            )
            report.lines.append(f"sharing growth per size step: {bench.growth(sharing)}")
            report.lines.append(f"naive growth per size step: {bench.growth(naive)}")
            report.payload["rows"] = [asdict(r) for r in rows]
        case "dag-scaling":
            lengths = args.sizes or config["chain_lengths"]
            rows = bench.dag_scaling(lengths)
            report.lines.extend(
                format_table(
                    ["length", "nodes", "would_be_tree_size", "equivalent"],
                    [[r.length, r.nodes, r.would_be_tree_size, r.equivalent] for r in rows],
                )
            )
            report.payload["rows"] = [asdict(r) for r in rows]
        case "set-scaling":
            sizes = args.sizes or config["set_sizes"]
            rows = bench.set_scaling(sizes, touched)
            report.lines.extend(
                format_table(
                    ["members", "touched", "shortcut_visited", "naive_visited"],
                    [[r.members, r.touched, r.shortcut_visited, r.naive_visited] for r in rows],
                )
            )
            report.payload["rows"] = [asdict(r) for r in rows]
    return report


def cmd_gen(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("gen")
    rng = random.Random(settings.seed)
    f = random_function(
        rng,
        nb_locations=args.locations,
        nb_registers=args.registers,
        nb_params=args.params,
        name=args.name,
        allow_div=not args.no_div,
    )
    text = print_program([f])
    report.payload["program"] = text
    report.payload["seed"] = settings.seed
    report.lines.append(text.rstrip("\n"))
    return report


def cmd_run(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report("run")
    functions = load_program(args.file)
    if args.function is None:
        f = functions[0]
    else:
        matching = [g for g in functions if g.name == args.function]
        if not matching:
            raise UsageError(f"no function {args.function} in {args.file}")
        f = matching[0]
    fuel = args.fuel if args.fuel is not None else settings.fuel_for(len(f))
    outcome = interpret(f, args.inputs, fuel)
    match outcome:
        case Returned(value):
            report.payload["outcome"] = {"returned": value}
            report.lines.append(f"returned {value}")
        case Trapped(location):
            report.payload["outcome"] = {"trapped": location}
            report.fail(f"trapped at location {location}")
        case OutOfFuel():
            report.payload["outcome"] = {"out_of_fuel": fuel}
            report.fail(f"out of fuel after {fuel} steps")
    return report


COMMANDS = {
    "analyze": cmd_analyze,
    "check": cmd_check,
    "validate": cmd_validate,
    "cse": cmd_cse,
    "poly": cmd_poly,
    "bench": cmd_bench,
    "gen": cmd_gen,
    "run": cmd_run,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtlcheck",
        description="Static analysis and translation validation of register-transfer programs",
    )
    parser.add_argument("--config", type=Path, default=None, help="TOML configuration file")
    parser.add_argument("--seed", type=int, default=None, help="seed of the random generators")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument(
        "--no-timestamp", action="store_true", help="omit the timestamp of JSON reports"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="compute an invariant")
    analyze.add_argument("file", type=Path)
    analyze.add_argument("--domain", choices=[INTERVAL, FACTS], default=INTERVAL)
    analyze.add_argument("--entry-state", type=Path, default=None, help="JSON entry state")
    analyze.add_argument("--fuel", type=int, default=None)
    analyze.add_argument("--emit", type=Path, default=None, help="invariant output file")
    analyze.add_argument("--jobs", type=int, default=1, help="functions analyzed concurrently")
    analyze.add_argument(
        "--fallback-top",
        action="store_true",
        help="emit the top invariant instead of failing when out of fuel",
    )

    check = sub.add_parser("check", help="check an invariant file")
    check.add_argument("file", type=Path)
    check.add_argument("invariant", type=Path)
    check.add_argument("--entry-state", type=Path, default=None)

    validate_parser = sub.add_parser("validate", help="validate a block transformation")
    validate_parser.add_argument("src", type=Path)
    validate_parser.add_argument("tgt", type=Path)
    validate_parser.add_argument("--live", default=None, help="live registers, e.g. r1,r3")

    cse = sub.add_parser("cse", help="common subexpression elimination")
    cse.add_argument("file", type=Path)
    cse.add_argument("--invariant", type=Path, default=None, help="facts invariant to use")
    cse.add_argument("--fuel", type=int, default=None)
    cse.add_argument("--emit", type=Path, default=None, help="program output file")

    poly = sub.add_parser("poly", help="polyhedra certificates")
    poly_sub = poly.add_subparsers(dest="poly_command", required=True)
    poly_check = poly_sub.add_parser("check", help="check one entailment certificate")
    poly_check.add_argument("polyhedron", type=Path)
    poly_check.add_argument("constraint", type=Path)
    poly_check.add_argument("cert", type=Path)
    poly_include = poly_sub.add_parser("include", help="check an inclusion")
    poly_include.add_argument("polyhedron", type=Path)
    poly_include.add_argument("other", type=Path)
    poly_include.add_argument("certs", type=Path)
    poly_project = poly_sub.add_parser("project", help="Fourier-Motzkin projection")
    poly_project.add_argument("polyhedron", type=Path)
    poly_project.add_argument("--eliminate", action="append", required=True)
    poly_project.add_argument("--emit", type=Path, default=None)

    bench_parser = sub.add_parser("bench", help="scaling measurements")
    bench_parser.add_argument("scenario", choices=bench.SCENARIOS)
    bench_parser.add_argument("--sizes", type=int, nargs="+", default=None)
    bench_parser.add_argument("--touched", type=int, default=None)

    gen = sub.add_parser("gen", help="print a random function")
    gen.add_argument("--locations", type=int, default=20)
    gen.add_argument("--registers", type=int, default=6)
    gen.add_argument("--params", type=int, default=2)
    gen.add_argument("--name", default="gen")
    gen.add_argument("--no-div", action="store_true")

    run = sub.add_parser("run", help="interpret a function")
    run.add_argument("file", type=Path)
    run.add_argument("--inputs", type=int, nargs="*", default=[])
    run.add_argument("--function", default=None)
    run.add_argument("--fuel", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Entry point of the ``rtlcheck`` command

    Returns
    -------
    int
        the exit code
    """
    args = build_parser().parse_args(argv)

    try:
        settings = Settings.load(args.config, cli_seed=args.seed)
    except (UsageError, OSError, tomli.TOMLDecodeError) as e:
        init_logging().error(f"invalid configuration: {e}")
        return int(ExitCode.USAGE)

    root = init_logging(timezone=settings.timezone, level=settings.log_level)
    if args.verbose:
        root.setConsoleLevel(logging.DEBUG)
    if settings.log_path is not None:
        root.setFileHandler(settings.log_path)

    try:
        report = COMMANDS[args.command](args, settings)
    except (UsageError, OSError, json.JSONDecodeError) as e:
        root.error(str(e))
        return int(ExitCode.USAGE)
    except RtlcheckError as e:
        root.error(str(e))
        return int(ExitCode.REJECTED)

    if args.json:
        print(report.to_json(timestamp=not args.no_timestamp, timezone=settings.timezone))
    else:
        print(report.to_text())
    return int(report.exit_code)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

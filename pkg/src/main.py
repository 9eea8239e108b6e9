import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from corpus import write_corpus
from formats import (GroupFile, ParseError, format_pea, format_window, load, load_state, parse_window,
                     read_text, write_text)
from homlattice import DecompositionCapError, NonEnumerableConeError, hom_report
from init import (EXIT_ANALYSIS_ERROR, EXIT_AXIOM_VIOLATION, EXIT_OK, EXIT_PARSE_ERROR, GRP_SUFFIX,
                  TOOL_NAME, VERSION, WINDOW_SUFFIX, get_corpus_dir, get_log_root)
from log import setup_logging
from pmv import (ConstructionMismatchError, PmvShapeError, PmvTable, PreconditionError, pea_to_pmv,
                 pmv_states, pmv_to_pea, validate_pmv)
from pogroup import (ExtensionError, MembershipUnknownError, NotAStrongUnitError, PresentationError,
                     WindowRadiusError, WindowTable, check_strong_unit, gamma_interval, make_hom,
                     standard_group, validate_presentation, window_summary, window_table)
from provider import (get_config, provide_fail_fast, provide_json_output, set_fail_fast, set_json_output,
                      set_log_directory, set_seed, update_config)
from rational import make_rng, parse_rational
from report import Timings, build_report, dumps
from riesz import LadderInconsistencyError, WindowTooSmallError, has_rdp2, ladder_report
from statespace import (BarycenterMismatchError, EmptyPolytopeError, NotApplicableError, NotASimplexError,
                        StateOutsidePolytopeError, StateValidationError, classify, representing_measures,
                        state_polytope, state_space_report)
from table import (FiniteTable, InternalConsistencyError, StructuralError, UndefinedDifferenceError,
                   is_commutative, is_lattice, is_symmetric, validate_axioms)

INPUT_ERRORS = (ParseError, StructuralError, PmvShapeError, StateValidationError)
ANALYSIS_ERRORS = (ConstructionMismatchError, PreconditionError, LadderInconsistencyError,
                   WindowTooSmallError, NotASimplexError, StateOutsidePolytopeError, EmptyPolytopeError,
                   BarycenterMismatchError, NotApplicableError, InternalConsistencyError,
                   UndefinedDifferenceError, PresentationError, MembershipUnknownError,
                   NotAStrongUnitError, ExtensionError, WindowRadiusError, NonEnumerableConeError,
                   DecompositionCapError)

STATE_SAMPLES = 25


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Exact analysis of finite and interval pseudo effect algebras")
    parser.add_argument('--version', action='version', version=f"{TOOL_NAME} {VERSION}")
    parser.add_argument('--json', action='store_true', help="print the report as JSON")
    parser.add_argument('--seed', type=int, default=None, help="seed for every random generator")
    parser.add_argument('--fail-fast', action='store_true', help="stop axiom checks at the first violation")
    parser.add_argument('--commute', choices=['symmetric', 'strict'], default=None,
                        help="reading of 'x and y commute'")
    parser.add_argument('--timing', action='store_true', help="embed step timings in the report")
    parser.add_argument('--log-dir', default=None, help="directory for this run's log file")
    parser.add_argument('--verbose', action='store_true',
                        help="show info records on stderr and debug records in the log")
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', help="check the axioms of a table or presentation")
    validate.add_argument('path')

    analyze = commands.add_parser('analyze', help="run analysis pipelines on a table")
    analyze.add_argument('path')
    analyze.add_argument('--riesz', action='store_true', help="decide RIP, RDP0, RDP, RDP1 and RDP2")
    analyze.add_argument('--states', action='store_true', help="enumerate and classify the state space")
    analyze.add_argument('--decompose', metavar='STATE', default=None,
                         help="representing measure of the state in a .state file")
    analyze.add_argument('--pmv', action='store_true', help="pseudo MV-algebra round trip")

    gamma = commands.add_parser('gamma', help="build the interval algebra of a .grp presentation")
    gamma.add_argument('path')
    gamma.add_argument('--radius', type=int, default=None, help="window radius")
    gamma.add_argument('--out', default=None, help="write the table here instead of stdout")

    corpus = commands.add_parser('corpus', help="write the fixture corpus")
    corpus.add_argument('outdir', nargs='?', default=None)

    hom = commands.add_parser('hom', help="lattice operations on homomorphisms of Z^n")
    hom.add_argument('--gens', required=True, help="hom values separated by ';', e.g. \"1 0; 0 1\"")
    hom.add_argument('--at', required=True, help="evaluation point, e.g. \"1 1\"")
    hom.add_argument('--op', choices=['sup', 'inf', 'jordan'], default='sup')
    return parser


def _print_report(report: dict) -> None:
    if provide_json_output():
        print(dumps(report))
        return
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            print(f"{key}:")
            for inner in sorted(value):
                print(f"  {inner}: {value[inner]}")
        else:
            print(f"{key}: {value}")


def _load_table(path: str) -> Tuple[Optional[FiniteTable], dict]:
    """Load any input as a finite table, with the sections describing how it was obtained."""
    loaded = load(path)
    sections: dict = {}
    if isinstance(loaded, PmvTable):
        pmv_report = validate_pmv(loaded)
        sections['pmv_axioms'] = pmv_report
        if not pmv_report.passed:
            return None, sections
        return pmv_to_pea(loaded), sections
    if isinstance(loaded, GroupFile):
        interval = gamma_interval(loaded.group, loaded.unit)
        sections['gamma'] = interval
        if interval.lazy:
            raise NotApplicableError(f"{interval.group.describe()} has no finite interval to analyze")
        return interval.table, sections
    return loaded, sections


def cmd_validate(args) -> Tuple[int, dict]:
    text = read_text(args.path)
    loaded = load(args.path)
    if isinstance(loaded, GroupFile):
        presentation = validate_presentation(loaded.group, raise_on_failure=False)
        sections = {'presentation': presentation}
        code = EXIT_OK if presentation.valid else EXIT_AXIOM_VIOLATION
        if presentation.valid:
            sections['strong_unit'] = check_strong_unit(loaded.group, loaded.unit)
    elif isinstance(loaded, PmvTable):
        axioms = validate_pmv(loaded, fail_fast=provide_fail_fast())
        sections = {'table': {'name': loaded.name, 'size': loaded.size}, 'axioms': axioms}
        code = EXIT_OK if axioms.passed else EXIT_AXIOM_VIOLATION
    else:
        axioms = validate_axioms(loaded)
        sections = {'table': {'name': loaded.name, 'size': loaded.size}, 'axioms': axioms}
        code = EXIT_OK if axioms.passed else EXIT_AXIOM_VIOLATION
    return code, build_report('validate', sections, args.path, text)


def _analyze_window(args, text: str, timings: Timings) -> Tuple[int, dict]:
    table, unknown = parse_window(text, args.path)
    window = WindowTable(table=table, elements=(), unknown=unknown)
    with timings.step('window'):
        sections = {'window': window_summary(window)}
    return EXIT_OK, build_report('analyze', sections, args.path, text, timings)


def cmd_analyze(args) -> Tuple[int, dict]:
    text = read_text(args.path)
    timings = Timings()
    if Path(args.path).suffix == WINDOW_SUFFIX:
        return _analyze_window(args, text, timings)

    with timings.step('load'):
        table, sections = _load_table(args.path)
    if table is None:
        return EXIT_AXIOM_VIOLATION, build_report('analyze', sections, args.path, text, timings)

    with timings.step('axioms'):
        axioms = validate_axioms(table)
    sections['table'] = {'name': table.name, 'size': table.size}
    sections['axioms'] = axioms
    if not axioms.passed:
        logging.error(f"{args.path} violates {axioms.tags()}")
        return EXIT_AXIOM_VIOLATION, build_report('analyze', sections, args.path, text, timings)

    run_all = not (args.riesz or args.states or args.decompose or args.pmv)
    if args.riesz or run_all:
        with timings.step('riesz'):
            sections['riesz'] = ladder_report(table)
            sections['properties'] = {
                'commutative': is_commutative(table),
                'symmetric': is_symmetric(table),
                'lattice': is_lattice(table),
            }
    if args.states or run_all:
        with timings.step('states'):
            sections['states'] = state_space_report(table, make_rng(), STATE_SAMPLES)
    if args.decompose:
        with timings.step('decompose'):
            state = load_state(args.decompose, table)
            polytope = state_polytope(table)
            witness = representing_measures(polytope, state)
            sections['decomposition'] = {
                'state': state.to_list(),
                'class': classify(polytope).kind.value,
                'representation': witness,
                'reconstructs': witness.measure.barycenter() == state,
            }
    if args.pmv or run_all:
        with timings.step('pmv'):
            sections['pmv'] = _pmv_round_trip(table)
    return EXIT_OK, build_report('analyze', sections, args.path, text, timings)


def _pmv_round_trip(table: FiniteTable) -> dict:
    # pseudo MV-algebras need 0 ≠ 1
    if table.size < 2 or not has_rdp2(table, cap=1).holds:
        return {'applicable': False}
    pmv = pea_to_pmv(table)
    image = pmv_to_pea(pmv)
    return {
        'applicable': True,
        'axioms': validate_pmv(pmv),
        'round_trip': image.plus == table.plus,
        'states_coincide': pmv_states(pmv).vertices == state_polytope(table).vertices,
    }


def cmd_gamma(args) -> Tuple[int, dict]:
    text = read_text(args.path)
    loaded = load(args.path)
    if not isinstance(loaded, GroupFile):
        raise ParseError(f"Expected a {GRP_SUFFIX} presentation", 0, 0, args.path)
    radius = get_config().window_radius if args.radius is None else args.radius
    group, unit = loaded.group, loaded.unit

    validate_presentation(group, radius)
    strong_unit = check_strong_unit(group, unit)
    interval = gamma_interval(group, unit)
    header = [f"{TOOL_NAME} {VERSION} gamma", f"source {Path(args.path).name}",
              f"Gamma({group.describe()}, {','.join(map(str, unit))})"]
    sections = {'gamma': interval, 'strong_unit': strong_unit}
    if interval.lazy:
        window = window_table(interval, radius)
        header.append(f"lazy interval; window radius {radius}; unknown sums leave the window")
        output = format_window(window, header)
        sections['window'] = window_summary(window)
    else:
        output = format_pea(interval.table, header)

    if args.out:
        write_text(args.out, output)
        sections['output'] = Path(args.out).name
    elif not provide_json_output():
        print(output, end='')
        return EXIT_OK, None
    else:
        sections['output'] = output
    return EXIT_OK, build_report('gamma', sections, args.path, text)


def cmd_corpus(args) -> Tuple[int, dict]:
    directory = Path(args.outdir) if args.outdir else get_corpus_dir()
    written = write_corpus(directory)
    sections = {'corpus': {'count': len(written), 'files': sorted(p.name for p in written)}}
    return EXIT_OK, build_report('corpus', sections)


def _parse_vector(text: str, option: str) -> List:
    try:
        return [parse_rational(token) for token in text.split()]
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{option}: {e}", 1, 1, option)


def cmd_hom(args) -> Tuple[int, dict]:
    rows = [_parse_vector(chunk, '--gens') for chunk in args.gens.split(';') if chunk.strip()]
    at = _parse_vector(args.at, '--at')
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise ParseError("--gens: every hom needs the same number of values", 1, 1, '--gens')
    if len(at) != len(rows[0]) or any(x.denominator != 1 for x in at):
        raise ParseError(f"--at: expected {len(rows[0])} integers", 1, 1, '--at')
    group = standard_group(len(rows[0]))
    fs = [make_hom(group, row) for row in rows]
    sections = {'hom': hom_report(fs, tuple(int(x) for x in at), group, args.op)}
    return EXIT_OK, build_report('hom', sections)


COMMANDS = {
    'validate': cmd_validate,
    'analyze': cmd_analyze,
    'gamma': cmd_gamma,
    'corpus': cmd_corpus,
    'hom': cmd_hom,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    # 現在の日時を取得
    now = datetime.now()

    # ファイル名として安全な形式に日時を整形
    # 例：2026-10-18_17-30-29
    current_time = now.strftime("%Y-%m-%d_%H-%M-%S")

    # ログを保存するディレクトリを指定
    log_directory = Path(args.log_dir) if args.log_dir else get_log_root() / current_time

    # ログの設定
    setup_logging(log_directory, verbose=args.verbose)
    set_log_directory(str(log_directory))

    set_json_output(args.json)
    set_fail_fast(args.fail_fast)
    if args.seed is not None:
        set_seed(args.seed)
    if args.commute is not None:
        update_config(commute_mode=args.commute)
    if args.timing:
        update_config(include_timing=True)

    logging.info(f"{TOOL_NAME} {VERSION}: {args.command}")
    try:
        code, report = COMMANDS[args.command](args)
    except INPUT_ERRORS as e:
        logging.error(f"Input error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except ANALYSIS_ERRORS as e:
        logging.error(f"Analysis failed: {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ANALYSIS_ERROR
    except OSError as e:
        logging.error(f"IO error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ANALYSIS_ERROR

    if report is not None:
        _print_report(report)
    return code


if __name__ == '__main__':
    sys.exit(main())

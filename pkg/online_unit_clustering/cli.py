# -*- coding: utf-8 -*-
""" Command line front end.

Exit codes: 0 success / VERIFIED / target met, 1 FAILED / target not met, 2 INCOMPLETE (tree or resources),
64 usage error, 65 data error, 66 missing input file. Summaries go to stdout as `key=value` lines, logging to
stderr.
"""

import logging
import sys
from argparse import ArgumentParser

from online_unit_clustering.adversary.dot_export import export_dot
from online_unit_clustering.adversary.playback import play, replay_witness
from online_unit_clustering.adversary.strategy_tree import save_tree
from online_unit_clustering.algorithms import ALGORITHMS, get_algorithm
from online_unit_clustering.errors import (BruteForceLimitError, IllegalMoveError, OffGridError, TreeIncompleteError,
                                           TreeValidationError)
from online_unit_clustering.io import load_points_file, read_text_file, resolve_tree, write_text_file
from online_unit_clustering.model import render_state
from online_unit_clustering.offline_opt import cross_check_opt, opt_bruteforce, opt_cover
from online_unit_clustering.search.candidate_ratios import (best_known_lower_bound_met, candidate_ratios,
                                                            known_bounds, nearest_candidate_below)
from online_unit_clustering.search.forced_ratio_search import DEFAULT_NODE_CAP, SearchConfig, best_forced_ratio
from online_unit_clustering.trace import dump_trace, load_trace, replay_trace
from online_unit_clustering.util import DEFAULT_SCALE, format_position, format_ratio, parse_position, parse_ratio
from online_unit_clustering.verification.verifier import (Verdict, VerifyOptions, format_leaf_stats, leaf_stats,
                                                          report_to_json, verify)

logger = logging.getLogger("OnlineUnitClustering")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INCOMPLETE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66

VERDICT_EXIT_CODES = {Verdict.VERIFIED: EXIT_OK, Verdict.FAILED: EXIT_FAILED, Verdict.INCOMPLETE: EXIT_INCOMPLETE}


class CommandParser(ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def positive_int(text):
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {text}")
    return value


def _print(key, value):
    print(f"{key}={value}")


def cmd_verify(flags):
    tree = resolve_tree(flags.tree)
    options = VerifyOptions(prune=not flags.no_prune, node_cap=flags.node_cap, jobs=flags.jobs)
    report = verify(tree, flags.target, options)

    print(f"{report.verdict.value} min={format_ratio(report.overall_min_ratio)}")
    _print("target", format_ratio(report.target))
    _print("witness_leaf", report.witness_leaf or "none")
    _print("witness", ",".join(report.witness))
    _print("paths", report.paths)
    _print("explored_nodes", report.explored_nodes)
    if report.reason is not None:
        _print("reason", report.reason)
    for item in report.incomplete:
        _print("unmatched", f"{item.node_id}:{item.decision}")
    for node_id in report.unreached:
        _print("unreached", node_id)
    mismatches = [s for s in leaf_stats(report) if not s.matches]
    _print("leaf_mismatches", len(mismatches))
    if flags.leaf_stats:
        print(format_leaf_stats(leaf_stats(report)))

    if flags.report:
        write_text_file(flags.report, report_to_json(report))
        logger.info(f"report written to {flags.report}")

    if flags.replay_witness and report.witness:
        trace = replay_witness(tree, report.witness)
        _print("replay_leaf", trace.leaf_id)
        _print("replay_ratio", format_ratio(trace.ratio))
        _print("replay_matches", str(trace.ratio == report.overall_min_ratio and
                                     trace.leaf_id == report.witness_leaf).lower())
        print(render_state(trace.final_state))

    return VERDICT_EXIT_CODES[report.verdict]


def _print_trace_summary(trace):
    _print("on_cost", trace.on_cost)
    _print("opt_cost", trace.opt_cost)
    _print("ratio", format_ratio(trace.ratio))


def cmd_play(flags):
    tree = resolve_tree(flags.tree)
    algorithm = get_algorithm(flags.algorithm)
    trace = play(tree, algorithm)

    _print("algorithm", algorithm.name)
    _print("leaf", trace.leaf_id)
    _print("tag", trace.leaf_tag)
    _print_trace_summary(trace)
    if trace.covered_gives:
        _print("covered_gives", ",".join(str(step) for step in trace.covered_gives))
    if flags.show_states:
        print(render_state(trace.final_state))
    if flags.trace:
        write_text_file(flags.trace, dump_trace(trace))
    return EXIT_OK


def cmd_replay(flags):
    trace = replay_trace(load_trace(read_text_file(flags.trace), flags.scale))
    _print("steps", len(trace.events))
    _print_trace_summary(trace)
    _print("replay", "ok")
    return EXIT_OK


def cmd_opt(flags):
    if flags.cross_check:
        mismatches = cross_check_opt(trials=flags.cross_check, scale=flags.scale, seed=flags.seed)
        _print("trials", flags.cross_check)
        _print("mismatches", len(mismatches))
        for points, greedy, brute in mismatches[:10]:
            logger.error(f"greedy {greedy} != brute force {brute} on "
                         f"{[format_position(p, flags.scale) for p in points]}")
        return EXIT_OK if not mismatches else EXIT_FAILED

    if not flags.points:
        flags.parser.error("--points is required unless --cross-check is given")
    points = load_points_file(flags.points, flags.scale)
    if flags.method == "bruteforce":
        _print("count", opt_bruteforce(points, flags.scale))
        return EXIT_OK

    result = opt_cover(points, flags.scale)
    _print("count", result.count)
    _print("intervals", " ".join(f"[{format_position(lo, flags.scale)},{format_position(hi, flags.scale)}]"
                                  for lo, hi in result.intervals))
    return EXIT_OK


def cmd_search(flags):
    if flags.list_candidates:
        for x, y in candidate_ratios(max_x=flags.max_x):
            _print("candidate", f"{x}/{y}")
        return EXIT_OK

    try:
        config = SearchConfig(scale=flags.scale, grid_step=parse_position(flags.grid_step, flags.scale),
                              window=parse_position(flags.window, flags.scale), max_points=flags.max_points,
                              target=flags.target, node_cap=flags.node_cap, jobs=flags.jobs,
                              prune=not flags.no_prune, memo=not flags.no_memo)
    except ValueError as e:
        flags.parser.error(str(e))

    result = best_forced_ratio(config)
    _print("value", format_ratio(result.value))
    _print("exhaustive", str(result.exhaustive).lower())
    if result.target_met is not None:
        _print("target_met", str(result.target_met).lower())
    _print("explored", result.explored)
    _print("memo_hits", result.memo_hits)
    nearest = nearest_candidate_below(result.value)
    if nearest is not None:
        _print("nearest_candidate", f"{nearest[0]}/{nearest[1]}")
    known = best_known_lower_bound_met(result.value)
    if known is not None:
        _print("meets_known_lower_bound", format_ratio(known.ratio))

    if flags.emit_tree:
        if result.strategy is None:
            logger.error("no strategy tree available to emit")
            return EXIT_INCOMPLETE
        write_text_file(flags.emit_tree, save_tree(result.strategy))
        logger.info(f"strategy tree written to {flags.emit_tree}")

    if config.target is not None and not result.target_met:
        return EXIT_FAILED
    return EXIT_OK


def cmd_export(flags):
    tree = resolve_tree(flags.tree)
    text = export_dot(tree) if flags.format == "dot" else save_tree(tree)
    if flags.out:
        write_text_file(flags.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bounds(flags):
    for bound in known_bounds():
        _print(bound.kind, f"{format_ratio(bound.ratio)} ({bound.year}, {bound.note})")
    for x, y in candidate_ratios(max_x=flags.max_x):
        _print("candidate", f"{x}/{y}")
    return EXIT_OK


def build_parser():
    parser = CommandParser(prog="online-unit-clustering",
                           description="lower bounds for one-dimensional online unit clustering")
    parser.add_argument('--verbose', action='store_true', help="log progress at INFO level")
    parser.add_argument('--debug', action='store_true', help="log every expansion at DEBUG level")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    p = subparsers.add_parser("verify", help="check that a strategy tree forces a target ratio")
    p.add_argument('--tree', type=str, required=True, help="'builtin:kk13' or the path to a strategy tree JSON file")
    p.add_argument('--target', type=parse_ratio, required=True, help="ratio to verify, e.g. 13/8")
    p.add_argument('--report', type=str, default=None, help="write the JSON report to this path")
    p.add_argument('--jobs', type=positive_int, default=1, help="number of threads used for the enumeration")
    p.add_argument('--no-prune', action='store_true', help="disable dominance pruning")
    p.add_argument('--node-cap', type=positive_int, default=10 ** 7, help="maximum number of explored nodes")
    p.add_argument('--leaf-stats', action='store_true', help="print computed vs. expected minimum per leaf")
    p.add_argument('--replay-witness', action='store_true',
                   help="replay the witness decisions through the tree and print the final clusters")
    p.set_defaults(func=cmd_verify, parser=p)

    p = subparsers.add_parser("play", help="play a strategy tree against an online algorithm")
    p.add_argument('--algorithm', type=str, required=True, choices=sorted(ALGORITHMS), help="online algorithm")
    p.add_argument('--tree', type=str, default="builtin:kk13", help="'builtin:kk13' or a strategy tree JSON file")
    p.add_argument('--trace', type=str, default=None, help="write the JSON-lines trace to this path")
    p.add_argument('--show-states', action='store_true', help="print the final clusters with their reach")
    p.set_defaults(func=cmd_play, parser=p)

    p = subparsers.add_parser("replay", help="re-apply a JSON-lines trace and check its costs")
    p.add_argument('--trace', type=str, required=True, help="trace file written by 'play --trace'")
    p.add_argument('--scale', type=positive_int, default=DEFAULT_SCALE, help="grid steps per unit length")
    p.set_defaults(func=cmd_replay, parser=p)

    p = subparsers.add_parser("opt", help="offline optimum of a point file")
    p.add_argument('--points', type=str, default=None, help="file with one decimal coordinate per line")
    p.add_argument('--method', type=str, default="greedy", choices=["greedy", "bruteforce"],
                   help="greedy sweep or the brute force oracle")
    p.add_argument('--scale', type=positive_int, default=DEFAULT_SCALE, help="grid steps per unit length")
    p.add_argument('--cross-check', type=positive_int, default=None,
                   help="compare greedy and brute force on this many random multisets instead")
    p.add_argument('--seed', type=int, default=0, help="seed of the random multisets")
    p.set_defaults(func=cmd_opt, parser=p)

    p = subparsers.add_parser("search", help="search grid-restricted adversaries for forced ratios")
    p.add_argument('--scale', type=positive_int, default=DEFAULT_SCALE, help="grid steps per unit length")
    p.add_argument('--grid-step', type=str, default="0.5", help="distance of adjacent candidate positions")
    p.add_argument('--window', type=str, default="4", help="width of the initial window [0, W]")
    p.add_argument('--max-points', type=positive_int, default=4, help="number of points the adversary may give")
    p.add_argument('--target', type=parse_ratio, default=None, help="stop once this ratio is forced")
    p.add_argument('--jobs', type=positive_int, default=1, help="number of threads for the root moves")
    p.add_argument('--emit-tree', type=str, default=None, help="write the forcing strategy tree to this path")
    p.add_argument('--node-cap', type=positive_int, default=DEFAULT_NODE_CAP, help="maximum number of expansions")
    p.add_argument('--no-prune', action='store_true', help="disable alpha-beta and bound pruning")
    p.add_argument('--no-memo', action='store_true', help="disable the transposition table")
    p.add_argument('--list-candidates', action='store_true',
                   help="only list the ratios x/y strictly between 8/5 and 5/3")
    p.add_argument('--max-x', type=positive_int, default=34, help="largest x for --list-candidates")
    p.set_defaults(func=cmd_search, parser=p)

    p = subparsers.add_parser("export", help="render a strategy tree as DOT or JSON")
    p.add_argument('--tree', type=str, required=True, help="'builtin:kk13' or a strategy tree JSON file")
    p.add_argument('--format', type=str, default="dot", choices=["dot", "json"], help="output format")
    p.add_argument('--out', type=str, default=None, help="output path, stdout if omitted")
    p.set_defaults(func=cmd_export, parser=p)

    p = subparsers.add_parser("bounds", help="list published bounds and candidate ratios")
    p.add_argument('--max-x', type=positive_int, default=34, help="largest x of the candidate ratios x/y")
    p.set_defaults(func=cmd_bounds, parser=p)
    return parser


def main(argv=None):
    parser = build_parser()
    flags = parser.parse_args(argv)
    level = logging.DEBUG if flags.debug else logging.INFO if flags.verbose else logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        return flags.func(flags)
    except FileNotFoundError as e:
        logger.error(f"missing input file: {e.filename}")
        return EXIT_NO_INPUT
    except (OffGridError, TreeValidationError, TreeIncompleteError, IllegalMoveError, BruteForceLimitError) as e:
        logger.error(str(e))
        return EXIT_DATA
    except ValueError as e:
        # unknown builtin trees, malformed points or trace files
        logger.error(str(e))
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

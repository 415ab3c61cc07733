from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

from sqlalchemy.exc import SQLAlchemyError

from . import models  # noqa: F401  (регистрирует таблицы кэша)
from .config import log_configuration, settings
from .db import get_db
from .errors import CheckFailure, GraphLcpError
from .services.checker import run_checks
from .services.graph import graph_fingerprint, load_graph
from .services.index_store import (
    cached_document,
    document_to_json,
    format_lcp,
    index_from_document,
    index_to_document,
    load_document,
    store_document,
)
from .services.matching import build_ms_index, matching_statistics, pattern_symbols


logger = logging.getLogger(__name__)

DUMP_TARGETS = ("lcp-min", "lcp-max", "lcp-joint", "order", "chains")


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with 1; exit 2 is reserved for internal-consistency failures."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(prog=settings.app_name, description="Graph LCP arrays, co-lex width and matching statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="build an index document from a graph file")
    build.add_argument("graph_file")
    build.add_argument("--augment-sentinel", action="store_true", help="add a $ source for in-degree-0 nodes")
    build.add_argument("--edge-labeled", action="store_true", help="input has labels on edges")
    build.add_argument("--out", help="output path (default: stdout)")
    build.add_argument("--timings", action="store_true", help="record per-phase timings (output no longer byte-stable)")

    ms = sub.add_parser("ms", help="matching statistics for one pattern per line")
    ms.add_argument("index_file")
    ms.add_argument("patterns_file", nargs="?", default="-")

    dump = sub.add_parser("dump", help="print arrays stored in an index document")
    dump.add_argument("index_file")
    dump.add_argument("--what", required=True, help=" | ".join(DUMP_TARGETS))

    check = sub.add_parser("check", help="cross-check an index against brute-force oracles")
    check.add_argument("graph_file", help="graph file or index document")
    check.add_argument("--patterns", type=int, default=settings.check_patterns)
    check.add_argument("--seed", type=int, default=1)
    check.add_argument("--max-length", type=int, default=settings.check_max_pattern_length)
    check.add_argument("--augment-sentinel", action="store_true")
    check.add_argument("--edge-labeled", action="store_true")
    return parser


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise GraphLcpError(f"cannot read {path}: {exc}") from exc


def cmd_build(args: argparse.Namespace) -> int:
    graph = load_graph(_read_text(args.graph_file), edge_labeled=args.edge_labeled, augment=args.augment_sentinel)
    fingerprint = graph_fingerprint(graph)
    use_cache = bool(settings.index_cache_url) and not args.timings

    document_json = None
    if use_cache:
        try:
            with get_db(settings.index_cache_url) as db:
                document_json = cached_document(db, fingerprint)
        except SQLAlchemyError as exc:
            logger.warning("⚠️ Index cache unavailable, building without it: %s", exc)
            use_cache = False

    if document_json is None:
        index = build_ms_index(graph)
        document_json = document_to_json(index_to_document(index, with_timings=args.timings))
        if use_cache:
            try:
                with get_db(settings.index_cache_url) as db:
                    store_document(db, fingerprint, document_json)
            except SQLAlchemyError as exc:
                logger.warning("⚠️ Could not cache index %s: %s", fingerprint[:12], exc)

    if args.out:
        Path(args.out).write_text(document_json, encoding="utf-8")
        logger.info("💾 Index written to %s", args.out)
    else:
        sys.stdout.write(document_json)
    return 0


def cmd_ms(args: argparse.Namespace) -> int:
    index = index_from_document(load_document(_read_text(args.index_file)))
    lines = _read_text(args.patterns_file).splitlines()
    integer_labels = index.graph.integer_labels

    def answer(line: str) -> str:
        values = matching_statistics(index, pattern_symbols(line, integer_labels)).values
        return " ".join(str(v) for v in values)

    # map() сохраняет порядок входа
    with ThreadPoolExecutor(max_workers=max(1, settings.ms_workers)) as pool:
        answers = list(pool.map(answer, lines))

    out = [f"{lineno}\t{line}\t{values}\n" for lineno, (line, values) in enumerate(zip(lines, answers), 1)]
    sys.stdout.write("".join(out))
    return 0


def cmd_dump(args: argparse.Namespace) -> int:
    if args.what not in DUMP_TARGETS:
        raise GraphLcpError(f"unknown --what {args.what!r}; expected one of {', '.join(DUMP_TARGETS)}")
    doc = load_document(_read_text(args.index_file))

    if args.what == "order":
        lines = [f"{e.rank}\t{e.node}\t{e.side}" for e in doc.order]
    elif args.what == "chains":
        lines = [f"{cid}\t{' '.join(str(u) for u in chain)}" for cid, chain in enumerate(doc.chains.chains)]
    else:
        values = {"lcp-min": doc.lcp_min, "lcp-max": doc.lcp_max, "lcp-joint": doc.lcp_joint}[args.what]
        lines = [format_lcp(v) for v in values]

    sys.stdout.write("".join(f"{line}\n" for line in lines))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    text = _read_text(args.graph_file)
    if text.lstrip().startswith("{"):
        index = index_from_document(load_document(text))
    else:
        index = build_ms_index(load_graph(text, edge_labeled=args.edge_labeled, augment=args.augment_sentinel))

    report = run_checks(
        index,
        patterns=args.patterns,
        seed=args.seed,
        max_pattern_length=args.max_length,
        rmq_sample_pairs=settings.rmq_sample_pairs,
    )
    sys.stdout.write(report.summary() + "\n")
    return 0


COMMANDS = {"build": cmd_build, "ms": cmd_ms, "dump": cmd_dump, "check": cmd_check}


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level="DEBUG" if settings.debug else settings.log_level,
        format='%(asctime)s | %(levelname)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
    )
    if settings.debug:
        log_configuration(settings)
    args = build_parser().parse_args(argv)
    logger.info("🎯 %s %s", settings.app_name, args.command)

    try:
        return COMMANDS[args.command](args)
    except CheckFailure as exc:
        sys.stdout.write(json.dumps(exc.counterexample, indent=2, ensure_ascii=False) + "\n")
        return exc.exit_code
    except GraphLcpError as exc:
        logger.error("❌ %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

from __future__ import annotations

import itertools
import logging
import string
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..errors import CheckFailure, ConsistencyError
from ..schemas import CheckReport
from .colex import Item, Ordering, Side, compare_items, item_id, item_prefix_oracle
from .graph import SENTINEL, LabeledGraph, Symbol, augment_with_sentinel, build_graph, serialize_graph, symbol_key
from .lcp import INF, LcpValue, common_prefix_length, lcp_between, lcp_pair
from .matching import (
    MSIndex,
    OccurrenceSet,
    exact_occurrences,
    matching_statistics,
    ms_oracle,
    occurrence_nodes,
    segments_of,
)


logger = logging.getLogger(__name__)


def random_graph(
    rng: np.random.Generator,
    max_nodes: int = 30,
    max_edges: int = 120,
    max_sigma: int = 4,
) -> LabeledGraph:
    """Random node-labeled graph, sentinel-augmented when it has sources; n <= max_nodes, e <= max_edges."""
    n0 = int(rng.integers(1, max(max_nodes, 2)))
    sigma = int(rng.integers(1, max_sigma + 1))
    alphabet = string.ascii_lowercase[:sigma]
    labels = [alphabet[k] for k in rng.integers(0, sigma, size=n0)]

    # оставляем место под рёбра сентинела
    budget = max(0, min(max_edges - (n0 + 1), n0 * n0))
    e = int(rng.integers(0, budget + 1))
    cells = rng.choice(n0 * n0, size=e, replace=False)
    edges = [(int(c) // n0, int(c) % n0) for c in cells]

    g = build_graph(labels, edges)
    if g.sources():
        g = augment_with_sentinel(g)
    return g


def absent_symbol(g: LabeledGraph) -> Symbol:
    if g.integer_labels:
        return max((s for s in g.labels if s != SENTINEL), default=0) + 1
    return next(c for c in "zyxwvu~?!" if c not in g.labels)


def random_pattern(rng: np.random.Generator, g: LabeledGraph, max_length: int) -> Tuple[Symbol, ...]:
    pool = [s for s in g.alphabet if s != SENTINEL] or [absent_symbol(g)]
    missing = absent_symbol(g)
    length = int(rng.integers(0, max_length + 1))
    out = []
    for _ in range(length):
        if rng.random() < 0.05:
            out.append(missing)
        else:
            out.append(pool[int(rng.integers(0, len(pool)))])
    return tuple(out)


def _show(g: LabeledGraph, pattern: Sequence[Symbol]) -> Any:
    return list(pattern) if g.integer_labels else "".join(pattern)


def _show_lcp(value: LcpValue) -> Any:
    return None if value == INF else int(value)


def _fail(check: str, g: LabeledGraph, **details: Any) -> CheckFailure:
    counterexample: Dict[str, Any] = {"check": check, "graph": serialize_graph(g)}
    counterexample.update(details)
    logger.error("❌ %s check failed: %s", check, details)
    return CheckFailure(check, counterexample)


def _oracle_prefixes(g: LabeledGraph, length: int) -> Dict[int, Tuple[Symbol, ...]]:
    return {
        item_id(Item(u, side)): item_prefix_oracle(g, Item(u, side), length)
        for u in range(g.n)
        for side in (Side.MIN, Side.MAX)
    }


def check_order(x: MSIndex) -> None:
    g, o = x.graph, x.order
    length = 2 * g.n + 2
    prefixes = _oracle_prefixes(g, length)
    keys = {iid: tuple(symbol_key(s) for s in p) for iid, p in prefixes.items()}

    if o.rounds > 2 * g.n:
        raise _fail("order", g, rounds=o.rounds, limit=2 * g.n)

    for item in o.sorted:
        if o.prefix(item, length) != prefixes[item_id(item)]:
            raise _fail("order", g, item=[item.node, item.side.name], reason="tail links disagree with oracle prefix")

    for a, b in itertools.combinations(o.sorted, 2):
        ka, kb = keys[item_id(a)], keys[item_id(b)]
        expected = Ordering.LT if ka < kb else Ordering.GT if ka > kb else Ordering.EQ
        actual = compare_items(o, a, b)
        if actual != expected:
            raise _fail(
                "order", g,
                items=[[a.node, a.side.name], [b.node, b.side.name]],
                expected=expected.value, actual=actual.value,
            )


def check_lcp(x: MSIndex, rng: np.random.Generator, sample_pairs: int) -> None:
    g, o = x.graph, x.order
    length = 2 * g.n + 2
    prefixes = _oracle_prefixes(g, length)
    size = 2 * g.n

    all_pairs = size * (size - 1) // 2
    if all_pairs <= sample_pairs:
        pairs = list(itertools.combinations(range(1, size + 1), 2))
    else:
        pairs = []
        while len(pairs) < sample_pairs:
            i, j = sorted(int(v) for v in rng.choice(size, size=2, replace=False) + 1)
            pairs.append((i, j))

    memo: Dict = {}
    for i, j in pairs:
        a, b = o.item_at(i), o.item_at(j)
        common = common_prefix_length(prefixes[item_id(a)], prefixes[item_id(b)])
        expected = INF if common == length else common
        direct = lcp_pair(o, a, b, memo)
        via_rmq = lcp_between(x.lcp, o, i, j)
        if not (direct == via_rmq == expected) or (direct != INF and direct > 2 * g.n + 1):
            raise _fail(
                "rmq", g, position=[i, j],
                expected=_show_lcp(expected), lcp_pair=_show_lcp(direct), lcp_between=_show_lcp(via_rmq),
            )


def check_patterns(x: MSIndex, rng: np.random.Generator, patterns: int, max_length: int, report: CheckReport) -> None:
    g = x.graph

    for _ in range(patterns):
        w = random_pattern(rng, g, max_length)

        def audit(window: Tuple[Symbol, ...], occ: OccurrenceSet) -> None:
            exact = exact_occurrences(g, window)
            if set(occurrence_nodes(x, occ)) != exact or occ.nonempty_segments > x.chains.p:
                raise _fail("convexity", g, pattern=_show(g, w), window=_show(g, window), reason="occurrence set differs")
            try:
                segments_of(x, sorted(exact))
            except ConsistencyError as exc:
                raise _fail("convexity", g, pattern=_show(g, w), window=_show(g, window), reason=str(exc)) from exc

        try:
            got = matching_statistics(x, w, observer=audit).values
        except ConsistencyError as exc:
            raise _fail("convexity", g, pattern=_show(g, w), reason=str(exc)) from exc

        expected = ms_oracle(g, w).values
        if got != expected:
            position = next(k for k, (p, q) in enumerate(zip(got, expected)) if p != q)
            raise _fail("ms", g, pattern=_show(g, w), position=position, expected=list(expected), actual=list(got))
        report.ms_ok += 1


def run_checks(
    x: MSIndex,
    patterns: int,
    seed: int,
    max_pattern_length: int = 40,
    rmq_sample_pairs: int = 1000,
) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport(patterns=patterns)

    logger.info("🧪 Order vs prefix oracles (L=%s)", 2 * x.graph.n + 2)
    check_order(x)
    logger.info("🧪 LCP pairs vs RMQ")
    check_lcp(x, rng, rmq_sample_pairs)
    logger.info("🧪 %s random patterns (seed=%s)", patterns, seed)
    check_patterns(x, rng, patterns, max_pattern_length, report)

    logger.info("✅ %s", report.summary())
    return report


def random_corpus(seed: int, count: int, **kwargs: Any) -> List[LabeledGraph]:
    rng = np.random.default_rng(seed)
    return [random_graph(rng, **kwargs) for _ in range(count)]

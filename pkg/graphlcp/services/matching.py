from __future__ import annotations

import logging
import re
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..errors import ConsistencyError, GraphValidationError, IndexBuildError
from .colex import JointColexOrder, compute_joint_order
from .graph import LabeledGraph, Symbol, graph_fingerprint, validate
from .lcp import LcpArrays, build_lcp_arrays
from .width import ChainDecomposition, compute_width


logger = logging.getLogger(__name__)

Segment = Optional[Tuple[int, int]]

_INT_TOKEN = re.compile(r"-?\d+", re.ASCII)


@dataclass(frozen=True)
class OccurrenceSet:
    """At most one [lo, hi] range of chain positions per chain."""

    segments: Tuple[Segment, ...]

    @property
    def size(self) -> int:
        return sum(seg[1] - seg[0] + 1 for seg in self.segments if seg is not None)

    @property
    def nonempty_segments(self) -> int:
        return sum(1 for seg in self.segments if seg is not None)

    def is_empty(self) -> bool:
        return all(seg is None for seg in self.segments)


@dataclass(frozen=True)
class MSResult:
    values: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class MSIndex:
    graph: LabeledGraph
    order: JointColexOrder
    lcp: LcpArrays
    chains: ChainDecomposition
    label_out: Dict[Tuple[int, Symbol], Tuple[int, ...]]
    fingerprint: str
    timings: Dict[str, float] = field(default_factory=dict)


def _label_out(g: LabeledGraph) -> Dict[Tuple[int, Symbol], Tuple[int, ...]]:
    transitions: Dict[Tuple[int, Symbol], List[int]] = defaultdict(list)
    for src, dst in g.edges:
        transitions[src, g.labels[dst]].append(dst)
    return {key: tuple(sorted(dsts)) for key, dsts in transitions.items()}


def build_ms_index(g: LabeledGraph) -> MSIndex:
    if g.n == 0:
        raise IndexBuildError("nothing to index: the graph has no nodes")
    report = validate(g)
    if not report.ok:
        raise GraphValidationError(report)

    logger.info("🔨 Building index: n=%s e=%s sigma=%s", g.n, g.e, g.sigma)
    timings: Dict[str, float] = {}

    started = time.perf_counter()
    order = compute_joint_order(g)
    timings["order"] = time.perf_counter() - started

    started = time.perf_counter()
    lcp = build_lcp_arrays(order)
    timings["lcp"] = time.perf_counter() - started

    started = time.perf_counter()
    chains = compute_width(order)
    timings["width"] = time.perf_counter() - started

    index = MSIndex(
        graph=g,
        order=order,
        lcp=lcp,
        chains=chains,
        label_out=_label_out(g),
        fingerprint=graph_fingerprint(g),
        timings=timings,
    )
    _check_components(index)
    logger.info("✅ Index ready: p=%s, %s rounds", chains.p, order.rounds)
    return index


def _check_components(x: MSIndex) -> None:
    n = x.graph.n
    if x.order.graph is not x.graph or graph_fingerprint(x.order.graph) != x.fingerprint:
        raise ConsistencyError("order was built for a different graph")
    if len(x.lcp.lcp_joint) != 2 * n - 1:
        raise ConsistencyError(f"joint LCP has {len(x.lcp.lcp_joint)} entries, expected {2 * n - 1}")
    if sorted(u for chain in x.chains.chains for u in chain) != list(range(n)):
        raise ConsistencyError("chains do not partition the nodes")


# ---------------------------------------------------------------------------
# Множества вхождений
# ---------------------------------------------------------------------------

def full_occurrence_set(x: MSIndex) -> OccurrenceSet:
    return OccurrenceSet(tuple((0, len(chain) - 1) for chain in x.chains.chains))


def occurrence_nodes(x: MSIndex, s: OccurrenceSet) -> List[int]:
    nodes: List[int] = []
    for chain, seg in zip(x.chains.chains, s.segments):
        if seg is not None:
            lo, hi = seg
            nodes.extend(chain[lo:hi + 1])
    return nodes


def segments_of(x: MSIndex, nodes: Sequence[int]) -> OccurrenceSet:
    """Per-chain [min, max] positions, verified to be gap-free."""
    chain_of, pos = x.chains.chain_of, x.chains.pos_in_chain
    bounds: Dict[int, List[int]] = {}
    counts: Dict[int, int] = defaultdict(int)
    for u in set(nodes):
        cid = chain_of[u]
        counts[cid] += 1
        if cid in bounds:
            b = bounds[cid]
            b[0] = min(b[0], pos[u])
            b[1] = max(b[1], pos[u])
        else:
            bounds[cid] = [pos[u], pos[u]]

    segments: List[Segment] = []
    for cid in range(x.chains.p):
        if cid not in bounds:
            segments.append(None)
            continue
        lo, hi = bounds[cid]
        if counts[cid] != hi - lo + 1:
            raise ConsistencyError(
                f"occurrence set is not convex in chain {cid}: {counts[cid]} nodes span positions {lo}..{hi}"
            )
        segments.append((lo, hi))
    return OccurrenceSet(tuple(segments))


def occurrence_step(x: MSIndex, s: OccurrenceSet, c: Symbol) -> OccurrenceSet:
    label_out = x.label_out
    successors = set()
    for u in occurrence_nodes(x, s):
        successors.update(label_out.get((u, c), ()))
    return segments_of(x, successors)


def occurrences(x: MSIndex, y: Sequence[Symbol]) -> OccurrenceSet:
    s = full_occurrence_set(x)
    for c in y:
        s = occurrence_step(x, s, c)
        if s.is_empty():
            break
    return s


def occurs(x: MSIndex, q: Sequence[Symbol]) -> bool:
    return not occurrences(x, q).is_empty()


SweepObserver = Callable[[Tuple[Symbol, ...], OccurrenceSet], None]


def matching_statistics(
    x: MSIndex,
    w: Sequence[Symbol],
    observer: Optional[SweepObserver] = None,
) -> MSResult:
    """Two-pointer sweep over windows w[i..j); the observer sees every window it settles on."""
    w = tuple(w)
    m = len(w)
    values: List[int] = []
    occ = full_occurrence_set(x)
    j = 0
    for i in range(m):
        while j < m:
            extended = occurrence_step(x, occ, w[j])
            if extended.is_empty():
                break
            occ = extended
            j += 1
            if observer is not None:
                observer(w[i:j], occ)
        values.append(j - i)

        if j == m:
            # дальше окно только сжимается до конца шаблона
            values.extend(m - k for k in range(i + 1, m))
            break

        # сжатие: пересчёт для w[i+1..j)
        if j <= i + 1:
            j = i + 1
            occ = full_occurrence_set(x)
        else:
            occ = occurrences(x, w[i + 1:j])
            if observer is not None:
                observer(w[i + 1:j], occ)

    logger.debug("   MS %r -> %s", w, values)
    return MSResult(tuple(values))


# ---------------------------------------------------------------------------
# Оракул: прямая симуляция по рёбрам, без индекса
# ---------------------------------------------------------------------------

def exact_occurrences(g: LabeledGraph, y: Sequence[Symbol]) -> FrozenSet[int]:
    """Nodes where some walk spelling y ends."""
    current = set(range(g.n))
    for k, c in enumerate(y):
        if k == 0:
            current = {u for u in current if g.labels[u] == c}
        else:
            current = {v for u in current for v in g.out_adj[u] if g.labels[v] == c}
        if not current:
            break
    return frozenset(current)


def ms_oracle(g: LabeledGraph, w: Sequence[Symbol]) -> MSResult:
    w = tuple(w)
    m = len(w)
    values = []
    for i in range(m):
        current = {u for u in range(g.n) if g.labels[u] == w[i]}
        length = 1 if current else 0
        while current and i + length < m:
            c = w[i + length]
            current = {v for u in current for v in g.out_adj[u] if g.labels[v] == c}
            if current:
                length += 1
        values.append(length)
    return MSResult(tuple(values))


def pattern_symbols(line: str, integer_labels: bool = False) -> Tuple[Symbol, ...]:
    if not integer_labels:
        return tuple(line)
    return tuple(int(tok) if _INT_TOKEN.fullmatch(tok) else tok for tok in line.split())

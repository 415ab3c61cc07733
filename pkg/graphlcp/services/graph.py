from __future__ import annotations

import hashlib
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..errors import GraphError, GraphFormatError


logger = logging.getLogger(__name__)

Symbol = Union[str, int]

SENTINEL = "$"

NO_INCOMING_EDGE = "no-incoming-edge"
RESERVED_LABEL = "reserved-label"
BAD_ID = "bad-id"

_ID_PATTERN = re.compile(r"\d+", re.ASCII)
_INT_PATTERN = re.compile(r"-?\d+", re.ASCII)


def symbol_key(symbol: Symbol) -> tuple:
    """Sort key: the sentinel sits below every other symbol, whatever its code point."""
    if symbol == SENTINEL:
        return (0, 0)
    return (1, symbol)


@dataclass(frozen=True)
class LabeledGraph:
    labels: Tuple[Symbol, ...]
    edges: Tuple[Tuple[int, int], ...]
    integer_labels: bool = False

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def in_adj(self) -> Tuple[Tuple[int, ...], ...]:
        preds: List[List[int]] = [[] for _ in range(self.n)]
        for src, dst in self.edges:
            preds[dst].append(src)
        return tuple(tuple(sorted(p)) for p in preds)

    @cached_property
    def out_adj(self) -> Tuple[Tuple[int, ...], ...]:
        succs: List[List[int]] = [[] for _ in range(self.n)]
        for src, dst in self.edges:
            succs[src].append(dst)
        return tuple(tuple(sorted(s)) for s in succs)

    @cached_property
    def alphabet(self) -> Tuple[Symbol, ...]:
        return tuple(sorted(set(self.labels), key=symbol_key))

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @cached_property
    def label_rank(self) -> Tuple[int, ...]:
        ranks = {symbol: r for r, symbol in enumerate(self.alphabet)}
        return tuple(ranks[label] for label in self.labels)

    def sources(self) -> List[int]:
        return [u for u in range(self.n) if not self.in_adj[u]]

    def has_sentinel(self) -> bool:
        return SENTINEL in self.labels


@dataclass(frozen=True)
class EdgeLabeledGraph:
    n: int
    edges: Tuple[Tuple[int, int, Symbol], ...]
    integer_labels: bool = False


@dataclass(frozen=True)
class Violation:
    node: int
    kind: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def build_graph(
    labels: Sequence[Symbol],
    edges: Iterable[Tuple[int, int]],
    integer_labels: bool = False,
) -> LabeledGraph:
    """Checked constructor: ids in range, no duplicate edges, edges kept sorted."""
    n = len(labels)
    seen = set()
    for src, dst in edges:
        if not (0 <= src < n and 0 <= dst < n):
            raise GraphFormatError(f"edge {src}->{dst} references an undefined node")
        if (src, dst) in seen:
            raise GraphFormatError(f"duplicate edge {src}->{dst}")
        seen.add((src, dst))
    return LabeledGraph(labels=tuple(labels), edges=tuple(sorted(seen)), integer_labels=integer_labels)


# ---------------------------------------------------------------------------
# Текстовый формат
# ---------------------------------------------------------------------------

def _records(text: str) -> Iterator[Tuple[int, List[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _read_headers(text: str) -> Dict[str, str]:
    headers: Dict[str, str] = {}
    for lineno, tokens in _records(text):
        if tokens[0].endswith(":"):
            if len(tokens) != 2:
                raise GraphFormatError(f"malformed header {' '.join(tokens)!r}", lineno)
            key = tokens[0][:-1]
            if key not in {"format", "labels", "sentinel"}:
                raise GraphFormatError(f"unknown header {key!r}", lineno)
            headers[key] = tokens[1]
    fmt = headers.get("format", "node-labeled")
    if fmt not in {"node-labeled", "edge-labeled"}:
        raise GraphFormatError(f"unknown format {fmt!r}")
    if headers.get("labels", "char") not in {"char", "int"}:
        raise GraphFormatError(f"unknown label mode {headers['labels']!r}")
    return headers


def _parse_id(token: str, lineno: int) -> int:
    if not _ID_PATTERN.fullmatch(token):
        raise GraphFormatError(f"bad node id {token!r}", lineno)
    return int(token)


def _parse_label(token: str, lineno: int, integer_labels: bool, allow_sentinel: bool) -> Symbol:
    if token == SENTINEL:
        if not allow_sentinel:
            raise GraphFormatError(f"label {SENTINEL!r} is the reserved sentinel symbol", lineno)
        return SENTINEL
    if integer_labels:
        if not _INT_PATTERN.fullmatch(token):
            raise GraphFormatError(f"bad integer label {token!r}", lineno)
        return int(token)
    if len(token) != 1:
        raise GraphFormatError(f"label {token!r} is not a single symbol", lineno)
    return token


def _densify(declared: Dict[int, int]) -> Dict[int, int]:
    return {file_id: dense for dense, file_id in enumerate(sorted(declared))}


def parse_graph(text: str) -> LabeledGraph:
    headers = _read_headers(text)
    if headers.get("format") == "edge-labeled":
        raise GraphFormatError("edge-labeled input: parse it with parse_edge_labeled_graph")
    integer_labels = headers.get("labels") == "int"
    allow_sentinel = headers.get("sentinel") == "yes"

    declared: Dict[int, Symbol] = {}
    decl_line: Dict[int, int] = {}
    raw_edges: List[Tuple[int, int, int]] = []
    for lineno, tokens in _records(text):
        kind = tokens[0]
        if kind.endswith(":"):
            continue
        if kind == "v":
            if len(tokens) != 3:
                raise GraphFormatError("expected 'v <id> <label>'", lineno)
            node = _parse_id(tokens[1], lineno)
            if node in declared:
                raise GraphFormatError(f"duplicate node id {node} (first declared on line {decl_line[node]})", lineno)
            declared[node] = _parse_label(tokens[2], lineno, integer_labels, allow_sentinel)
            decl_line[node] = lineno
        elif kind == "e":
            if len(tokens) != 3:
                raise GraphFormatError("expected 'e <src> <dst>'", lineno)
            raw_edges.append((_parse_id(tokens[1], lineno), _parse_id(tokens[2], lineno), lineno))
        else:
            raise GraphFormatError(f"unknown record {kind!r}", lineno)

    dense = _densify(declared)
    labels = [declared[file_id] for file_id in sorted(declared)]
    edges = set()
    for src, dst, lineno in raw_edges:
        for endpoint in (src, dst):
            if endpoint not in dense:
                raise GraphFormatError(f"edge endpoint {endpoint} is not a declared node", lineno)
        pair = (dense[src], dense[dst])
        if pair in edges:
            raise GraphFormatError(f"duplicate edge {src}->{dst}", lineno)
        edges.add(pair)

    graph = build_graph(labels, edges, integer_labels=integer_labels)
    logger.info("📥 Graph parsed: n=%s e=%s sigma=%s", graph.n, graph.e, graph.sigma)
    return graph


def parse_edge_labeled_graph(text: str) -> EdgeLabeledGraph:
    headers = _read_headers(text)
    integer_labels = headers.get("labels") == "int"

    declared: Dict[int, int] = {}
    raw_edges: List[Tuple[int, int, Symbol, int]] = []
    for lineno, tokens in _records(text):
        kind = tokens[0]
        if kind.endswith(":"):
            continue
        if kind == "v":
            if len(tokens) != 2:
                raise GraphFormatError("expected 'v <id>' in edge-labeled input", lineno)
            node = _parse_id(tokens[1], lineno)
            if node in declared:
                raise GraphFormatError(f"duplicate node id {node}", lineno)
            declared[node] = lineno
        elif kind == "e":
            if len(tokens) != 4:
                raise GraphFormatError("expected 'e <src> <dst> <label>'", lineno)
            raw_edges.append((
                _parse_id(tokens[1], lineno),
                _parse_id(tokens[2], lineno),
                _parse_label(tokens[3], lineno, integer_labels, allow_sentinel=False),
                lineno,
            ))
        else:
            raise GraphFormatError(f"unknown record {kind!r}", lineno)

    # `v <id>` нужен только для изолированных узлов
    for src, dst, _, lineno in raw_edges:
        declared.setdefault(src, lineno)
        declared.setdefault(dst, lineno)

    dense = _densify(declared)
    triples = set()
    for src, dst, symbol, lineno in raw_edges:
        triple = (dense[src], dense[dst], symbol)
        if triple in triples:
            raise GraphFormatError(f"duplicate edge {src}->{dst} {symbol}", lineno)
        triples.add(triple)

    edges = tuple(sorted(triples, key=lambda t: (t[0], t[1], symbol_key(t[2]))))
    return EdgeLabeledGraph(n=len(dense), edges=edges, integer_labels=integer_labels)


def serialize_graph(g: LabeledGraph) -> str:
    lines = []
    if g.integer_labels:
        lines.append("labels: int")
    if g.has_sentinel():
        lines.append("sentinel: yes")
    lines.extend(f"v {u} {label}" for u, label in enumerate(g.labels))
    lines.extend(f"e {src} {dst}" for src, dst in g.edges)
    return "\n".join(lines) + "\n"


def graph_fingerprint(g: LabeledGraph) -> str:
    h = hashlib.sha256()
    h.update(serialize_graph(g).encode("utf-8"))
    return h.hexdigest()


# ---------------------------------------------------------------------------
# Проверка и нормализация
# ---------------------------------------------------------------------------

def validate(g: LabeledGraph) -> ValidationReport:
    n = g.n
    found = set()
    indegree = [0] * n
    incoming: Dict[int, List[int]] = defaultdict(list)
    for src, dst in g.edges:
        bad = False
        for endpoint in (src, dst):
            if not 0 <= endpoint < n:
                found.add(Violation(endpoint, BAD_ID))
                bad = True
        if not bad:
            indegree[dst] += 1
            incoming[dst].append(src)

    # Сентинел допустим только как единственный источник с петлёй
    sentinels = [u for u in range(n) if g.labels[u] == SENTINEL]
    for u in sentinels:
        if len(sentinels) > 1 or incoming[u] != [u]:
            found.add(Violation(u, RESERVED_LABEL))

    for u in range(n):
        if indegree[u] == 0:
            found.add(Violation(u, NO_INCOMING_EDGE))

    return ValidationReport(violations=tuple(sorted(found, key=lambda v: (v.node, v.kind))))


def augment_with_sentinel(g: LabeledGraph, force: bool = False) -> LabeledGraph:
    if g.has_sentinel():
        raise GraphError("sentinel already present")
    sources = g.sources()
    if not sources and not force:
        raise GraphError("no node with in-degree 0; pass force=True to add the sentinel anyway")

    s = g.n
    edges = list(g.edges) + [(s, s)] + [(s, u) for u in sources]
    logger.info("➕ Sentinel node %s added for %s source(s)", s, len(sources))
    return build_graph(list(g.labels) + [SENTINEL], edges, integer_labels=g.integer_labels)


def normalize_edge_labeled(g: EdgeLabeledGraph, default_label: Optional[Symbol] = None) -> LabeledGraph:
    """One node copy (u, c) per distinct symbol c entering u; edge (v, u, c) joins every copy of v to (u, c).

    Nodes without incoming edges get a copy only when `default_label` is given;
    otherwise their outgoing edges still yield the right copies downstream, which
    then show up as sources for validation/augmentation.
    """
    if default_label == SENTINEL:
        raise GraphFormatError(f"default label {SENTINEL!r} is the reserved sentinel symbol")

    entering: Dict[int, set] = defaultdict(set)
    for _, dst, symbol in g.edges:
        entering[dst].add(symbol)

    copies: List[Tuple[int, Optional[Symbol]]] = []
    for u in range(g.n):
        symbols = sorted(entering[u], key=symbol_key)
        if symbols:
            copies.extend((u, c) for c in symbols)
        elif default_label is not None:
            copies.append((u, None))

    index = {copy: i for i, copy in enumerate(copies)}
    copies_of: Dict[int, List[int]] = defaultdict(list)
    for (u, _), i in index.items():
        copies_of[u].append(i)

    labels = [default_label if c is None else c for _, c in copies]
    edges = set()
    for src, dst, symbol in g.edges:
        target = index[(dst, symbol)]
        for copy in copies_of[src]:
            edges.add((copy, target))

    logger.info("🔁 Edge-labeled graph normalized: %s nodes -> %s copies", g.n, len(copies))
    return build_graph(labels, edges, integer_labels=g.integer_labels)


def load_graph(text: str, edge_labeled: bool = False, augment: bool = False) -> LabeledGraph:
    headers = _read_headers(text)
    if edge_labeled or headers.get("format") == "edge-labeled":
        graph = normalize_edge_labeled(parse_edge_labeled_graph(text))
    else:
        graph = parse_graph(text)

    if augment:
        if graph.sources():
            graph = augment_with_sentinel(graph)
        else:
            logger.warning("⚠️ --augment-sentinel ignored: every node already has an incoming edge")
    return graph


def path_graph(text: Sequence[Symbol], integer_labels: bool = False) -> LabeledGraph:
    """Path t0 -> t1 -> ... with the sentinel feeding t0."""
    k = len(text)
    path = build_graph(list(text), [(i, i + 1) for i in range(k - 1)], integer_labels=integer_labels)
    return augment_with_sentinel(path, force=True)

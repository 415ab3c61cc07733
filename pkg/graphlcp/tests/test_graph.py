import pytest
from hypothesis import given, settings, strategies as st

from graphlcp.errors import GraphError, GraphFormatError
from graphlcp.services.graph import (
    BAD_ID,
    NO_INCOMING_EDGE,
    RESERVED_LABEL,
    SENTINEL,
    EdgeLabeledGraph,
    LabeledGraph,
    augment_with_sentinel,
    build_graph,
    load_graph,
    normalize_edge_labeled,
    parse_edge_labeled_graph,
    parse_graph,
    path_graph,
    serialize_graph,
    symbol_key,
    validate,
)


def walk_strings(g, max_length):
    """Every label string of a node walk with 1..max_length nodes."""
    found = set()
    ending = {u: {(g.labels[u],)} for u in range(g.n)}
    for _ in range(max_length):
        for strings in ending.values():
            found.update(strings)
        nxt = {u: set() for u in range(g.n)}
        for src, dst in g.edges:
            nxt[dst].update(s + (g.labels[dst],) for s in ending[src])
        ending = nxt
    return found


def edge_walk_strings(g, max_length):
    """Every label string of an edge walk with 1..max_length edges."""
    found = set()
    ending = {u: set() for u in range(g.n)}
    for src, dst, c in g.edges:
        ending[dst].add((c,))
    for _ in range(max_length):
        for strings in ending.values():
            found.update(strings)
        nxt = {u: set() for u in range(g.n)}
        for src, dst, c in g.edges:
            nxt[dst].update(s + (c,) for s in ending[src])
        ending = nxt
    return found


def test_parse_simple_graph():
    g = parse_graph("v 0 a\nv 1 b\ne 0 1")
    assert g.n == 2
    assert g.labels == ("a", "b")
    assert g.edges == ((0, 1),)
    assert g.out_adj == ((1,), ())
    assert g.in_adj == ((), (0,))


def test_parse_self_loop():
    g = parse_graph("v 0 a\ne 0 0")
    assert g.n == 1
    assert g.edges == ((0, 0),)


def test_parse_rejects_sentinel_label():
    with pytest.raises(GraphFormatError, match="reserved sentinel"):
        parse_graph("v 0 $\n")


def test_parse_reports_line_numbers():
    with pytest.raises(GraphFormatError) as exc:
        parse_graph("# comment\nv 0 a\nv 1 b\nx 0 1\n")
    assert exc.value.line == 4

    with pytest.raises(GraphFormatError, match="duplicate node id"):
        parse_graph("v 0 a\nv 0 b\n")

    with pytest.raises(GraphFormatError) as exc:
        parse_graph("v 0 a\ne 0 7\n")
    assert exc.value.line == 2

    with pytest.raises(GraphFormatError, match="single symbol"):
        parse_graph("v 0 ab\n")


def test_parse_densifies_sparse_ids():
    g = parse_graph("v 10 b\nv 3 a\ne 3 10\ne 10 3\n")
    assert g.labels == ("a", "b")
    assert g.edges == ((0, 1), (1, 0))


def test_parse_integer_labels():
    g = parse_graph("labels: int\nv 0 7\nv 1 -2\ne 0 1\ne 1 0\n")
    assert g.integer_labels
    assert g.labels == (7, -2)
    assert g.alphabet == (-2, 7)


def test_serialize_round_trip(graph_texts):
    for text in graph_texts.values():
        g = parse_graph(text)
        assert parse_graph(serialize_graph(g)) == g


@given(
    st.integers(min_value=1, max_value=8).flatmap(
        lambda n: st.tuples(
            st.lists(st.sampled_from("abcde"), min_size=n, max_size=n),
            st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20),
        )
    )
)
def test_serialize_round_trip_property(case):
    labels, edges = case
    g = build_graph(labels, edges)
    assert parse_graph(serialize_graph(g)) == g


def test_validate_fixtures(cycle2, path3, width2):
    assert validate(cycle2).ok
    assert validate(path3).ok
    assert validate(width2).ok


def test_validate_reports_sources(graph_texts):
    report = validate(parse_graph(graph_texts["raw_path"]))
    assert not report.ok
    assert [(v.node, v.kind) for v in report.violations] == [(0, NO_INCOMING_EDGE)]


def test_validate_empty_graph():
    report = validate(LabeledGraph(labels=(), edges=()))
    assert report.ok
    assert report.violations == ()


def test_validate_bad_ids_and_reserved_labels():
    report = validate(LabeledGraph(labels=("a",), edges=((0, 0), (0, 5))))
    assert (5, BAD_ID) in {(v.node, v.kind) for v in report.violations}

    two_sentinels = LabeledGraph(labels=(SENTINEL, SENTINEL), edges=((0, 0), (1, 1)))
    kinds = {(v.node, v.kind) for v in validate(two_sentinels).violations}
    assert kinds == {(0, RESERVED_LABEL), (1, RESERVED_LABEL)}


def test_augment_path(graph_texts):
    g = augment_with_sentinel(parse_graph(graph_texts["raw_path"]))
    assert g.n == 4
    assert g.labels == ("a", "b", "c", SENTINEL)
    assert set(g.edges) == {(3, 3), (3, 0), (0, 1), (1, 2)}
    report = validate(g)
    assert report.ok
    assert sum(1 for label in g.labels if label == SENTINEL) == 1


def test_augment_forced_on_cycle(cycle2):
    with pytest.raises(GraphError):
        augment_with_sentinel(cycle2)
    g = augment_with_sentinel(cycle2, force=True)
    assert g.n == 3
    assert set(g.edges) == {(0, 1), (1, 0), (2, 2)}
    assert validate(g).ok


def test_augment_two_sources():
    g = augment_with_sentinel(build_graph(["a", "b", "c"], [(0, 2), (1, 2)]))
    assert set(g.out_adj[3]) == {0, 1, 3}
    with pytest.raises(GraphError, match="already present"):
        augment_with_sentinel(g)


def test_sentinel_sorts_below_everything():
    symbols = ["!", "#", " ", "a", SENTINEL]
    assert sorted(symbols, key=symbol_key)[0] == SENTINEL
    assert sorted([3, -1, SENTINEL], key=symbol_key) == [SENTINEL, -1, 3]


def test_normalize_two_cycle(cycle2):
    eg = EdgeLabeledGraph(n=2, edges=((0, 1, "a"), (1, 0, "b")))
    g = normalize_edge_labeled(eg)
    assert g.n == 2
    assert sorted(g.labels) == ["a", "b"]
    assert walk_strings(g, 4) == walk_strings(cycle2, 4) == edge_walk_strings(eg, 4)


def test_normalize_single_self_loop():
    g = normalize_edge_labeled(EdgeLabeledGraph(n=1, edges=((0, 0, "a"),)))
    assert g.labels == ("a",)
    assert g.edges == ((0, 0),)


def test_normalize_splits_by_incoming_symbol():
    eg = EdgeLabeledGraph(n=2, edges=((0, 1, "a"), (0, 1, "b"), (1, 0, "c")))
    g = normalize_edge_labeled(eg)
    copies_of_1 = [u for u in range(g.n) if g.labels[u] in ("a", "b")]
    assert len(copies_of_1) == 2
    for u in copies_of_1:
        assert len(g.in_adj[u]) == 1
    assert walk_strings(g, 3) == edge_walk_strings(eg, 3)


def test_normalize_default_label_for_sources():
    eg = EdgeLabeledGraph(n=2, edges=((0, 1, "a"),))
    assert normalize_edge_labeled(eg).n == 1
    g = normalize_edge_labeled(eg, default_label="z")
    assert g.labels == ("z", "a")
    assert g.edges == ((0, 1),)


@settings(max_examples=500)
@given(
    st.integers(min_value=1, max_value=6).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.sets(
                st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.sampled_from("abc")),
                max_size=10,
            ),
        )
    )
)
def test_normalize_preserves_walk_strings(case):
    n, triples = case
    eg = EdgeLabeledGraph(n=n, edges=tuple(sorted(triples)))
    g = normalize_edge_labeled(eg)
    assert walk_strings(g, 6) == edge_walk_strings(eg, 6)


def test_parse_edge_labeled():
    eg = parse_edge_labeled_graph("format: edge-labeled\nv 0\nv 1\ne 0 1 a\ne 1 0 b\n")
    assert eg.n == 2
    assert eg.edges == ((0, 1, "a"), (1, 0, "b"))
    with pytest.raises(GraphFormatError, match="duplicate edge"):
        parse_edge_labeled_graph("format: edge-labeled\nv 0\ne 0 0 a\ne 0 0 a\n")


def test_load_graph_dispatch(graph_texts):
    g = load_graph("format: edge-labeled\nv 0\nv 1\ne 0 1 a\ne 1 0 b\n")
    assert g.n == 2 and validate(g).ok

    augmented = load_graph(graph_texts["raw_path"], augment=True)
    assert augmented.has_sentinel() and validate(augmented).ok

    unchanged = load_graph(graph_texts["cycle2"], augment=True)
    assert not unchanged.has_sentinel()


def test_path_graph():
    g = path_graph("abc")
    assert g.labels == ("a", "b", "c", SENTINEL)
    assert validate(g).ok
    assert path_graph("").labels == (SENTINEL,)


def small_edge_labeled_graphs():
    """Every edge-labeled graph with n <= 2 over {a, b}, and n == 3 over {a}."""
    for n, alphabet in ((1, "ab"), (2, "ab"), (3, "a")):
        cells = [(s, d, c) for s in range(n) for d in range(n) for c in alphabet]
        for mask in range(1 << len(cells)):
            yield EdgeLabeledGraph(n=n, edges=tuple(cell for k, cell in enumerate(cells) if mask >> k & 1))


def test_normalize_preserves_walk_strings_exhaustively():
    count = 0
    for eg in small_edge_labeled_graphs():
        g = normalize_edge_labeled(eg)
        assert walk_strings(g, 6) == edge_walk_strings(eg, 6), eg
        count += 1
    assert count == 4 + 256 + 512


def test_parse_edge_labeled_without_node_records():
    eg = parse_edge_labeled_graph("format: edge-labeled\ne 0 1 a\ne 1 0 b\n")
    assert eg.n == 2
    assert eg.edges == ((0, 1, "a"), (1, 0, "b"))

    sparse = parse_edge_labeled_graph("format: edge-labeled\nv 3\ne 9 5 a\ne 5 9 b\n")
    assert sparse.n == 3
    assert sparse.edges == ((1, 2, "b"), (2, 1, "a"))


def test_load_edge_labeled_without_node_records(cycle2):
    g = load_graph("format: edge-labeled\ne 0 1 a\ne 1 0 b\n")
    assert validate(g).ok
    assert walk_strings(g, 5) == walk_strings(cycle2, 5)

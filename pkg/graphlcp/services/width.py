from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import networkx as nx

from ..errors import ConsistencyError, ItemError
from .colex import JointColexOrder


logger = logging.getLogger(__name__)


class NodeRelation(Enum):
    LT = "LT"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"
    EQUIVALENT = "EQUIVALENT"


@dataclass(frozen=True)
class ChainDecomposition:
    p: int
    chains: Tuple[Tuple[int, ...], ...]
    chain_of: Tuple[int, ...]
    pos_in_chain: Tuple[int, ...]
    antichain: Tuple[int, ...]


def node_compare(o: JointColexOrder, u: int, v: int) -> NodeRelation:
    """Interval order on [min_u, max_u]."""
    for node in (u, v):
        if not 0 <= node < o.n:
            raise ItemError(f"node {node} out of range 0..{o.n - 1}")
    rank = o.rank
    u_min, u_max = rank[2 * u], rank[2 * u + 1]
    v_min, v_max = rank[2 * v], rank[2 * v + 1]
    if u_min == u_max == v_min == v_max:
        return NodeRelation.EQUIVALENT
    if u_max < v_min:
        return NodeRelation.LT
    if v_max < u_min:
        return NodeRelation.GT
    return NodeRelation.INCOMPARABLE


def precedes(o: JointColexOrder, u: int, v: int) -> bool:
    """Strict order used for chains: LT, or EQUIVALENT with the smaller id first."""
    if u == v:
        return False
    relation = node_compare(o, u, v)
    return relation == NodeRelation.LT or (relation == NodeRelation.EQUIVALENT and u < v)


def order_dag(o: JointColexOrder) -> nx.DiGraph:
    dag = nx.DiGraph()
    dag.add_nodes_from(range(o.n))
    dag.add_edges_from((u, v) for u in range(o.n) for v in range(o.n) if precedes(o, u, v))
    return dag


def _check_transitive(dag: nx.DiGraph) -> None:
    if not nx.is_directed_acyclic_graph(dag):
        raise ConsistencyError("node order contains a cycle")
    closure = nx.transitive_closure_dag(dag)
    if closure.number_of_edges() != dag.number_of_edges():
        missing = next((u, v) for u, v in closure.edges() if not dag.has_edge(u, v))
        raise ConsistencyError(f"node order is not transitive: {missing[0]} < {missing[1]} is implied but absent")


def compute_width(o: JointColexOrder) -> ChainDecomposition:
    n = o.n
    dag = order_dag(o)
    _check_transitive(dag)

    # Двудольный граф: левая копия u -> правая копия v для u < v
    bipartite = nx.Graph()
    left = [("L", u) for u in range(n)]
    bipartite.add_nodes_from(left, bipartite=0)
    bipartite.add_nodes_from((("R", u) for u in range(n)), bipartite=1)
    bipartite.add_edges_from((("L", u), ("R", v)) for u, v in dag.edges())

    matching = nx.bipartite.hopcroft_karp_matching(bipartite, top_nodes=left)

    next_node: Dict[int, int] = {}
    has_prev = set()
    for (side, u), (_, v) in matching.items():
        if side == "L":
            next_node[u] = v
            has_prev.add(v)

    chains: List[Tuple[int, ...]] = []
    for start in range(n):
        if start in has_prev:
            continue
        chain = [start]
        while chain[-1] in next_node:
            chain.append(next_node[chain[-1]])
        chains.append(tuple(chain))

    chain_of = [0] * n
    pos_in_chain = [0] * n
    for cid, chain in enumerate(chains):
        for pos, u in enumerate(chain):
            chain_of[u] = cid
            pos_in_chain[u] = pos

    # Кёниг: вершины, ни одна копия которых не в покрытии, образуют максимальную антицепь
    cover = nx.bipartite.to_vertex_cover(bipartite, matching, top_nodes=left)
    antichain = tuple(u for u in range(n) if ("L", u) not in cover and ("R", u) not in cover)

    p = len(chains)
    if len(antichain) != p:
        raise ConsistencyError(f"antichain witness has size {len(antichain)}, expected {p}")

    logger.info("⛓️ Width p=%s over %s nodes (%s comparable pairs)", p, n, dag.number_of_edges())
    return ChainDecomposition(
        p=p,
        chains=tuple(chains),
        chain_of=tuple(chain_of),
        pos_in_chain=tuple(pos_in_chain),
        antichain=antichain,
    )

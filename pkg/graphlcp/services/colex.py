from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import cached_property
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np

from ..errors import GraphValidationError, ItemError
from .graph import LabeledGraph, Symbol, validate


logger = logging.getLogger(__name__)


class Side(IntEnum):
    MIN = 0
    MAX = 1


class Item(NamedTuple):
    node: int
    side: Side


class Ordering(Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


def item_id(item: Item) -> int:
    return 2 * item.node + int(item.side)


def item_of(iid: int) -> Item:
    return Item(int(iid) // 2, Side(int(iid) % 2))


@dataclass(frozen=True, eq=False)
class JointColexOrder:
    """Joint order of the 2n strings min_u / max_u.

    Arrays are indexed by item id (2 * node + side). Equal rank means equal
    strings, so the rank doubles as the equality class id.
    """

    graph: LabeledGraph
    rank: np.ndarray
    tail: np.ndarray
    sorted_ids: np.ndarray
    rounds: int

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def num_classes(self) -> int:
        return int(self.rank.max()) + 1 if self.rank.size else 0

    @cached_property
    def position(self) -> np.ndarray:
        pos = np.empty_like(self.sorted_ids)
        pos[self.sorted_ids] = np.arange(self.sorted_ids.size)
        return pos

    @cached_property
    def sorted(self) -> Tuple[Item, ...]:
        return tuple(item_of(iid) for iid in self.sorted_ids)

    def check_item(self, item: Item) -> int:
        if not 0 <= item.node < self.n:
            raise ItemError(f"item {tuple(item)} does not belong to this graph (n={self.n})")
        return item_id(item)

    def rank_of(self, item: Item) -> int:
        return int(self.rank[self.check_item(item)])

    def class_of(self, item: Item) -> int:
        return self.rank_of(item)

    def tail_of(self, item: Item) -> Item:
        return item_of(self.tail[self.check_item(item)])

    def item_at(self, position: int) -> Item:
        """Item at a 1-based sorted position."""
        if not 1 <= position <= self.sorted_ids.size:
            raise ItemError(f"sorted position {position} out of range 1..{self.sorted_ids.size}")
        return item_of(self.sorted_ids[position - 1])

    def prefix(self, item: Item, length: int) -> Tuple[Symbol, ...]:
        iid = self.check_item(item)
        labels = self.graph.labels
        out = []
        for _ in range(max(length, 0)):
            out.append(labels[iid // 2])
            iid = int(self.tail[iid])
        return tuple(out)


# ---------------------------------------------------------------------------
# Оракулы: жадное расширение фронта, без всякого предвычисленного порядка
# ---------------------------------------------------------------------------

def _prefix_oracle(g: LabeledGraph, u: int, length: int, pick: Callable[[Sequence[int]], int]) -> Tuple[Symbol, ...]:
    if not 0 <= u < g.n:
        raise ItemError(f"node {u} out of range 0..{g.n - 1}")
    if length <= 0:
        return ()
    rank = g.label_rank
    out = [g.labels[u]]
    frontier = {u}
    while len(out) < length:
        candidates = {v for x in frontier for v in g.in_adj[x]}
        if not candidates:
            raise GraphValidationError(validate(g))
        best = pick([rank[v] for v in candidates])
        frontier = {v for v in candidates if rank[v] == best}
        out.append(g.alphabet[best])
    return tuple(out)


def min_prefix_oracle(g: LabeledGraph, u: int, length: int) -> Tuple[Symbol, ...]:
    return _prefix_oracle(g, u, length, min)


def max_prefix_oracle(g: LabeledGraph, u: int, length: int) -> Tuple[Symbol, ...]:
    return _prefix_oracle(g, u, length, max)


def item_prefix_oracle(g: LabeledGraph, item: Item, length: int) -> Tuple[Symbol, ...]:
    if item.side == Side.MIN:
        return min_prefix_oracle(g, item.node, length)
    return max_prefix_oracle(g, item.node, length)


# ---------------------------------------------------------------------------
# Уточнение рангов
# ---------------------------------------------------------------------------

def _predecessor_csr(g: LabeledGraph) -> Tuple[np.ndarray, np.ndarray]:
    counts = np.fromiter((len(p) for p in g.in_adj), dtype=np.int64, count=g.n)
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    src = np.fromiter((v for p in g.in_adj for v in p), dtype=np.int64, count=int(ptr[-1]))
    return ptr, src


def compute_joint_order(g: LabeledGraph) -> JointColexOrder:
    n = g.n
    if any(not preds for preds in g.in_adj):
        raise GraphValidationError(validate(g))

    size = 2 * n
    label_items = np.repeat(np.asarray(g.label_rank, dtype=np.int64), 2)
    _, rank = np.unique(label_items, return_inverse=True)
    rank = rank.reshape(-1).astype(np.int64)

    ptr, src = _predecessor_csr(g)
    rounds = 0
    while n:
        rounds += 1
        # Ключ: (метка, лучший ранг хвоста), как пары (символ, ранг следующего) при сортировке суффиксов
        best = np.empty(size, dtype=np.int64)
        best[0::2] = np.minimum.reduceat(rank[0::2][src], ptr[:-1])
        best[1::2] = np.maximum.reduceat(rank[1::2][src], ptr[:-1])
        _, new_rank = np.unique(label_items * size + best, return_inverse=True)
        new_rank = new_rank.reshape(-1).astype(np.int64)
        logger.debug("   round %s: %s classes", rounds, int(new_rank.max()) + 1)
        if np.array_equal(new_rank, rank):
            break
        rank = new_rank

    tail = np.empty(size, dtype=np.int64)
    for u in range(n):
        preds = g.in_adj[u]
        v_min = min(preds, key=lambda v: (rank[2 * v], v))
        v_max = min(preds, key=lambda v: (-rank[2 * v + 1], v))
        tail[2 * u] = 2 * v_min
        tail[2 * u + 1] = 2 * v_max + 1

    sorted_ids = np.argsort(rank, kind="stable").astype(np.int64)
    for arr in (rank, tail, sorted_ids):
        arr.setflags(write=False)

    order = JointColexOrder(graph=g, rank=rank, tail=tail, sorted_ids=sorted_ids, rounds=rounds)
    logger.info("📐 Joint order: %s items, %s classes, %s rounds", size, order.num_classes, rounds)
    return order


def compare_items(o: JointColexOrder, i: Item, j: Item) -> Ordering:
    ri, rj = o.rank_of(i), o.rank_of(j)
    if ri < rj:
        return Ordering.LT
    if ri > rj:
        return Ordering.GT
    return Ordering.EQ


def sorted_side(o: JointColexOrder, side: Side) -> List[Item]:
    return [item for item in o.sorted if item.side == side]

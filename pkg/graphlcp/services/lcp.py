from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ConsistencyError, ItemError
from .colex import Item, JointColexOrder, Side, item_id, sorted_side


logger = logging.getLogger(__name__)

INF = math.inf

# Конечное число символов или INF
LcpValue = Union[int, float]

PairMemo = Dict[Tuple[int, int], LcpValue]


def is_infinite(value: LcpValue) -> bool:
    return value == INF


def _pair_key(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def _lcp_ids(o: JointColexOrder, a: int, b: int, memo: PairMemo) -> LcpValue:
    rank, tail, labels = o.rank, o.tail, o.graph.labels
    if rank[a] == rank[b]:
        return INF

    path: List[Tuple[int, int]] = []
    visited = set()
    while True:
        key = _pair_key(a, b)
        if key in memo:
            base = memo[key]
            break
        if labels[a // 2] != labels[b // 2]:
            base = 0
            break
        if key in visited:
            # все метки совпали по циклу => строки равны, а классы разные
            raise ConsistencyError(f"LCP walk revisited item pair {key} with distinct classes")
        visited.add(key)
        path.append(key)
        a, b = int(tail[a]), int(tail[b])

    memo[_pair_key(a, b)] = base
    for steps_back, key in enumerate(reversed(path), 1):
        memo[key] = base + steps_back
    return base + len(path)


def lcp_pair(o: JointColexOrder, i: Item, j: Item, memo: Optional[PairMemo] = None) -> LcpValue:
    a, b = o.check_item(i), o.check_item(j)
    return _lcp_ids(o, a, b, {} if memo is None else memo)


def _adjacent_lcps(o: JointColexOrder, items: Sequence[Item], memo: PairMemo) -> Tuple[LcpValue, ...]:
    ids = [item_id(item) for item in items]
    return tuple(_lcp_ids(o, ids[k - 1], ids[k], memo) for k in range(1, len(ids)))


def build_lcp_min(o: JointColexOrder, memo: Optional[PairMemo] = None) -> Tuple[LcpValue, ...]:
    """Entry k (0-based) is lcp of the k-th and (k+1)-th smallest min strings."""
    return _adjacent_lcps(o, sorted_side(o, Side.MIN), {} if memo is None else memo)


def build_lcp_max(o: JointColexOrder, memo: Optional[PairMemo] = None) -> Tuple[LcpValue, ...]:
    return _adjacent_lcps(o, sorted_side(o, Side.MAX), {} if memo is None else memo)


def build_joint_lcp(o: JointColexOrder, memo: Optional[PairMemo] = None) -> Tuple[LcpValue, ...]:
    return _adjacent_lcps(o, o.sorted, {} if memo is None else memo)


class SparseTableRMQ:
    """Range minimum over a fixed array; INF entries are stored as np.inf."""

    def __init__(self, values: Sequence[LcpValue]):
        base = np.asarray(values, dtype=np.float64)
        self.size = base.size
        levels = [base]
        width = 1
        while 2 * width <= self.size:
            prev = levels[-1]
            levels.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2
        self._levels = levels

    def query(self, lo: int, hi: int) -> LcpValue:
        """Minimum of values[lo..hi], both 0-based and inclusive."""
        if not 0 <= lo <= hi < self.size:
            raise ItemError(f"RMQ range [{lo}, {hi}] out of 0..{self.size - 1}")
        k = (hi - lo + 1).bit_length() - 1
        level = self._levels[k]
        best = min(level[lo], level[hi - (1 << k) + 1])
        return INF if math.isinf(best) else int(best)


@dataclass(frozen=True)
class LcpArrays:
    lcp_min: Tuple[LcpValue, ...]
    lcp_max: Tuple[LcpValue, ...]
    lcp_joint: Tuple[LcpValue, ...]
    rmq_joint: SparseTableRMQ = field(repr=False, compare=False)


def build_lcp_arrays(o: JointColexOrder) -> LcpArrays:
    memo: PairMemo = {}
    lcp_min = build_lcp_min(o, memo)
    lcp_max = build_lcp_max(o, memo)
    lcp_joint = build_joint_lcp(o, memo)
    logger.info(
        "📏 LCP arrays: min=%s max=%s joint=%s entries, %s memoized pairs",
        len(lcp_min), len(lcp_max), len(lcp_joint), len(memo),
    )
    return LcpArrays(lcp_min=lcp_min, lcp_max=lcp_max, lcp_joint=lcp_joint, rmq_joint=SparseTableRMQ(lcp_joint))


def lcp_between(a: LcpArrays, o: JointColexOrder, i: int, j: int) -> LcpValue:
    """LCP of the items at 1-based sorted positions i < j, via the joint array."""
    size = 2 * o.n
    if not 1 <= i < j <= size:
        raise ItemError(f"positions must satisfy 1 <= i < j <= {size}, got i={i} j={j}")
    # lcp_joint[k] (0-based) pairs positions k+1 and k+2
    return a.rmq_joint.query(i - 1, j - 2)


def common_prefix_length(x: Sequence, y: Sequence) -> int:
    k = 0
    for p, q in zip(x, y):
        if p != q:
            break
        k += 1
    return k

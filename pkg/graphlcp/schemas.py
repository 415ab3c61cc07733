from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, StrictInt


INDEX_VERSION = "graphlcp-index/1"


class GraphSection(BaseModel):
    integer_labels: bool = False
    labels: List[Union[StrictInt, str]]
    edges: List[Tuple[int, int]]


class OrderEntry(BaseModel):
    rank: int
    node: int
    side: Literal["MIN", "MAX"]


class ChainSection(BaseModel):
    p: int = Field(..., ge=1, description="Ширина порядка на узлах")
    chains: List[List[int]]
    antichain: List[int]


class BuildMetadata(BaseModel):
    n: int
    e: int
    sigma: int
    rounds: int
    timings: Optional[Dict[str, float]] = None


class IndexDocument(BaseModel):
    version: str = INDEX_VERSION
    fingerprint: str
    digest: str = ""
    graph: GraphSection
    order: List[OrderEntry]
    # None = бесконечность
    lcp_min: List[Optional[int]]
    lcp_max: List[Optional[int]]
    lcp_joint: List[Optional[int]]
    chains: ChainSection
    metadata: BuildMetadata


class CheckReport(BaseModel):
    patterns: int
    ms_ok: int = 0
    order_ok: bool = True
    rmq_ok: bool = True
    convexity_ok: bool = True

    def summary(self) -> str:
        def flag(ok: bool) -> str:
            return "ok" if ok else "FAIL"

        return (
            f"ms:{self.ms_ok}/{self.patterns} order:{flag(self.order_ok)} "
            f"rmq:{flag(self.rmq_ok)} convexity:{flag(self.convexity_ok)}"
        )

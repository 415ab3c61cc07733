from __future__ import annotations

import hashlib
import json
import logging
from typing import List, Optional

from pydantic import ValidationError
from sqlalchemy.orm import Session

from ..errors import GraphLcpError, IndexDocumentError
from ..models import CachedIndex
from ..schemas import (
    INDEX_VERSION,
    BuildMetadata,
    ChainSection,
    GraphSection,
    IndexDocument,
    OrderEntry,
)
from .graph import LabeledGraph, build_graph, graph_fingerprint
from .lcp import LcpValue, is_infinite
from .matching import MSIndex, build_ms_index


logger = logging.getLogger(__name__)


def _encode_lcp(values) -> List[Optional[int]]:
    return [None if is_infinite(v) else int(v) for v in values]


def _digest(doc: IndexDocument) -> str:
    h = hashlib.sha256()
    h.update(doc.model_copy(update={"digest": ""}).model_dump_json().encode("utf-8"))
    return h.hexdigest()


def index_to_document(x: MSIndex, with_timings: bool = False) -> IndexDocument:
    g, order, chains = x.graph, x.order, x.chains
    doc = IndexDocument(
        version=INDEX_VERSION,
        fingerprint=x.fingerprint,
        graph=GraphSection(
            integer_labels=g.integer_labels,
            labels=list(g.labels),
            edges=[list(edge) for edge in g.edges],
        ),
        order=[
            OrderEntry(rank=order.rank_of(item), node=item.node, side=item.side.name)
            for item in order.sorted
        ],
        lcp_min=_encode_lcp(x.lcp.lcp_min),
        lcp_max=_encode_lcp(x.lcp.lcp_max),
        lcp_joint=_encode_lcp(x.lcp.lcp_joint),
        chains=ChainSection(
            p=chains.p,
            chains=[list(chain) for chain in chains.chains],
            antichain=list(chains.antichain),
        ),
        metadata=BuildMetadata(
            n=g.n,
            e=g.e,
            sigma=g.sigma,
            rounds=order.rounds,
            timings={k: round(v, 6) for k, v in x.timings.items()} if with_timings else None,
        ),
    )
    return doc.model_copy(update={"digest": _digest(doc)})


def document_to_json(doc: IndexDocument) -> str:
    return doc.model_dump_json(indent=2) + "\n"


def load_document(text: str) -> IndexDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IndexDocumentError(f"index document is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise IndexDocumentError("index document must be a JSON object")

    version = data.get("version")
    if version != INDEX_VERSION:
        raise IndexDocumentError(f"index version mismatch: expected {INDEX_VERSION!r}, got {version!r}")

    try:
        doc = IndexDocument.model_validate(data)
    except ValidationError as exc:
        raise IndexDocumentError(f"malformed index document: {exc.error_count()} error(s)") from exc

    if _digest(doc) != doc.digest:
        raise IndexDocumentError("fingerprint mismatch: document digest does not match its content")
    try:
        graph = graph_from_document(doc)
    except GraphLcpError as exc:
        raise IndexDocumentError(f"malformed graph section: {exc}") from exc
    if graph_fingerprint(graph) != doc.fingerprint:
        raise IndexDocumentError("fingerprint mismatch: graph section does not match the recorded fingerprint")
    return doc


def graph_from_document(doc: IndexDocument) -> LabeledGraph:
    return build_graph(
        doc.graph.labels,
        [tuple(edge) for edge in doc.graph.edges],
        integer_labels=doc.graph.integer_labels,
    )


def _body(doc: IndexDocument) -> dict:
    return doc.model_dump(exclude={"digest": True, "metadata": {"timings": True}})


def index_from_document(doc: IndexDocument) -> MSIndex:
    """Rebuilds the index from the graph section and checks it against the stored arrays."""
    index = build_ms_index(graph_from_document(doc))
    if _body(index_to_document(index)) != _body(doc):
        raise IndexDocumentError("index document disagrees with a rebuild of its own graph")
    return index


def read_index(text: str) -> MSIndex:
    return index_from_document(load_document(text))


# ---------------------------------------------------------------------------
# Кэш документов в БД
# ---------------------------------------------------------------------------

def cached_document(db: Session, fingerprint: str) -> Optional[str]:
    cached = db.query(CachedIndex).filter_by(fingerprint=fingerprint, version=INDEX_VERSION).first()
    if cached:
        logger.info("   ⚡ Index found in cache: %s", fingerprint[:12])
        return cached.document_json
    logger.info("   🆕 Index not cached: %s", fingerprint[:12])
    return None


def store_document(db: Session, fingerprint: str, document_json: str) -> None:
    logger.info("   💾 Caching index %s", fingerprint[:12])
    db.merge(CachedIndex(fingerprint=fingerprint, version=INDEX_VERSION, document_json=document_json))
    db.commit()


def format_lcp(value: Optional[LcpValue]) -> str:
    if value is None or is_infinite(value):
        return "inf"
    return str(int(value))

import itertools

import pytest
from hypothesis import settings as hypothesis_settings
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from graphlcp import models  # noqa: F401
from graphlcp.db import Base
from graphlcp.services.graph import SENTINEL, build_graph
from graphlcp.services.matching import build_ms_index


hypothesis_settings.register_profile("graphlcp", derandomize=True, deadline=None, max_examples=60)
hypothesis_settings.load_profile("graphlcp")


# s=0:$, v1=1:a, v2=2:b, v3=3:c
PATH3_TEXT = "sentinel: yes\nv 0 $\nv 1 a\nv 2 b\nv 3 c\ne 0 0\ne 0 1\ne 1 2\ne 2 3\n"
# u=0:a, v=1:b
CYCLE2_TEXT = "v 0 a\nv 1 b\ne 0 1\ne 1 0\n"
# x=0:a, y=1:a
TWINS_TEXT = "v 0 a\nv 1 a\ne 0 0\ne 1 1\n"
# s=0:$, b1=1:b, c1=2:c, d1=3:d, x=4:a, z=5:a
WIDTH2_TEXT = (
    "sentinel: yes\n"
    "v 0 $\nv 1 b\nv 2 c\nv 3 d\nv 4 a\nv 5 a\n"
    "e 0 0\ne 0 1\ne 0 2\ne 0 3\ne 1 4\ne 2 4\ne 1 5\ne 3 5\n"
)
# a -> b -> c без сентинела
RAW_PATH_TEXT = "v 0 a\nv 1 b\nv 2 c\ne 0 1\ne 1 2\n"


def de_bruijn_graph(alphabet="ab", k=3):
    kmers = ["".join(t) for t in itertools.product(alphabet, repeat=k)]
    index = {kmer: i for i, kmer in enumerate(kmers)}
    edges = [(index[kmer], index[kmer[1:] + c]) for kmer in kmers for c in alphabet]
    return build_graph([kmer[-1] for kmer in kmers], edges)


@pytest.fixture
def path3():
    return build_graph([SENTINEL, "a", "b", "c"], [(0, 0), (0, 1), (1, 2), (2, 3)])


@pytest.fixture
def cycle2():
    return build_graph(["a", "b"], [(0, 1), (1, 0)])


@pytest.fixture
def twins():
    return build_graph(["a", "a"], [(0, 0), (1, 1)])


@pytest.fixture
def width2():
    return build_graph(
        [SENTINEL, "b", "c", "d", "a", "a"],
        [(0, 0), (0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (1, 5), (3, 5)],
    )


@pytest.fixture
def debruijn3():
    return de_bruijn_graph()


@pytest.fixture
def path3_index(path3):
    return build_ms_index(path3)


@pytest.fixture
def width2_index(width2):
    return build_ms_index(width2)


@pytest.fixture
def cycle2_index(cycle2):
    return build_ms_index(cycle2)


@pytest.fixture
def db_session():
    engine = create_engine("sqlite:///:memory:", connect_args={"check_same_thread": False})
    TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    Base.metadata.create_all(bind=engine)
    db = TestingSessionLocal()
    try:
        yield db
    finally:
        db.close()


GRAPH_TEXTS = {
    "path3": PATH3_TEXT,
    "cycle2": CYCLE2_TEXT,
    "twins": TWINS_TEXT,
    "width2": WIDTH2_TEXT,
    "raw_path": RAW_PATH_TEXT,
}


@pytest.fixture
def graph_texts():
    return dict(GRAPH_TEXTS)


@pytest.fixture
def graph_files(tmp_path):
    paths = {}
    for name, text in GRAPH_TEXTS.items():
        path = tmp_path / f"{name}.graph"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths

import pytest

from cnemci.corpus import prepare_corpus
from cnemci.netbuild import Network
from cnemci.preprocess import default_fillers, default_stopwords
from cnemci.synthetic import synthetic_corpus, synthetic_embeddings


def graph(n, edges):
    """Network over nodes "0".."n-1" from integer pairs."""
    return Network.from_edges([str(i) for i in range(n)], [(str(a), str(b)) for a, b in edges])


@pytest.fixture
def K3():
    return graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def P3():
    return graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def P4():
    return graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star():
    return graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def C4():
    return graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture(scope="session")
def synthetic():
    raws, vocab = synthetic_corpus(40, seed=0)
    emb = synthetic_embeddings(vocab, seed=0)
    return raws, vocab, emb


@pytest.fixture(scope="session")
def small_corpus():
    raws, vocab = synthetic_corpus(12, seed=5)
    emb = synthetic_embeddings(vocab, seed=5)
    return prepare_corpus(raws, default_stopwords("en"), default_fillers("en"), emb)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)

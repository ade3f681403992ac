import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnemci.embedding import EmbeddingTable
from cnemci.netbuild import COOCCURRENCE, SIMILARITY, Network, build_cooccurrence, enrich
from cnemci.preprocess import TokenSequence


def seq(tokens, breaks=()):
    return TokenSequence("t", "x", tuple(tokens), tuple(breaks))


def edge_set(net, kind=None):
    return {frozenset(e) for e in net.edges(kind)}


def test_chain():
    net = build_cooccurrence(seq(["water's", "running", "floor"]))
    assert net.nodes == ("water's", "running", "floor")
    assert edge_set(net) == {frozenset({"water's", "running"}), frozenset({"running", "floor"})}
    assert set(net.edge_kind.values()) == {COOCCURRENCE}


def test_repeated_adjacency_collapses():
    net = build_cooccurrence(seq(["cookie", "jar", "cookie", "jar"]))
    assert net.n_nodes == 2 and net.n_edges == 1


def test_no_self_loops():
    net = build_cooccurrence(seq(["cookie", "cookie"]))
    assert net.n_nodes == 1 and net.n_edges == 0
    assert not net.adjacency.diagonal().any()


def test_single_token():
    net = build_cooccurrence(seq(["cookie"]))
    assert net.n_nodes == 1 and net.n_edges == 0


def test_cross_sentence_flag():
    s = seq(["boy", "fell", "girl", "laughed"], breaks=(2,))
    assert build_cooccurrence(s).has_edge("fell", "girl")
    assert not build_cooccurrence(s, cross_sentence=False).has_edge("fell", "girl")


def test_network_invariants_enforced():
    with pytest.raises(ValueError):
        Network(("a", "a"), {})
    with pytest.raises(ValueError):
        Network(("a", "b"), {(1, 0): COOCCURRENCE})
    net = Network(("a", "b"), {(0, 1): COOCCURRENCE})
    with pytest.raises(ValueError):
        net.adjacency[0, 1] = False


def _emb_with_sim(sim):
    # unit vectors at a known angle
    return EmbeddingTable.from_mapping({
        "water's": [1.0, 0.0],
        "floor": [sim, np.sqrt(1 - sim * sim)],
    })


def test_enrich_above_threshold():
    net = Network.from_edges(["water's", "floor"], [])
    out, rep = enrich(net, _emb_with_sim(0.6), 0.5, return_report=True)
    assert out.edges(SIMILARITY) == [("water's", "floor")]
    assert rep.edges_added == 1 and rep.pairs_considered == 1


def test_enrich_below_threshold():
    net = Network.from_edges(["water's", "floor"], [])
    assert enrich(net, _emb_with_sim(0.6), 0.7).n_edges == 0


def test_enrich_tie_adds_nothing():
    emb = EmbeddingTable.from_mapping({"a": [1.0, 0.0], "b": [1.0, 1.0]})
    sim = 1 / np.sqrt(2)
    net = Network.from_edges(["a", "b"], [])
    exact = float(np.dot([1.0, 0.0], [1.0, 1.0]) / np.sqrt(2.0))
    assert enrich(net, emb, exact).n_edges == 0
    assert enrich(net, emb, sim - 1e-9).n_edges == 1


def test_enrich_keeps_existing_edges_and_counts_oov():
    emb = EmbeddingTable.from_mapping({"a": [1.0, 0.0], "b": [1.0, 0.01], "c": [0.99, 0.0], "z": [0.0, 0.0]})
    net = Network.from_edges(["a", "b", "c", "oov", "z"], [("a", "b")])
    out, rep = enrich(net, emb, 0.9, return_report=True)
    assert out.edge_kind[(0, 1)] == COOCCURRENCE
    assert edge_set(out, SIMILARITY) == {frozenset({"a", "c"}), frozenset({"b", "c"})}
    # 10 pairs, 1 already connected; 4 involve "oov"; a-z, b-z, c-z have a zero vector
    assert (rep.pairs_considered, rep.pairs_skipped_oov, rep.pairs_skipped_zero_norm) == (9, 4, 3)
    assert rep.edges_added == 2


def test_threshold_one_adds_nothing():
    emb = EmbeddingTable.from_mapping({"a": [1.0, 2.0], "b": [2.0, 4.0]})  # parallel
    assert enrich(Network.from_edges(["a", "b"], []), emb, 1.0).n_edges == 0


def test_edgelist_dump(tmp_path):
    emb = EmbeddingTable.from_mapping({"a": [1.0, 0.0], "c": [1.0, 0.0]})
    net = enrich(build_cooccurrence(seq(["a", "b", "c"])), emb, 0.5)
    p = tmp_path / "net.tsv"
    net.write_edgelist(p)
    assert p.read_text().splitlines() == ["a\tb\tcooccurrence", "a\tc\tsimilarity", "b\tc\tcooccurrence"]


token_streams = st.lists(st.sampled_from(list("abcdefghij")), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(token_streams)
def test_node_count_is_distinct_words(tokens):
    net = build_cooccurrence(seq(tokens))
    assert net.n_nodes == len(set(tokens))
    A = net.adjacency
    assert (A == A.T).all() and not A.diagonal().any()


@settings(max_examples=50, deadline=None)
@given(token_streams, st.integers(0, 2**32 - 1))
def test_enrichment_monotone_and_preserving(tokens, seed):
    rng = np.random.default_rng(seed)
    emb = EmbeddingTable.from_mapping({w: rng.normal(size=4) for w in "abcdefgh"})  # i, j are OOV
    net = build_cooccurrence(seq(tokens))
    prev = None
    for t in np.linspace(0.05, 1.0, 20)[::-1]:
        out = enrich(net, emb, float(t))
        assert edge_set(out, COOCCURRENCE) == edge_set(net)
        if prev is not None:
            assert prev <= edge_set(out)
        prev = edge_set(out)

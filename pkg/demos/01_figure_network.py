"""Build the co-occurrence network of a four-sentence picture description,
then enrich it with embedding similarity.

Run:  python3 demos/01_figure_network.py
"""

# %%
import numpy as np

from cnemci.embedding import EmbeddingTable
from cnemci.netbuild import COOCCURRENCE, SIMILARITY, build_cooccurrence, enrich
from cnemci.preprocess import (RawTranscript, default_fillers, default_stopwords,
                               remove_stopwords_punct, strip_disfluencies, tokenize)
from cnemci.synthetic import FIGURE_TRANSCRIPT

# %% Cleaning: tokenize, drop disfluencies, then stopwords and punctuation
raw = RawTranscript("figure", "demo", FIGURE_TRANSCRIPT)
tokens = tokenize(raw)
print("tokens:  ", " ".join(tokens.tokens))
clean = strip_disfluencies(tokens, default_fillers("en"))
content = remove_stopwords_punct(clean, default_stopwords("en"))
print("content: ", " ".join(content.tokens))

# %% Adjacent content words become edges. Repeats collapse into one node,
# and edges run across sentence ends by default.
net = build_cooccurrence(content)
print(f"\n{net.n_nodes} nodes, {net.n_edges} edges")
for a, b in net.edges(COOCCURRENCE):
    print(f"  {a} -- {b}")

# %% The network is almost a path. Enrichment links words whose vectors are
# close. Toy vectors: one axis per word, with "girl" leaning towards "boy's".
dim = net.n_nodes + 1
vectors = {w: np.eye(dim)[i] for i, w in enumerate(net.nodes)}
vectors["girl"] = vectors["boy's"] + 0.5 * np.eye(dim)[-1]
emb = EmbeddingTable.from_mapping(vectors)

enriched, report = enrich(net, emb, threshold=0.5, return_report=True)
print(f"\nafter enrichment: {enriched.n_edges} edges "
      f"({report.edges_added} added from {report.pairs_considered} pairs)")
for a, b in enriched.edges(SIMILARITY):
    print(f"  {a} .. {b}")

# %% The TSV dump is the same one `cnemci dump-network` prints
print()
print(enriched.to_edgelist(), end="")

"""Ten network measurements, and how they fold into 26 features.

Run:  python3 demos/02_topology_features.py
"""

# %%
import numpy as np

from cnemci.features import lexical_features
from cnemci.netbuild import Network, build_cooccurrence
from cnemci.preprocess import (RawTranscript, default_fillers, default_stopwords,
                               remove_stopwords_punct, strip_disfluencies, tokenize)
from cnemci.topometrics import FEATURE_NAMES, node_metrics, topo_features

np.set_printoptions(precision=3, suppress=True)

# %% Start small: a path a-b-c-d with a pendant e hanging off c
net = Network.from_edges("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("c", "e")])
nodes, graph = node_metrics(net)
for name, values in nodes.as_dict().items():
    print(f"{name:22s} {values}")
print(f"{'assortativity':22s} {graph.assortativity:.3f}")
print(f"{'diameter':22s} {graph.diameter}")

# %% Node-level series become mean / std / skewness; the two graph-level
# values are appended as they are. 8 * 3 + 2 = 26 columns.
vec = topo_features(net)
print(f"\n{len(FEATURE_NAMES)} features")
for name, value in vec.as_dict().items():
    print(f"  {name:28s} {value: .4f}")

# %% A halting narrative with fillers and repetitions
raw = RawTranscript("s1", "demo", (
    "Uh the the boy is um getting cookies.",
    "And the the stool is is tipping.",
    "The mother is drying dishes and the sink is overflowing.",
))
words = strip_disfluencies(tokenize(raw), default_fillers("en"))
print("\nafter disfluency removal:", " ".join(words.tokens))

# %% Lexical measures are taken before stopword removal
for name, value in lexical_features(words).items():
    print(f"  {name:20s} {value:.3f}")

# %% The network itself uses only content words
content = remove_stopwords_punct(words, default_stopwords("en"))
print("\ncontent network:", build_cooccurrence(content).n_nodes, "nodes")

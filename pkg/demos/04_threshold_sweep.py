"""Sweep the enrichment threshold and watch the reference cell.

Run:  python3 demos/04_threshold_sweep.py
"""

# %%
from cnemci.corpus import prepare_corpus
from cnemci.evalharness import EvalConfig, threshold_sweep
from cnemci.preprocess import default_fillers, default_stopwords
from cnemci.synthetic import synthetic_corpus, synthetic_embeddings

# %% Noisier embeddings and shorter transcripts make the task less trivial
raws, topics = synthetic_corpus(n_per_class=20, seed=1, length=(20, 30))
emb = synthetic_embeddings(topics, noise=2.0, seed=1)
corpus = prepare_corpus(raws, default_stopwords("en"), default_fillers("en"), emb)

# %% Only the reference cell matters, so train just that model on CNE
config = EvalConfig(spaces=("CNE",), models=("svm_rbf",), ensemble=False, seed=0)
thresholds = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
result = threshold_sweep(corpus, thresholds, config)

for t, acc in result.curve:
    edges = corpus.enrichment_report(t).edges_added
    print(f"threshold {t:.1f}  accuracy {acc:.3f}  similarity edges {edges:6d}")
print("best_threshold =", result.best_threshold)

# %% Selection and scoring share the same folds, so the best accuracy is
# optimistic. Treat it as a tuning aid, not an estimate.
print()
print(result.to_csv(), end="")

"""Seeded synthetic corpora with known generating clusters."""
import numpy as np


def cluster_corpus(n_clusters, docs_per_cluster, vocab_size=50, length=40, seed=0):
    """Documents drawn uniformly from one of ``n_clusters`` disjoint vocabularies.

    Returns ``(token_docs, labels)``.
    """
    rng = np.random.default_rng(seed)
    docs, labels = [], []
    for c in range(n_clusters):
        vocab = [f"c{c}w{i}" for i in range(vocab_size)]
        for _ in range(docs_per_cluster):
            docs.append([str(w) for w in rng.choice(vocab, size=length)])
            labels.append(c)
    return docs, labels

"""Exploratory LDA over crisis sentences, fit by collapsed Gibbs sampling.

The sweep kernel is compiled with numba.  Uniform draws come from a numpy
``Generator`` seeded from the config, one array per sweep, so a given seed
and corpus always produce the same count matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from numba import njit

from .exceptions import DataError


def load_stopwords(path=None) -> frozenset:
    """Read a one-word-per-line stopword file (``#`` comments); defaults to the bundled list."""
    if path is None:
        text = (resources.files("corisk") / "data" / "stopwords.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = (line.split("#", 1)[0].strip().lower() for line in text.splitlines())
    return frozenset(w for w in words if w)


@dataclass
class Corpus:
    """Bag-of-words documents over a sorted vocabulary.

    ``counts`` is a D x V integer matrix; row ``i`` belongs to ``doc_ids[i]``.
    """

    counts: np.ndarray
    vocabulary: list
    doc_ids: list

    @property
    def docs(self) -> list:
        return list(self.counts)

    @property
    def n_docs(self) -> int:
        return self.counts.shape[0]

    @property
    def n_tokens(self) -> int:
        return int(self.counts.sum())

    def token_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Flatten counts into parallel (doc index, word index) arrays, doc-major."""
        d_idx, w_idx = np.nonzero(self.counts)
        reps = self.counts[d_idx, w_idx]
        return np.repeat(d_idx, reps).astype(np.int64), np.repeat(w_idx, reps).astype(np.int64)


def build_corpus(token_docs: Sequence[Sequence[str]], stopwords: Iterable[str] = (),
                 max_df: float = 0.8, min_df: int = 2, doc_ids: Optional[Sequence] = None) -> Corpus:
    """Filter a vocabulary by stopwords and document frequency and count words per document.

    A word is kept when it is not a stopword, appears in at least ``min_df``
    documents, and in fewer than ``max_df`` of them as a fraction (``max_df=1``
    disables the upper bound).  Document frequencies are taken over all input
    documents; documents left with no tokens are dropped.
    """
    if not 0 < max_df <= 1:
        raise ValueError(f"max_df must be in (0, 1], got {max_df}")
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    if doc_ids is None:
        doc_ids = list(range(len(token_docs)))
    if len(doc_ids) != len(token_docs):
        raise ValueError("doc_ids and token_docs differ in length")
    stop = frozenset(stopwords)
    n = len(token_docs)
    df: dict[str, int] = {}
    for doc in token_docs:
        for w in set(doc):
            df[w] = df.get(w, 0) + 1
    vocab = sorted(
        w for w, c in df.items()
        if w not in stop and c >= min_df and (max_df >= 1 or c / n < max_df)
    )
    if not vocab:
        raise DataError(f"empty vocabulary after filtering (min_df={min_df}, max_df={max_df}, {n} documents)")
    index = {w: i for i, w in enumerate(vocab)}
    rows, kept = [], []
    for doc_id, doc in zip(doc_ids, token_docs):
        row = np.zeros(len(vocab), dtype=np.int64)
        for w in doc:
            j = index.get(w)
            if j is not None:
                row[j] += 1
        if row.any():
            rows.append(row)
            kept.append(doc_id)
    return Corpus(np.vstack(rows), vocab, kept)


@dataclass(frozen=True)
class LdaConfig:
    num_topics: int
    alpha: Optional[float] = None  # None -> 50 / num_topics
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.num_topics < 1:
            raise ValueError("num_topics must be >= 1")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if not self.iterations > self.burn_in >= 0:
            raise ValueError("need iterations > burn_in >= 0")

    @property
    def doc_topic_prior(self) -> float:
        return 50.0 / self.num_topics if self.alpha is None else self.alpha


@dataclass
class LdaModel:
    topic_word_counts: np.ndarray
    doc_topic_counts: np.ndarray
    config: LdaConfig
    vocabulary: list
    assignments: np.ndarray = field(repr=False)
    # counts averaged over the sweeps after burn-in
    mean_topic_word: np.ndarray = field(repr=False, default=None)
    mean_doc_topic: np.ndarray = field(repr=False, default=None)

    @property
    def num_topics(self) -> int:
        return self.topic_word_counts.shape[0]

    def topic_word_distribution(self) -> np.ndarray:
        phi = self.mean_topic_word + self.config.beta
        return phi / phi.sum(axis=1, keepdims=True)

    def doc_topic_distribution(self) -> np.ndarray:
        theta = self.mean_doc_topic + self.config.doc_topic_prior
        return theta / theta.sum(axis=1, keepdims=True)


@njit(cache=True)
def _draw(p, r):
    k = 0
    last = p.shape[0] - 1
    while k < last and r >= p[k]:
        k += 1
    return k


@njit(cache=True)
def _gibbs_sweep(doc_idx, word_idx, z, ndk, nkw, nk, alpha, beta, vbeta, u):
    n_topics = nk.shape[0]
    cum = np.empty(n_topics)
    for i in range(word_idx.shape[0]):
        d = doc_idx[i]
        w = word_idx[i]
        k = z[i]
        ndk[d, k] -= 1
        nkw[k, w] -= 1
        nk[k] -= 1
        total = 0.0
        for t in range(n_topics):
            total += (ndk[d, t] + alpha) * (nkw[t, w] + beta) / (nk[t] + vbeta)
            cum[t] = total
        k = _draw(cum, u[i] * total)
        z[i] = k
        ndk[d, k] += 1
        nkw[k, w] += 1
        nk[k] += 1


@njit(cache=True)
def _fold_in_sweep(doc_idx, word_idx, z, ndk, phi, alpha, u):
    n_topics = phi.shape[0]
    cum = np.empty(n_topics)
    for i in range(word_idx.shape[0]):
        d = doc_idx[i]
        w = word_idx[i]
        ndk[d, z[i]] -= 1
        total = 0.0
        for t in range(n_topics):
            total += (ndk[d, t] + alpha) * phi[t, w]
            cum[t] = total
        k = _draw(cum, u[i] * total)
        z[i] = k
        ndk[d, k] += 1


def fit_lda(corpus: Corpus, config: LdaConfig,
            callback: Optional[Callable[[int, np.ndarray, np.ndarray], None]] = None) -> LdaModel:
    """Collapsed Gibbs sampling for ``config.iterations`` sweeps.

    Each token is resampled from a distribution proportional to
    ``(n_dk + alpha) * (n_kw + beta) / (n_k + V * beta)`` with its own
    assignment removed.  ``callback(sweep, topic_word, doc_topic)`` runs after
    every sweep with live (read-only by contract) count arrays.
    """
    if corpus.n_docs == 0 or corpus.n_tokens == 0:
        raise DataError("cannot fit LDA on an empty corpus")
    K, V, D = config.num_topics, len(corpus.vocabulary), corpus.n_docs
    alpha, beta = config.doc_topic_prior, config.beta
    rng = np.random.default_rng(config.seed)
    doc_idx, word_idx = corpus.token_arrays()
    z = rng.integers(0, K, size=word_idx.shape[0]).astype(np.int64)

    ndk = np.zeros((D, K), dtype=np.int64)
    nkw = np.zeros((K, V), dtype=np.int64)
    np.add.at(ndk, (doc_idx, z), 1)
    np.add.at(nkw, (z, word_idx), 1)
    nk = nkw.sum(axis=1)

    sum_kw = np.zeros((K, V))
    sum_dk = np.zeros((D, K))
    kept = 0
    for sweep in range(1, config.iterations + 1):
        u = rng.random(word_idx.shape[0])
        _gibbs_sweep(doc_idx, word_idx, z, ndk, nkw, nk, alpha, beta, V * beta, u)
        if sweep > config.burn_in:
            sum_kw += nkw
            sum_dk += ndk
            kept += 1
        if callback is not None:
            callback(sweep, nkw, ndk)
    return LdaModel(nkw, ndk, config, list(corpus.vocabulary), z,
                    sum_kw / kept, sum_dk / kept)


def fold_in(model: LdaModel, counts: np.ndarray, iterations: int = 100, seed: int = 0) -> np.ndarray:
    """Infer doc-topic counts for new documents against the model's fixed topics."""
    counts = np.asarray(counts, dtype=np.int64)
    phi = model.topic_word_distribution()
    K = model.num_topics
    tmp = Corpus(counts, model.vocabulary, list(range(counts.shape[0])))
    doc_idx, word_idx = tmp.token_arrays()
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=word_idx.shape[0]).astype(np.int64)
    ndk = np.zeros((counts.shape[0], K), dtype=np.int64)
    np.add.at(ndk, (doc_idx, z), 1)
    for _ in range(iterations):
        _fold_in_sweep(doc_idx, word_idx, z, ndk, phi, model.config.doc_topic_prior,
                       rng.random(word_idx.shape[0]))
    return ndk


def top_word_indices(model: LdaModel, n: int) -> list[np.ndarray]:
    if n < 1:
        raise ValueError("n must be >= 1")
    # stable sort on negated counts keeps vocabulary order among ties
    return [np.argsort(-row, kind="stable")[:n] for row in model.topic_word_counts]


def top_words(model: LdaModel, n: int = 10) -> list[list[str]]:
    return [[model.vocabulary[j] for j in idx] for idx in top_word_indices(model, n)]


def umass_pair_score(co_df: int, df_conditioning: int) -> float:
    return math.log((co_df + 1) / df_conditioning)


def umass(word_ids: Sequence[int], presence: np.ndarray) -> float:
    """UMass coherence of a ranked word list given a D x V boolean presence matrix.

    Each word is conditioned on every higher-ranked word:
    ``sum_{m > l} log((D(w_m, w_l) + 1) / D(w_l))``.  Pairs whose conditioning
    word never occurs in ``presence`` are skipped.
    """
    score = 0.0
    for m in range(1, len(word_ids)):
        col_m = presence[:, word_ids[m]]
        for l in range(m):
            col_l = presence[:, word_ids[l]]
            df = int(np.count_nonzero(col_l))
            if df:
                score += umass_pair_score(int(np.count_nonzero(col_m & col_l)), df)
    return score


def coherence(model: LdaModel, corpus: Corpus, n: int = 10) -> np.ndarray:
    presence = corpus.counts > 0
    return np.array([umass(list(idx), presence) for idx in top_word_indices(model, n)])


def select_k(corpus: Corpus, k_range: Iterable[int] = range(2, 9), config: Optional[LdaConfig] = None,
             n: int = 10) -> tuple[int, dict]:
    """Fit one model per K with the same seed; pick the K with the highest mean coherence.

    Ties go to the smaller K.  Returns ``(best_k, {k: mean_coherence})``.
    """
    ks = sorted(set(k_range))
    if not ks:
        raise ValueError("k_range is empty")
    template = config or LdaConfig(num_topics=ks[0])
    table = {}
    for k in ks:
        model = fit_lda(corpus, replace(template, num_topics=k))
        table[k] = float(coherence(model, corpus, n).mean())
    best = max(ks, key=lambda k: (table[k], -k))
    return best, table


def topic_purity(doc_topic_counts: np.ndarray, labels: Sequence[int]) -> float:
    """Fraction of documents whose dominant topic agrees with that topic's majority label."""
    labels = np.asarray(labels)
    dominant = np.argmax(doc_topic_counts, axis=1)
    agree = 0
    for k in np.unique(dominant):
        members = labels[dominant == k]
        agree += np.bincount(members).max()
    return agree / len(labels)

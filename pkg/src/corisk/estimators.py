"""scikit-learn compatible wrappers around the text measures and the Gibbs LDA.

The transformers take an iterable of documents (raw markup strings or
:class:`~corisk.parser.FilingText`) and return numeric arrays, so they drop
into ``Pipeline``/``FeatureUnion``.  :class:`GibbsLDA` takes a document-term
count matrix like :class:`sklearn.decomposition.LatentDirichletAllocation`.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_count_matrix, check_documents
from .keywords import KeywordSpec, count_mentions, crisis_sentences, topic_hits
from .parser import split_sentences
from .sentiment import Lexicon, load_lexicon, negativity
from .topic_model import Corpus, LdaConfig, fit_lda, fold_in, top_word_indices, umass


def _resolve_spec(keyword_spec, crisis_tokens=None) -> KeywordSpec:
    if keyword_spec is None:
        spec = KeywordSpec.default()
    elif isinstance(keyword_spec, KeywordSpec):
        spec = keyword_spec
    else:
        from .keywords import load_keyword_spec
        spec = load_keyword_spec(keyword_spec)
    if crisis_tokens is not None:
        spec = KeywordSpec(tuple(crisis_tokens), spec.topics)
    return spec


class MentionCounter(BaseEstimator, TransformerMixin):
    """Crisis-keyword word counts per document, one column per crisis token.

    Parameters
    ----------
    crisis_tokens : sequence of str, default ("corona", "covid")
        Substrings marking a crisis word.  A word counts once, for the first
        token it contains.
    section : {"full", "risk"}, default "full"
        Count over the whole document or over Item 1A.
    """

    def __init__(self, crisis_tokens=("corona", "covid"), section="full"):
        self.crisis_tokens = crisis_tokens
        self.section = section

    def fit(self, X, y=None):
        self.spec_ = KeywordSpec(tuple(self.crisis_tokens), {})
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        docs = check_documents(X)
        out = np.zeros((len(docs), len(self.spec_.crisis_tokens)), dtype=np.int64)
        for i, doc in enumerate(docs):
            stats = count_mentions(doc, self.spec_, self.section)
            out[i] = [stats.mentions_by_token[t] for t in self.spec_.crisis_tokens]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "spec_")
        return np.array([f"mentions_{t}" for t in self.spec_.crisis_tokens], dtype=object)


class TopicHitCounter(BaseEstimator, TransformerMixin):
    """Crisis-sentence count followed by per-topic sentence hits.

    Parameters
    ----------
    keyword_spec : KeywordSpec, path or None
        None uses the bundled topic lists.
    """

    def __init__(self, keyword_spec=None):
        self.keyword_spec = keyword_spec

    def fit(self, X, y=None):
        self.spec_ = _resolve_spec(self.keyword_spec)
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        docs = check_documents(X)
        out = np.zeros((len(docs), 1 + len(self.spec_.topics)), dtype=np.int64)
        for i, doc in enumerate(docs):
            th = topic_hits(crisis_sentences(split_sentences(doc.section_text), self.spec_), self.spec_)
            out[i, 0] = th.crisis_sentence_count
            out[i, 1:] = [th.hits[t] for t in self.spec_.topics]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "spec_")
        return np.array(["crisis_sentences"] + [f"topic_{t}" for t in self.spec_.topics], dtype=object)


class NegativityScorer(BaseEstimator, TransformerMixin):
    """Share of lexicon-negative tokens in each document's crisis sentences.

    Undefined scores (no crisis tokens) come out as NaN.
    """

    def __init__(self, lexicon=None, crisis_tokens=("corona", "covid")):
        self.lexicon = lexicon
        self.crisis_tokens = crisis_tokens

    def fit(self, X, y=None):
        if self.lexicon is None:
            raise ValueError("NegativityScorer needs a lexicon (Lexicon, path, or iterable of words)")
        if isinstance(self.lexicon, Lexicon):
            self.lexicon_ = self.lexicon
        elif isinstance(self.lexicon, (str, Path)):
            self.lexicon_ = load_lexicon(self.lexicon)
        else:
            self.lexicon_ = Lexicon(frozenset(w.lower() for w in self.lexicon), "inline")
        self.spec_ = KeywordSpec(tuple(self.crisis_tokens), {})
        return self

    def transform(self, X):
        check_is_fitted(self, "lexicon_")
        docs = check_documents(X)
        out = np.full((len(docs), 1), np.nan)
        for i, doc in enumerate(docs):
            score = negativity(crisis_sentences(split_sentences(doc.section_text), self.spec_), self.lexicon_)
            if score.score is not None:
                out[i, 0] = score.score
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["negativity"], dtype=object)


class GibbsLDA(BaseEstimator, TransformerMixin):
    """Latent Dirichlet allocation fit by collapsed Gibbs sampling.

    Parameters
    ----------
    n_components : int, default 4
        Number of topics.
    alpha : float or None, default None
        Document-topic prior; None means ``50 / n_components``.
    beta : float, default 0.01
        Topic-word prior.
    max_iter : int, default 1000
        Gibbs sweeps.
    burn_in : int, default 200
        Sweeps discarded before averaging counts into ``components_``.
    transform_iter : int, default 100
        Fold-in sweeps used by :meth:`transform`.
    random_state : int, default 0

    Attributes
    ----------
    model_ : LdaModel
        Final count matrices and per-token assignments.
    components_ : ndarray of shape (n_components, n_features)
        Topic-word counts averaged over the post burn-in sweeps.
    n_features_in_ : int
    """

    def __init__(self, n_components=4, alpha=None, beta=0.01, max_iter=1000, burn_in=200,
                 transform_iter=100, random_state=0):
        self.n_components = n_components
        self.alpha = alpha
        self.beta = beta
        self.max_iter = max_iter
        self.burn_in = burn_in
        self.transform_iter = transform_iter
        self.random_state = random_state

    def _config(self) -> LdaConfig:
        return LdaConfig(self.n_components, self.alpha, self.beta, self.max_iter, self.burn_in,
                         int(self.random_state or 0))

    def fit(self, X, y=None, vocabulary=None):
        X = check_count_matrix(X)
        keep = X.sum(axis=1) > 0
        if not keep.any():
            raise ValueError("all documents are empty")
        vocab = list(vocabulary) if vocabulary is not None else [str(j) for j in range(X.shape[1])]
        corpus = Corpus(X[keep], vocab, list(np.flatnonzero(keep)))
        self.model_ = fit_lda(corpus, self._config())
        self.components_ = self.model_.mean_topic_word
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Normalized document-topic distributions inferred with the topics held fixed."""
        check_is_fitted(self, "model_")
        X = check_count_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, model was fit with {self.n_features_in_}")
        ndk = fold_in(self.model_, X, self.transform_iter, int(self.random_state or 0))
        theta = ndk + self.model_.config.doc_topic_prior
        return theta / theta.sum(axis=1, keepdims=True)

    def score(self, X, y=None):
        """Mean UMass coherence of the fitted topics' top-10 words, measured on ``X``."""
        check_is_fitted(self, "model_")
        presence = check_count_matrix(X) > 0
        return float(np.mean([umass(list(idx), presence) for idx in top_word_indices(self.model_, 10)]))

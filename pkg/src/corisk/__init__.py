"""Industry-level crisis risk-awareness measures from SEC 10-K filings."""

__version__ = "0.1.0"

from .estimators import GibbsLDA, MentionCounter, NegativityScorer, TopicHitCounter
from .index import aggregate, corisk, heatmap, sic_to_division
from .keywords import KeywordSpec, count_mentions, crisis_sentences, topic_hits
from .parser import extract_risk_section, extract_text, split_sentences, tokenize
from .sentiment import load_lexicon, negativity
from .timeseries import cross_correlation, daily_series, pearson, rolling_mean
from .topic_model import build_corpus, coherence, fit_lda, select_k, top_words

__all__ = [
    "GibbsLDA", "MentionCounter", "NegativityScorer", "TopicHitCounter",
    "aggregate", "corisk", "heatmap", "sic_to_division",
    "KeywordSpec", "count_mentions", "crisis_sentences", "topic_hits",
    "extract_risk_section", "extract_text", "split_sentences", "tokenize",
    "load_lexicon", "negativity",
    "cross_correlation", "daily_series", "pearson", "rolling_mean",
    "build_corpus", "coherence", "fit_lda", "select_k", "top_words",
]

"""Crisis-keyword mention counting and topic-phrase hits over crisis sentences."""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .exceptions import DataError
from .ingest import FilingRef
from .parser import FilingText, Sentence, tokenize

DEFAULT_CRISIS_TOKENS = ("corona", "covid")


@dataclass(frozen=True)
class KeywordSpec:
    """Crisis tokens (ordered; the first match wins attribution) and topic phrase lists."""

    crisis_tokens: tuple = DEFAULT_CRISIS_TOKENS
    topics: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if not self.crisis_tokens:
            raise ValueError("crisis_tokens must be non-empty")
        for tok in self.crisis_tokens:
            if not tok or tok != tok.lower():
                raise ValueError(f"crisis token {tok!r} must be non-empty lowercase")
        for name, phrases in self.topics.items():
            for phrase in phrases:
                n = len(phrase.split())
                if phrase != phrase.lower() or n not in (1, 2):
                    raise ValueError(f"topic {name}: phrase {phrase!r} must be 1-2 lowercase tokens")

    @property
    def topic_names(self) -> list[str]:
        return list(self.topics)

    @classmethod
    def default(cls) -> "KeywordSpec":
        return load_keyword_spec(resources.files("corisk") / "data" / "keywords.ini")


def load_keyword_spec(path) -> KeywordSpec:
    """Load ``[crisis]`` and ``[topic.<Name>]`` sections, one phrase per line."""
    cp = configparser.ConfigParser(allow_no_value=True, strict=False, delimiters=("=",),
                                   comment_prefixes=("#", ";"), interpolation=None)
    # phrases are lowercased by the default optionxform; repeated phrases collapse
    try:
        cp.read_string(Path(path).read_text(encoding="utf-8"))
    except configparser.Error as exc:
        raise DataError(f"{path}: {exc}") from exc
    if not cp.has_section("crisis"):
        raise DataError(f"{path}: missing [crisis] section")
    crisis = tuple(" ".join(k.split()) for k in cp.options("crisis"))
    topics = {}
    for section in cp.sections():
        if section.startswith("topic."):
            topics[section[len("topic."):]] = tuple(" ".join(k.split()) for k in cp.options(section))
    try:
        return KeywordSpec(crisis, topics)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class MentionStats:
    ref: Optional[FilingRef]
    mention_count: int
    mentions_by_token: dict

    @property
    def mentions_flag(self) -> bool:
        return self.mention_count > 0


@dataclass(frozen=True)
class TopicHits:
    ref: Optional[FilingRef]
    crisis_sentence_count: int
    hits: dict


def _crisis_pattern(spec: KeywordSpec) -> re.Pattern:
    return re.compile("|".join(re.escape(t) for t in spec.crisis_tokens))


def count_tokens(tokens: Sequence[str], spec: KeywordSpec) -> dict:
    """Per-crisis-token counts; a word counts once, for the first crisis token it contains."""
    pattern = _crisis_pattern(spec)
    counts = dict.fromkeys(spec.crisis_tokens, 0)
    for tok in tokens:
        if pattern.search(tok) is None:
            continue
        for crisis in spec.crisis_tokens:
            if crisis in tok:
                counts[crisis] += 1
                break
    return counts


def count_mentions(doc: FilingText, spec: KeywordSpec, section: str = "full") -> MentionStats:
    """Count crisis-keyword words in ``doc``.

    ``section="full"`` counts over the whole document, ``"risk"`` over Item 1A
    (falling back to the whole document when Item 1A was not found).
    """
    if section == "full":
        text = doc.full_text
    elif section == "risk":
        text = doc.section_text
    else:
        raise ValueError(f"section must be 'full' or 'risk', got {section!r}")
    by_token = count_tokens(tokenize(text), spec)
    return MentionStats(doc.ref, sum(by_token.values()), by_token)


def crisis_sentences(sentences: Sequence[Sentence], spec: KeywordSpec) -> list[Sentence]:
    pattern = _crisis_pattern(spec)
    return [s for s in sentences if pattern.search(s.text)]


def _matches(tokens: Sequence[str], unigrams: frozenset, bigrams: frozenset) -> bool:
    if unigrams.intersection(tokens):
        return True
    return any(pair in bigrams for pair in zip(tokens, tokens[1:]))


def topic_hits(crisis_sents: Sequence[Sentence], spec: KeywordSpec, ref: Optional[FilingRef] = None) -> TopicHits:
    compiled = {}
    for name, phrases in spec.topics.items():
        uni = frozenset(p for p in phrases if " " not in p)
        bi = frozenset(tuple(p.split()) for p in phrases if " " in p)
        compiled[name] = (uni, bi)
    hits = dict.fromkeys(spec.topics, 0)
    for sent in crisis_sents:
        for name, (uni, bi) in compiled.items():
            if _matches(sent.tokens, uni, bi):
                hits[name] += 1
    return TopicHits(ref, len(crisis_sents), hits)

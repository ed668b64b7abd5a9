"""Negativity of crisis sentences as the share of lexicon-negative tokens."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .exceptions import DataError
from .ingest import FilingRef
from .parser import Sentence


@dataclass(frozen=True)
class Lexicon:
    negative_words: frozenset
    name: str = "lexicon"
    source_path: str = ""

    def __post_init__(self):
        if not self.negative_words:
            raise DataError(f"lexicon {self.name!r} is empty")
        bad = [w for w in self.negative_words if w != w.lower() or not w or len(w.split()) != 1]
        if bad:
            raise DataError(f"lexicon entries must be single lowercase words: {sorted(bad)[:5]}")

    def __contains__(self, word) -> bool:
        return word in self.negative_words

    def __len__(self) -> int:
        return len(self.negative_words)


def load_lexicon(path, name: Optional[str] = None) -> Lexicon:
    """One word per line; ``#`` starts a comment.  Words are lowercased and deduplicated."""
    path = Path(path)
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    if not words:
        raise DataError(f"{path}: lexicon is empty after removing comments")
    return Lexicon(frozenset(words), name or path.stem, str(path))


@dataclass(frozen=True)
class NegativityScore:
    ref: Optional[FilingRef]
    score: Optional[float]
    negative_token_count: int
    total_token_count: int
    crisis_sentence_count: int

    @property
    def defined(self) -> bool:
        return self.score is not None


def negativity(crisis_sents: Sequence[Sentence], lex: Lexicon, ref: Optional[FilingRef] = None) -> NegativityScore:
    """Share of tokens in ``crisis_sents`` that are lexicon entries; None when there are no tokens."""
    total = negative = 0
    for sent in crisis_sents:
        total += len(sent.tokens)
        negative += sum(1 for tok in sent.tokens if tok in lex.negative_words)
    score = negative / total if total else None
    return NegativityScore(ref, score, negative, total, len(crisis_sents))

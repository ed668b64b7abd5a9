"""SIC divisions, weekly industry aggregates, the CoRisk compound index and the topic heatmap."""
from __future__ import annotations

import csv
import datetime as dt
import functools
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Mapping, Optional, Sequence

OTHER = "Other"
ALL_INDUSTRIES = "All industries"
DEFAULT_MENTION_CAP = 25.0
LOW_SUPPORT_THRESHOLD = 5


@functools.lru_cache(maxsize=None)
def sic_divisions() -> tuple:
    """``(low, high, division)`` rows from the bundled ``sic_divisions.csv``."""
    text = (resources.files("corisk") / "data" / "sic_divisions.csv").read_text(encoding="utf-8")
    return tuple((int(r["low"]), int(r["high"]), r["division"]) for r in csv.DictReader(io.StringIO(text)))


def sic_to_division(sic: str) -> str:
    sic = (sic or "").strip()
    if not sic.isdigit():
        return OTHER
    code = int(sic)
    for low, high, division in sic_divisions():
        if low <= code <= high:
            return division
    return OTHER


def iso_week(date: dt.date) -> str:
    year, week, _ = date.isocalendar()
    return f"{year}-W{week:02d}"


@dataclass(frozen=True)
class FilingMetrics:
    """One filing's inputs to aggregation: mention count and (possibly undefined) negativity."""

    accession_id: str
    filing_date: dt.date
    industry: str
    mention_count: int
    negativity: Optional[float] = None


@dataclass(frozen=True)
class IndustryWeekAggregate:
    industry: str
    week: str
    n_reports: int
    n_mentioning: int
    mention_share: float
    mean_mentions: float
    mean_negativity: Optional[float]

    @property
    def low_support(self) -> bool:
        return self.n_reports < LOW_SUPPORT_THRESHOLD


@dataclass(frozen=True)
class CoRiskPoint:
    industry: str
    week: str
    components: tuple
    value: float


def _mean(values: Sequence[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


def _aggregate_cell(industry: str, week: str, rows: Sequence[FilingMetrics]) -> IndustryWeekAggregate:
    n = len(rows)
    mentioning = sum(1 for r in rows if r.mention_count > 0)
    defined = [r.negativity for r in rows if r.negativity is not None]
    return IndustryWeekAggregate(
        industry=industry,
        week=week,
        n_reports=n,
        n_mentioning=mentioning,
        mention_share=mentioning / n,
        mean_mentions=math.fsum(r.mention_count for r in rows) / n,
        mean_negativity=_mean(sorted(defined)),
    )


def aggregate(filing_metrics: Iterable[FilingMetrics], week_fn: Callable[[dt.date], str] = iso_week,
              pooled: bool = False) -> list[IndustryWeekAggregate]:
    """One aggregate per (industry, week) cell that has at least one report.

    With ``pooled=True`` an extra ``"All industries"`` cell is emitted per week.
    Output is sorted by (industry, week) and independent of input order.
    """
    cells: dict[tuple, list] = {}
    for m in filing_metrics:
        week = week_fn(m.filing_date)
        cells.setdefault((m.industry, week), []).append(m)
        if pooled:
            cells.setdefault((ALL_INDUSTRIES, week), []).append(m)
    return [_aggregate_cell(ind, wk, rows) for (ind, wk), rows in sorted(cells.items(), key=lambda kv: kv[0])]


def geometric_mean(values: Sequence[float]) -> float:
    if any(v < 0 for v in values):
        raise ValueError(f"geometric mean needs non-negative values, got {values}")
    return math.prod(values) ** (1.0 / len(values))


def corisk(agg: IndustryWeekAggregate, mention_cap: float = DEFAULT_MENTION_CAP) -> CoRiskPoint:
    """Geometric mean of mention share, capped mean mentions and mean negativity.

    Mean mentions are divided by ``mention_cap`` and clipped at 1; undefined
    negativity enters as 0, so the value is 0 until all three components move.
    """
    if not mention_cap > 0:
        raise ValueError("mention_cap must be positive")
    s = agg.mention_share
    m = min(agg.mean_mentions / mention_cap, 1.0)
    n = agg.mean_negativity if agg.mean_negativity is not None else 0.0
    return CoRiskPoint(agg.industry, agg.week, (s, m, n), geometric_mean((s, m, n)))


@dataclass(frozen=True)
class TopicHeatmap:
    """Industry x topic rates per 1,000 crisis sentences; a row is None when the industry has none."""

    topics: tuple
    rates: Mapping[str, Optional[dict]]
    crisis_sentences: Mapping[str, int]

    @property
    def industries(self) -> list[str]:
        return list(self.rates)

    def rate(self, industry: str, topic: str) -> Optional[float]:
        row = self.rates[industry]
        return None if row is None else row[topic]


def heatmap(topic_hits_by_filing: Sequence, divisions: Sequence[str], pooled: bool = False) -> TopicHeatmap:
    """Pool topic hits per industry: ``1000 * sum(hits) / sum(crisis sentences)``.

    ``topic_hits_by_filing[i]`` (a :class:`~corisk.keywords.TopicHits`) belongs to
    industry ``divisions[i]``.
    """
    if len(topic_hits_by_filing) != len(divisions):
        raise ValueError("topic hits and divisions differ in length")
    topics: tuple = ()
    for th in topic_hits_by_filing:
        if not topics:
            topics = tuple(th.hits)
        elif tuple(th.hits) != topics:
            raise ValueError("topic hits were computed with different keyword specs")
    hits: dict[str, dict] = {}
    sents: dict[str, int] = {}
    groups = [(d, th) for d, th in zip(divisions, topic_hits_by_filing)]
    if pooled:
        groups += [(ALL_INDUSTRIES, th) for th in topic_hits_by_filing]
    for industry, th in groups:
        row = hits.setdefault(industry, dict.fromkeys(topics, 0))
        sents[industry] = sents.get(industry, 0) + th.crisis_sentence_count
        for t in topics:
            row[t] += th.hits[t]
    rates = {}
    for industry in sorted(hits):
        total = sents[industry]
        rates[industry] = None if total == 0 else {t: 1000.0 * hits[industry][t] / total for t in topics}
    return TopicHeatmap(topics, rates, {k: sents[k] for k in sorted(sents)})

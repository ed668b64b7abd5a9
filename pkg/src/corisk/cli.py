"""Command-line pipeline: fetch -> analyze -> index -> correlate -> topics.

Stages hand off through files in the output directory, so each one can be
rerun on its own::

    corisk all --config run.ini
    corisk index --config run.ini --out results/
"""
from __future__ import annotations

import argparse
import concurrent.futures as cf
import configparser
import csv
import datetime as dt
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path
from typing import Optional

from . import __version__
from .exceptions import ConfigError, CoriskError, DataError, NetworkError, ParseError
from .index import (ALL_INDUSTRIES, DEFAULT_MENTION_CAP, LOW_SUPPORT_THRESHOLD, FilingMetrics,
                    aggregate, corisk, heatmap, sic_to_division)
from .ingest import (DEFAULT_BASE_URL, DEFAULT_RATE_PER_SEC, DEFAULT_USER_AGENT, EdgarClient, FilingCache,
                     FilingRef, HttpSource, LocalSource, RawFiling, load_prices, sic_from_header)
from .keywords import KeywordSpec, TopicHits, count_mentions, crisis_sentences, load_keyword_spec, topic_hits
from .parser import extract_text, split_sentences
from .sentiment import Lexicon, load_lexicon, negativity
from .timeseries import LAG_CONVENTION, DatedScore, Series, cross_correlation, daily_series, rolling_mean
from .topic_model import LdaConfig, build_corpus, coherence, fit_lda, load_stopwords, select_k

logger = logging.getLogger("corisk")

MANIFEST = "manifest.csv"
FILINGS = "filings.csv"
CRISIS_DOCS = "crisis_docs.jsonl"
CORISK = "corisk.csv"
HEATMAP = "heatmap.csv"
XCORR = "xcorr.csv"
XCORR_RAW = "xcorr_raw.csv"
TOPIC_COHERENCE = "topics_coherence.csv"
TOPIC_WORDS = "topics_top_words.csv"
RUN_META = "run_meta.json"

DEFAULT_START = dt.date(2020, 1, 30)


@dataclass(frozen=True)
class RunConfig:
    mode: str = "fixture"
    since: dt.date = DEFAULT_START
    until: dt.date = dt.date(2020, 4, 23)
    form_type: str = "10-K"
    include_amendments: bool = False
    out_dir: Path = Path("out")
    cache_dir: Optional[Path] = None
    fixture_dir: Optional[Path] = None
    base_url: str = DEFAULT_BASE_URL
    rate_per_sec: float = DEFAULT_RATE_PER_SEC
    user_agent: str = DEFAULT_USER_AGENT
    fetch_workers: int = 4
    lexicon: Optional[Path] = None
    keywords: Optional[Path] = None
    stopwords: Optional[Path] = None
    prices: Optional[Path] = None
    prices_series: Optional[str] = None
    workers: int = 1
    mention_cap: float = DEFAULT_MENTION_CAP
    low_support: int = LOW_SUPPORT_THRESHOLD
    window: int = 7
    max_lag: int = 14
    weighting: str = "report_mean"
    seed: int = 0
    lda_alpha: Optional[float] = None
    lda_beta: float = 0.01
    lda_iterations: int = 1000
    lda_burn_in: int = 200
    k_min: int = 2
    k_max: int = 8
    top_n: int = 10
    max_df: float = 0.8
    min_df: int = 2

    @property
    def cache(self) -> Path:
        return self.cache_dir if self.cache_dir is not None else self.out_dir / "cache"

    @property
    def k_range(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def lda_config(self, k: Optional[int] = None) -> LdaConfig:
        return LdaConfig(k or self.k_min, self.lda_alpha, self.lda_beta, self.lda_iterations,
                         self.lda_burn_in, self.seed)

    def digest(self) -> str:
        """Hash of the analysis parameters; output and cache locations are excluded."""
        params = {k: str(v) for k, v in asdict(self).items() if k not in ("out_dir", "cache_dir")}
        return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()[:12]

    def validate(self) -> None:
        if self.mode not in ("live", "fixture"):
            raise ConfigError(f"mode must be 'live' or 'fixture', got {self.mode!r}")
        if self.since > self.until:
            raise ConfigError(f"empty date range: since {self.since} is after until {self.until}")
        if self.mode == "fixture" and self.fixture_dir is None:
            raise ConfigError("fixture mode needs [fixture] dir")
        for name in ("fixture_dir", "lexicon", "keywords", "stopwords", "prices"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ConfigError(f"{name}: path does not exist: {path}")
        if self.rate_per_sec <= 0:
            raise ConfigError("edgar.rate_per_sec must be positive")
        if self.weighting not in ("report_mean", "token_weighted"):
            raise ConfigError(f"timeseries.weighting must be report_mean or token_weighted, got {self.weighting!r}")
        if self.window < 1 or self.max_lag < 0 or self.mention_cap <= 0:
            raise ConfigError("need window >= 1, max_lag >= 0, mention_cap > 0")
        if not 2 <= self.k_min <= self.k_max:
            raise ConfigError("need 2 <= lda.k_min <= lda.k_max")
        try:
            self.lda_config()
        except ValueError as exc:
            raise ConfigError(f"lda: {exc}") from exc


# (section, key, field, parser)
_KEYS = [
    ("run", "mode", "mode", str),
    ("run", "since", "since", dt.date.fromisoformat),
    ("run", "until", "until", dt.date.fromisoformat),
    ("run", "form_type", "form_type", str),
    ("run", "include_amendments", "include_amendments", "bool"),
    ("run", "out", "out_dir", "path"),
    ("run", "seed", "seed", int),
    ("run", "workers", "workers", int),
    ("edgar", "base_url", "base_url", str),
    ("edgar", "rate_per_sec", "rate_per_sec", float),
    ("edgar", "user_agent", "user_agent", str),
    ("edgar", "fetch_workers", "fetch_workers", int),
    ("fixture", "dir", "fixture_dir", "path"),
    ("cache", "dir", "cache_dir", "path"),
    ("paths", "lexicon", "lexicon", "path"),
    ("paths", "keywords", "keywords", "path"),
    ("paths", "stopwords", "stopwords", "path"),
    ("paths", "prices", "prices", "path"),
    ("paths", "prices_series", "prices_series", str),
    ("index", "mention_cap", "mention_cap", float),
    ("index", "low_support", "low_support", int),
    ("timeseries", "window", "window", int),
    ("timeseries", "max_lag", "max_lag", int),
    ("timeseries", "weighting", "weighting", str),
    ("lda", "alpha", "lda_alpha", float),
    ("lda", "beta", "lda_beta", float),
    ("lda", "iterations", "lda_iterations", int),
    ("lda", "burn_in", "lda_burn_in", int),
    ("lda", "k_min", "k_min", int),
    ("lda", "k_max", "k_max", int),
    ("lda", "top_n", "top_n", int),
    ("lda", "max_df", "max_df", float),
    ("lda", "min_df", "min_df", int),
]


def load_config(path=None, **overrides) -> RunConfig:
    """Read an INI config; relative paths resolve against the config file's directory.

    Keyword overrides (``None`` values ignored) win over file values.
    """
    values = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        base = path.parent.resolve()
        known = {(s, k) for s, k, _, _ in _KEYS}
        for section in cp.sections():
            for key in cp.options(section):
                if (section, key) not in known:
                    raise ConfigError(f"{path}: unknown key {section}.{key}")
        for section, key, name, conv in _KEYS:
            raw = cp.get(section, key, fallback=None)
            if raw is None or raw.strip() == "":
                continue
            raw = raw.strip()
            try:
                if conv == "path":
                    p = Path(raw).expanduser()
                    values[name] = p if p.is_absolute() else base / p
                elif conv == "bool":
                    values[name] = cp.getboolean(section, key)
                else:
                    values[name] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"{path}: bad value for {section}.{key}: {raw!r} ({exc})") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------- output helpers

def _header_line(cfg: RunConfig, extra: str = "") -> str:
    line = f"# corisk {__version__} config={cfg.digest()}"
    return f"{line} {extra}".rstrip() + "\n"


def _write_csv(path: Path, cfg: RunConfig, header: list, rows, extra_meta: str = "") -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(_header_line(cfg, extra_meta))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_csv_rows(path: Path) -> list[dict]:
    """Rows of a CSV written by this tool, skipping ``#`` metadata lines."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.6f}"


def _record_run(cfg: RunConfig, stage: str, summary: dict) -> None:
    # timestamps live here, not in the CSVs, so result files stay byte-reproducible
    path = cfg.out_dir / RUN_META
    meta = json.loads(path.read_text()) if path.is_file() else {}
    meta[stage] = {
        "finished_at": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
        "config": cfg.digest(),
        **summary,
    }
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- fetch

def make_client(cfg: RunConfig) -> EdgarClient:
    if cfg.mode == "fixture":
        source = LocalSource(cfg.fixture_dir)
    else:
        source = HttpSource(cfg.base_url, cfg.rate_per_sec, cfg.user_agent)
    return EdgarClient(source, FilingCache(cfg.cache), cfg.include_amendments)


def cmd_fetch(cfg: RunConfig, client: Optional[EdgarClient] = None) -> dict:
    client = client or make_client(cfg)
    refs = client.list_filings(cfg.since, cfg.until, cfg.form_type)
    downloaded = failed = 0
    rows = []

    def fetch(ref: FilingRef) -> RawFiling:
        return client.fetch_filing(ref)

    with cf.ThreadPoolExecutor(max_workers=max(1, cfg.fetch_workers)) as pool:
        futures = [pool.submit(fetch, ref) for ref in refs]
        for ref, fut in zip(refs, futures):
            try:
                raw = fut.result()
            except NetworkError as exc:
                logger.error("fetch failed for %s: %s", ref.accession_id, exc)
                failed += 1
                continue
            downloaded += not raw.from_cache
            sic = ref.sic_code if ref.sic_code != "unknown" else sic_from_header(raw.content)
            rows.append([ref.accession_id, ref.cik, ref.company_name, ref.form_type, sic,
                         ref.filing_date.isoformat(), ref.document_url,
                         str(client.cache.path_for(ref.accession_id).resolve())])
    _write_csv(cfg.out_dir / MANIFEST, cfg,
               ["accession_id", "cik", "company_name", "form_type", "sic", "date", "document_url", "cache_path"],
               rows)
    summary = {"listed": len(refs), "downloaded": downloaded, "cached": len(rows) - downloaded, "failed": failed,
               "index_lines_skipped": client.last_skipped}
    _record_run(cfg, "fetch", summary)
    logger.info("fetch: %(listed)d listed, %(downloaded)d downloaded, %(cached)d from cache, %(failed)d failed",
                summary)
    return summary


def read_manifest(cfg: RunConfig) -> list[FilingRef]:
    path = cfg.out_dir / MANIFEST
    if not path.is_file():
        raise DataError(f"{path} not found; run `corisk fetch` first")
    refs = []
    for row in read_csv_rows(path):
        refs.append(FilingRef(row["cik"], row["company_name"], row["sic"], row["form_type"],
                              dt.date.fromisoformat(row["date"]), row["accession_id"], row["document_url"]))
    return refs


# ---------------------------------------------------------------- analyze

@dataclass
class FilingAnalysis:
    ref: FilingRef
    industry: str
    extraction_method: str
    mention_count: int
    crisis_sentence_count: int
    negative_tokens: int
    total_tokens: int
    negativity: Optional[float]
    hits: dict
    crisis_tokens: list = field(repr=False, default_factory=list)


def analyze_filing(raw: RawFiling, spec: KeywordSpec, lexicon: Lexicon) -> FilingAnalysis:
    """All per-filing measures: mentions over the full text, negativity and topics over Item 1A."""
    doc = extract_text(raw)
    mentions = count_mentions(doc, spec, section="full")
    crisis = crisis_sentences(split_sentences(doc.section_text), spec)
    neg = negativity(crisis, lexicon, raw.ref)
    hits = topic_hits(crisis, spec, raw.ref)
    return FilingAnalysis(
        ref=raw.ref,
        industry=sic_to_division(raw.ref.sic_code),
        extraction_method=doc.extraction_method.value,
        mention_count=mentions.mention_count,
        crisis_sentence_count=len(crisis),
        negative_tokens=neg.negative_token_count,
        total_tokens=neg.total_token_count,
        negativity=neg.score,
        hits=hits.hits,
        crisis_tokens=[tok for s in crisis for tok in s.tokens],
    )


def _analyze_job(args):
    ref, cache_root, spec, lexicon = args
    hit = FilingCache(cache_root).get(ref.accession_id)
    if hit is None:
        raise DataError(f"{ref.accession_id} is not in the cache at {cache_root}; rerun `corisk fetch`")
    return analyze_filing(RawFiling(ref, hit[0], hit[1], True), spec, lexicon)


def _outcome(call):
    # per-filing failures are reported and skipped rather than aborting the run
    try:
        return call()
    except (ParseError, DataError, OSError) as exc:
        return exc


def _load_spec(cfg: RunConfig) -> KeywordSpec:
    return load_keyword_spec(cfg.keywords) if cfg.keywords else KeywordSpec.default()


def cmd_analyze(cfg: RunConfig) -> dict:
    if cfg.lexicon is None:
        raise ConfigError("analyze needs a negative-word lexicon: set [paths] lexicon or pass --lexicon")
    refs = sorted(read_manifest(cfg), key=lambda r: r.accession_id)
    spec = _load_spec(cfg)
    lexicon = load_lexicon(cfg.lexicon)
    jobs = [(ref, cfg.cache, spec, lexicon) for ref in refs]

    if cfg.workers > 1:
        with cf.ProcessPoolExecutor(cfg.workers) as pool:
            futures = [pool.submit(_analyze_job, job) for job in jobs]
            outcomes = [_outcome(fut.result) for fut in futures]
    else:
        outcomes = [_outcome(partial(_analyze_job, job)) for job in jobs]
    results, failures = [], 0
    for ref, outcome in zip(refs, outcomes):
        if isinstance(outcome, Exception):
            logger.error("analyze failed for %s: %s", ref.accession_id, outcome)
            failures += 1
        else:
            results.append(outcome)

    topics = list(spec.topics)
    rows = []
    for a in results:
        rows.append([a.ref.accession_id, a.ref.cik, a.ref.sic_code, a.industry, a.ref.filing_date.isoformat(),
                     a.extraction_method, a.mention_count, int(a.mention_count > 0), a.crisis_sentence_count,
                     a.negative_tokens, a.total_tokens, _fmt(a.negativity)] + [a.hits[t] for t in topics])
    _write_csv(cfg.out_dir / FILINGS, cfg,
               ["accession_id", "cik", "sic", "industry", "date", "extraction_method", "mention_count",
                "mentions_flag", "crisis_sentences", "negative_tokens", "total_tokens", "negativity"]
               + [f"hits_{t}" for t in topics], rows)
    with open(cfg.out_dir / CRISIS_DOCS, "w", encoding="utf-8") as fh:
        for a in results:
            fh.write(json.dumps({"accession_id": a.ref.accession_id, "tokens": a.crisis_tokens}) + "\n")
    summary = {"analyzed": len(results), "failed": failures}
    _record_run(cfg, "analyze", summary)
    logger.info("analyze: %d filings analyzed, %d failures", len(results), failures)
    return summary


def read_filings(cfg: RunConfig) -> list[dict]:
    path = cfg.out_dir / FILINGS
    if not path.is_file():
        raise DataError(f"{path} not found; run `corisk analyze` first")
    return read_csv_rows(path)


def _opt_float(s: str) -> Optional[float]:
    return float(s) if s not in ("", None) else None


# ---------------------------------------------------------------- index

def cmd_index(cfg: RunConfig) -> dict:
    rows = read_filings(cfg)
    if not rows:
        raise DataError("filings.csv has no rows; nothing to index")
    metrics = [FilingMetrics(r["accession_id"], dt.date.fromisoformat(r["date"]), r["industry"],
                             int(r["mention_count"]), _opt_float(r["negativity"])) for r in rows]
    out = []
    for agg in aggregate(metrics, pooled=True):
        point = corisk(agg, cfg.mention_cap)
        out.append([agg.industry, agg.week, agg.n_reports, _fmt(agg.mention_share), _fmt(agg.mean_mentions),
                    _fmt(agg.mean_negativity), _fmt(point.value), int(agg.n_reports < cfg.low_support)])
    _write_csv(cfg.out_dir / CORISK, cfg,
               ["industry", "week", "n_reports", "mention_share", "mean_mentions", "mean_negativity", "corisk",
                "low_support"], out, extra_meta=f"mention_cap={cfg.mention_cap:g}")

    topics = [c[len("hits_"):] for c in rows[0] if c.startswith("hits_")]
    hits = [TopicHits(None, int(r["crisis_sentences"]), {t: int(r[f"hits_{t}"]) for t in topics}) for r in rows]
    hm = heatmap(hits, [r["industry"] for r in rows], pooled=True)
    hm_rows = []
    for industry in sorted(hm.industries, key=lambda i: (i == ALL_INDUSTRIES, i)):
        for t in hm.topics:
            rate = hm.rate(industry, t)
            hm_rows.append([industry, t, "" if rate is None else f"{rate:.3f}", hm.crisis_sentences[industry]])
    _write_csv(cfg.out_dir / HEATMAP, cfg, ["industry", "topic", "rate_per_1000", "crisis_sentences"], hm_rows)
    summary = {"cells": len(out), "heatmap_rows": len(hm_rows)}
    _record_run(cfg, "index", summary)
    return summary


# ---------------------------------------------------------------- correlate

def _price_series(cfg: RunConfig) -> Series:
    if cfg.prices is None:
        raise DataError("no prices file configured ([paths] prices)")
    if not Path(cfg.prices).is_file():
        raise DataError(f"prices file not found: {cfg.prices}")
    points = load_prices(cfg.prices)
    names = sorted({p.series_name for p in points})
    if cfg.prices_series is not None:
        points = [p for p in points if p.series_name == cfg.prices_series]
    elif len(names) > 1:
        raise DataError(f"prices file holds several series {names}; set [paths] prices_series")
    if not points:
        raise DataError(f"no price points in {cfg.prices}")
    return Series(tuple((p.date, p.close) for p in points), points[0].series_name)


def _xcorr_rows(result) -> list:
    return [[lag, _fmt(result.correlations[lag]), result.pairs_per_lag[lag]] for lag in result.lags]


def cmd_correlate(cfg: RunConfig) -> dict:
    rows = read_filings(cfg)
    prices = _price_series(cfg)
    scores = [DatedScore(dt.date.fromisoformat(r["date"]), _opt_float(r["negativity"]),
                         int(r["negative_tokens"]), int(r["total_tokens"])) for r in rows]
    try:
        raw = daily_series(scores, cfg.weighting)
    except ValueError as exc:
        raise DataError(f"cannot build negativity series: {exc}") from exc
    smooth = rolling_mean(raw, cfg.window)
    results = {}
    for name, series, fname in (("smoothed", smooth, XCORR), ("raw", raw, XCORR_RAW)):
        res = cross_correlation(series, prices, cfg.max_lag)
        results[name] = res
        meta = (f"series={name} window={cfg.window if name == 'smoothed' else 1} weighting={cfg.weighting} "
                f"best_lag={res.best_lag} best_rho={res.best_rho:.6f} convention=\"{LAG_CONVENTION}\"")
        _write_csv(cfg.out_dir / fname, cfg, ["lag_days", "rho", "n_pairs"], _xcorr_rows(res), extra_meta=meta)
    summary = {k: {"best_lag": v.best_lag, "best_rho": v.best_rho} for k, v in results.items()}
    _record_run(cfg, "correlate", summary)
    logger.info("correlate: best lag %d (rho %.3f) smoothed, %d (rho %.3f) raw",
                results["smoothed"].best_lag, results["smoothed"].best_rho,
                results["raw"].best_lag, results["raw"].best_rho)
    return summary


# ---------------------------------------------------------------- topics

def cmd_topics(cfg: RunConfig) -> dict:
    path = cfg.out_dir / CRISIS_DOCS
    if not path.is_file():
        raise DataError(f"{path} not found; run `corisk analyze` first")
    docs, ids = [], []
    for line in path.read_text(encoding="utf-8").splitlines():
        rec = json.loads(line)
        docs.append(rec["tokens"])
        ids.append(rec["accession_id"])
    corpus = build_corpus(docs, load_stopwords(cfg.stopwords), cfg.max_df, cfg.min_df, ids)
    best, table = select_k(corpus, cfg.k_range, cfg.lda_config(), cfg.top_n)
    model = fit_lda(corpus, cfg.lda_config(best))
    per_topic = coherence(model, corpus, cfg.top_n)
    _write_csv(cfg.out_dir / TOPIC_COHERENCE, cfg, ["k", "mean_coherence", "chosen"],
               [[k, _fmt(table[k]), int(k == best)] for k in sorted(table)],
               extra_meta=f"chosen_k={best} metric=umass top_n={cfg.top_n} docs={corpus.n_docs} "
                          f"vocabulary={len(corpus.vocabulary)}")
    word_rows = []
    for k, row in enumerate(model.topic_word_counts):
        order = sorted(range(len(row)), key=lambda j: (-row[j], j))[:cfg.top_n]
        for rank, j in enumerate(order, start=1):
            word_rows.append([k, rank, corpus.vocabulary[j], int(row[j])])
    _write_csv(cfg.out_dir / TOPIC_WORDS, cfg, ["topic", "rank", "word", "count"], word_rows,
               extra_meta="coherence=" + ",".join(f"{c:.4f}" for c in per_topic))
    summary = {"chosen_k": best, "docs": corpus.n_docs, "vocabulary": len(corpus.vocabulary)}
    _record_run(cfg, "topics", summary)
    return summary


def cmd_all(cfg: RunConfig) -> dict:
    summary = {"fetch": cmd_fetch(cfg), "analyze": cmd_analyze(cfg), "index": cmd_index(cfg)}
    if cfg.prices is not None:
        summary["correlate"] = cmd_correlate(cfg)
    else:
        logger.warning("no prices file configured; skipping correlate")
    summary["topics"] = cmd_topics(cfg)
    return summary


COMMANDS = {
    "fetch": cmd_fetch,
    "analyze": cmd_analyze,
    "index": cmd_index,
    "correlate": cmd_correlate,
    "topics": cmd_topics,
    "all": cmd_all,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corisk", description="Industry crisis-risk index from SEC 10-K filings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI config file")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--mode", choices=("live", "fixture"))
    common.add_argument("--since", type=dt.date.fromisoformat, help="first filing date (YYYY-MM-DD)")
    common.add_argument("--until", type=dt.date.fromisoformat, help="last filing date (YYYY-MM-DD)")
    common.add_argument("--seed", type=int)
    common.add_argument("--lexicon", type=Path, help="negative-word list, one word per line")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, mode=args.mode, out_dir=args.out, since=args.since, until=args.until,
                          seed=args.seed, lexicon=args.lexicon)
        summary = COMMANDS[args.command](cfg)
    except CoriskError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    print(json.dumps(summary, sort_keys=True, default=str))
    fetch = summary.get("fetch", {}) if args.command == "all" else summary
    if args.command in ("fetch", "all") and fetch.get("failed"):
        # filings that failed to download are retried on the next (resumable) run
        return NetworkError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

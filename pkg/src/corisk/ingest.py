"""Filing acquisition from EDGAR index files, with on-disk caching and rate limiting.

Live mode reads the quarterly ``edgar/full-index/<year>/QTR<n>/master.idx`` files and
the full-submission documents they point to.  Fixture mode reads the same
relative layout from a local directory, so tests and demos never touch the
network.
"""
from __future__ import annotations

import collections
import csv
import datetime as dt
import hashlib
import json
import logging
import os
import random
import re
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional
from urllib.parse import urlparse, unquote

import requests

from .exceptions import CacheError, DataError, HTTPStatusError, NetworkError

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://www.sec.gov/Archives"
DEFAULT_RATE_PER_SEC = 8.0
DEFAULT_USER_AGENT = "corisk research pipeline admin@example.org"
RETRY_STATUSES = (429, 503)

_SIC_HEADER = re.compile(r"standard industrial classification:[^\[\n]*\[(\d{4})\]", re.I)
_ASSIGNED_SIC = re.compile(r"<assigned-sic>\s*(\d{4})", re.I)
_ACCESSION = re.compile(r"(\d{10}-\d{2}-\d{6})")


@dataclass(frozen=True)
class FilingRef:
    cik: str
    company_name: str
    sic_code: str
    form_type: str
    filing_date: dt.date
    accession_id: str
    document_url: str

    def __post_init__(self):
        if self.sic_code != "unknown" and not re.fullmatch(r"\d{4}", self.sic_code):
            raise ValueError(f"sic_code must be 4 digits or 'unknown', got {self.sic_code!r}")

    @property
    def cik_int(self) -> int:
        # CIKs compare equal regardless of zero padding
        return int(self.cik)

    def with_sic(self, sic_code: str) -> "FilingRef":
        return FilingRef(self.cik, self.company_name, sic_code, self.form_type,
                         self.filing_date, self.accession_id, self.document_url)


@dataclass(frozen=True)
class RawFiling:
    ref: FilingRef
    content: bytes
    fetched_at: dt.datetime
    from_cache: bool

    def __post_init__(self):
        if not self.content:
            raise ValueError(f"empty content for {self.ref.accession_id}")


@dataclass(frozen=True)
class PricePoint:
    date: dt.date
    close: float
    series_name: str


@dataclass(frozen=True)
class IndexParseResult:
    refs: list
    skipped: int


def parse_date(value: str) -> dt.date:
    """Parse ``YYYY-MM-DD`` or the compact ``YYYYMMDD`` used by daily index files."""
    value = value.strip()
    if re.fullmatch(r"\d{8}", value):
        return dt.date(int(value[:4]), int(value[4:6]), int(value[6:]))
    return dt.date.fromisoformat(value)


def accession_from_path(path: str) -> str:
    m = _ACCESSION.search(path)
    if m is None:
        raise ValueError(f"no accession number in {path!r}")
    return m.group(1)


def parse_master_index(text: str, form_types: Iterable[str], url_for: Callable[[str], str]) -> IndexParseResult:
    """Parse a pipe-delimited EDGAR master index.

    Rows are ``CIK|Company Name|Form Type|Date Filed|Filename`` with an optional
    sixth SIC column (not present in EDGAR's own files).  Everything up to the
    dashed separator line is header.  Malformed rows are skipped and counted.
    """
    forms = set(form_types)
    lines = text.splitlines()
    start = 0
    for i, line in enumerate(lines):
        if line.startswith("-----"):
            start = i + 1
            break
    refs, skipped = [], 0
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) not in (5, 6):
            logger.warning("index line %d: expected 5 fields, got %d", lineno, len(parts))
            skipped += 1
            continue
        cik, company, form, date_s, filename = parts[:5]
        if form not in forms:
            continue
        try:
            if not cik.isdigit():
                raise ValueError(f"non-numeric CIK {cik!r}")
            filing_date = parse_date(date_s)
            accession = accession_from_path(filename)
            sic = parts[5] if len(parts) == 6 and re.fullmatch(r"\d{4}", parts[5]) else "unknown"
            refs.append(FilingRef(cik, company, sic, form, filing_date, accession, url_for(filename)))
        except ValueError as exc:
            logger.warning("index line %d skipped: %s", lineno, exc)
            skipped += 1
    return IndexParseResult(refs, skipped)


def quarters_between(start: dt.date, end: dt.date) -> list[tuple[int, int]]:
    out = []
    y, q = start.year, (start.month - 1) // 3 + 1
    end_key = (end.year, (end.month - 1) // 3 + 1)
    while (y, q) <= end_key:
        out.append((y, q))
        y, q = (y + 1, 1) if q == 4 else (y, q + 1)
    return out


def sic_from_header(content: bytes) -> str:
    """SIC code from an SEC submission header, or ``"unknown"``."""
    head = content[:20000].decode("utf-8", errors="replace")
    m = _SIC_HEADER.search(head) or _ASSIGNED_SIC.search(head)
    return m.group(1) if m else "unknown"


class RateLimiter:
    """Sliding-window limiter: at most ``rate`` acquisitions in any one-second window.

    Thread safe.  ``clock`` and ``sleep`` are injectable for tests.
    """

    def __init__(self, rate: float = DEFAULT_RATE_PER_SEC, clock=time.monotonic, sleep=time.sleep):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.rate = rate
        self._capacity = max(1, int(rate))
        self._window = self._capacity / rate
        self._stamps = collections.deque()
        self._lock = threading.Lock()
        self._clock = clock
        self._sleep = sleep

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._stamps and now - self._stamps[0] >= self._window:
                    self._stamps.popleft()
                if len(self._stamps) < self._capacity:
                    self._stamps.append(now)
                    return
                wait = self._window - (now - self._stamps[0])
            self._sleep(max(wait, 0.001))


class HttpSource:
    """Rate-limited HTTP access to the EDGAR archive with retry on 429/503."""

    def __init__(self, base_url: str = DEFAULT_BASE_URL, rate_per_sec: float = DEFAULT_RATE_PER_SEC,
                 user_agent: str = DEFAULT_USER_AGENT, timeout: float = 30.0,
                 max_attempts: int = 5, backoff_base: float = 1.0, backoff_factor: float = 2.0,
                 session: Optional[requests.Session] = None, sleep=time.sleep):
        self.base_url = base_url.rstrip("/")
        self.limiter = RateLimiter(rate_per_sec)
        self.timeout = timeout
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self.backoff_factor = backoff_factor
        self.session = session or requests.Session()
        self.session.headers["User-Agent"] = user_agent
        self._sleep = sleep

    def url_for(self, relpath: str) -> str:
        return f"{self.base_url}/{relpath.lstrip('/')}"

    def get(self, url: str) -> bytes:
        for attempt in range(1, self.max_attempts + 1):
            self.limiter.acquire()
            try:
                resp = self.session.get(url, timeout=self.timeout)
            except requests.RequestException as exc:
                raise NetworkError(url, str(exc)) from exc
            if resp.status_code in RETRY_STATUSES and attempt < self.max_attempts:
                delay = self.backoff_base * self.backoff_factor ** (attempt - 1)
                delay *= random.uniform(0.5, 1.5)
                logger.info("HTTP %d from %s, retrying in %.2fs", resp.status_code, url, delay)
                self._sleep(delay)
                continue
            if resp.status_code >= 400:
                raise HTTPStatusError(url, resp.status_code)
            return resp.content
        raise AssertionError("unreachable")


class LocalSource:
    """Reads an EDGAR-shaped directory tree; stands in for the network in fixture mode."""

    def __init__(self, root):
        self.root = Path(root).resolve()
        if not self.root.is_dir():
            raise FileNotFoundError(f"fixture directory not found: {self.root}")

    def url_for(self, relpath: str) -> str:
        return (self.root / relpath.lstrip("/")).as_uri()

    def get(self, url: str) -> bytes:
        path = Path(unquote(urlparse(url).path))
        if not path.is_file():
            raise HTTPStatusError(url, 404)
        return path.read_bytes()


class FilingCache:
    """One file per accession id, sharded by a hash prefix, with a JSON sidecar."""

    def __init__(self, root):
        self.root = Path(root)

    def path_for(self, accession_id: str) -> Path:
        shard = hashlib.sha256(accession_id.encode()).hexdigest()[:2]
        return self.root / shard / f"{accession_id}.txt"

    def get(self, accession_id: str) -> Optional[tuple[bytes, dt.datetime]]:
        path = self.path_for(accession_id)
        meta = path.with_suffix(".json")
        if not (path.is_file() and meta.is_file()):
            return None
        fetched_at = dt.datetime.fromisoformat(json.loads(meta.read_text())["fetched_at"])
        return path.read_bytes(), fetched_at

    def put(self, ref: FilingRef, content: bytes, fetched_at: dt.datetime) -> Path:
        path = self.path_for(ref.accession_id)
        meta = {
            "accession_id": ref.accession_id,
            "document_url": ref.document_url,
            "fetched_at": fetched_at.isoformat(),
            "sha256": hashlib.sha256(content).hexdigest(),
        }
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            # content first, sidecar last: a filing counts as cached only once both exist
            _atomic_write(path, content)
            _atomic_write(path.with_suffix(".json"), json.dumps(meta, sort_keys=True).encode())
        except OSError as exc:
            raise CacheError(f"cannot write cache entry for {ref.accession_id}: {exc}") from exc
        return path


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


class EdgarClient:
    """Lists and fetches filings through a source (HTTP or local) and a cache.

    Parameters
    ----------
    source : HttpSource or LocalSource
    cache : FilingCache
    include_amendments : bool, default False
        Also accept ``<form>/A`` rows when listing.
    """

    def __init__(self, source, cache: FilingCache, include_amendments: bool = False):
        self.source = source
        self.cache = cache
        self.include_amendments = include_amendments
        # malformed index lines skipped by the most recent list_filings call
        self.last_skipped = 0

    def list_filings(self, start_date: dt.date, end_date: dt.date, form_type: str = "10-K") -> list[FilingRef]:
        if start_date > end_date:
            raise ValueError(f"start_date {start_date} is after end_date {end_date}")
        if not form_type:
            raise ValueError("form_type must be non-empty")
        forms = {form_type, f"{form_type}/A"} if self.include_amendments else {form_type}
        seen: dict[str, FilingRef] = {}
        skipped = 0
        for year, qtr in quarters_between(start_date, end_date):
            url = self.source.url_for(f"edgar/full-index/{year}/QTR{qtr}/master.idx")
            try:
                text = self.source.get(url).decode("latin-1")
            except HTTPStatusError as exc:
                if exc.status == 404:
                    logger.warning("no index for %d Q%d (%s)", year, qtr, url)
                    continue
                raise
            result = parse_master_index(text, forms, self.source.url_for)
            skipped += result.skipped
            for ref in result.refs:
                if start_date <= ref.filing_date <= end_date:
                    seen.setdefault(ref.accession_id, ref)
        self.last_skipped = skipped
        if skipped:
            logger.warning("skipped %d malformed index lines", skipped)
        return sorted(seen.values(), key=lambda r: (r.filing_date, r.accession_id))

    def is_cached(self, ref: FilingRef) -> bool:
        return self.cache.get(ref.accession_id) is not None

    def fetch_filing(self, ref: FilingRef) -> RawFiling:
        scheme = urlparse(ref.document_url).scheme
        if scheme not in ("http", "https", "file"):
            raise ValueError(f"malformed document_url {ref.document_url!r}")
        hit = self.cache.get(ref.accession_id)
        if hit is not None:
            content, fetched_at = hit
            return RawFiling(ref, content, fetched_at, True)
        content = self.source.get(ref.document_url)
        if not content:
            raise DataError(f"empty document for {ref.accession_id} at {ref.document_url}")
        fetched_at = dt.datetime.now(dt.timezone.utc).replace(microsecond=0)
        self.cache.put(ref, content, fetched_at)
        return RawFiling(ref, content, fetched_at, False)


def load_prices(source_path, series_name: Optional[str] = None) -> list[PricePoint]:
    """Read a ``date,close[,series]`` CSV into price points sorted by date.

    Duplicate (series, date) pairs, unparsable dates and non-positive prices
    raise :class:`DataError` naming the 1-based file row.
    """
    path = Path(source_path)
    default_name = series_name or path.stem
    points, seen = [], {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        if reader.fieldnames is None:
            return []
        missing = {"date", "close"} - set(reader.fieldnames)
        if missing:
            raise DataError(f"{path}: missing columns {sorted(missing)}")
        for rowno, row in enumerate(reader, start=2):
            try:
                date = dt.date.fromisoformat(row["date"].strip())
            except (ValueError, AttributeError):
                raise DataError(f"{path}: row {rowno}: unparsable date {row['date']!r}") from None
            try:
                close = float(row["close"])
            except (TypeError, ValueError):
                raise DataError(f"{path}: row {rowno}: unparsable price {row['close']!r}") from None
            if not close > 0:
                raise DataError(f"{path}: row {rowno}: non-positive price {close}")
            name = (row.get("series") or "").strip() or default_name
            key = (name, date)
            if key in seen:
                raise DataError(f"{path}: row {rowno}: duplicate date {date} (first at row {seen[key]})")
            seen[key] = rowno
            points.append(PricePoint(date, close, name))
    points.sort(key=lambda p: (p.series_name, p.date))
    return points

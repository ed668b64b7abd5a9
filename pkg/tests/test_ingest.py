import datetime as dt
import hashlib

import pytest

from corisk.exceptions import CacheError, DataError, HTTPStatusError, NetworkError
from corisk.ingest import (EdgarClient, FilingCache, HttpSource, LocalSource, RateLimiter, RawFiling,
                           load_prices, parse_date, parse_master_index, quarters_between, sic_from_header)

from conftest import ARCHIVE, make_ref

D = dt.date


@pytest.fixture
def client(tmp_path):
    return EdgarClient(LocalSource(ARCHIVE), FilingCache(tmp_path / "cache"))


# ---------------------------------------------------------------- listing

def test_fixture_index_lists_exactly_the_three_10k_rows(client):
    refs = client.list_filings(D(2020, 1, 1), D(2020, 3, 31), "10-K")
    # hand count of the committed master.idx: 3 rows of form 10-K, 2 of form 10-Q
    assert [r.accession_id for r in refs] == [
        "0000320193-20-000011", "0000789019-20-000022", "0001018724-20-000033"]
    assert all(r.form_type == "10-K" for r in refs)
    assert all(r.document_url.startswith("file://") for r in refs)


def test_single_day_range(client):
    refs = client.list_filings(D(2020, 1, 30), D(2020, 1, 30), "10-K")
    assert len(refs) == 1
    assert all(r.filing_date == D(2020, 1, 30) and r.form_type == "10-K" for r in refs)


def test_inverted_range_is_a_precondition_error(client):
    with pytest.raises(ValueError):
        client.list_filings(D(2020, 2, 1), D(2020, 1, 1), "10-K")


def test_listing_is_deterministic_and_within_range(client):
    a = client.list_filings(D(2020, 2, 1), D(2020, 6, 30), "10-K")
    b = client.list_filings(D(2020, 2, 1), D(2020, 6, 30), "10-K")
    assert a == b
    assert all(D(2020, 2, 1) <= r.filing_date <= D(2020, 6, 30) for r in a)
    assert len({r.accession_id for r in a}) == len(a)


def test_missing_quarter_index_is_skipped(client):
    # no QTR2 index in the fixture: logged and skipped, QTR1 rows still returned
    assert len(client.list_filings(D(2020, 3, 1), D(2020, 5, 1))) == 1


def test_malformed_index_lines_are_skipped_and_counted():
    text = ("header\n----------\n"
            "1|A|10-K|2020-02-03|edgar/data/1/0000000001-20-000001.txt\n"
            "garbage line without pipes\n"
            "x2|B|10-K|2020-02-03|edgar/data/2/0000000002-20-000002.txt\n"
            "3|C|10-K|2020-02-30|edgar/data/3/0000000003-20-000003.txt\n"
            "4|D|10-K|20200204|edgar/data/4/0000000004-20-000004.txt|6022\n")
    result = parse_master_index(text, {"10-K"}, lambda p: "file:///" + p)
    assert [r.cik for r in result.refs] == ["1", "4"]
    assert result.skipped == 3
    assert result.refs[1].sic_code == "6022"
    assert result.refs[1].filing_date == D(2020, 2, 4)


def test_client_reports_skip_count(tmp_path):
    idx = tmp_path / "edgar" / "full-index" / "2020" / "QTR1" / "master.idx"
    idx.parent.mkdir(parents=True)
    idx.write_text("h\n-----\n1|A|10-K|2020-02-03|edgar/data/1/0000000001-20-000001.txt\nbad\n")
    c = EdgarClient(LocalSource(tmp_path), FilingCache(tmp_path / "cache"))
    assert len(c.list_filings(D(2020, 1, 1), D(2020, 3, 31))) == 1
    assert c.last_skipped == 1


def test_amendments_excluded_by_default(tmp_path):
    idx = tmp_path / "edgar" / "full-index" / "2020" / "QTR1" / "master.idx"
    idx.parent.mkdir(parents=True)
    idx.write_text("h\n-----\n1|A|10-K|2020-02-03|edgar/data/1/0000000001-20-000001.txt\n"
                   "1|A|10-K/A|2020-02-04|edgar/data/1/0000000001-20-000002.txt\n")
    default = EdgarClient(LocalSource(tmp_path), FilingCache(tmp_path / "c"))
    amended = EdgarClient(LocalSource(tmp_path), FilingCache(tmp_path / "c"), include_amendments=True)
    assert len(default.list_filings(D(2020, 1, 1), D(2020, 3, 31))) == 1
    assert len(amended.list_filings(D(2020, 1, 1), D(2020, 3, 31))) == 2


def test_helpers():
    assert parse_date("20200130") == parse_date("2020-01-30") == D(2020, 1, 30)
    assert quarters_between(D(2019, 12, 1), D(2020, 4, 1)) == [(2019, 4), (2020, 1), (2020, 2)]
    assert sic_from_header(b"STANDARD INDUSTRIAL CLASSIFICATION:\tRETAIL [5331]\n") == "5331"
    assert sic_from_header(b"<ASSIGNED-SIC>6022\n") == "6022"
    assert sic_from_header(b"no header here") == "unknown"


def test_filing_ref_rejects_bad_sic():
    with pytest.raises(ValueError):
        make_ref(sic="53")
    assert make_ref(sic="unknown").sic_code == "unknown"
    assert make_ref(cik="0000320193").cik_int == make_ref(cik="320193").cik_int


# ---------------------------------------------------------------- fetch and cache

def test_cache_idempotence(client):
    ref = client.list_filings(D(2020, 1, 1), D(2020, 3, 31))[0]
    first = client.fetch_filing(ref)
    second = client.fetch_filing(ref)
    assert not first.from_cache and second.from_cache
    assert first.content == second.content
    assert client.is_cached(ref)


def test_cache_layout_has_sidecar(tmp_path):
    cache = FilingCache(tmp_path)
    ref = make_ref()
    path = cache.put(ref, b"body", dt.datetime(2020, 2, 3, tzinfo=dt.timezone.utc))
    assert path.parent.name == hashlib.sha256(ref.accession_id.encode()).hexdigest()[:2]
    assert path.with_suffix(".json").is_file()
    content, fetched_at = cache.get(ref.accession_id)
    assert content == b"body" and fetched_at.year == 2020


@pytest.mark.network
def test_known_1024_byte_body(http_server, tmp_path):
    body = bytes(range(256)) * 4
    http_server.routes["/edgar/data/1/0000000001-20-000001.txt"] = [(200, body)]
    source = HttpSource(http_server.base_url, rate_per_sec=50, user_agent="tests contact@example.org")
    ref = make_ref(url=source.url_for("edgar/data/1/0000000001-20-000001.txt"))
    raw = EdgarClient(source, FilingCache(tmp_path)).fetch_filing(ref)
    assert len(raw.content) == 1024
    assert http_server.user_agents == ["tests contact@example.org"]


@pytest.mark.network
def test_unreachable_host_is_network_error_and_leaves_no_cache(tmp_path):
    source = HttpSource("http://127.0.0.1:1", timeout=2)
    cache = FilingCache(tmp_path / "cache")
    ref = make_ref(url="http://127.0.0.1:1/edgar/data/1/x.txt")
    with pytest.raises(NetworkError) as info:
        EdgarClient(source, cache).fetch_filing(ref)
    assert info.value.url == ref.document_url
    assert info.value.retryable
    assert cache.get(ref.accession_id) is None
    assert not (tmp_path / "cache").exists()


@pytest.mark.network
def test_http_error_status_carries_status_and_url(http_server, tmp_path):
    http_server.routes["/gone"] = [(410, b"")]
    source = HttpSource(http_server.base_url, rate_per_sec=50)
    with pytest.raises(HTTPStatusError) as info:
        source.get(http_server.base_url + "/gone")
    assert info.value.status == 410
    assert info.value.url.endswith("/gone")


@pytest.mark.network
def test_retries_429_with_exponential_backoff(http_server):
    http_server.routes["/busy"] = [(429, b""), (503, b""), (200, b"ok")]
    delays = []
    source = HttpSource(http_server.base_url, rate_per_sec=50, sleep=delays.append)
    assert source.get(http_server.base_url + "/busy") == b"ok"
    assert len(delays) == 2
    # base 1 s, factor 2, jitter in [0.5, 1.5)
    assert 0.5 <= delays[0] < 1.5 and 1.0 <= delays[1] < 3.0


@pytest.mark.network
def test_gives_up_after_max_attempts(http_server):
    http_server.routes["/busy"] = [(503, b"")]
    delays = []
    source = HttpSource(http_server.base_url, rate_per_sec=50, sleep=delays.append)
    with pytest.raises(HTTPStatusError) as info:
        source.get(http_server.base_url + "/busy")
    assert info.value.status == 503
    assert len(delays) == 4
    assert len(http_server.hits) == 5


def test_rate_limiter_exact_with_fake_clock():
    now = [0.0]
    limiter = RateLimiter(4, clock=lambda: now[0], sleep=lambda s: now.__setitem__(0, now[0] + s))
    stamps = []
    for _ in range(20):
        limiter.acquire()
        stamps.append(now[0])
    for i, t in enumerate(stamps):
        assert sum(1 for u in stamps[i:] if u - t < 1.0) <= 4


@pytest.mark.network
def test_rate_bound_against_counting_server(http_server):
    http_server.routes["/r"] = [(200, b"x")]
    source = HttpSource(http_server.base_url, rate_per_sec=5)
    for _ in range(12):
        source.get(http_server.base_url + "/r")
    arrivals = [t for t, _ in http_server.hits]
    # windows shortened by 20 ms to absorb loopback latency jitter between acquire and arrival
    for i, t in enumerate(arrivals):
        assert sum(1 for u in arrivals[i:] if u - t < 0.98) <= 5


def test_cache_write_failure_fails_the_fetch(tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("x")
    ref = EdgarClient(LocalSource(ARCHIVE), FilingCache(tmp_path / "c")).list_filings(
        D(2020, 1, 1), D(2020, 3, 31))[0]
    client = EdgarClient(LocalSource(ARCHIVE), FilingCache(blocker))
    with pytest.raises(CacheError):
        client.fetch_filing(ref)


def test_local_source_missing_file_is_404(tmp_path):
    source = LocalSource(tmp_path)
    with pytest.raises(HTTPStatusError) as info:
        source.get(source.url_for("edgar/nothing.txt"))
    assert info.value.status == 404


def test_raw_filing_must_be_non_empty():
    with pytest.raises(ValueError):
        RawFiling(make_ref(), b"", dt.datetime.now(), False)


# ---------------------------------------------------------------- prices

def _prices(tmp_path, text):
    path = tmp_path / "prices.csv"
    path.write_text(text)
    return path


def test_prices_two_rows_in_date_order(tmp_path):
    pts = load_prices(_prices(tmp_path, "date,close\n2020-01-31,2798.4\n2020-01-30,2854.1\n"))
    assert [(p.date, p.close) for p in pts] == [(D(2020, 1, 30), 2854.1), (D(2020, 1, 31), 2798.4)]
    assert pts[0].series_name == "prices"


def test_prices_duplicate_date_cites_row(tmp_path):
    with pytest.raises(DataError, match="row 3"):
        load_prices(_prices(tmp_path, "date,close\n2020-01-30,1\n2020-01-30,2\n"))


def test_prices_same_date_in_two_series_is_fine(tmp_path):
    pts = load_prices(_prices(tmp_path, "date,close,series\n2020-01-30,1,A\n2020-01-30,2,B\n"))
    assert len(pts) == 2


def test_prices_header_only_is_empty(tmp_path):
    assert load_prices(_prices(tmp_path, "date,close\n")) == []


@pytest.mark.parametrize("row", ["2020-13-01,5", "2020-01-30,-1", "2020-01-30,0", "2020-01-30,abc"])
def test_prices_bad_rows_name_the_row(tmp_path, row):
    with pytest.raises(DataError, match="row 3"):
        load_prices(_prices(tmp_path, f"date,close\n2020-01-29,1\n{row}\n"))

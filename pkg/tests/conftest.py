import datetime as dt
import http.server
import threading
import time
from pathlib import Path

import pytest

from corisk.ingest import FilingRef

FIXTURES = Path(__file__).parent / "fixtures"
ARCHIVE = FIXTURES / "archive"
PARSER_FIXTURES = FIXTURES / "parser"
REPO = Path(__file__).resolve().parents[1]
DEMO = REPO / "demo"

NEGATIVE_WORDS = ["adverse", "adversely", "decline", "disruption", "loss", "losses", "delay",
                  "uncertain", "failure", "closure", "negatively", "severe", "impair"]


def make_ref(accession="0000000001-20-000001", date=dt.date(2020, 2, 3), sic="5331",
             url="https://example.invalid/doc.txt", cik="1"):
    return FilingRef(cik, "TEST CO", sic, "10-K", date, accession, url)


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.txt"
    path.write_text("# test lexicon\n" + "\n".join(NEGATIVE_WORDS) + "\n")
    return path


class _Handler(http.server.BaseHTTPRequestHandler):
    # routes: path -> list of (status, body); the last entry repeats once the list is exhausted
    def do_GET(self):
        server = self.server
        with server.lock:
            server.hits.append((time.monotonic(), self.path))
            server.user_agents.append(self.headers.get("User-Agent"))
            queue = server.routes.get(self.path)
            if queue is None:
                status, body = 404, b"not found"
            else:
                status, body = queue.pop(0) if len(queue) > 1 else queue[0]
        self.send_response(status)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_server():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.routes, server.hits, server.user_agents = {}, [], []
    server.lock = threading.Lock()
    server.base_url = f"http://127.0.0.1:{server.server_address[1]}"
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])

"""Replay the early-2020 10-K window against real EDGAR data and report mention shares.

Counts, per SIC division, the share of 10-K filings dated 2020-01-30..2020-03-31
that mention a crisis token anywhere in the document, then prints them next to
the reference shares (Retail 78%, Finance 23%). The result is reported, not
asserted; the acceptance suite checks the same numbers when a local snapshot
is provided through ``CORISK_SNAPSHOT_DIR``.

Usage::

    python scripts/replay_2020_window.py --user-agent "Name email@example.com" --cache ~/.cache/corisk
    python scripts/replay_2020_window.py --mirror /data/edgar-snapshot
"""
import argparse
import datetime as dt
import logging
import sys
from collections import Counter
from pathlib import Path

from corisk.exceptions import CoriskError
from corisk.index import sic_to_division
from corisk.ingest import EdgarClient, FilingCache, HttpSource, LocalSource, sic_from_header
from corisk.keywords import KeywordSpec, count_mentions
from corisk.parser import extract_text

START, END = dt.date(2020, 1, 30), dt.date(2020, 3, 31)
REFERENCE = {"Retail": 0.78, "Finance": 0.23}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--user-agent", help="contact string for live EDGAR access")
    src.add_argument("--mirror", type=Path, help="local directory laid out like the EDGAR archive")
    parser.add_argument("--cache", type=Path, default=Path("replay-cache"))
    parser.add_argument("--limit", type=int, default=None, help="only process the first N filings")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    source = LocalSource(args.mirror) if args.mirror else HttpSource(user_agent=args.user_agent)
    client = EdgarClient(source, FilingCache(args.cache))
    spec = KeywordSpec.default()
    refs = client.list_filings(START, END, "10-K")[:args.limit]
    filings, mentioning, failed = Counter(), Counter(), 0
    for i, ref in enumerate(refs, 1):
        try:
            raw = client.fetch_filing(ref)
            doc = extract_text(raw)
        except CoriskError as exc:
            logging.warning("skipping %s: %s", ref.accession_id, exc)
            failed += 1
            continue
        sic = ref.sic_code if ref.sic_code != "unknown" else sic_from_header(raw.content)
        division = sic_to_division(sic)
        filings[division] += 1
        mentioning[division] += count_mentions(doc, spec).mentions_flag
        if i % 100 == 0:
            logging.info("%d/%d filings processed", i, len(refs))

    print(f"{'division':<22}{'filings':>8}{'share':>8}{'reference':>11}")
    for division in sorted(filings):
        share = mentioning[division] / filings[division]
        ref_share = REFERENCE.get(division)
        ref_text = f"{ref_share:.0%}" if ref_share is not None else "-"
        print(f"{division:<22}{filings[division]:>8}{share:>8.1%}{ref_text:>11}")
    print(f"failed: {failed}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

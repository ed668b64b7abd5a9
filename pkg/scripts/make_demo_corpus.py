"""Generate the synthetic demo corpus under demo/.

Writes an EDGAR-shaped archive (quarterly master index plus SGML submissions),
a negative-word lexicon, a price series and a run config.  Crisis mentions and
negativity rise over February-March 2020; the price series follows the latent
negativity with a five-day delay, so the correlate stage has a lead to find.

    python scripts/make_demo_corpus.py [--out demo] [--seed 2020]
"""
import argparse
import datetime as dt
import math
import random
from pathlib import Path

INDUSTRIES = [
    # (sic, sic name, company stem, crisis intensity, preferred topic phrases)
    ("5331", "RETAIL-VARIETY STORES", "Harbor Retail", 1.0, ["store closure", "store traffic", "supply chain"]),
    ("5812", "RETAIL-EATING PLACES", "Grill House", 0.9, ["store closure", "consumer demand", "customer"]),
    ("2834", "PHARMACEUTICAL PREPARATIONS", "Novagen Pharma", 0.8, ["contract manufacturer", "supply disruption", "product development"]),
    ("3674", "SEMICONDUCTORS", "Siltronics", 0.85, ["supply chain", "manufacturing facility", "supplier"]),
    ("6022", "STATE COMMERCIAL BANKS", "First Prairie Bancorp", 0.35, ["credit availability", "cash flow", "operating result"]),
    ("6798", "REAL ESTATE INVESTMENT TRUSTS", "Keystone REIT", 0.4, ["estate value", "cash flow", "stock price"]),
    ("7372", "SERVICES-PREPACKAGED SOFTWARE", "Cloudline Software", 0.5, ["business operation", "customer", "work"]),
    ("4512", "AIR TRANSPORTATION, SCHEDULED", "Bluejet Airways", 0.95, ["travel restriction", "air travel", "airline industry"]),
    ("1311", "CRUDE PETROLEUM & NATURAL GAS", "Permian Crude", 0.6, ["market condition", "consumer demand", "cash flow"]),
]

NEGATIVE = ["adverse", "adversely", "decline", "disrupt", "disruption", "loss", "losses", "delay", "delays",
            "difficult", "uncertain", "failure", "weaken", "closure", "negatively", "severe", "impair", "shortage"]
NEUTRAL = ["operations", "results", "business", "financial", "condition", "company", "markets", "period",
           "expect", "continue", "including", "significant", "global", "customers", "future", "quarter"]
CRISIS_WORDS = ["coronavirus", "covid-19", "coronavirus outbreak", "covid-19 pandemic"]
GENERIC_RISKS = [
    "our results of operations depend on general economic conditions.",
    "we face intense competition in our markets.",
    "changes in tax law could affect our financial condition.",
    "we rely on information technology systems to operate our business.",
    "our indebtedness could limit our operating flexibility.",
    "the loss of key personnel could harm our business.",
]


def latent_negativity(day: dt.date) -> float:
    """Share of negative words in crisis sentences.

    Rises from ~0.08 to ~0.30 around 2020-02-24, with a 12-day oscillation so
    the lead of the price series is identifiable rather than a bare trend.
    """
    t = (day - dt.date(2020, 2, 24)).days
    return 0.10 + 0.20 / (1 + math.exp(-t / 5)) + 0.06 * math.sin(2 * math.pi * t / 12)


def crisis_intensity(day: dt.date) -> float:
    t = (day - dt.date(2020, 2, 20)).days
    return 1 / (1 + math.exp(-t / 6))


def business_days(start, end):
    d = start
    while d <= end:
        if d.weekday() < 5:
            yield d
        d += dt.timedelta(days=1)


def crisis_sentence(rng: random.Random, day: dt.date, topics) -> str:
    p = latent_negativity(day)
    words = [rng.choice(NEGATIVE) if rng.random() < p else rng.choice(NEUTRAL) for _ in range(8)]
    return (f"the {rng.choice(CRISIS_WORDS)} could {words[0]} our {rng.choice(topics)} "
            f"{words[1]} {words[2]} {words[3]} and {words[4]} {words[5]} {words[6]} {words[7]}.")


def filing_html(rng: random.Random, company: str, day: dt.date, intensity: float, topics, with_item1a: bool) -> str:
    n_crisis = 0
    if rng.random() < min(1.0, 0.15 + 0.9 * intensity * crisis_intensity(day)):
        n_crisis = 1 + int(rng.random() * 6 * intensity * crisis_intensity(day))
    risks = rng.sample(GENERIC_RISKS, 3) + [crisis_sentence(rng, day, topics) for _ in range(n_crisis)]
    rng.shuffle(risks)
    paras = "\n".join(f"<p>{s.capitalize()}</p>" for s in risks)
    toc = ("<table><tr><td>Item 1.</td><td>Business</td></tr><tr><td>Item 1A.</td><td>Risk Factors</td></tr>"
           "<tr><td>Item 2.</td><td>Properties</td></tr></table>")
    if with_item1a:
        body = f"{toc}\n<h2>Item 1. Business</h2>\n<p>{company} serves customers in the U.S. market.</p>\n" \
               f"<h2>Item 1A. Risk Factors</h2>\n{paras}\n<h2>Item 2. Properties</h2>\n<p>We lease our offices.</p>"
    else:
        body = f"<h2>Business</h2>\n<p>{company} is a smaller reporting company.</p>\n{paras}"
    return f"<html><body>\n<p>{company.upper()} ANNUAL REPORT {day.year}</p>\n{body}\n</body></html>\n"


def submission(accession, day, cik, name, sic, sicname, html) -> str:
    stamp = day.strftime("%Y%m%d")
    return (f"<SEC-DOCUMENT>{accession}.txt : {stamp}\n<SEC-HEADER>{accession}.hdr.sgml : {stamp}\n"
            f"ACCESSION NUMBER:\t\t{accession}\nCONFORMED SUBMISSION TYPE:\t10-K\nFILED AS OF DATE:\t\t{stamp}\n"
            f"FILER:\n\tCOMPANY DATA:\n\t\tCOMPANY CONFORMED NAME:\t\t\t{name}\n"
            f"\t\tCENTRAL INDEX KEY:\t\t\t{cik:010d}\n"
            f"\t\tSTANDARD INDUSTRIAL CLASSIFICATION:\t{sicname} [{sic}]\n</SEC-HEADER>\n"
            f"<DOCUMENT>\n<TYPE>10-K\n<SEQUENCE>1\n<TEXT>\n{html}</TEXT>\n</DOCUMENT>\n</SEC-DOCUMENT>\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("demo"))
    ap.add_argument("--seed", type=int, default=2020)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = args.out
    archive = out / "archive" / "edgar"
    start, end = dt.date(2020, 1, 30), dt.date(2020, 4, 23)

    index_rows = {}
    seq = 0
    for day in business_days(start, end):
        for _ in range(3):
            seq += 1
            sic, sicname, stem, intensity, topics = rng.choice(INDUSTRIES)
            cik = 900000 + seq
            name = f"{stem} {seq:03d} Inc".upper()
            accession = f"{cik:010d}-20-{seq:06d}"
            html = filing_html(rng, name.title(), day, intensity, topics, with_item1a=rng.random() > 0.08)
            rel = f"edgar/data/{cik}/{accession}.txt"
            path = out / "archive" / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(submission(accession, day, cik, name, sic, sicname, html))
            q = (day.month - 1) // 3 + 1
            index_rows.setdefault(q, []).append(f"{cik}|{name}|10-K|{day.isoformat()}|{rel}")
        if day.weekday() == 2:
            seq += 1
            q = (day.month - 1) // 3 + 1
            index_rows.setdefault(q, []).append(
                f"{800000 + seq}|QUARTERLY ONLY CORP|10-Q|{day.isoformat()}|edgar/data/{800000 + seq}/"
                f"{800000 + seq:010d}-20-{seq:06d}.txt")
    header = "Description:           Master Index of EDGAR Dissemination Feed (synthetic demo)\n\n" \
             "CIK|Company Name|Form Type|Date Filed|Filename\n" + "-" * 80 + "\n"
    for q, rows in index_rows.items():
        p = archive / "full-index" / "2020" / f"QTR{q}" / "master.idx"
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(header + "\n".join(rows) + "\n")

    (out / "lexicon.txt").write_text("# synthetic negative-word list for the demo corpus\n" + "\n".join(NEGATIVE) + "\n")

    # index level falls as negativity rose five calendar days earlier
    lines = ["date,close,series"]
    level0 = 2900.0
    for day in business_days(start, end):
        lagged = latent_negativity(day - dt.timedelta(days=5))
        close = level0 * (1.0 - 1.6 * (lagged - 0.08)) * (1 + rng.gauss(0, 0.004))
        lines.append(f"{day.isoformat()},{close:.2f},SP1200")
    (out / "prices.csv").write_text("\n".join(lines) + "\n")

    (out / "demo.ini").write_text("""\
[run]
mode = fixture
since = 2020-01-30
until = 2020-04-23
out = out
seed = 7

[fixture]
dir = archive

[paths]
lexicon = lexicon.txt
prices = prices.csv

[timeseries]
window = 7
max_lag = 14

[lda]
iterations = 300
burn_in = 100
k_min = 2
k_max = 8
""")


if __name__ == "__main__":
    main()

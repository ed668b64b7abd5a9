"""Markup stripping, Item 1A isolation, sentence splitting and tokenization."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Optional

from .exceptions import ParseError
from .ingest import FilingRef, RawFiling

BLOCK_TAGS = frozenset("""
address article aside blockquote br center dd div dl dt fieldset figcaption figure footer form
h1 h2 h3 h4 h5 h6 header hr li main nav ol p page pre section table tbody td tfoot th thead tr ul
""".split())
SKIP_TAGS = frozenset({"script", "style", "head", "title"})

ABBREVIATIONS = frozenset({
    "u.s.", "no.", "inc.", "corp.", "co.", "e.g.", "i.e.", "ltd.", "llc.", "mr.", "ms.", "mrs.",
    "dr.", "st.", "vs.", "etc.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
    "sept.", "oct.", "nov.", "dec.", "u.k.", "n.a.", "approx.", "fig.",
})

_TOKEN = re.compile(r"(?:[^\W_]|-)+")
_SENTENCE_END = re.compile(r"[.!?](?=\s)")
_WS = re.compile(r"[^\S\n]+")

_ITEM_1A = re.compile(r"\bitem\s*1a\b[\s.:\-\u2013\u2014]*(?:risk\s+factors\b[\s.:]*)?")
_SECTION_END = re.compile(r"\bitem\s*(?:1b|2)\b")
_DOCUMENT = re.compile(rb"<document>.*?<text>(.*?)</text>", re.I | re.S)


class ExtractionMethod(str, enum.Enum):
    ITEM1A_HEADERS = "item1a_headers"
    WHOLE_DOCUMENT_FALLBACK = "whole_document_fallback"


@dataclass(frozen=True)
class FilingText:
    ref: Optional[FilingRef]
    full_text: str
    risk_section: Optional[str]
    extraction_method: ExtractionMethod

    @property
    def section_text(self) -> str:
        """Item 1A when found, else the whole document."""
        return self.risk_section if self.risk_section is not None else self.full_text


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in SKIP_TAGS:
            self._skip += 1
        elif tag in BLOCK_TAGS:
            self.parts.append("\n")

    def handle_startendtag(self, tag, attrs):
        if tag in BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in SKIP_TAGS:
            self._skip = max(0, self._skip - 1)
        elif tag in BLOCK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data):
        if not self._skip:
            self.parts.append(data)


def html_to_text(markup: str) -> str:
    """Drop tags, decode entities, put block elements on their own lines, collapse spaces."""
    extractor = _TextExtractor()
    extractor.feed(markup)
    extractor.close()
    text = "".join(extractor.parts)
    lines = (_WS.sub(" ", line).strip() for line in text.splitlines())
    return "\n".join(line for line in lines if line)


def primary_document(content: bytes) -> bytes:
    """Body of the first ``<DOCUMENT>`` in an SGML submission, else the content itself."""
    m = _DOCUMENT.search(content)
    return m.group(1) if m else content


def _looks_binary(content: bytes, text: str) -> bool:
    if b"\x00" in content[:8192]:
        return True
    sample = text[:20000]
    return bool(sample) and sample.count("�") / len(sample) > 0.05


def extract_text(raw: RawFiling) -> FilingText:
    accession = raw.ref.accession_id if raw.ref is not None else "<unknown>"
    body = primary_document(raw.content)
    decoded = body.decode("utf-8", errors="replace")
    if _looks_binary(body, decoded):
        raise ParseError(accession, "content is binary or not decodable as text")
    return text_from_string(decoded, raw.ref)


def text_from_string(markup: str, ref: Optional[FilingRef] = None) -> FilingText:
    """Run the extraction pipeline on in-memory markup or plain text."""
    full_text = html_to_text(markup).lower()
    risk = extract_risk_section(full_text)
    method = ExtractionMethod.WHOLE_DOCUMENT_FALLBACK if risk is None else ExtractionMethod.ITEM1A_HEADERS
    return FilingText(ref, full_text, risk, method)


def _at_line_start(text: str, pos: int) -> bool:
    return pos == 0 or text[pos - 1] == "\n"


def risk_section_span(full_text: str) -> Optional[tuple[int, int]]:
    """Locate the Item 1A body as a ``(start, end)`` offset pair into ``full_text``.

    The last ``item 1a`` header wins, which skips table-of-contents entries.
    Headers that open a line are preferred over inline cross-references.  The
    section ends at the next ``item 1b`` or ``item 2`` header (end of text if
    none).  Returns None when no header exists or the body is empty.
    """
    starts = list(_ITEM_1A.finditer(full_text))
    if not starts:
        return None
    headed = [m for m in starts if _at_line_start(full_text, m.start())]
    start = (headed or starts)[-1]
    body_start = start.end()

    ends = list(_SECTION_END.finditer(full_text, body_start))
    headed_ends = [m for m in ends if _at_line_start(full_text, m.start())]
    end_match = (headed_ends or ends or [None])[0]
    body_end = end_match.start() if end_match is not None else len(full_text)

    chunk = full_text[body_start:body_end]
    stripped = chunk.strip()
    if not stripped:
        return None
    lead = len(chunk) - len(chunk.lstrip())
    return body_start + lead, body_start + lead + len(stripped)


def extract_risk_section(full_text: str) -> Optional[str]:
    span = risk_section_span(full_text)
    return None if span is None else full_text[span[0]:span[1]]


def tokenize(text: str) -> list[str]:
    """Split on anything but letters, digits and hyphens; keep interior hyphens.

    >>> tokenize("covid-19 outbreak")
    ['covid-19', 'outbreak']
    """
    out = []
    for piece in _TOKEN.findall(text):
        piece = piece.strip("-")
        if piece:
            out.append(piece)
    return out


def _is_abbreviation(text: str, end: int) -> bool:
    start = max(text.rfind(" ", 0, end), text.rfind("\n", 0, end), text.rfind("\t", 0, end)) + 1
    word = text[start:end + 1].lstrip("([\"'")
    return word in ABBREVIATIONS


def split_sentences(text: str) -> list[Sentence]:
    sentences = []
    cursor = 0
    for m in _SENTENCE_END.finditer(text):
        if m.group() == "." and _is_abbreviation(text, m.start()):
            continue
        piece = text[cursor:m.end()].strip()
        if piece:
            sentences.append(Sentence(len(sentences), piece, tuple(tokenize(piece))))
        cursor = m.end()
    tail = text[cursor:].strip()
    if tail:
        sentences.append(Sentence(len(sentences), tail, tuple(tokenize(tail))))
    return sentences

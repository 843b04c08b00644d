"""Locate "Authors' contributions" sections in article files and build a section corpus.

Input is a directory of NLM JATS ``.xml`` files or plain ``.txt`` files; the
output is one :class:`Document` per file whose section title normalizes to
``authorscontributions``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
from xml.etree import ElementTree

from .errors import MalformedInput

TARGET_TITLE = "authorscontributions"

_SEGMENT_SPLIT = re.compile(r"[;\n]")
_HEAD_COLON = re.compile(r"^\s*([^:]+?)\s*:\s*\S.*$", re.DOTALL)


@dataclass(frozen=True)
class Document:
    """One contributions section lifted out of an article file."""

    doc_id: str
    source_path: str
    contrib_text: str
    list_format_flag: bool


@dataclass(frozen=True)
class Diagnostic:
    """Per-file problem report; batches collect these instead of aborting."""

    source_path: str
    kind: str
    detail: str


def normalize_title(title: str) -> str:
    """Lowercase and strip every non-letter code point (Unicode letters survive)."""
    return "".join(ch for ch in title.lower() if ch.isalpha())


def detect_list_format(text: str) -> bool:
    """True when the section is an enumerated "author: role, role; ..." listing.

    A segment (split on ";" or newline) counts as enumerated when it has the
    shape ``<head>: <phrase-list>`` with a head shorter than 6 words; the
    section is list-format when at least half of its segments match.
    """
    segments = [s for s in _SEGMENT_SPLIT.split(text) if s.strip()]
    if not segments:
        return False
    hits = 0
    for seg in segments:
        m = _HEAD_COLON.match(seg)
        if m and len(m.group(1).split()) < 6:
            hits += 1
    return hits * 2 >= len(segments)


def _local_name(tag: object) -> str:
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _element_text(elem: ElementTree.Element) -> str:
    return " ".join("".join(elem.itertext()).split())


def _find_contrib_section(root: ElementTree.Element) -> ElementTree.Element | None:
    for elem in root.iter():
        if _local_name(elem.tag) != "sec":
            continue
        for child in elem:
            if _local_name(child.tag) == "title":
                if normalize_title(_element_text(child)) == TARGET_TITLE:
                    return elem
                break
    return None


def parse_article(data: bytes, format: str, doc_id: str = "", source_path: str = "") -> Document | None:
    """Extract the contributions section from one article, if present.

    ``format`` is ``"jats-xml"`` or ``"plain-text"``.  Plain text treats the
    whole file as the section body.  Raises :class:`MalformedInput` for
    unparseable XML.
    """
    if format == "plain-text":
        text = " ".join(data.decode("utf-8").split())
        if not text:
            return None
        return Document(doc_id, source_path, text, detect_list_format(text))
    if format != "jats-xml":
        raise ValueError(f"unknown format: {format!r}")
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise MalformedInput(str(exc)) from exc
    sec = _find_contrib_section(root)
    if sec is None:
        return None
    paragraphs = []
    for elem in sec.iter():
        if _local_name(elem.tag) == "p":
            text = _element_text(elem)
            if text:
                paragraphs.append(text)
    body = " ".join(paragraphs)
    if not body:
        return None
    return Document(doc_id, source_path, body, detect_list_format(body))


def ingest_paths(paths: Iterable[Path]) -> tuple[list[Document], list[Diagnostic]]:
    """Parse files in the given order; one diagnostic per malformed file."""
    docs: list[Document] = []
    diagnostics: list[Diagnostic] = []
    seen_ids: set[str] = set()
    for path in paths:
        fmt = "plain-text" if path.suffix.lower() == ".txt" else "jats-xml"
        doc_id = path.stem
        if doc_id in seen_ids:
            n = 2
            while f"{doc_id}-{n}" in seen_ids:
                n += 1
            doc_id = f"{doc_id}-{n}"
        try:
            doc = parse_article(path.read_bytes(), fmt, doc_id=doc_id, source_path=str(path))
        except MalformedInput as exc:
            diagnostics.append(Diagnostic(str(path), "malformed-input", str(exc)))
            continue
        if doc is not None:
            docs.append(doc)
            seen_ids.add(doc.doc_id)
    return docs, diagnostics


def ingest_directory(corpus_dir: Path) -> tuple[list[Document], list[Diagnostic]]:
    """Ingest every ``.xml``/``.txt`` file under ``corpus_dir`` in sorted order."""
    paths = sorted(
        p for p in corpus_dir.rglob("*")
        if p.is_file() and p.suffix.lower() in (".xml", ".txt")
    )
    return ingest_paths(paths)


def sample_corpus(docs: Sequence[Document], n: int, seed: int) -> list[Document]:
    """Deterministic pseudo-random subset of size ``min(n, len(docs))``.

    Input order is preserved among the selected documents.
    """
    if n < 0:
        raise ValueError("sample size must be non-negative")
    if n >= len(docs):
        return list(docs)
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(docs)), n))
    return [docs[i] for i in picked]

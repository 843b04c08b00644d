"""Deterministic generator of synthetic contributions sections with gold pairs.

Used for the bundled fixture corpus, benchmark corpora, and demos.  Templates
stay in the formulaic register of real sections; every template's keyword
signature is distinct enough that the taxonomy is recoverable by clustering
plus light curation.
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

ROLE_TEMPLATES: dict[str, list[str]] = {
    "Analysis": [
        "{S} analysed the data.",
        "{S} performed the statistical analyses.",
        "{S} carried out the statistical analyses.",
        "{S} participated in the statistical analyses.",
        "{S} carried out the immunohistochemical analysis.",
    ],
    "Study design": [
        "{S} participated in study design.",
        "{S} planned the study design.",
        "{S} planned the study.",
    ],
    "Experimenting": [
        "{S} conducted the experiments.",
        "{S} participated in the experiments.",
        "{S} conducted the molecular experiments.",
    ],
    "Data collection": [
        "{S} collected the data.",
        "{S} acquired the data.",
        "{S} collected the samples.",
    ],
    "Interpretation": [
        "{S} interpreted the data.",
        "{S} interpreted the results.",
        "{S} contributed to the interpretation of the data.",
    ],
    "Conceptualization": [
        "{S} conceived the idea.",
        "{S} conceived the concept.",
        "{S} developed the concept.",
    ],
    "Coordination": [
        "{S} coordinated the project.",
        "{S} supervised the project.",
        "{S} coordinated the research project.",
    ],
    "Literature review": [
        "{S} performed the literature search.",
        "{S} undertook the literature review.",
        "{S} performed the review of the literature.",
    ],
    "Paper drafting": [
        "{S} drafted the manuscript.",
        "{S} prepared the manuscript.",
    ],
    "Paper writing": [
        "{S} wrote the manuscript.",
        "{S} participated in the writing of the manuscript.",
    ],
    "Paper review": [
        "{S} reviewed the manuscript.",
        "{S} critically reviewed the manuscript.",
        "{S} commented on the manuscript.",
    ],
    "Paper revision": [
        "{S} revised the manuscript.",
        "{S} edited the manuscript.",
        "{S} revised the manuscript critically for important intellectual content.",
    ],
}

READING_TEMPLATES = [
    "All authors read and approved the final manuscript.",
    "All authors read and approved the final version of the manuscript.",
]

NOISE_SENTENCES = [
    "The study protocol was approved by the local ethics committee.",
    "We thank all patients for their cooperation.",
    "The funders had no influence on the content.",
]

EQUAL_TEMPLATE = "{S} contributed equally to this work."

LIST_FORMAT_TEMPLATE = (
    "{a}: study design, data collection; {b}: statistical analysis; {c}: manuscript drafting."
)

ROLE_NAMES = sorted(ROLE_TEMPLATES) + ["Paper reading"]


@dataclass(frozen=True)
class SynthDoc:
    doc_id: str
    text: str
    gold_pairs: tuple[tuple[str, str], ...]
    list_format: bool


def _make_initials(rng: random.Random, count: int) -> list[str]:
    out: list[str] = []
    used: set[str] = set()
    while len(out) < count:
        letters = rng.randint(2, 3)
        name = "".join(rng.choice(string.ascii_uppercase) for _ in range(letters))
        if letters == 3 and rng.random() < 0.4:
            name = name[:2] + "-" + name[2:]
        if name not in used:
            used.add(name)
            out.append(name)
    return out


def _subject_phrase(names: list[str]) -> str:
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def generate_doc(doc_id: str, rng: random.Random, list_format_rate: float = 0.03) -> SynthDoc:
    authors = _make_initials(rng, rng.randint(2, 6))
    if rng.random() < list_format_rate:
        a, b, c = (authors + authors)[:3]
        text = LIST_FORMAT_TEMPLATE.format(a=a, b=b, c=c)
        return SynthDoc(doc_id, text, (), True)
    roles = rng.sample(sorted(ROLE_TEMPLATES), rng.randint(3, 5))
    sentences: list[str] = []
    gold: list[tuple[str, str]] = []
    for role in roles:
        template = rng.choice(ROLE_TEMPLATES[role])
        k = rng.randint(1, min(3, len(authors)))
        who = rng.sample(authors, k)
        who = [a for a in authors if a in who]
        sentences.append(template.format(S=_subject_phrase(who)))
        for name in who:
            gold.append((name, role))
    if rng.random() < 0.10:
        pair = rng.sample(authors, min(2, len(authors)))
        sentences.append(EQUAL_TEMPLATE.format(S=_subject_phrase(pair)))
    if rng.random() < 0.30:
        sentences.append(rng.choice(NOISE_SENTENCES))
    reading = rng.choice(READING_TEMPLATES)
    sentences.append(reading)
    gold.append(("All authors", "Paper reading"))
    return SynthDoc(doc_id, " ".join(sentences), tuple(gold), False)


def generate_corpus(n: int, seed: int) -> list[SynthDoc]:
    rng = random.Random(seed)
    return [generate_doc(f"synth-{i:04d}", rng) for i in range(n)]


_JATS_SHELL = """<article>
 <front>
  <article-meta>
   <title-group><article-title>Synthetic article {doc_id}</article-title></title-group>
  </article-meta>
 </front>
 <body>
  <sec><title>Background</title><p>Context paragraph without contributor statements.</p></sec>
 </body>
 <back>
  <sec><title>{section_title}</title><p>{text}</p></sec>
 </back>
</article>
"""

SECTION_TITLES = [
    "Authors' contributions",
    "Authors’ contributions",
    "AUTHORS CONTRIBUTIONS",
]


def write_corpus(
    docs: list[SynthDoc],
    out_dir: Path,
    file_format: str = "jats-xml",
    seed: int = 0,
) -> Path:
    """Write one file per document plus gold.jsonl; returns the gold path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    for doc in docs:
        if file_format == "plain-text":
            (out_dir / f"{doc.doc_id}.txt").write_text(doc.text + "\n", encoding="utf-8")
        else:
            xml = _JATS_SHELL.format(
                doc_id=doc.doc_id,
                section_title=escape(rng.choice(SECTION_TITLES)),
                text=escape(doc.text),
            )
            (out_dir / f"{doc.doc_id}.xml").write_text(xml, encoding="utf-8")
    gold_path = out_dir / "gold.jsonl"
    with gold_path.open("w", encoding="utf-8") as f:
        for doc in docs:
            if doc.list_format:
                continue
            record = {"doc_id": doc.doc_id, "pairs": [list(p) for p in doc.gold_pairs]}
            f.write(json.dumps(record, sort_keys=True) + "\n")
    return gold_path

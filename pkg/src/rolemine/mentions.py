"""Sentence splitting and rule-based extraction of subject-action-object role mentions.

The grammar targets the formulaic register of contribution statements:
``SUBJECT-LIST VERB-GROUP-LIST OBJECT-LIST`` with conjuncts distributing
multiplicatively, so "AB and CD read and approved the final manuscript" yields
four mentions.  General-domain relation extraction is out of scope.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .stemming import stem

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:[-.'’][A-Za-z0-9]+)*|[,;:&]")
_AUTHOR_RE = re.compile(r"^[A-Z](?:[-.]?[A-Z]){1,5}$")
_BOUNDARY_RE = re.compile(r"[.!?]+")

_PRONOUNS = {"he", "she", "they", "we", "i"}
_GROUP_HEADS = {"all", "both", "the"}
_AUX = {"was", "were", "is", "are", "be", "been", "being", "has", "have", "had"}
_DETERMINERS = {"the", "a", "an"}
_SKIPPABLE = {"also", "then", "further", "subsequently", "additionally"}
_PARTICLES = {"in", "to", "out", "on", "upon", "for", "into", "with", "at", "up"}

# Verb forms whose stem is not a keyword stem, plus present/past pairs the
# stemmer cannot relate.  "read" is here for its role as a conjoined second
# predicate ("drafted and read ...").
_IRREGULAR_VERBS = {
    "wrote", "written", "writes", "read", "reads",
    "did", "done", "does", "do",
    "took", "taken", "takes",
    "gave", "given", "gives", "give",
    "made", "make", "makes", "making",
    "drew", "drawn", "draws", "draw",
    "ran", "runs", "run",
    "led", "leads", "lead",
}

# Capitalized tokens that can never open a subject name.
_SUBJECT_BLOCKLIST = {
    "the", "a", "an", "this", "that", "these", "those", "it", "its",
    "our", "their", "his", "her", "all", "both", "each", "no", "not",
    "in", "at", "on", "for", "with", "from", "during", "after", "before",
    "as", "if", "when", "while", "and", "or", "to", "of", "by",
}


def _load_keyword_stems() -> frozenset[str]:
    raw = resources.files("rolemine.data").joinpath("keywords_default.json").read_text("utf-8")
    return frozenset(entry["stem"] for entry in json.loads(raw))


_KEYWORD_STEMS = _load_keyword_stems()


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    text: str


@dataclass(frozen=True)
class RoleMention:
    """A (subject, action, object) tuple located in a document sentence."""

    doc_id: str
    sentence_index: int
    subject: str
    action: tuple[str, ...]
    object: tuple[str, ...]


@dataclass(frozen=True)
class MentionDiagnostic:
    doc_id: str
    sentence_index: int
    kind: str
    detail: str


def split_sentences(text: str, doc_id: str = "") -> list[Sentence]:
    """Split on .!? followed by whitespace and a capital.

    A period does not close a sentence when the letters right before it are a
    single uppercase initial ("J.B. approved") or when the text so far ends
    with "e.g."/"i.e.".
    """
    text = " ".join(text.split())
    pieces: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        end = m.end()
        if end >= len(text):
            break
        j = end
        while j < len(text) and text[j].isspace():
            j += 1
        if j == end:
            continue
        if j < len(text) and not text[j].isupper():
            continue
        if "." in m.group():
            k = m.start()
            while k > 0 and text[k - 1].isalpha():
                k -= 1
            run = text[k:m.start()]
            if len(run) == 1 and run.isupper():
                continue
            prefix = text[:end].lower()
            if prefix.endswith("e.g.") or prefix.endswith("i.e."):
                continue
        piece = text[start:end].strip()
        if piece:
            pieces.append(piece)
        start = j
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return [Sentence(doc_id, i, p) for i, p in enumerate(pieces)]


def _is_verb(token: str) -> bool:
    low = token.lower()
    return low in _IRREGULAR_VERBS or stem(low) in _KEYWORD_STEMS


def _is_strong_verb(token: str) -> bool:
    """Verb-shaped enough to open a conjoined predicate ("... and approved ...")."""
    low = token.lower()
    if low in _AUX or low in _IRREGULAR_VERBS:
        return True
    return low.endswith("ed") and stem(low) in _KEYWORD_STEMS


def _conn_width(tokens: list[str], i: int) -> int:
    if i >= len(tokens):
        return 0
    low = tokens[i].lower()
    if low in (",", "&", "and", "plus"):
        return 1
    if low == "as" and i + 2 < len(tokens) and tokens[i + 1].lower() == "well" and tokens[i + 2].lower() == "as":
        return 3
    return 0


def _skip_conns(tokens: list[str], i: int) -> int:
    while True:
        w = _conn_width(tokens, i)
        if w == 0:
            return i
        i += w


def _subject_atom(tokens: list[str], i: int) -> tuple[str, int] | None:
    """Parse one subject at position i; returns (subject text, next position)."""
    if i >= len(tokens):
        return None
    tok = tokens[i]
    low = tok.lower()
    if low in _GROUP_HEADS:
        j = i + 1
        if j < len(tokens) and tokens[j].lower() == "the":
            j += 1
        if j < len(tokens) and tokens[j].lower() == "authors":
            return " ".join(tokens[i:j + 1]), j + 1
        if low != "the":
            return None
    if low in _PRONOUNS and tok[0].isupper():
        return tok, i + 1
    if _AUTHOR_RE.match(tok):
        return tok, i + 1
    if (
        tok[0].isupper()
        and low not in _SUBJECT_BLOCKLIST
        and low != "authors"
        and stem(low) not in _KEYWORD_STEMS
        and not _AUTHOR_RE.match(tok)
    ):
        words = [tok]
        j = i + 1
        while (
            j < len(tokens)
            and len(words) < 3
            and tokens[j][0].isupper()
            and tokens[j].lower() not in _SUBJECT_BLOCKLIST
            and stem(tokens[j].lower()) not in _KEYWORD_STEMS
            and not _AUTHOR_RE.match(tokens[j])
        ):
            words.append(tokens[j])
            j += 1
        return " ".join(words), j
    return None


def _parse_subjects(tokens: list[str], i: int) -> tuple[list[str], int]:
    subjects: list[str] = []
    while True:
        atom = _subject_atom(tokens, i)
        if atom is None:
            break
        subjects.append(atom[0])
        i = _skip_conns(tokens, atom[1])
        if i == atom[1]:
            break
    return subjects, i


def _looks_like_new_clause(tokens: list[str], i: int) -> bool:
    subjects, j = _parse_subjects(tokens, i)
    if not subjects or j >= len(tokens):
        return False
    nxt = tokens[j]
    return nxt[0].islower() and (nxt.lower() in _AUX or _is_verb(nxt))


@dataclass
class _Predicate:
    verb: list[str] = field(default_factory=list)
    objects: list[list[str]] = field(default_factory=list)
    passive: bool = False


def _parse_verb_group(tokens: list[str], i: int) -> tuple[list[str], int] | None:
    group: list[str] = []
    while i < len(tokens) and tokens[i].lower() in _SKIPPABLE:
        i += 1
    while i < len(tokens) and tokens[i].lower().endswith("ly") and tokens[i][0].islower():
        group.append(tokens[i])
        i += 1
    aux_len = 0
    while i < len(tokens) and tokens[i].lower() in _AUX:
        group.append(tokens[i])
        aux_len += 1
        i += 1
    if i >= len(tokens):
        return None
    low = tokens[i].lower()
    if aux_len and low == "involved" and i + 1 < len(tokens) and tokens[i + 1].lower() == "in":
        group += [tokens[i], tokens[i + 1]]
        return group, i + 2
    if aux_len and low == "responsible" and i + 1 < len(tokens) and tokens[i + 1].lower() == "for":
        group += [tokens[i], tokens[i + 1]]
        return group, i + 2
    if not _is_verb(tokens[i]) or tokens[i][0].isupper():
        return None
    group.append(tokens[i])
    i += 1
    if group[-1].lower() in ("took", "take", "takes", "taken"):
        if i + 1 < len(tokens) and tokens[i].lower() == "part" and tokens[i + 1].lower() == "in":
            group += [tokens[i], tokens[i + 1]]
            i += 2
    while i < len(tokens) and tokens[i].lower().endswith("ly") and tokens[i][0].islower():
        group.append(tokens[i])
        i += 1
    while i < len(tokens) and tokens[i].lower() in _PARTICLES:
        nxt = i + 1
        if nxt >= len(tokens) or _conn_width(tokens, nxt) or tokens[nxt].lower() in (";", ":"):
            break
        group.append(tokens[i])
        i += 1
        break
    return group, i


def _parse_clause(tokens: list[str]) -> tuple[list[str], list[_Predicate], list[str] | None]:
    """Returns (subjects, predicates, remainder tokens of a trailing new clause)."""
    subjects, i = _parse_subjects(tokens, 0)
    if not subjects:
        return [], [], None
    predicates: list[_Predicate] = []
    remainder: list[str] | None = None
    while i < len(tokens):
        parsed = _parse_verb_group(tokens, i)
        if parsed is None:
            break
        verb, i = parsed
        pred = _Predicate(verb=verb)
        predicates.append(pred)
        current: list[str] = []
        while i < len(tokens):
            w = _conn_width(tokens, i)
            if w:
                j = _skip_conns(tokens, i)
                if _looks_like_new_clause(tokens, j):
                    remainder = tokens[j:]
                    i = len(tokens)
                    break
                if j < len(tokens) and (_is_strong_verb(tokens[j]) or tokens[j].lower() in _AUX):
                    i = j
                    break
                if current:
                    pred.objects.append(current)
                    current = []
                i = j
                continue
            tok = tokens[i]
            low = tok.lower()
            if low in (";", ":"):
                i = len(tokens)
                break
            if (low in _DETERMINERS or low in _SKIPPABLE) and not current:
                i += 1
                continue
            if low in _DETERMINERS:
                i += 1
                continue
            current.append(tok)
            i += 1
        if current:
            pred.objects.append(current)
        if remainder is not None:
            break
        if i < len(tokens) and not (_is_strong_verb(tokens[i]) or tokens[i].lower() in _AUX):
            break
    for pred in predicates:
        if pred.verb and pred.verb[0].lower() in _AUX and pred.objects:
            if pred.objects[0] and pred.objects[0][0].lower() == "by":
                pred.passive = True
    for k in range(len(predicates) - 2, -1, -1):
        if not predicates[k].objects:
            predicates[k].objects = predicates[k + 1].objects
    return subjects, predicates, remainder


def extract_mentions(
    sentence: Sentence,
    diagnostics: list[MentionDiagnostic] | None = None,
) -> list[RoleMention]:
    """Extract role mentions from one sentence; unparseable text yields [].

    Compound subjects split into one mention per author, except the literal
    group subjects ("All authors", "Both authors", "The authors") which are
    kept whole.  Conjoined verb groups each yield mentions; a verb group with
    no object of its own inherits the next predicate's objects, so "read and
    approved the final manuscript" produces both tuples.
    """
    tokens = _TOKEN_RE.findall(sentence.text)
    mentions: list[RoleMention] = []
    any_subjects = False
    while tokens:
        subjects, predicates, remainder = _parse_clause(tokens)
        if subjects:
            any_subjects = True
        for subject in subjects:
            for pred in predicates:
                if pred.passive:
                    if diagnostics is not None:
                        diagnostics.append(MentionDiagnostic(
                            sentence.doc_id, sentence.index, "passive-voice",
                            " ".join(pred.verb)))
                    continue
                conjuncts = pred.objects if pred.objects else [[]]
                for obj in conjuncts:
                    mentions.append(RoleMention(
                        sentence.doc_id, sentence.index, subject,
                        tuple(pred.verb), tuple(obj)))
        if remainder and len(remainder) < len(tokens):
            tokens = remainder
        else:
            break
    if not mentions and diagnostics is not None:
        kind = "no-mentions" if any_subjects else "no-subject"
        diagnostics.append(MentionDiagnostic(
            sentence.doc_id, sentence.index, kind, sentence.text[:120]))
    return mentions


def _is_subsequence(short: tuple[str, ...], long: tuple[str, ...]) -> bool:
    it = iter(long)
    return all(any(word == other for other in it) for word in short)


def _lower(seq: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(t.lower() for t in seq)


def _dominates(t: RoleMention, u: RoleMention) -> bool:
    return (
        t.doc_id == u.doc_id
        and t.subject == u.subject
        and _is_subsequence(_lower(u.action), _lower(t.action))
        and _is_subsequence(_lower(u.object), _lower(t.object))
    )


def remove_redundant(mentions: list[RoleMention]) -> list[RoleMention]:
    """Drop mentions dominated by another with the same document and subject.

    Domination: the other mention's action contains all the surviving
    mention's action words in order, and likewise for objects (ordered
    subsequence, gaps allowed).  Exact duplicates collapse to the earliest.
    Longer tuples win; ties break by sentence order then extraction order.
    Output preserves input order.  Redundancy is a within-document notion;
    identical statements in different documents all survive.
    """
    order = sorted(
        range(len(mentions)),
        key=lambda i: (
            -(len(mentions[i].action) + len(mentions[i].object)),
            mentions[i].sentence_index,
            i,
        ),
    )
    kept: list[int] = []
    for i in order:
        if not any(_dominates(mentions[k], mentions[i]) for k in kept):
            kept.append(i)
    kept_set = set(kept)
    return [m for i, m in enumerate(mentions) if i in kept_set]


def expand_group_subjects(mentions: list[RoleMention], authors: list[str]) -> list[RoleMention]:
    """Replace group subjects with one mention per listed author (optional step)."""
    if not authors:
        return list(mentions)
    out: list[RoleMention] = []
    for m in mentions:
        head = m.subject.lower()
        if head in ("all authors", "both authors", "the authors", "all the authors"):
            for name in authors:
                out.append(RoleMention(m.doc_id, m.sentence_index, name, m.action, m.object))
        else:
            out.append(m)
    return out

"""Mention cleaning, frequency filtering, keyword induction and keyword-space rewriting.

The keyword table partitions frequent stems into action keywords and object
keywords; transformed mentions use only those stems, which later define the
classifier's feature space.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from .errors import ConfigInvalid, DegenerateMention, EmptyTable, NullMention
from .mentions import RoleMention
from .stemming import stem

PERFORM = "perform"


@dataclass(frozen=True)
class NormalizedMention:
    doc_id: str
    sentence_index: int
    subject: str
    action_terms: tuple[str, ...]
    object_terms: tuple[str, ...]

    def pair(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (self.action_terms, self.object_terms)


@dataclass(frozen=True)
class KeywordEntry:
    stem: str
    kind: str
    freq_actions: int
    freq_objects: int


class KeywordTable:
    """Frequent stems partitioned into action and object keywords.

    Entries are kept in canonical order: action stems then object stems, each
    lexicographic.  That order also defines the classifier feature space and
    the table fingerprint.
    """

    def __init__(self, entries: Iterable[KeywordEntry]):
        entries = list(entries)
        seen: set[str] = set()
        for e in entries:
            if e.kind not in ("action", "object"):
                raise ConfigInvalid(f"bad keyword kind {e.kind!r} for {e.stem!r}")
            if e.stem in seen:
                raise ConfigInvalid(f"stem {e.stem!r} appears twice in keyword table")
            seen.add(e.stem)
        self.entries: tuple[KeywordEntry, ...] = tuple(
            sorted(entries, key=lambda e: (e.kind != "action", e.stem))
        )
        self._kinds = {e.stem: e.kind for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KeywordTable) and self.entries == other.entries

    @property
    def action_stems(self) -> tuple[str, ...]:
        return tuple(e.stem for e in self.entries if e.kind == "action")

    @property
    def object_stems(self) -> tuple[str, ...]:
        return tuple(e.stem for e in self.entries if e.kind == "object")

    def kind_of(self, term: str) -> str | None:
        return self._kinds.get(term)

    def feature_stems(self) -> tuple[tuple[str, str], ...]:
        return tuple((e.stem, e.kind) for e in self.entries)

    def fingerprint(self) -> str:
        blob = json.dumps(self.feature_stems(), separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def validate(self, min_freq: int) -> None:
        """Check the frequency floor; the always-legal "perform" entry is exempt."""
        for e in self.entries:
            if e.stem == PERFORM:
                continue
            if e.freq_actions + e.freq_objects < min_freq:
                raise ConfigInvalid(
                    f"keyword {e.stem!r} has total frequency below {min_freq}"
                )

    def to_json(self) -> list[dict]:
        return [
            {"stem": e.stem, "kind": e.kind,
             "freq_actions": e.freq_actions, "freq_objects": e.freq_objects}
            for e in self.entries
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "KeywordTable":
        return cls(
            KeywordEntry(d["stem"], d["kind"], int(d["freq_actions"]), int(d["freq_objects"]))
            for d in data
        )


def load_default_keywords() -> KeywordTable:
    raw = resources.files("rolemine.data").joinpath("keywords_default.json").read_text("utf-8")
    return KeywordTable.from_json(json.loads(raw))


def load_stopwords(path: str | None = None) -> frozenset[str]:
    if path is None:
        text = resources.files("rolemine.data").joinpath("stopwords_english.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def _clean_tokens(tokens: Sequence[str], stopwords: frozenset[str]) -> tuple[str, ...]:
    out = []
    for tok in tokens:
        low = tok.lower()
        if low in stopwords:
            continue
        out.append(stem(low))
    return tuple(out)


def clean_mention(m: RoleMention, stopwords: frozenset[str]) -> NormalizedMention:
    """Lowercase, drop stopwords, stem; subject untouched.

    Raises DegenerateMention when nothing of the action survives; the caller
    drops the mention with a diagnostic.
    """
    action = _clean_tokens(m.action, stopwords)
    if not action:
        raise DegenerateMention(f"action {' '.join(m.action)!r} cleans to nothing")
    obj = _clean_tokens(m.object, stopwords)
    return NormalizedMention(m.doc_id, m.sentence_index, m.subject, action, obj)


def filter_infrequent(
    mentions: Sequence[NormalizedMention], min_count: int = 5
) -> list[NormalizedMention]:
    """Keep mentions whose (action_terms, object_terms) pair occurs >= min_count times."""
    counts = Counter(m.pair() for m in mentions)
    return [m for m in mentions if counts[m.pair()] >= min_count]


def induce_keywords(
    mentions: Iterable[NormalizedMention], min_freq: int = 20
) -> KeywordTable:
    """Label frequent stems as action or object keywords by majority side.

    A stem qualifies when its combined action-side and object-side frequency
    reaches min_freq; equal frequencies label it an action keyword.  "perform"
    is always included as an action keyword (the transformation inserts it
    unconditionally), whatever its own counts.
    """
    freq_a: Counter[str] = Counter()
    freq_o: Counter[str] = Counter()
    for m in mentions:
        freq_a.update(m.action_terms)
        freq_o.update(m.object_terms)
    stems = sorted(set(freq_a) | set(freq_o))
    entries = []
    for s in stems:
        fa, fo = freq_a[s], freq_o[s]
        if fa + fo < min_freq:
            continue
        kind = "action" if fa >= fo else "object"
        if s == PERFORM:
            kind = "action"
        entries.append(KeywordEntry(s, kind, fa, fo))
    if not entries:
        raise EmptyTable(f"no stem reaches frequency {min_freq}")
    if all(e.stem != PERFORM for e in entries):
        entries.append(KeywordEntry(PERFORM, "action", freq_a[PERFORM], freq_o[PERFORM]))
    return KeywordTable(entries)


def transform_mention(m: NormalizedMention, kw: KeywordTable) -> NormalizedMention:
    """Rewrite a cleaned mention into keyword space.

    The new action collects the action keywords found anywhere in the mention
    (own side scanned first), the new object collects the object keywords the
    same way; non-keyword terms drop out.  An empty new action becomes
    ["perform"].  Raises NullMention when no keyword at all was found and the
    object is empty.
    """
    def collect(primary: tuple[str, ...], secondary: tuple[str, ...], kind: str) -> tuple[str, ...]:
        out: list[str] = []
        for term in (*primary, *secondary):
            if kw.kind_of(term) == kind and term not in out:
                out.append(term)
        return tuple(out)

    new_action = collect(m.action_terms, m.object_terms, "action")
    new_object = collect(m.object_terms, m.action_terms, "object")
    if not new_action:
        if not new_object:
            raise NullMention(
                f"no keywords in mention {m.action_terms} / {m.object_terms}"
            )
        new_action = (PERFORM,)
    return NormalizedMention(m.doc_id, m.sentence_index, m.subject, new_action, new_object)

"""Keyword featurization and a Bernoulli Naive Bayes role classifier.

Features are presence bits over the keyword table (action stems then object
stems, each lexicographic).  A mention with no keyword at all is NULL and is
discarded rather than classified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ClassWithNoExamples, EmptyTrainingSet, TableMismatch
from .mentions import extract_mentions, remove_redundant, split_sentences
from .errors import DegenerateMention, NullMention
from .ingest import detect_list_format
from .normalize import KeywordTable, NormalizedMention, clean_mention, transform_mention


@dataclass(frozen=True)
class FeatureVector:
    bits: tuple[int, ...]

    def any(self) -> bool:
        return any(self.bits)


def featurize(m: NormalizedMention, kw: KeywordTable) -> FeatureVector:
    """Presence bit per keyword stem, over both sides of the mention.

    Raises TableMismatch when the mention still carries raw (uncleaned)
    tokens; the feature space is defined over stems only.
    """
    for term in (*m.action_terms, *m.object_terms):
        if term != term.lower() or any(ch.isspace() for ch in term):
            raise TableMismatch(f"raw token {term!r}; featurize expects cleaned mentions")
    present = set(m.action_terms) | set(m.object_terms)
    return FeatureVector(tuple(1 if s in present else 0 for s, _ in kw.feature_stems()))


@dataclass(frozen=True)
class NBModel:
    """Bernoulli NB: per-class priors and per-feature presence probabilities."""

    classes: tuple[str, ...]
    priors: tuple[Fraction, ...]
    p_present: tuple[tuple[Fraction, ...], ...]
    alpha: Fraction
    keyword_table_fingerprint: str

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "priors": [str(p) for p in self.priors],
            "p_present": [[str(p) for p in row] for row in self.p_present],
            "alpha": str(self.alpha),
            "keyword_table_fingerprint": self.keyword_table_fingerprint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NBModel":
        return cls(
            classes=tuple(data["classes"]),
            priors=tuple(Fraction(p) for p in data["priors"]),
            p_present=tuple(
                tuple(Fraction(p) for p in row) for row in data["p_present"]
            ),
            alpha=Fraction(data["alpha"]),
            keyword_table_fingerprint=data["keyword_table_fingerprint"],
        )


def train(
    labeled: Sequence[tuple[NormalizedMention, str]],
    kw: KeywordTable,
    alpha: Fraction = Fraction(1),
    classes: Sequence[str] | None = None,
) -> NBModel:
    """Laplace-smoothed Bernoulli NB: P(f=1|c) = (count+alpha) / (n_c+2*alpha).

    Declared classes must each have at least one example; by default classes
    are the sorted label set of the training data.
    """
    if not labeled:
        raise EmptyTrainingSet("no labeled mentions to train on")
    alpha = Fraction(alpha)
    counts: dict[str, int] = {}
    for _, label in labeled:
        counts[label] = counts.get(label, 0) + 1
    if classes is None:
        class_list = tuple(sorted(counts))
    else:
        class_list = tuple(classes)
        missing = [c for c in class_list if counts.get(c, 0) == 0]
        if missing:
            raise ClassWithNoExamples(f"no training examples for {missing}")
    n_features = len(kw)
    feature_counts = {c: [0] * n_features for c in class_list}
    for m, label in labeled:
        if label not in feature_counts:
            continue
        bits = featurize(m, kw).bits
        row = feature_counts[label]
        for i, b in enumerate(bits):
            if b:
                row[i] += 1
    total = sum(counts[c] for c in class_list)
    priors = tuple(Fraction(counts[c], total) for c in class_list)
    p_present = tuple(
        tuple(
            (Fraction(feature_counts[c][i]) + alpha) / (counts[c] + 2 * alpha)
            for i in range(n_features)
        )
        for c in class_list
    )
    return NBModel(class_list, priors, p_present, alpha, kw.fingerprint())


def log_posteriors(model: NBModel, fv: FeatureVector) -> list[float]:
    """Unnormalized log posterior per class, in model.classes order."""
    scores = []
    for ci in range(len(model.classes)):
        s = math.log(model.priors[ci])
        row = model.p_present[ci]
        for i, bit in enumerate(fv.bits):
            p = row[i]
            s += math.log(p if bit else 1 - p)
        scores.append(s)
    return scores


def predict(model: NBModel, m: NormalizedMention, kw: KeywordTable) -> str | None:
    """Most probable role, or None (NULL) iff no feature bit is set.

    Ties break to the lexicographically first class name; classes are stored
    sorted, so the first argmax wins.
    """
    if model.keyword_table_fingerprint != kw.fingerprint():
        raise TableMismatch("model was trained against a different keyword table")
    fv = featurize(m, kw)
    if not fv.any():
        return None
    scores = log_posteriors(model, fv)
    best = min(range(len(scores)), key=lambda i: (-scores[i], model.classes[i]))
    return model.classes[best]


def extract_roles(
    text: str,
    model: NBModel,
    kw: KeywordTable,
    role_set_names: Sequence[str] | None = None,
    stopwords: frozenset[str] | None = None,
    diagnostics: list | None = None,
    trace: dict | None = None,
) -> set[tuple[str, str]]:
    """Full extraction on one section text: the deduplicated (subject, role) set.

    List-format text is flagged (kind "list-format-input") and yields the
    empty set.  Mentions that clean to nothing or contain no keywords are
    dropped, mirroring the NULL rule.
    """
    from .normalize import load_stopwords

    if stopwords is None:
        stopwords = load_stopwords()
    if text.strip() and detect_list_format(text):
        if diagnostics is not None:
            diagnostics.append({"kind": "list-format-input", "detail": text[:80]})
        if trace is not None:
            trace["subjects"] = []
            trace["list_format"] = True
        return set()
    mentions = []
    for sentence in split_sentences(text):
        mentions.extend(extract_mentions(sentence))
    mentions = remove_redundant(mentions)
    if trace is not None:
        trace["subjects"] = sorted({m.subject for m in mentions})
        trace["list_format"] = False
    pairs: set[tuple[str, str]] = set()
    allowed = set(role_set_names) if role_set_names is not None else None
    for m in mentions:
        try:
            cleaned = clean_mention(m, stopwords)
            transformed = transform_mention(cleaned, kw)
        except (DegenerateMention, NullMention):
            continue
        role = predict(model, transformed, kw)
        if role is None:
            continue
        if allowed is not None and role not in allowed:
            continue
        pairs.add((m.subject, role))
    return pairs

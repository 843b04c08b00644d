"""Exact-match scoring of extracted subject-role pairs against gold annotations.

A predicted pair counts as correct only when the identical (subject, role)
pair exists in the same document's gold set, after conservative subject
normalization (case folding, whitespace collapsing, period stripping).
Per-role precision/recall/F1 plus unweighted averages; the overall F1 is the
harmonic mean of the averaged precision and recall.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import TraceUnavailable

Pair = tuple[str, str]
CAUSES = ("mention-extraction", "missing-role", "classification")


def normalize_subject(subject: str) -> str:
    return " ".join(subject.replace(".", "").casefold().split())


def _norm_pairs(pairs) -> set[Pair]:
    return {(normalize_subject(s), r) for s, r in pairs}


@dataclass
class RoleCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0


def match_pairs(
    predicted: Mapping[str, set],
    gold: Mapping[str, set],
) -> dict[str, RoleCounts]:
    """Per-role tp/fp/fn over all documents (missing docs = empty sets)."""
    counts: dict[str, RoleCounts] = {}

    def at(role: str) -> RoleCounts:
        if role not in counts:
            counts[role] = RoleCounts()
        return counts[role]

    for doc_id in sorted(set(predicted) | set(gold)):
        p = _norm_pairs(predicted.get(doc_id, set()))
        g = _norm_pairs(gold.get(doc_id, set()))
        for _, role in p & g:
            at(role).tp += 1
        for _, role in p - g:
            at(role).fp += 1
        for _, role in g - p:
            at(role).fn += 1
    return counts


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall, F1; zero denominators score 0."""
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


@dataclass
class EvalReport:
    per_role: dict[str, dict]
    averages: dict[str, float]
    extras: dict[str, int]
    error_breakdown: dict[str, dict] | None = None

    def to_json(self) -> dict:
        out = {
            "averaging": "unweighted role means; overall F1 from averaged P and R",
            "per_role": self.per_role,
            "averages": self.averages,
            "undeclared_gold_roles": self.extras,
        }
        if self.error_breakdown is not None:
            out["error_breakdown"] = self.error_breakdown
        return out


def evaluate(
    predicted: Mapping[str, set],
    gold: Mapping[str, set],
    declared_roles: Sequence[str] | None = None,
) -> EvalReport:
    """Score predictions; undeclared gold roles are reported but unscored.

    With declared_roles=None every role seen anywhere is scored.
    """
    counts = match_pairs(predicted, gold)
    if declared_roles is None:
        scored = sorted(counts)
        extras: dict[str, int] = {}
    else:
        declared = set(declared_roles)
        scored = [r for r in sorted(counts) if r in declared]
        extras = {
            r: counts[r].fn for r in sorted(counts)
            if r not in declared and counts[r].fn
        }
    per_role: dict[str, dict] = {}
    for role in scored:
        c = counts[role]
        p, r, f1 = prf(c.tp, c.fp, c.fn)
        per_role[role] = {
            "tp": c.tp, "fp": c.fp, "fn": c.fn,
            "precision": p, "recall": r, "f1": f1,
        }
    if per_role:
        avg_p = sum(m["precision"] for m in per_role.values()) / len(per_role)
        avg_r = sum(m["recall"] for m in per_role.values()) / len(per_role)
        avg_f1 = 2 * avg_p * avg_r / (avg_p + avg_r) if avg_p + avg_r else 0.0
    else:
        avg_p = avg_r = avg_f1 = 0.0
    averages = {"precision": avg_p, "recall": avg_r, "f1": avg_f1}
    return EvalReport(per_role, averages, extras)


def classify_errors(
    predicted: Mapping[str, set],
    gold: Mapping[str, set],
    trace: dict | None,
) -> dict[str, dict]:
    """Attribute each fp/fn to one cause, mirroring the three error sources.

    trace must hold {"classes": [...], "docs": {doc_id: {"subjects": [...]}}}
    with the post-redundancy mention subjects per document; otherwise
    TraceUnavailable.
    """
    if not trace or "classes" not in trace or "docs" not in trace:
        raise TraceUnavailable("error attribution needs a pipeline trace")
    classes = set(trace["classes"])
    docs = trace["docs"]
    breakdown = {c: {"precision_errors": 0, "recall_errors": 0} for c in CAUSES}
    for doc_id in sorted(set(predicted) | set(gold)):
        if doc_id not in docs:
            raise TraceUnavailable(f"no trace for document {doc_id!r}")
        extracted = {normalize_subject(s) for s in docs[doc_id].get("subjects", [])}
        p = _norm_pairs(predicted.get(doc_id, set()))
        g = _norm_pairs(gold.get(doc_id, set()))
        gold_subjects = {s for s, _ in g}
        for subject, role in sorted(g - p):
            if role not in classes:
                cause = "missing-role"
            elif subject not in extracted:
                cause = "mention-extraction"
            else:
                cause = "classification"
            breakdown[cause]["recall_errors"] += 1
        for subject, role in sorted(p - g):
            if subject not in gold_subjects:
                cause = "mention-extraction"
            else:
                cause = "classification"
            breakdown[cause]["precision_errors"] += 1
    return breakdown


def format_report_table(report: EvalReport) -> str:
    """Aligned plain-text table: Role / Precision / Recall / F1 plus averages."""
    rows = [("Role", "Precision", "Recall", "F1")]
    for role, m in report.per_role.items():
        rows.append((
            role,
            f"{m['precision']:.2f}",
            f"{m['recall']:.2f}",
            f"{m['f1']:.2f}",
        ))
    a = report.averages
    rows.append((
        "Average",
        f"{a['precision']:.2f}",
        f"{a['recall']:.2f}",
        f"{a['f1']:.2f}",
    ))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for n, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * widths[i] for i in range(4)))
    if report.extras:
        lines.append("")
        lines.append("Gold roles outside the declared set (unscored):")
        for role, fn in report.extras.items():
            lines.append(f"  {role}: {fn} missed pair(s)")
    return "\n".join(lines) + "\n"

"""Builders for the bundled fixtures.

Two kinds ship inside the package data:

* ``archetypes.jsonl`` — 40 already-normalized mentions in four disjoint
  archetypes; at threshold 0.5 they collapse to exactly four role clusters.
* ``fixtures/golden/`` — a 200-document synthetic corpus pushed through the
  whole front half of the pipeline, a scripted curation that names the
  thirteen canonical roles, and the classifier trained on the result.

Run ``python -m rolemine.fixtures`` to regenerate everything in place; the
test suite rebuilds the same artifacts in a temp directory and compares
bytes, so any code change that shifts them is caught explicitly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import synth
from .classify import extract_roles, train
from .discovery import (
    ClusterState,
    apply_curation,
    build_training_set,
    cluster,
    derive_roles,
    graph_to_json,
)
from .errors import DegenerateMention, NullMention, StateCorrupt
from .mentions import RoleMention, extract_mentions, remove_redundant, split_sentences
from .normalize import (
    KeywordTable,
    NormalizedMention,
    clean_mention,
    filter_infrequent,
    load_default_keywords,
    load_stopwords,
    transform_mention,
)

GOLDEN_SEED = 7
GOLDEN_SIZE = 200
GOLDEN_THRESHOLD = Fraction(1, 2)

# A reference contributions section in the classic register; the locked
# sample output for it guards the whole extract-classify path end to end.
REFERENCE_SECTION = (
    "AJ-M, HT, YS and RS carried out the IHC analysis. "
    "AJ-M, MN-M, MPU, V-MK and AM participated in study design and "
    "statistical analysis. AJ-M and MN-M drafted the manuscript. "
    "All authors read and approved the final manuscript."
)

CANONICAL_ROLES = (
    "Analysis",
    "Conceptualization",
    "Coordination",
    "Data collection",
    "Experimenting",
    "Interpretation",
    "Literature review",
    "Paper drafting",
    "Paper reading",
    "Paper review",
    "Paper revision",
    "Paper writing",
    "Study design",
)

# (action bags, object bags) per archetype; combos get 3/2/2/3 mentions so
# both in-archetype action and object similarities sit exactly at 1/2 while
# stems across archetypes stay disjoint (all cross similarities are zero).
_ARCHETYPES = (
    ((("perform",), ("carri",)), (("analys", "data"), ("analys", "statist"))),
    ((("conceiv",), ("plan",)), (("design", "studi"), ("design", "protocol"))),
    ((("draft",), ("prepar",)), (("final", "manuscript"), ("manuscript", "version"))),
    ((("coordin",), ("supervis",)), (("project", "work"), ("project", "research"))),
)
_COMBO_COUNTS = {(0, 0): 3, (0, 1): 2, (1, 0): 2, (1, 1): 3}


def archetype_mentions() -> list[NormalizedMention]:
    """The 40-mention clustering fixture (4 archetypes x 10 paraphrases)."""
    out: list[NormalizedMention] = []
    for arch_index, (actions, objects) in enumerate(_ARCHETYPES):
        n = 0
        for (ai, oi), count in sorted(_COMBO_COUNTS.items()):
            for _ in range(count):
                out.append(
                    NormalizedMention(
                        doc_id=f"fx-{arch_index}",
                        sentence_index=n,
                        subject=f"X{n}",
                        action_terms=actions[ai],
                        object_terms=objects[oi],
                    )
                )
                n += 1
    return out


def normalize_corpus(
    texts: list[tuple[str, str]],
    kw: KeywordTable,
    min_count: int = 5,
) -> list[NormalizedMention]:
    """Extract, deduplicate, clean, filter, and transform section texts.

    ``texts`` is (doc_id, text) pairs; list-format documents must already be
    excluded by the caller.
    """
    stopwords = load_stopwords()
    raw: list[RoleMention] = []
    for doc_id, text in texts:
        for sentence in split_sentences(text, doc_id=doc_id):
            raw.extend(extract_mentions(sentence))
    raw = remove_redundant(raw)
    cleaned = []
    for m in raw:
        try:
            cleaned.append(clean_mention(m, stopwords))
        except DegenerateMention:
            continue
    kept = filter_infrequent(cleaned, min_count=min_count)
    transformed = []
    for m in kept:
        try:
            transformed.append(transform_mention(m, kw))
        except NullMention:
            continue
    return transformed


def _role_name_for(a_label: tuple[str, ...], o_label: tuple[str, ...]) -> str | None:
    """Name a role cluster of the golden corpus from its label stems.

    Returns None for boilerplate ("contributed equally") clusters, which the
    scripted curation removes.  The rules key on the object side first since
    action hubs ("perform") span several roles.
    """
    a, o = set(a_label), set(o_label)
    if "work" in o:
        return None
    if "final" in o:
        return "Paper reading"
    if "experi" in o:
        return "Experimenting"
    if "design" in o or "studi" in o:
        return "Study design"
    if "project" in o:
        return "Coordination"
    if "concept" in o or "idea" in o:
        return "Conceptualization"
    if "literatur" in o:
        return "Literature review"
    if "interpret" in o:
        return "Interpretation"
    if "analys" in o or "statist" in o:
        return "Analysis"
    if "collect" in o or "sampl" in o or "data" in o:
        return "Data collection"
    if "manuscript" in o or "paper" in o:
        if "draft" in a or "prepar" in a:
            return "Paper drafting"
        if "write" in a:
            return "Paper writing"
        if "review" in a or "comment" in a:
            return "Paper review"
        if "revis" in a or "edit" in a:
            return "Paper revision"
        # bare "wrote ..." sentences transform to the inserted action
        return "Paper writing"
    return None


def curation_ops(state: ClusterState) -> list[dict]:
    """Scripted curation: remove boilerplate, merge per canonical role, rename."""
    role_set = derive_roles(state)
    assigned: dict[str, list[str]] = {}
    removals: list[str] = []
    for role in role_set.roles:
        (a_cid, o_cid) = role.source_pairs[0]
        name = _role_name_for(state.actions[a_cid].label, state.objects[o_cid].label)
        if name is None:
            removals.append(role.role_id)
        else:
            assigned.setdefault(name, []).append(role.role_id)
    missing = [n for n in CANONICAL_ROLES if n not in assigned]
    if missing:
        raise StateCorrupt(f"golden corpus lost roles: {missing}")
    ops: list[dict] = [{"op": "remove", "role": rid} for rid in removals]
    for name in CANONICAL_ROLES:
        ids = assigned[name]
        ops.extend({"op": "merge", "a": ids[0], "b": other} for other in ids[1:])
        ops.append({"op": "rename", "role": ids[0], "name": name})
    return ops


def build_golden() -> dict[str, object]:
    """Produce every golden artifact in memory, keyed by file name."""
    docs = synth.generate_corpus(GOLDEN_SIZE, seed=GOLDEN_SEED)
    kw = load_default_keywords()
    sections = [
        {
            "doc_id": d.doc_id,
            "source_path": f"synthetic:{d.doc_id}",
            "text": d.text,
            "list_format": d.list_format,
        }
        for d in docs
    ]
    gold = [
        {"doc_id": d.doc_id, "pairs": [list(p) for p in d.gold_pairs]}
        for d in docs
        if not d.list_format
    ]
    mentions = normalize_corpus(
        [(d.doc_id, d.text) for d in docs if not d.list_format], kw
    )
    state = cluster(mentions, threshold=GOLDEN_THRESHOLD)
    ops = curation_ops(state)
    role_set = apply_curation(state, ops)
    labeled = build_training_set(role_set, mentions)
    model = train(labeled, kw, alpha=Fraction(1))
    sample_pairs = extract_roles(
        REFERENCE_SECTION, model, kw, role_set_names=[r.name for r in role_set.roles]
    )
    return {
        "sections.jsonl": sections,
        "gold.jsonl": gold,
        "mentions.norm.jsonl": [_mention_row(m) for m in mentions],
        "rolegraph.json": graph_to_json(state),
        "curation_ops.json": {"ops": ops},
        "roleset.json": role_set.to_json(),
        "model.json": model.to_json(),
        "sample_section.json": {
            "text": REFERENCE_SECTION,
            "pairs": sorted([s, r] for s, r in sample_pairs),
        },
    }


def _mention_row(m: NormalizedMention) -> dict:
    return {
        "doc_id": m.doc_id,
        "sentence": m.sentence_index,
        "subject": m.subject,
        "action": list(m.action_terms),
        "object": list(m.object_terms),
    }


def dump_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def dump_json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def write_fixtures(data_dir: Path) -> list[Path]:
    """Write archetypes.jsonl and the golden directory under ``data_dir``."""
    fixture_dir = data_dir / "fixtures"
    golden_dir = fixture_dir / "golden"
    golden_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    arch_path = fixture_dir / "archetypes.jsonl"
    arch_path.write_text(
        dump_jsonl([_mention_row(m) for m in archetype_mentions()]), encoding="utf-8"
    )
    written.append(arch_path)

    for name, payload in build_golden().items():
        path = golden_dir / name
        if name.endswith(".jsonl"):
            path.write_text(dump_jsonl(payload), encoding="utf-8")
        else:
            path.write_text(dump_json(payload), encoding="utf-8")
        written.append(path)
    return written


def main() -> None:
    data_dir = Path(__file__).resolve().parent / "data"
    for path in write_fixtures(data_dir):
        print(path)


if __name__ == "__main__":
    main()

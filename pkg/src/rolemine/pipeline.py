"""Stage runner: wiring between the corpus on disk and the JSON artifacts.

Each stage reads the artifacts of the previous one, streams records where
the data can be large, and writes its outputs atomically (temp file in the
same directory, then rename).  With fixed inputs and config every stage is
byte-deterministic, so re-running is always safe.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classify import NBModel, extract_roles, train
from .discovery import (
    RoleSet,
    apply_curation,
    build_training_set,
    cluster,
    derive_roles,
    graph_to_json,
    to_threshold,
)
from .errors import (
    ConfigInvalid,
    DegenerateMention,
    MalformedInput,
    MissingPrerequisite,
    NullMention,
)
from .ingest import ingest_directory, sample_corpus
from .mentions import RoleMention, extract_mentions, remove_redundant, split_sentences
from .normalize import (
    KeywordTable,
    NormalizedMention,
    clean_mention,
    induce_keywords,
    load_default_keywords,
    load_stopwords,
    transform_mention,
)

STAGES = ("ingest", "extract", "normalize", "discover", "train", "classify", "eval")


@dataclass(frozen=True)
class PipelineConfig:
    corpus_dir: Path
    state_dir: Path
    gold_path: Path | None = None
    stopwords_path: Path | None = None
    min_mention_count: int = 5
    min_keyword_freq: int = 20
    cluster_threshold: Fraction = Fraction(1, 2)
    sample_size: int = 0
    sample_seed: int = 0
    use_default_keywords: bool = False

    def path(self, name: str) -> Path:
        return self.state_dir / name

    def diagnostics_path(self, stage: str) -> Path:
        return self.state_dir / "diagnostics" / f"{stage}.jsonl"


_TOML_SECTIONS = {
    "paths": {"corpus", "state", "gold", "stopwords"},
    "thresholds": {"min_mention_count", "min_keyword_freq", "cluster_threshold"},
    "sample": {"size", "seed"},
    "keywords": {"use_default"},
}


def load_config(config_path: Path) -> PipelineConfig:
    """Parse a TOML config; relative paths resolve against the file's directory."""
    try:
        with open(config_path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigInvalid(f"config file not found: {config_path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigInvalid(f"config is not valid TOML: {exc}")
    for section, keys in data.items():
        if section not in _TOML_SECTIONS:
            raise ConfigInvalid(f"unknown config section [{section}]")
        unknown = set(keys) - _TOML_SECTIONS[section]
        if unknown:
            raise ConfigInvalid(f"unknown keys in [{section}]: {sorted(unknown)}")
    base = config_path.resolve().parent

    def resolve(raw: str | None) -> Path | None:
        if raw is None or raw == "":
            return None
        p = Path(raw)
        return p if p.is_absolute() else base / p

    paths = data.get("paths", {})
    corpus = resolve(paths.get("corpus"))
    state = resolve(paths.get("state"))
    if corpus is None or state is None:
        raise ConfigInvalid("config requires [paths] corpus and state")
    th = data.get("thresholds", {})
    sample = data.get("sample", {})
    kw = data.get("keywords", {})
    cfg = PipelineConfig(
        corpus_dir=corpus,
        state_dir=state,
        gold_path=resolve(paths.get("gold")),
        stopwords_path=resolve(paths.get("stopwords")),
        min_mention_count=int(th.get("min_mention_count", 5)),
        min_keyword_freq=int(th.get("min_keyword_freq", 20)),
        cluster_threshold=to_threshold(th.get("cluster_threshold", 0.5)),
        sample_size=int(sample.get("size", 0)),
        sample_seed=int(sample.get("seed", 0)),
        use_default_keywords=bool(kw.get("use_default", False)),
    )
    if cfg.min_mention_count < 1 or cfg.min_keyword_freq < 1:
        raise ConfigInvalid("frequency thresholds must be positive")
    if cfg.sample_size < 0:
        raise ConfigInvalid("sample size cannot be negative")
    return cfg


def with_overrides(
    cfg: PipelineConfig,
    seed: int | None = None,
    threshold: float | str | None = None,
) -> PipelineConfig:
    if seed is not None:
        cfg = replace(cfg, sample_seed=seed)
    if threshold is not None:
        cfg = replace(cfg, cluster_threshold=to_threshold(threshold))
    return cfg


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_jsonl(path: Path, rows) -> int:
    """Atomically write an iterable of dicts as JSONL; returns the row count."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    n = 0
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            for row in rows:
                f.write(json.dumps(row, sort_keys=True) + "\n")
                n += 1
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return n


def read_jsonl(path: Path):
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_json(path: Path, payload) -> None:
    atomic_write(path, json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _require(path: Path, stage: str, hint: str) -> Path:
    if not path.exists():
        raise MissingPrerequisite(f"{stage} needs {path.name} (run {hint} first)")
    return path


@dataclass
class StageResult:
    stage: str
    stats: dict = field(default_factory=dict)

    def report_lines(self) -> list[str]:
        parts = " ".join(f"{k}={v}" for k, v in self.stats.items())
        return [f"{self.stage}: {parts}"]


def stage_ingest(cfg: PipelineConfig) -> StageResult:
    if not cfg.corpus_dir.is_dir():
        raise MissingPrerequisite(f"corpus directory not found: {cfg.corpus_dir}")
    docs, diagnostics = ingest_directory(cfg.corpus_dir)
    total_found = len(docs)
    if cfg.sample_size:
        docs = sample_corpus(docs, cfg.sample_size, cfg.sample_seed)
    rows = (
        {
            "doc_id": d.doc_id,
            "source_path": d.source_path,
            "text": d.contrib_text,
            "list_format": d.list_format_flag,
        }
        for d in docs
    )
    n = write_jsonl(cfg.path("sections.jsonl"), rows)
    write_jsonl(
        cfg.diagnostics_path("ingest"),
        (
            {"source_path": d.source_path, "kind": d.kind, "detail": d.detail}
            for d in diagnostics
        ),
    )
    return StageResult(
        "ingest",
        {
            "documents_found": total_found,
            "documents_written": n,
            "list_format": sum(1 for d in docs if d.list_format_flag),
            "diagnostics": len(diagnostics),
        },
    )


def stage_extract(cfg: PipelineConfig) -> StageResult:
    sections = _require(cfg.path("sections.jsonl"), "extract", "ingest")
    stats = {"documents": 0, "skipped_list_format": 0, "sentences": 0,
             "mentions": 0, "after_redundancy": 0}
    diagnostics: list[dict] = []

    def rows():
        for rec in read_jsonl(sections):
            stats["documents"] += 1
            if rec["list_format"]:
                stats["skipped_list_format"] += 1
                diagnostics.append(
                    {"doc_id": rec["doc_id"], "kind": "list-format-input",
                     "detail": rec["text"][:80]}
                )
                continue
            doc_mentions: list[RoleMention] = []
            mention_diags: list = []
            for sentence in split_sentences(rec["text"], doc_id=rec["doc_id"]):
                stats["sentences"] += 1
                doc_mentions.extend(extract_mentions(sentence, mention_diags))
            stats["mentions"] += len(doc_mentions)
            kept = remove_redundant(doc_mentions)
            stats["after_redundancy"] += len(kept)
            diagnostics.extend(
                {"doc_id": d.doc_id, "sentence": d.sentence_index,
                 "kind": d.kind, "detail": d.detail}
                for d in mention_diags
            )
            for m in kept:
                yield {
                    "doc_id": m.doc_id,
                    "sentence": m.sentence_index,
                    "subject": m.subject,
                    "action": list(m.action),
                    "object": list(m.object),
                }

    write_jsonl(cfg.path("mentions.jsonl"), rows())
    write_jsonl(cfg.diagnostics_path("extract"), diagnostics)
    return StageResult("extract", stats)


def _load_keyword_table(cfg: PipelineConfig, stage: str) -> KeywordTable:
    path = _require(cfg.path("keywords.json"), stage, "normalize")
    return KeywordTable.from_json(json.loads(path.read_text("utf-8")))


def stage_normalize(cfg: PipelineConfig) -> StageResult:
    """Clean, frequency-filter, induce (or load) keywords, transform.

    Streams mentions.jsonl in three passes instead of holding the corpus in
    memory: cleaning is pure and cheap, so each pass re-cleans.  Pass 1
    counts cleaned (action, object) pairs; pass 2 feeds the surviving
    mentions to keyword induction; pass 3 transforms and writes.  The pass-1
    count plus the >= min_count test is the streaming equivalent of
    filter_infrequent.
    """
    from collections import Counter

    mentions_path = _require(cfg.path("mentions.jsonl"), "normalize", "extract")
    stopwords = load_stopwords(cfg.stopwords_path)
    stats = {"mentions": 0, "cleaned": 0, "after_frequency_filter": 0,
             "transformed": 0, "keywords": 0}
    diagnostics: list[dict] = []

    def cleaned_stream(record_diagnostics: bool):
        for rec in read_jsonl(mentions_path):
            m = RoleMention(
                doc_id=rec["doc_id"],
                sentence_index=rec["sentence"],
                subject=rec["subject"],
                action=tuple(rec["action"]),
                object=tuple(rec["object"]),
            )
            if record_diagnostics:
                stats["mentions"] += 1
            try:
                yield clean_mention(m, stopwords)
            except DegenerateMention as exc:
                if record_diagnostics:
                    diagnostics.append(
                        {"doc_id": m.doc_id, "sentence": m.sentence_index,
                         "kind": "degenerate-mention", "detail": str(exc)}
                    )

    pair_counts: Counter = Counter()
    for m in cleaned_stream(record_diagnostics=True):
        stats["cleaned"] += 1
        pair_counts[m.pair()] += 1

    def kept_stream():
        for m in cleaned_stream(record_diagnostics=False):
            if pair_counts[m.pair()] >= cfg.min_mention_count:
                yield m

    stats["after_frequency_filter"] = sum(
        c for c in pair_counts.values() if c >= cfg.min_mention_count
    )

    if cfg.use_default_keywords:
        table = load_default_keywords()
    else:
        table = induce_keywords(kept_stream(), min_freq=cfg.min_keyword_freq)
    stats["keywords"] = len(table.entries)

    def rows():
        for m in kept_stream():
            try:
                t = transform_mention(m, table)
            except NullMention:
                diagnostics.append(
                    {"doc_id": m.doc_id, "sentence": m.sentence_index,
                     "kind": "null-mention", "detail": " ".join(m.action_terms)}
                )
                continue
            stats["transformed"] += 1
            yield {
                "doc_id": t.doc_id,
                "sentence": t.sentence_index,
                "subject": t.subject,
                "action": list(t.action_terms),
                "object": list(t.object_terms),
            }

    write_jsonl(cfg.path("mentions.norm.jsonl"), rows())
    write_json(cfg.path("keywords.json"), table.to_json())
    write_jsonl(cfg.diagnostics_path("normalize"), diagnostics)
    return StageResult("normalize", stats)


def load_normalized(path: Path) -> list[NormalizedMention]:
    return [
        NormalizedMention(
            doc_id=rec["doc_id"],
            sentence_index=rec["sentence"],
            subject=rec["subject"],
            action_terms=tuple(rec["action"]),
            object_terms=tuple(rec["object"]),
        )
        for rec in read_jsonl(path)
    ]


def stage_discover(cfg: PipelineConfig) -> StageResult:
    norm_path = _require(cfg.path("mentions.norm.jsonl"), "discover", "normalize")
    mentions = load_normalized(norm_path)
    pins: tuple = ()
    roleset_path = cfg.path("roleset.json")
    if roleset_path.exists():
        prior = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
        pins = tuple(prior.pins)
    state = cluster(mentions, threshold=cfg.cluster_threshold, pins=pins)
    role_set = derive_roles(state)
    # Pins survive re-discovery; the op log does not (member ids are
    # positions in the new mention list, so stale ops are not replayable).
    role_set.pins = list(pins)
    write_json(cfg.path("rolegraph.json"), graph_to_json(state))
    write_json(roleset_path, role_set.to_json())
    return StageResult(
        "discover",
        {
            "mentions": len(mentions),
            "action_clusters": len(state.actions),
            "object_clusters": len(state.objects),
            "role_clusters": len(state.role_pairs()),
            "pins": len(pins),
        },
    )


def stage_train(cfg: PipelineConfig) -> StageResult:
    roleset_path = _require(cfg.path("roleset.json"), "train", "discover")
    norm_path = _require(cfg.path("mentions.norm.jsonl"), "train", "normalize")
    table = _load_keyword_table(cfg, "train")
    role_set = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
    mentions = load_normalized(norm_path)
    labeled = build_training_set(role_set, mentions)
    model = train(labeled, table)
    write_json(cfg.path("model.json"), model.to_json())
    return StageResult(
        "train",
        {"examples": len(labeled), "classes": len(model.classes),
         "features": len(table.entries)},
    )


def stage_classify(cfg: PipelineConfig) -> StageResult:
    sections = _require(cfg.path("sections.jsonl"), "classify", "ingest")
    model_path = _require(cfg.path("model.json"), "classify", "train")
    table = _load_keyword_table(cfg, "classify")
    model = NBModel.from_json(json.loads(model_path.read_text("utf-8")))
    stopwords = load_stopwords(cfg.stopwords_path)
    role_names = None
    roleset_path = cfg.path("roleset.json")
    if roleset_path.exists():
        role_set = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
        role_names = [r.name for r in role_set.roles]
    stats = {"documents": 0, "pairs": 0, "list_format": 0}
    diagnostics: list[dict] = []
    trace_rows: list[dict] = [{"classes": list(model.classes)}]

    def rows():
        for rec in read_jsonl(sections):
            stats["documents"] += 1
            doc_diags: list = []
            doc_trace: dict = {}
            pairs = extract_roles(
                rec["text"], model, table,
                role_set_names=role_names,
                stopwords=stopwords,
                diagnostics=doc_diags,
                trace=doc_trace,
            )
            if doc_trace.get("list_format"):
                stats["list_format"] += 1
            diagnostics.extend(
                {"doc_id": rec["doc_id"], **d} if "doc_id" not in d else d
                for d in doc_diags
            )
            trace_rows.append(
                {"doc_id": rec["doc_id"], "subjects": doc_trace.get("subjects", [])}
            )
            for subject, role in sorted(pairs):
                stats["pairs"] += 1
                yield {"doc_id": rec["doc_id"], "subject": subject, "role": role}

    write_jsonl(cfg.path("roles.jsonl"), rows())
    write_jsonl(cfg.path("trace.jsonl"), trace_rows)
    write_jsonl(cfg.diagnostics_path("classify"), diagnostics)
    return StageResult("classify", stats)


def _read_pair_sets(path: Path, key: str) -> dict[str, set]:
    out: dict[str, set] = {}
    for rec in read_jsonl(path):
        doc = out.setdefault(rec["doc_id"], set())
        if key == "pairs":
            for s, r in rec["pairs"]:
                doc.add((s, r))
        else:
            doc.add((rec["subject"], rec["role"]))
    return out


def stage_eval(cfg: PipelineConfig) -> StageResult:
    from .evaluate import classify_errors, evaluate, format_report_table

    roles_path = _require(cfg.path("roles.jsonl"), "eval", "classify")
    if cfg.gold_path is None:
        raise ConfigInvalid("eval needs [paths] gold in the config")
    gold_path = _require(cfg.gold_path, "eval", "(provide gold annotations)")
    predicted = _read_pair_sets(roles_path, "subject")
    gold = _read_pair_sets(gold_path, "pairs")
    declared = None
    roleset_path = cfg.path("roleset.json")
    if roleset_path.exists():
        role_set = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
        declared = [r.name for r in role_set.roles]
    report = evaluate(predicted, gold, declared_roles=declared)
    trace_path = cfg.path("trace.jsonl")
    if trace_path.exists():
        rows = list(read_jsonl(trace_path))
        trace = {
            "classes": rows[0]["classes"],
            "docs": {r["doc_id"]: {"subjects": r["subjects"]} for r in rows[1:]},
        }
        report.error_breakdown = classify_errors(predicted, gold, trace)
    write_json(cfg.path("report.json"), report.to_json())
    atomic_write(cfg.path("report.txt"), format_report_table(report) + "\n")
    avg = report.averages
    return StageResult(
        "eval",
        {
            "documents": len(set(predicted) | set(gold)),
            "precision": f"{avg['precision']:.4f}",
            "recall": f"{avg['recall']:.4f}",
            "f1": f"{avg['f1']:.4f}",
        },
    )


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "extract": stage_extract,
    "normalize": stage_normalize,
    "discover": stage_discover,
    "train": stage_train,
    "classify": stage_classify,
    "eval": stage_eval,
}


def run_stage(stage: str, cfg: PipelineConfig) -> StageResult:
    if stage not in _STAGE_FUNCS:
        raise ConfigInvalid(f"unknown stage {stage!r}; expected one of {STAGES}")
    return _STAGE_FUNCS[stage](cfg)


def run_all(cfg: PipelineConfig) -> list[StageResult]:
    return [run_stage(s, cfg) for s in STAGES]

"""Command line front end.

One subcommand per pipeline stage plus ``all``, offline ``curate`` replay,
the ``serve`` API/UI host, and the ``synth`` corpus generator.  Exit codes:
0 success, 2 invalid configuration or arguments, 3 missing prerequisite
artifact, 1 any other pipeline error.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from . import synth
from .discovery import RoleSet, apply_curation, cluster
from .errors import (
    ConfigInvalid,
    MissingPrerequisite,
    PortInUse,
    RolemineError,
)
from .pipeline import (
    STAGES,
    PipelineConfig,
    load_config,
    load_normalized,
    run_stage,
    with_overrides,
    write_json,
)


def _add_stage_parser(sub, name: str, help_text: str) -> None:
    p = sub.add_parser(name, help=help_text)
    p.add_argument("--config", required=True, type=Path, help="TOML pipeline config")
    p.add_argument("--seed", type=int, default=None, help="override sample seed")
    p.add_argument(
        "--threshold", default=None, help="override clustering threshold (e.g. 0.5)"
    )
    p.add_argument(
        "--report", action="store_true", help="print stage statistics to stdout"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rolemine",
        description="Discover and extract contributor roles from "
        "authors' contributions sections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    stage_help = {
        "ingest": "collect contributions sections into sections.jsonl",
        "extract": "extract subject-action-object mentions",
        "normalize": "stem, filter, induce keywords, rewrite mentions",
        "discover": "cluster mentions into a role graph and role set",
        "train": "train the role classifier on the curated role set",
        "classify": "extract (author, role) pairs with the trained model",
        "eval": "score roles.jsonl against gold annotations",
    }
    for name in STAGES:
        _add_stage_parser(sub, name, stage_help[name])
    _add_stage_parser(sub, "all", "run every stage in order")

    p = sub.add_parser("curate", help="replay curation ops over the discovered state")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--ops", required=True, type=Path, help='JSON {"ops": [...]}')
    p.add_argument("--threshold", default=None)
    p.add_argument("--report", action="store_true")

    p = sub.add_parser("serve", help="serve the curation API and UI")
    p.add_argument("--state", required=True, type=Path, help="pipeline state directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--threshold", default=None)

    p = sub.add_parser("synth", help="generate a synthetic corpus with gold pairs")
    p.add_argument("--out", required=True, type=Path, help="output corpus directory")
    p.add_argument("--n", type=int, default=200, help="number of documents")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument(
        "--file-format",
        choices=("jats-xml", "plain-text"),
        default="jats-xml",
    )
    return parser


def _cmd_stage(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, seed=args.seed, threshold=args.threshold)
    stages = STAGES if args.command == "all" else (args.command,)
    for stage in stages:
        result = run_stage(stage, cfg)
        if args.report:
            for line in result.report_lines():
                print(line)
    return 0


def _cmd_curate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, threshold=args.threshold)
    norm_path = cfg.path("mentions.norm.jsonl")
    if not norm_path.exists():
        raise MissingPrerequisite("curate needs mentions.norm.jsonl (run normalize)")
    try:
        ops_payload = json.loads(args.ops.read_text("utf-8"))
        ops = ops_payload["ops"]
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read ops file {args.ops}: {exc}")
    pins: tuple = ()
    roleset_path = cfg.path("roleset.json")
    if roleset_path.exists():
        prior = RoleSet.from_json(json.loads(roleset_path.read_text("utf-8")))
        pins = tuple(prior.pins)
    mentions = load_normalized(norm_path)
    state = cluster(mentions, threshold=cfg.cluster_threshold, pins=pins)
    role_set = apply_curation(state, ops, pins=pins)
    write_json(roleset_path, role_set.to_json())
    if args.report:
        print(f"curate: ops={len(ops)} roles={len(role_set.roles)} "
              f"removed={len(role_set.removed)} pins={len(role_set.pins)}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    threshold = args.threshold if args.threshold is not None else 0.5
    app = create_app(args.state, threshold=threshold)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError:
        raise PortInUse(f"{args.host}:{args.port} is already bound")
    finally:
        probe.close()
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    docs = synth.generate_corpus(args.n, seed=args.seed)
    gold_path = synth.write_corpus(
        docs, args.out, file_format=args.file_format, seed=args.seed
    )
    print(f"wrote {args.n} documents to {args.out} (gold: {gold_path})")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed its message; surface its status as a return
        return int(exc.code or 0)
    try:
        if args.command in STAGES or args.command == "all":
            return _cmd_stage(args)
        if args.command == "curate":
            return _cmd_curate(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "synth":
            return _cmd_synth(args)
        raise ConfigInvalid(f"unknown command {args.command!r}")
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MissingPrerequisite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except RolemineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

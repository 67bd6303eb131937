"""Command-line entry points: publish, serve, validate.

Exit codes: 0 success, 1 validation problems (bad manifest, unknown format
token, unknown classes, or orphans under --strict), 2 I/O and fetch
problems (unreadable files, cold cache in offline mode, bad ontology
documents). Warnings go to standard error and leave the exit code alone
unless --strict is set.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from mcforge.config import EngineConfig, apply_config_file
from mcforge.errors import (
    ConfigurationError,
    FetchError,
    McforgeError,
    ParseFailure,
    SerializationError,
    ValidationError,
)
from mcforge.fetch import fetch_ontology
from mcforge.rdf.serialize import FILE_EXTENSIONS, FORMAT_TOKENS, format_for_token
from mcforge.report import (
    encode,
    export,
    ingest_manifest,
    load_manifest,
    resolve_ontology_origin,
)

VALIDATION_EXIT = 1
IO_EXIT = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcforge",
        description="Publish annotated model-card text as a linked RDF report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    publish = sub.add_parser("publish", help="encode a manifest and write one export")
    publish.add_argument("--ontology", help="override the manifest's ontology origin")
    publish.add_argument("--input", required=True, help="manifest JSON path")
    publish.add_argument(
        "--format",
        required=True,
        help="export format token: " + ", ".join(sorted(FORMAT_TOKENS)),
    )
    publish.add_argument("--out", required=True, help="output file path")
    publish.add_argument("--offline", action="store_true", help="never touch the network")
    publish.add_argument(
        "--strict", action="store_true", help="treat orphan snippets as an error"
    )
    publish.add_argument("--base-iri", help="override the manifest's base IRI")
    publish.add_argument("--config", help="key=value config file")

    serve = sub.add_parser("serve", help="run the HTTP annotation service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui-dir", help="static directory served at /ui")
    serve.add_argument(
        "--cors-origin",
        action="append",
        default=[],
        help="origin allowed to call the API (repeatable)",
    )
    serve.add_argument("--config", help="key=value config file")

    validate = sub.add_parser("validate", help="check a manifest and its ontology")
    validate.add_argument("--input", required=True, help="manifest JSON path")
    validate.add_argument("--ontology", help="override the manifest's ontology origin")
    validate.add_argument("--offline", action="store_true")
    validate.add_argument("--config", help="key=value config file")
    return parser


def _load_config(path: Optional[str]) -> EngineConfig:
    config = EngineConfig()
    if path:
        config = apply_config_file(config, path)
    return config


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _exit_code_for(exc: McforgeError) -> int:
    if isinstance(exc, (FetchError, ParseFailure)):
        return IO_EXIT
    return VALIDATION_EXIT


def _session_from_args(args, config: EngineConfig):
    handle = None
    if args.ontology:
        handle = fetch_ontology(
            args.ontology, cache_dir=config.cache_dir, offline=args.offline or None
        )
    return ingest_manifest(
        args.input,
        config,
        handle=handle,
        base_iri=getattr(args, "base_iri", None),
        offline=args.offline or None,
    )


def _cmd_publish(args) -> int:
    try:
        config = _load_config(args.config)
        fmt = format_for_token(args.format)
    except (ConfigurationError, SerializationError) as exc:
        return _fail(str(exc), VALIDATION_EXIT)

    try:
        session = _session_from_args(args, config)
        result = encode(session)
    except McforgeError as exc:
        _print_details(exc)
        return _fail(str(exc), _exit_code_for(exc))

    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.strict and result.orphans:
        orphan_list = ", ".join(result.orphans)
        return _fail(f"orphan snippet(s) under --strict: {orphan_list}", VALIDATION_EXIT)

    body = export(session, fmt, result)
    out = Path(args.out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(body, encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot write {out}: {exc}", IO_EXIT)
    print(
        f"wrote {out} ({fmt.name.lower()}, {len(result.graph.triples)} triples, "
        f"{len(result.pairs)} linked pairs, {len(result.orphans)} orphans)"
    )
    return 0


def _print_details(exc: McforgeError) -> None:
    details = getattr(exc, "details", None)
    if isinstance(details, list):
        for item in details:
            print(f"error: {item}", file=sys.stderr)
    diagnostics = getattr(exc, "diagnostics", None)
    if diagnostics:
        for diag in diagnostics:
            print(f"error: {diag}", file=sys.stderr)


def _cmd_validate(args) -> int:
    try:
        config = _load_config(args.config)
    except ConfigurationError as exc:
        return _fail(str(exc), VALIDATION_EXIT)
    try:
        data = load_manifest(args.input)
        session = _session_from_args(args, config)
    except McforgeError as exc:
        _print_details(exc)
        return _fail(str(exc), _exit_code_for(exc))
    origin = args.ontology or resolve_ontology_origin(data["ontology"], args.input)
    print(
        f"manifest OK: {len(session.snippets)} snippet(s), "
        f"{len(session.model.classes)} ontology classes from {origin}"
    )
    return 0


def _cmd_serve(args) -> int:
    try:
        config = _load_config(args.config)
    except ConfigurationError as exc:
        return _fail(str(exc), VALIDATION_EXIT)
    if args.cors_origin:
        from dataclasses import replace

        config = replace(config, cors_origins=tuple(args.cors_origin))

    import uvicorn

    from mcforge.service import create_app

    app = create_app(config, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "publish":
        return _cmd_publish(args)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "serve":
        return _cmd_serve(args)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())

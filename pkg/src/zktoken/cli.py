"""Command-line entry point. JSON on stdout, prose on stderr."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import codec
from .chain import Chain, load_json
from .errors import ParseError, ReplayError, ScenarioAssertionFailed, ZkTokenError
from .harness import audit_decrypt
from .scenario import SCHEMA_VERSION, load_scenario, load_shipped, receipts_document, run_scenario, shipped_scenarios

OUT_DIR_ENV = "ZKTOKEN_OUT_DIR"

QUERIES = ("roots", "nullifiers", "balances", "pending", "summary")


def _emit(doc: Any) -> None:
    print(json.dumps(doc, indent=2, sort_keys=False))


def _write(path: Path, doc: Any) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _resolve_scenario(ref: str) -> dict:
    if not os.path.exists(ref) and ref in shipped_scenarios():
        return load_shipped(ref)
    return load_scenario(ref)


def cmd_run(args) -> int:
    doc = _resolve_scenario(args.scenario)
    result = run_scenario(doc, seed=args.seed, depth=args.depth)
    out = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or "out")
    out.mkdir(parents=True, exist_ok=True)
    chain = result.harness.chain
    files = {
        "events.json": {"schema_version": SCHEMA_VERSION, "events": chain.event_log()},
        "snapshot.json": codec.to_json(chain.snapshot()),
        "receipts.json": receipts_document(result),
        "txlog.json": chain.txlog_document(),
    }
    for name, content in files.items():
        _write(out / name, content)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "scenario": result.name,
        "ok": result.passed,
        "state_hash": chain.state_hash(),
        "files": sorted(str(out / n) for n in files),
        "failures": result.failures,
    }
    _emit(summary)
    if not result.passed:
        raise ScenarioAssertionFailed(result.failures)
    return 0


def _snapshot_query(snap: dict, query: str) -> Any:
    contracts = snap.get("contracts", {})
    tokens = {a: c for a, c in contracts.items() if "tree_depth" in c or "commitments" in c}
    if query == "roots":
        return {a: c["roots"] for a, c in tokens.items()}
    if query == "nullifiers":
        return {a: len(c["nullifiers"]) for a, c in tokens.items()}
    if query == "balances":
        return {a: {"balances": c["balances"], "nfts": c["nfts"]} for a, c in tokens.items()}
    if query == "pending":
        return {a: len(c["pending"]) for a, c in contracts.items() if "pending" in c}
    return {
        "step": snap.get("step"),
        "contracts": sorted(contracts),
        "commitments": {a: len(c["commitments"]) for a, c in tokens.items()},
    }


def cmd_inspect(args) -> int:
    snap = load_json(args.snapshot)
    if not isinstance(snap, dict) or "contracts" not in snap:
        raise ParseError(f"{args.snapshot} is not a snapshot")
    try:
        result = _snapshot_query(snap, args.query)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed snapshot: {exc!r}") from exc
    _emit({"schema_version": SCHEMA_VERSION, "query": args.query, "result": result})
    return 0


def cmd_audit(args) -> int:
    log = load_json(args.log)
    events = log.get("events", log) if isinstance(log, dict) else log
    if not isinstance(events, list):
        raise ParseError(f"{args.log} holds no event list")
    try:
        key = int(args.auditor_key, 16) if args.auditor_key.lower().startswith("0x") else int(args.auditor_key)
    except ValueError as exc:
        raise ParseError(f"bad auditor key: {exc}") from exc
    fields = args.fields.split(",") if args.fields else None
    _emit(audit_decrypt(key, events, fields))
    return 0


def cmd_replay(args) -> int:
    doc = load_json(args.txlog)
    if not isinstance(doc, dict):
        raise ParseError(f"{args.txlog} is not a transaction log")
    chain = Chain.replay(doc, limit=args.limit)
    if args.out:
        _write(Path(args.out), codec.to_json(chain.snapshot()))
    _emit({"schema_version": SCHEMA_VERSION, "applied": chain.step, "state_hash": chain.state_hash()})
    return 0


def cmd_vectors(args) -> int:
    from .vectors import golden_vectors

    _emit(golden_vectors())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zktoken", description="Private token ledger simulator.")
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="execute a scenario and write its artifacts")
    run.add_argument("scenario", help="scenario file, or the name of a shipped scenario")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--depth", type=int, default=None, help="commitment tree depth")
    run.add_argument("--out-dir", default=None, help=f"output directory (default ${OUT_DIR_ENV} or ./out)")
    run.set_defaults(func=cmd_run)

    ins = sub.add_parser("inspect", help="query a snapshot file")
    ins.add_argument("snapshot")
    ins.add_argument("--query", choices=QUERIES, default="summary")
    ins.set_defaults(func=cmd_inspect)

    aud = sub.add_parser("audit", help="decrypt audit data from an event log")
    aud.add_argument("log")
    aud.add_argument("--auditor-key", required=True, help="auditor secret key (hex or decimal)")
    aud.add_argument("--fields", default=None, help="comma-separated token fields to keep")
    aud.set_defaults(func=cmd_audit)

    rep = sub.add_parser("replay", help="re-apply a transaction log")
    rep.add_argument("txlog")
    rep.add_argument("--limit", type=int, default=None, help="apply only the first N transactions")
    rep.add_argument("--out", default=None, help="write the final snapshot here")
    rep.set_defaults(func=cmd_replay)

    vec = sub.add_parser("vectors", help="print deterministic test vectors")
    vec.set_defaults(func=cmd_vectors)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZkTokenError as exc:
        doc = {"error": exc.name, "message": str(exc)}
        if isinstance(exc, ReplayError):
            doc["index"] = exc.index
            doc["cause"] = exc.cause.name
        if isinstance(exc, ScenarioAssertionFailed):
            doc["failures"] = exc.failures
            print(f"{len(exc.failures)} scenario assertion(s) failed", file=sys.stderr)
        else:
            print(f"error: {exc.name}: {exc}", file=sys.stderr)
        if not isinstance(exc, ScenarioAssertionFailed):
            _emit(doc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

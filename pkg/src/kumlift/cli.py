"""Command line front end.

    kumlift run DOC [--parallel N] [--witness-only] [--canonical]
    kumlift demo OUTDIR

Exit codes: 0 when every task passes, 1 when some task fails (or has no
lift), 2 on malformed or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from kumlift import kernels
from kumlift.corpus import DOCUMENTS, MALFORMED
from kumlift.document import ValidationError, build_environment, run_task, to_json, verify_witness

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _run_one(doc: dict, index: int) -> tuple[dict, int]:
    env = build_environment(doc)
    task = env.tasks[index]
    t0 = time.perf_counter_ns()
    record = run_task(env, task)
    elapsed = (time.perf_counter_ns() - t0) // 1000
    if not verify_witness(env, task, record):
        raise RuntimeError(f"witness for task {task['id']!r} does not re-verify")
    return to_json(record), elapsed


def _worker(args: tuple[dict, int]) -> tuple[dict, int]:
    return _run_one(*args)


def evaluate(doc: dict, parallel: int = 1) -> tuple[list[dict], list[int]]:
    """Validate the whole document, then run its tasks (results in input order)."""
    env = build_environment(doc)
    jobs = [(doc, k) for k in range(len(env.tasks))]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            out = list(pool.map(_worker, jobs))
    else:
        out = [_worker(j) for j in jobs]
    return [r for r, _ in out], [t for _, t in out]


def render(records: list[dict], timings: list[int] | None, witness_only: bool = False) -> str:
    if witness_only:
        records = [{"id": r["id"], "verdict": r["verdict"], "witness": r["witness"]} for r in records]
    counts = {v: sum(1 for r in records if r["verdict"] == v) for v in ("pass", "fail", "none")}
    doc = {"format": "kumlift-verdicts/1", "results": records, "summary": counts}
    if timings is not None:
        doc["trailer"] = {"backend": kernels.BACKEND,
                          "elapsed_us": {r["id"]: t for r, t in zip(records, timings)}}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def exit_code(records: list[dict]) -> int:
    return EXIT_PASS if all(r["verdict"] == "pass" for r in records) else EXIT_FAIL


def load_document(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise ValidationError(f"{path} is not UTF-8 (byte {exc.start})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"malformed JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None


def cmd_run(args: argparse.Namespace) -> int:
    try:
        doc = load_document(args.doc)
        records, timings = evaluate(doc, args.parallel)
    except ValidationError as exc:
        print(f"kumlift: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(render(records, None if args.canonical else timings, args.witness_only))
    return exit_code(records)


def write_demo(outdir: Path) -> dict:
    """Write the corpus and the expected canonical verdicts; returns the manifest."""
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for name, make in DOCUMENTS.items():
        doc = make()
        (outdir / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        records, _ = evaluate(doc)
        (outdir / f"{name}.expected.json").write_text(render(records, None), encoding="utf-8")
        manifest[name] = {"document": f"{name}.json", "expected": f"{name}.expected.json",
                          "exit": exit_code(records)}
    (outdir / "malformed.json").write_text(MALFORMED, encoding="utf-8")
    manifest["malformed"] = {"document": "malformed.json", "expected": None, "exit": EXIT_INVALID}
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def cmd_demo(args: argparse.Namespace) -> int:
    try:
        manifest = write_demo(Path(args.outdir))
    except OSError as exc:
        print(f"kumlift: error: cannot write to {args.outdir}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    for name, entry in manifest.items():
        print(f"{name}: expected exit {entry['exit']}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kumlift", description="Exact lattice checks for lifting derived equivalences.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a problem document")
    r.add_argument("doc", help="path to a JSON problem document")
    r.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes (default 1)")
    r.add_argument("--witness-only", action="store_true", help="omit derived matrices")
    r.add_argument("--canonical", action="store_true", help="omit the timing trailer")
    r.set_defaults(func=cmd_run)
    d = sub.add_parser("demo", help="write the worked-example corpus")
    d.add_argument("outdir")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "parallel", 1) < 1:
        print("kumlift: error: --parallel must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

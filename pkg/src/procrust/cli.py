"""Command-line surface: run, batch, eval, render, verify."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from procrust.agents import RemoteAgent, ScriptedAgent
from procrust.canonical import canonical_json
from procrust.config import remote_agent_settings
from procrust.errors import AgentError, ProcrustError, ValidationError
from procrust.evalstats import (
    LabeledPath,
    align_factors,
    build_contingency,
    mcnemar,
    mismatch_cost,
    render_decision_table,
    render_sequence_table,
    sequence_match,
)
from procrust.model import Scenario
from procrust.orchestrator import RunStore, run_batch, run_scenario, verify_trace
from procrust.render import export_run
from procrust.similarity import provider_by_name

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_AGENT = 3
EXIT_INTERNAL = 4


def _load_scenario(path: str) -> Scenario:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"scenario {path} is not valid JSON: {exc}") from exc
    return Scenario.from_payload(payload)


def _backend(spec: str):
    kind, _, path = spec.partition(":")
    if not path:
        raise ValidationError(
            f"backend spec {spec!r} must look like scripted:<fixture-file> or llm:<config-file>"
        )
    if kind == "scripted":
        return ScriptedAgent.from_file(path)
    if kind == "llm":
        return RemoteAgent(**remote_agent_settings(path))
    raise ValidationError(f"unknown backend kind {kind!r} (expected scripted or llm)")


def _read_decision_csv(path: str) -> tuple[list[str], list[str]]:
    reference: list[str] = []
    engine: list[str] = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {"reference", "engine"} <= set(reader.fieldnames):
                raise ValidationError(
                    f"{path}: expected CSV columns id, reference, engine"
                )
            for row in reader:
                reference.append(row["reference"])
                engine.append(row["engine"])
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    if not reference:
        raise ValidationError(f"{path}: no decision rows")
    return reference, engine


def _write_json(path: str | None, payload) -> None:
    if path:
        Path(path).write_text(canonical_json(payload) + "\n", encoding="utf-8")


# --- subcommand handlers -----------------------------------------------------


def _cmd_run(args) -> int:
    scenario = _load_scenario(args.scenario)
    backend = _backend(args.agents)
    store = RunStore(args.out)
    run = run_scenario(scenario, backend, args.seed)
    directory = store.persist(scenario, run)
    print(f"run {run.result['run_id']} -> {directory}")
    return EXIT_OK


def _cmd_batch(args) -> int:
    scenario = _load_scenario(args.scenario)
    backend = _backend(args.agents)
    store = RunStore(args.out)
    summary = run_batch(scenario, backend, args.n, args.seed, store, jobs=args.jobs)
    print(f"batch of {args.n}: {len(summary['runs'])} succeeded, {len(summary['failures'])} failed")
    for headline, count in summary["headline_counts"].items():
        print(f"  {count:4d} x {headline}")
    if not summary["runs"]:
        print("all runs failed", file=sys.stderr)
        return EXIT_AGENT
    return EXIT_OK


def _cmd_eval_mcnemar(args) -> int:
    rows = []
    stats = []
    for path in args.csv:
        reference, engine = _read_decision_csv(path)
        table = build_contingency(reference, engine)
        rows.append((Path(path).stem, table))
        outcome = mcnemar(table)
        stats.append(
            {
                "dataset": Path(path).stem,
                **table.to_payload(),
                "chi2": outcome.chi2,
                "p": outcome.p,
                "cost": mismatch_cost(table),
            }
        )
    print(render_decision_table(rows))
    _write_json(args.json, stats)
    return EXIT_OK


def _cmd_eval_cost(args) -> int:
    out = []
    for path in args.csv:
        reference, engine = _read_decision_csv(path)
        table = build_contingency(reference, engine)
        cost = mismatch_cost(table)
        out.append({"dataset": Path(path).stem, "cost": cost, **table.to_payload()})
        print(f"{Path(path).stem}: cost = {cost} (yn={table.yn}, ny={table.ny})")
    _write_json(args.json, out)
    return EXIT_OK


def _load_string_list(path: str, key: str) -> list[str]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get(key)
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ValidationError(f"{path}: expected a JSON array of strings (or {{{key!r}: [...]}})")
    return data


def _cmd_eval_align(args) -> int:
    provider = provider_by_name(args.provider)
    reference = _load_string_list(args.reference, "reference")
    candidates = _load_string_list(args.candidates, "candidates")
    result = align_factors(candidates, reference, provider, args.threshold)
    print(f"alignment: {result.alignment:.3f} ({len(result.matched_pairs)}/{len(reference)} matched)")
    for pair in result.matched_pairs:
        print(f"  {pair.reference!r} <- {pair.candidate!r} ({pair.similarity:.3f})")
    for label in result.unmatched_reference:
        print(f"  unmatched: {label!r}")
    _write_json(
        args.json,
        {
            "alignment": result.alignment,
            "matched_pairs": [
                {"reference": p.reference, "candidate": p.candidate, "similarity": p.similarity}
                for p in result.matched_pairs
            ],
            "unmatched_reference": list(result.unmatched_reference),
        },
    )
    return EXIT_OK


def _load_labeled_paths(path: str) -> list[LabeledPath]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = [data]
    paths = []
    for index, raw in enumerate(data):
        paths.append(
            LabeledPath(
                run_id=str(raw.get("run_id", f"run{index}")),
                steps=tuple(raw["steps"]),
                path_label=raw.get("path_label"),
            )
        )
    return paths


def _cmd_eval_sequence(args) -> int:
    runs = _load_labeled_paths(args.runs)
    reference = _load_labeled_paths(args.reference)[0]
    result = sequence_match(runs, reference, rule=args.rule)
    print(render_sequence_table(result, reference))
    _write_json(
        args.json,
        {
            "per_position_rates": {
                str(k): list(v) for k, v in result.per_position_rates.items()
            },
            "path_level_counts": result.path_level_counts,
            "path_level_by_length": {
                str(k): v for k, v in result.path_level_by_length.items()
            },
            "strata_sizes": {str(k): v for k, v in result.strata_sizes.items()},
            "rule": result.rule,
        },
    )
    return EXIT_OK


def _cmd_render(args) -> int:
    written = export_run(args.run_dir, args.format)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    scenario, trace, result = RunStore.load(args.run_dir)
    from procrust.canonical import digest

    report = verify_trace(scenario, trace)
    issues = list(report.issues)
    ok = report.ok
    if digest(result) != trace.result_digest:
        ok = False
        issues.append("result.json does not match the trace's result_digest")
    if ok:
        print(f"ok: {len(trace.events)} events verified, result digest matches")
        return EXIT_OK
    print(f"verification FAILED (first violation at seq {report.first_violation}):")
    for issue in issues:
        print(f"  - {issue}")
    return EXIT_INTERNAL


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procrust",
        description="Deterministic decision-process engines with auditable traces.",
    )
    parser.add_argument("--log-level", default="warning", help="logging level name")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario")
    run_p.add_argument("scenario")
    run_p.add_argument("--agents", required=True, help="scripted:<fixture> or llm:<config>")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--out", default="runs")
    run_p.set_defaults(handler=_cmd_run)

    batch_p = sub.add_parser("batch", help="repeat a scenario across seeds")
    batch_p.add_argument("scenario")
    batch_p.add_argument("--agents", required=True)
    batch_p.add_argument("-n", type=int, required=True, help="number of runs")
    batch_p.add_argument("--seed", type=int, default=0, help="base seed")
    batch_p.add_argument("--out", default="runs")
    batch_p.add_argument("--jobs", type=int, default=1)
    batch_p.set_defaults(handler=_cmd_batch)

    eval_p = sub.add_parser("eval", help="evaluation statistics")
    eval_sub = eval_p.add_subparsers(dest="eval_command", required=True)

    mcnemar_p = eval_sub.add_parser("mcnemar", help="agreement tables with significance")
    mcnemar_p.add_argument("csv", nargs="+", help="CSV files with id,reference,engine columns")
    mcnemar_p.add_argument("--json", help="write structured results here")
    mcnemar_p.set_defaults(handler=_cmd_eval_mcnemar)

    cost_p = eval_sub.add_parser("cost", help="mismatch costs only")
    cost_p.add_argument("csv", nargs="+")
    cost_p.add_argument("--json")
    cost_p.set_defaults(handler=_cmd_eval_cost)

    align_p = eval_sub.add_parser("align", help="factor alignment via similarity threshold")
    align_p.add_argument("--reference", required=True, help="JSON list of reference factors")
    align_p.add_argument("--candidates", required=True, help="JSON list of candidate factors")
    align_p.add_argument("--threshold", type=float, default=0.5)
    align_p.add_argument("--provider", default="jaccard")
    align_p.add_argument("--json")
    align_p.set_defaults(handler=_cmd_eval_align)

    seq_p = eval_sub.add_parser("sequence", help="stepwise and path-level label match rates")
    seq_p.add_argument("--runs", required=True, help="JSON list of labeled paths")
    seq_p.add_argument("--reference", required=True, help="JSON labeled reference path")
    seq_p.add_argument("--rule", default="majority", choices=["majority", "final"])
    seq_p.add_argument("--json")
    seq_p.set_defaults(handler=_cmd_eval_sequence)

    render_p = sub.add_parser("render", help="export reports/graphs for a persisted run")
    render_p.add_argument("run_dir")
    render_p.add_argument("--format", required=True, choices=["dot", "csv", "md"])
    render_p.set_defaults(handler=_cmd_render)

    verify_p = sub.add_parser("verify", help="verify a persisted run trace by replay")
    verify_p.add_argument("run_dir")
    verify_p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING))
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AgentError as exc:
        print(f"agent error: {exc}", file=sys.stderr)
        return EXIT_AGENT
    except ProcrustError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Run management: dispatch, persistence, batch repetition, replay verification.

Replay is the integrity mechanism: a trace is verified by re-running the
engine with every agent output served from the recorded trace and comparing
the regenerated event stream and result digest against what was stored. A
mutated analyzer event is caught at its own sequence number; a mutated agent
event surfaces at the first downstream computation that consumed it.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

from procrust.agents import AgentBackend, TraceBackend
from procrust.canonical import canonical_json, digest
from procrust.engines import ENGINES
from procrust.errors import ProcrustError, ValidationError
from procrust.model import Scenario
from procrust.pipeline import EngineRun, PipelineContext
from procrust.trace import (
    RunTrace,
    VerificationReport,
    check_structure,
    read_trace,
    write_trace,
)

logger = logging.getLogger(__name__)


def _execute(ctx: PipelineContext) -> EngineRun:
    ctx.orchestrate("intake", ctx.scenario.to_payload())
    engine = ENGINES[ctx.scenario.process_kind]
    return ctx.finish(engine(ctx))


def run_scenario(
    scenario: Scenario, backend: AgentBackend, seed: int, run_id: str | None = None
) -> EngineRun:
    """Execute the engine selected by the scenario's process kind."""
    return _execute(PipelineContext(scenario, backend, seed, run_id=run_id))


def qoc_decide_binary(scenario: Scenario, backend: AgentBackend, seed: int) -> dict[str, Any]:
    """Approve/reject pipeline over fixed options; criteria stay agent-proposed."""
    from procrust.model import ProcessKind

    if scenario.process_kind is not ProcessKind.QOC:
        raise ValidationError("binary decision requires a qoc scenario")
    if not scenario.config.get("binary", False):
        raise ValidationError("scenario config must set binary: true")
    run = run_scenario(scenario, backend, seed)
    return {"decision": run.result["decision"], "result": run.result}


def replay_run(scenario: Scenario, trace: RunTrace) -> EngineRun:
    """Re-run deterministically with agent outputs taken from the trace."""
    backend = TraceBackend.from_trace(trace)
    return run_scenario(scenario, backend, trace.seed, run_id=trace.run_id)


def verify_trace(scenario: Scenario, trace: RunTrace) -> VerificationReport:
    """Structural checks plus full replay; violations are report content."""
    structural = check_structure(trace)
    if not structural.ok:
        return structural

    backend = TraceBackend.from_trace(trace)
    ctx = PipelineContext(scenario, backend, trace.seed, run_id=trace.run_id)
    issues: list[str] = []
    replay_digest: str | None = None
    try:
        replayed = _execute(ctx)
        replay_events = replayed.trace.events
        replay_digest = replayed.trace.result_digest
    except ProcrustError as exc:
        issues.append(f"replay aborted: {exc}")
        replay_events = ctx.trace.events

    first: int | None = None
    for position in range(min(len(trace.events), len(replay_events))):
        if trace.events[position].to_payload() != replay_events[position].to_payload():
            first = position
            issues.append(f"event {position} does not match its replay")
            break
    if first is None and len(trace.events) != len(replay_events):
        first = min(len(trace.events), len(replay_events))
        issues.append(
            f"trace has {len(trace.events)} events but replay produced {len(replay_events)}"
        )
    if first is None and issues:
        # replay aborted after a clean shared prefix
        first = len(replay_events)
    if first is None and replay_digest != trace.result_digest:
        first = len(trace.events) - 1
        issues.append("replayed result digest differs from the recorded result_digest")
    return VerificationReport(ok=not issues, first_violation=first, issues=tuple(issues))


# --- persistence ----------------------------------------------------------------


class RunStore:
    """One directory per run: scenario copy, trace, result, rendered report."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def run_dir(self, run_id: str) -> Path:
        return self.root / f"run_{run_id}"

    def persist(self, scenario: Scenario, run: EngineRun) -> Path:
        from procrust.render import report_markdown

        directory = self.run_dir(run.result["run_id"])
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "scenario.json").write_text(
            canonical_json(scenario.to_payload()) + "\n", encoding="utf-8"
        )
        write_trace(run.trace, directory / "trace.jsonl")
        (directory / "result.json").write_text(
            canonical_json(run.result) + "\n", encoding="utf-8"
        )
        (directory / "report.md").write_text(report_markdown(run.result), encoding="utf-8")
        return directory

    @staticmethod
    def load(run_dir: Path | str) -> tuple[Scenario, RunTrace, dict[str, Any]]:
        directory = Path(run_dir)
        result_path = directory / "result.json"
        if not result_path.exists():
            raise ValidationError(f"{directory} has no result.json")
        scenario = Scenario.from_payload(
            json.loads((directory / "scenario.json").read_text(encoding="utf-8"))
        )
        trace = read_trace(directory / "trace.jsonl")
        result = json.loads(result_path.read_text(encoding="utf-8"))
        return scenario, trace, result


def headline_of(result: dict[str, Any]) -> str:
    """Compact per-run outcome used for batch aggregation."""
    kind = result["process_kind"]
    if kind == "qoc":
        return f"decision={result['decision']}"
    if kind == "sensitivity":
        roles = result["roles"]
        return "roles[" + ", ".join(f"{k}={roles[k]}" for k in sorted(roles)) + "]"
    if kind == "normal_game":
        cells = result["analysis"]["pure_nash"]
        return "nash=" + (";".join(f"({i},{j})" for i, j in cells) if cells else "none")
    if kind == "sequential_game":
        if "spe_path_label" in result:
            return f"path_label={result['spe_path_label']}"
        return "path=" + " -> ".join(result["spe"]["spe_path"])
    if kind == "risk":
        risks = result["register"]["risks"]
        return f"top_risk={risks[0]['label']}" if risks else "top_risk=none"
    raise ValidationError(f"unknown process kind in result: {kind!r}")


def run_batch(
    scenario: Scenario,
    backend: AgentBackend,
    n: int,
    base_seed: int,
    store: RunStore,
    jobs: int = 1,
) -> dict[str, Any]:
    """Repeat the scenario across consecutive seeds; failures are recorded, not fatal."""
    if n < 1:
        raise ValidationError(f"batch size must be >= 1, got {n}")

    def one(seed: int) -> dict[str, Any]:
        run = run_scenario(scenario, backend, seed)
        directory = store.persist(scenario, run)
        return {
            "seed": seed,
            "run_id": run.result["run_id"],
            "headline": headline_of(run.result),
            "dir": directory.name,
        }

    seeds = list(range(base_seed, base_seed + n))
    rows: list[dict[str, Any]] = []
    failures: list[dict[str, Any]] = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda s: _guarded(one, s), seeds))
    else:
        outcomes = [_guarded(one, seed) for seed in seeds]
    for seed, (row, error) in zip(seeds, outcomes):
        if error is None:
            rows.append(row)
        else:
            logger.warning("run with seed %d failed: %s", seed, error)
            failures.append({"seed": seed, "error": str(error), "kind": type(error).__name__})

    summary = {
        "schema_version": 1,
        "scenario_id": scenario.id,
        "process_kind": scenario.process_kind.value,
        "n": n,
        "base_seed": base_seed,
        "runs": rows,
        "headline_counts": dict(sorted(Counter(row["headline"] for row in rows).items())),
        "failures": failures,
    }
    (store.root / "summary.json").write_text(canonical_json(summary) + "\n", encoding="utf-8")
    from procrust.render import batch_markdown

    (store.root / "summary.md").write_text(batch_markdown(summary), encoding="utf-8")
    return summary


def _guarded(fn, seed: int):
    try:
        return fn(seed), None
    except ProcrustError as exc:
        return None, exc

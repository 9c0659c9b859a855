"""Append-only run trace: the audit log every pipeline writes above the agent layer.

A ``RunTrace`` is an ordered, gapless sequence of ``TraceEvent`` records.
Agent events carry the exact payload digest that was sent below the
barrier together with the structured response; analyzer, consolidator and
orchestrator events record every deterministic computation, ending with
the final result record whose digest is pinned on the trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from procrust.canonical import canonical_json, digest
from procrust.errors import SequenceGapError, ValidationError


class Actor(str, Enum):
    AGENT = "agent"
    ANALYZER = "analyzer"
    CONSOLIDATOR = "consolidator"
    ORCHESTRATOR = "orchestrator"


@dataclass(frozen=True)
class TraceEvent:
    # actor/agent_id invariants are checked by check_structure, not at
    # construction, so tampered trace files can still be loaded and verified
    seq: int
    stage: str
    actor: Actor
    input_digest: str
    output_payload: Any
    agent_id: str | None = None
    rationale: str | None = None

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "seq": self.seq,
            "stage": self.stage,
            "actor": self.actor.value,
            "input_digest": self.input_digest,
            "output_payload": self.output_payload,
        }
        if self.agent_id is not None:
            payload["agent_id"] = self.agent_id
        if self.rationale is not None:
            payload["rationale"] = self.rationale
        return payload

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> TraceEvent:
        try:
            return cls(
                seq=payload["seq"],
                stage=payload["stage"],
                actor=Actor(payload["actor"]),
                input_digest=payload["input_digest"],
                output_payload=payload["output_payload"],
                agent_id=payload.get("agent_id"),
                rationale=payload.get("rationale"),
            )
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"malformed trace event: {exc}") from exc


@dataclass
class RunTrace:
    run_id: str
    scenario_id: str
    seed: int
    events: list[TraceEvent] = field(default_factory=list)
    result_digest: str | None = None


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    first_violation: int | None = None
    issues: tuple[str, ...] = ()


def append_event(trace: RunTrace, event: TraceEvent) -> RunTrace:
    """Extend ``trace`` by one event; ``event.seq`` must equal the current length."""
    expected = len(trace.events)
    if event.seq != expected:
        raise SequenceGapError(f"expected seq {expected}, got {event.seq}")
    trace.events.append(event)
    return trace


def check_structure(trace: RunTrace) -> VerificationReport:
    """Validate the per-event invariants without replaying any computation.

    Checks the gapless sequence numbering and the actor/agent_id rules.
    Violations are report content, not exceptions.
    """
    issues: list[str] = []
    first: int | None = None
    for position, event in enumerate(trace.events):
        problem = None
        if event.seq != position:
            problem = f"seq {event.seq} at position {position} breaks gapless ordering"
        elif event.actor is Actor.AGENT and not event.agent_id:
            problem = f"agent event at seq {event.seq} is missing agent_id"
        elif event.actor is Actor.ANALYZER and event.agent_id is not None:
            problem = f"analyzer event at seq {event.seq} carries agent_id"
        if problem:
            issues.append(problem)
            if first is None:
                first = position
    if trace.result_digest is None:
        issues.append("trace has no result_digest")
        if first is None:
            first = len(trace.events)
    return VerificationReport(ok=not issues, first_violation=first, issues=tuple(issues))


def event_fingerprint(event: TraceEvent) -> str:
    return digest(event.to_payload())


def trace_to_jsonl(trace: RunTrace) -> str:
    """Serialize as JSON Lines: one header line, then one event per line."""
    header = {
        "run_id": trace.run_id,
        "scenario_id": trace.scenario_id,
        "seed": trace.seed,
        "result_digest": trace.result_digest,
    }
    lines = [canonical_json(header)]
    lines.extend(canonical_json(event.to_payload()) for event in trace.events)
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text: str) -> RunTrace:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("trace file is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"trace header is not valid JSON: {exc}") from exc
    for key in ("run_id", "scenario_id", "seed"):
        if key not in header:
            raise ValidationError(f"trace header is missing {key!r}")
    trace = RunTrace(
        run_id=header["run_id"],
        scenario_id=header["scenario_id"],
        seed=header["seed"],
        result_digest=header.get("result_digest"),
    )
    for line in lines[1:]:
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"trace event is not valid JSON: {exc}") from exc
        trace.events.append(TraceEvent.from_payload(payload))
    return trace


def write_trace(trace: RunTrace, path: Path) -> None:
    path.write_text(trace_to_jsonl(trace), encoding="utf-8")


def read_trace(path: Path) -> RunTrace:
    return trace_from_jsonl(path.read_text(encoding="utf-8"))

"""Shared run machinery: the trace-recording context every engine executes in.

Agent calls and deterministic computations are committed to the trace in a
fixed order (stage order, then stable agent ordering), so a run with a
scripted backend and a fixed seed is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from procrust.agents import AgentBackend, AgentPersona, AgentTask, task_digest
from procrust.canonical import digest
from procrust.errors import ValidationError
from procrust.model import SCHEMA_VERSION, Scenario
from procrust.trace import Actor, RunTrace, TraceEvent, append_event


@dataclass(frozen=True)
class EngineRun:
    result: dict[str, Any]
    trace: RunTrace


def derive_run_id(scenario: Scenario, seed: int, backend_name: str) -> str:
    """Deterministic run id so identical runs persist to identical documents."""
    return digest(
        {"scenario": scenario.to_payload(), "seed": seed, "backend": backend_name}
    )[:16]


class PipelineContext:
    def __init__(
        self,
        scenario: Scenario,
        backend: AgentBackend,
        seed: int,
        run_id: str | None = None,
    ):
        self.scenario = scenario
        self.backend = backend
        self.seed = seed
        self.trace = RunTrace(
            run_id=run_id or derive_run_id(scenario, seed, backend.name),
            scenario_id=scenario.id,
            seed=seed,
        )

    # -- event helpers -------------------------------------------------

    def _append(
        self,
        stage: str,
        actor: Actor,
        input_digest: str,
        payload: Any,
        agent_id: str | None = None,
        rationale: str | None = None,
    ) -> Any:
        event = TraceEvent(
            seq=len(self.trace.events),
            stage=stage,
            actor=actor,
            input_digest=input_digest,
            output_payload=payload,
            agent_id=agent_id,
            rationale=rationale,
        )
        append_event(self.trace, event)
        return payload

    def ask(self, stage: str, persona: AgentPersona, task: AgentTask) -> dict[str, Any]:
        """Invoke one agent and commit the exchange to the trace."""
        response = self.backend.invoke(persona, task, self.seed)
        self._append(
            stage,
            Actor.AGENT,
            task_digest(persona, task),
            response,
            agent_id=persona.agent_id,
        )
        return response

    def ask_panel(
        self, stage: str, requests: list[tuple[AgentPersona, AgentTask]]
    ) -> dict[str, dict[str, Any]]:
        """One task per persona, committed in stable agent-id order."""
        responses: dict[str, dict[str, Any]] = {}
        for persona, task in sorted(requests, key=lambda pair: pair[0].agent_id):
            responses[persona.agent_id] = self.ask(stage, persona, task)
        return responses

    def analyzer(self, stage: str, input_payload: Any, output_payload: Any) -> Any:
        return self._append(stage, Actor.ANALYZER, digest(input_payload), output_payload)

    def consolidator(self, stage: str, input_payload: Any, output_payload: Any) -> Any:
        return self._append(stage, Actor.CONSOLIDATOR, digest(input_payload), output_payload)

    def orchestrate(self, stage: str, payload: Any, rationale: str | None = None) -> Any:
        return self._append(stage, Actor.ORCHESTRATOR, digest(payload), payload, rationale=rationale)

    def note(self, stage: str, message: str, payload: Any) -> None:
        """Record an orchestrator adjustment (clamp, truncation, dedup, tie)."""
        self._append(stage, Actor.ORCHESTRATOR, digest(payload), payload, rationale=message)

    def finish(self, fields: dict[str, Any]) -> EngineRun:
        """Assemble the result envelope, record it as the final event, pin its digest."""
        reserved = {"schema_version", "run_id", "scenario_id", "process_kind", "seed"}
        clash = reserved & set(fields)
        if clash:
            raise ValidationError(f"engine result uses reserved field names: {sorted(clash)}")
        result = {
            "schema_version": SCHEMA_VERSION,
            "run_id": self.trace.run_id,
            "scenario_id": self.scenario.id,
            "process_kind": self.scenario.process_kind.value,
            "seed": self.seed,
            **fields,
        }
        self._append(
            "result",
            Actor.ORCHESTRATOR,
            digest({"scenario": self.scenario.to_payload(), "seed": self.seed}),
            result,
        )
        self.trace.result_digest = digest(result)
        return EngineRun(result=result, trace=self.trace)


# -- personas ----------------------------------------------------------


def role_prompt(role: str) -> str:
    return f"You are {role}. Assess the scenario strictly from this perspective."


def stakeholder_personas(
    scenario: Scenario, capabilities: frozenset[str]
) -> list[AgentPersona]:
    if not scenario.stakeholders:
        raise ValidationError(
            f"process {scenario.process_kind.value!r} needs at least one stakeholder"
        )
    return [
        AgentPersona(
            agent_id=holder.id, role_prompt=role_prompt(holder.role), capabilities=capabilities
        )
        for holder in scenario.stakeholders
    ]


DEFAULT_EVALUATOR_ROLE = "a neutral evaluator who scores outcomes consistently and dispassionately"


def evaluator_persona(scenario: Scenario, capabilities: frozenset[str]) -> AgentPersona:
    role = scenario.config.get("evaluator_role", DEFAULT_EVALUATOR_ROLE)
    return AgentPersona(
        agent_id="evaluator", role_prompt=f"You are {role}.", capabilities=capabilities
    )

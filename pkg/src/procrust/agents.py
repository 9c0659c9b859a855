"""The layer below the barrier: role-conditioned agents behind one uniform contract.

Two backends are shipped: a deterministic scripted agent that serves canned
responses keyed by task digest (used for replay and tests) and a remote
chat-completion client. Deterministic analyzers never call into this module;
the dependency always points the other way.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import jsonschema

from procrust.canonical import digest
from procrust.errors import (
    CapabilityError,
    SchemaValidationError,
    TransportError,
    ValidationError,
)

logger = logging.getLogger(__name__)

TASK_KINDS = frozenset(
    {
        "propose_items",
        "weight_criteria",
        "score_option",
        "estimate_influence",
        "propose_strategies",
        "propose_actions",
        "assign_payoffs",
        "identify_risks",
        "score_risk",
    }
)


@dataclass(frozen=True)
class AgentPersona:
    agent_id: str
    role_prompt: str
    capabilities: frozenset[str]

    def __post_init__(self) -> None:
        if not self.role_prompt.strip():
            raise ValidationError(f"persona {self.agent_id!r} has an empty role prompt")
        if not self.capabilities:
            raise ValidationError(f"persona {self.agent_id!r} declares no capabilities")
        unknown = self.capabilities - TASK_KINDS
        if unknown:
            raise ValidationError(f"unknown capabilities for {self.agent_id!r}: {sorted(unknown)}")


@dataclass(frozen=True)
class AgentTask:
    task_kind: str
    context: dict[str, Any]
    response_schema_id: str

    def __post_init__(self) -> None:
        if self.task_kind not in TASK_KINDS:
            raise ValidationError(f"unknown task kind: {self.task_kind!r}")
        scenario = self.context.get("scenario")
        if not isinstance(scenario, str) or not scenario:
            raise ValidationError("task context must carry the scenario description verbatim")
        if self.response_schema_id not in RESPONSE_SCHEMAS:
            raise ValidationError(f"unknown response schema: {self.response_schema_id!r}")


def task_payload(persona: AgentPersona, task: AgentTask) -> dict[str, Any]:
    """The exact payload sent below the barrier; its digest keys trace and fixtures."""
    return {
        "agent_id": persona.agent_id,
        "role_prompt": persona.role_prompt,
        "task_kind": task.task_kind,
        "context": task.context,
        "response_schema_id": task.response_schema_id,
    }


def task_digest(persona: AgentPersona, task: AgentTask) -> str:
    return digest(task_payload(persona, task))


# --- response schemas ------------------------------------------------------

_ITEM = {
    "type": "object",
    "required": ["label"],
    "properties": {
        "label": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

RESPONSE_SCHEMAS: dict[str, dict[str, Any]] = {
    "items.v1": {
        "type": "object",
        "required": ["items"],
        "properties": {"items": {"type": "array", "items": _ITEM}},
        "additionalProperties": False,
    },
    "players.v1": {
        "type": "object",
        "required": ["players"],
        "properties": {
            "players": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {
                    "type": "object",
                    "required": ["name", "objective", "payoff_unit", "value_range"],
                    "properties": {
                        "name": {"type": "string", "minLength": 1},
                        "objective": {"type": "string"},
                        "payoff_unit": {"type": "string"},
                        "value_range": {
                            "type": "array",
                            "minItems": 2,
                            "maxItems": 2,
                            "items": {"type": "number"},
                        },
                    },
                    "additionalProperties": False,
                },
            }
        },
        "additionalProperties": False,
    },
    "weights.v1": {
        "type": "object",
        "required": ["weights"],
        "properties": {
            "weights": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}}
        },
        "additionalProperties": False,
    },
    "scores.v1": {
        "type": "object",
        "required": ["scores"],
        "properties": {
            "scores": {
                "type": "object",
                "additionalProperties": {
                    "type": "object",
                    "additionalProperties": {"type": "number", "minimum": 0, "maximum": 10},
                },
            }
        },
        "additionalProperties": False,
    },
    "influence.v1": {
        "type": "object",
        "required": ["influence"],
        "properties": {"influence": {"type": "number"}},
        "additionalProperties": False,
    },
    "strategies.v1": {
        "type": "object",
        "required": ["strategies"],
        "properties": {
            "strategies": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["name"],
                    "properties": {
                        "name": {"type": "string", "minLength": 1},
                        "summary": {"type": "string"},
                    },
                    "additionalProperties": False,
                },
            }
        },
        "additionalProperties": False,
    },
    "actions.v1": {
        "type": "object",
        "required": ["actions"],
        "properties": {
            "actions": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["label"],
                    "properties": {"label": {"type": "string", "minLength": 1}},
                    "additionalProperties": False,
                },
            },
            "terminate": {"type": "boolean"},
        },
        "additionalProperties": False,
    },
    "payoff_cell.v1": {
        "type": "object",
        "required": ["u1", "u2"],
        "properties": {"u1": {"type": "number"}, "u2": {"type": "number"}},
        "additionalProperties": False,
    },
    "terminal_payoffs.v1": {
        "type": "object",
        "required": ["u1", "u2", "rationale"],
        "properties": {
            "u1": {"type": "number"},
            "u2": {"type": "number"},
            "rationale": {"type": "string", "minLength": 1},
        },
        "additionalProperties": False,
    },
    "risk_scores.v1": {
        "type": "object",
        "required": ["assessments"],
        "properties": {
            "assessments": {
                "type": "object",
                "additionalProperties": {
                    "type": "object",
                    "required": ["probability", "impact"],
                    "properties": {
                        "probability": {"type": "number", "minimum": 0, "maximum": 1},
                        "impact": {"type": "number", "minimum": 1, "maximum": 5},
                    },
                    "additionalProperties": False,
                },
            }
        },
        "additionalProperties": False,
    },
    "interpretation.v1": {
        "type": "object",
        "required": ["summary"],
        "properties": {"summary": {"type": "string"}},
        "additionalProperties": False,
    },
}


def validate_response(schema_id: str, response: Any) -> None:
    schema = RESPONSE_SCHEMAS[schema_id]
    try:
        jsonschema.validate(response, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(part) for part in exc.absolute_path) or "<root>"
        raise SchemaValidationError(f"response violates {schema_id} at {where}: {exc.message}") from exc


def check_capability(persona: AgentPersona, task: AgentTask) -> None:
    if task.task_kind not in persona.capabilities:
        raise CapabilityError(
            f"persona {persona.agent_id!r} lacks capability {task.task_kind!r}"
        )


class AgentBackend:
    """Uniform contract: ``invoke`` returns a schema-valid structured response."""

    name = "abstract"

    def invoke(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        check_capability(persona, task)
        response = self._respond(persona, task, seed)
        validate_response(task.response_schema_id, response)
        return response

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        raise NotImplementedError


class ScriptedAgent(AgentBackend):
    """Deterministic fixture-backed agent: task digest -> canned response.

    A fixture value is either the response payload itself or a seed
    envelope ``{"by_seed": {"<seed>": payload, ...}, "default": payload}``
    so one fixture file can drive seed-varied batch runs.
    """

    name = "scripted"

    def __init__(self, responses: dict[str, Any]):
        self._responses = dict(responses)

    @classmethod
    def from_file(cls, path: Path | str) -> ScriptedAgent:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot load scripted fixture {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"scripted fixture {path} must be a JSON object")
        return cls(data)

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        key = task_digest(persona, task)
        try:
            entry = self._responses[key]
        except KeyError:
            raise SchemaValidationError(
                f"scripted fixture has no response for task digest {key} "
                f"(kind={task.task_kind}, agent={persona.agent_id})"
            ) from None
        if isinstance(entry, dict) and "by_seed" in entry:
            return entry["by_seed"].get(str(seed), entry.get("default"))
        return entry


class CallableAgent(AgentBackend):
    """Adapter turning a plain function into a backend; used to author fixtures."""

    name = "callable"

    def __init__(self, fn: Callable[[AgentPersona, AgentTask, int], dict[str, Any]]):
        self._fn = fn

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        return self._fn(persona, task, seed)


class RecordingAgent(AgentBackend):
    """Wraps a backend and captures digest -> response pairs as a scripted fixture."""

    def __init__(self, inner: AgentBackend):
        self.inner = inner
        self.name = inner.name
        self._captured: dict[str, dict[int, Any]] = {}

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        response = self.inner._respond(persona, task, seed)
        self._captured.setdefault(task_digest(persona, task), {})[seed] = response
        return response

    def fixture_payload(self) -> dict[str, Any]:
        fixture: dict[str, Any] = {}
        for key, by_seed in self._captured.items():
            distinct = {json.dumps(value, sort_keys=True) for value in by_seed.values()}
            if len(distinct) == 1:
                fixture[key] = next(iter(by_seed.values()))
            else:
                lowest = min(by_seed)
                fixture[key] = {
                    "by_seed": {str(seed): value for seed, value in sorted(by_seed.items())},
                    "default": by_seed[lowest],
                }
        return fixture

    def save(self, path: Path | str) -> None:
        Path(path).write_text(
            json.dumps(self.fixture_payload(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


_JSON_BLOCK = re.compile(r"\{.*\}", re.DOTALL)


class RemoteAgent(AgentBackend):
    """Chat-completion client for hosted models.

    Sends the persona as the system message and the task context plus the
    response schema as the user message. A schema-invalid reply triggers one
    repair cycle that re-sends the schema with the validation error; transport
    failures are retried up to ``retry_limit`` before the run aborts.
    """

    name = "remote"

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        temperature: float = 0.0,
        retry_limit: int = 2,
        timeout: float = 60.0,
        post_fn: Callable[..., Any] | None = None,
    ):
        self.endpoint_url = endpoint_url
        self.model = model
        self.temperature = temperature
        self.retry_limit = retry_limit
        self.timeout = timeout
        if post_fn is None:
            import requests

            post_fn = requests.post
        self._post = post_fn

    def _prompt(self, task: AgentTask, repair: str | None) -> str:
        schema = RESPONSE_SCHEMAS[task.response_schema_id]
        parts = [
            f"Task: {task.task_kind}",
            "Context:",
            json.dumps(task.context, indent=2, sort_keys=True),
            "Reply with a single JSON object matching this schema (no prose):",
            json.dumps(schema, sort_keys=True),
        ]
        if repair:
            parts.append(f"Your previous reply was rejected: {repair}. Send corrected JSON only.")
        return "\n".join(parts)

    def _call(self, persona: AgentPersona, task: AgentTask, seed: int, repair: str | None) -> Any:
        body = {
            "model": self.model,
            "temperature": self.temperature,
            "seed": seed,
            "messages": [
                {"role": "system", "content": persona.role_prompt},
                {"role": "user", "content": self._prompt(task, repair)},
            ],
        }
        try:
            http = self._post(self.endpoint_url, json=body, timeout=self.timeout)
        except Exception as exc:
            raise TransportError(f"agent endpoint unreachable: {exc}") from exc
        status = getattr(http, "status_code", 200)
        if status >= 400:
            raise TransportError(f"agent endpoint returned HTTP {status}")
        try:
            return http.json()["choices"][0]["message"]["content"]
        except Exception as exc:
            raise TransportError(f"malformed chat-completion payload: {exc}") from exc

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        last_error: Exception | None = None
        repair: str | None = None
        for attempt in range(self.retry_limit + 1):
            try:
                content = self._call(persona, task, seed, repair)
            except TransportError as exc:
                last_error = exc
                logger.warning("transport failure (attempt %d): %s", attempt + 1, exc)
                continue
            try:
                response = self._parse(content)
                validate_response(task.response_schema_id, response)
                return response
            except SchemaValidationError as exc:
                last_error = exc
                repair = str(exc)
                logger.warning("schema rejection (attempt %d): %s", attempt + 1, exc)
        assert last_error is not None
        raise last_error

    @staticmethod
    def _parse(content: Any) -> Any:
        if not isinstance(content, str):
            raise SchemaValidationError(f"agent reply is not text: {type(content).__name__}")
        match = _JSON_BLOCK.search(content)
        if not match:
            raise SchemaValidationError("agent reply contains no JSON object")
        try:
            return json.loads(match.group(0))
        except json.JSONDecodeError as exc:
            raise SchemaValidationError(f"agent reply is not valid JSON: {exc.msg}") from exc


class TraceBackend(AgentBackend):
    """Serves agent outputs recorded in an existing trace; powers replay."""

    name = "trace-replay"

    def __init__(self, recorded: dict[str, Any]):
        self._recorded = recorded

    @classmethod
    def from_trace(cls, trace) -> TraceBackend:
        from procrust.trace import Actor

        recorded = {
            event.input_digest: event.output_payload
            for event in trace.events
            if event.actor is Actor.AGENT
        }
        return cls(recorded)

    def _respond(self, persona: AgentPersona, task: AgentTask, seed: int) -> dict[str, Any]:
        key = task_digest(persona, task)
        try:
            return self._recorded[key]
        except KeyError:
            raise SchemaValidationError(
                f"trace has no recorded agent output for task digest {key}"
            ) from None



"""Agent layer: scripted determinism, schema enforcement, remote retries, similarity."""

import pytest

from procrust.agents import (
    AgentPersona,
    AgentTask,
    CallableAgent,
    RecordingAgent,
    RemoteAgent,
    ScriptedAgent,
    task_digest,
)
from procrust.similarity import JaccardSimilarity, similarity
from procrust.errors import (
    CapabilityError,
    SchemaValidationError,
    TransportError,
    ValidationError,
)

PERSONA = AgentPersona(
    agent_id="ops",
    role_prompt="You are the operations lead.",
    capabilities=frozenset({"propose_items", "weight_criteria"}),
)

TASK = AgentTask(
    task_kind="propose_items",
    context={"scenario": "choose a depot site", "kind": "criterion"},
    response_schema_id="items.v1",
)

RESPONSE = {"items": [{"label": "fuel cost", "description": "diesel price exposure"}]}


def scripted():
    return ScriptedAgent({task_digest(PERSONA, TASK): RESPONSE})


def test_scripted_returns_exact_canned_response():
    assert scripted().invoke(PERSONA, TASK, seed=7) == RESPONSE


def test_scripted_is_pure_in_persona_task_seed():
    agent = scripted()
    assert agent.invoke(PERSONA, TASK, 3) == agent.invoke(PERSONA, TASK, 3)


def test_scripted_seed_envelope():
    agent = ScriptedAgent(
        {
            task_digest(PERSONA, TASK): {
                "by_seed": {"1": {"items": [{"label": "a"}]}},
                "default": {"items": [{"label": "b"}]},
            }
        }
    )
    assert agent.invoke(PERSONA, TASK, 1) == {"items": [{"label": "a"}]}
    assert agent.invoke(PERSONA, TASK, 2) == {"items": [{"label": "b"}]}


def test_capability_mismatch_rejected():
    task = AgentTask(
        task_kind="score_risk",
        context={"scenario": "x", "risks": []},
        response_schema_id="risk_scores.v1",
    )
    with pytest.raises(CapabilityError):
        scripted().invoke(PERSONA, task, 0)


def test_missing_fixture_entry_is_an_error():
    with pytest.raises(SchemaValidationError):
        ScriptedAgent({}).invoke(PERSONA, TASK, 0)


def test_schema_violation_in_fixture_rejected():
    agent = ScriptedAgent({task_digest(PERSONA, TASK): {"items": [{"label": ""}]}})
    with pytest.raises(SchemaValidationError):
        agent.invoke(PERSONA, TASK, 0)


def test_task_requires_scenario_context():
    with pytest.raises(ValidationError):
        AgentTask(task_kind="propose_items", context={}, response_schema_id="items.v1")


class _FakeHttp:
    def __init__(self, content):
        self.status_code = 200
        self._content = content

    def json(self):
        return {"choices": [{"message": {"content": self._content}}]}


def test_remote_parses_json_with_surrounding_prose():
    agent = RemoteAgent(
        "http://example/chat",
        "m",
        post_fn=lambda url, json, timeout: _FakeHttp(
            'Sure! Here it is: {"items": [{"label": "fuel cost"}]}'
        ),
    )
    assert agent.invoke(PERSONA, TASK, 0) == {"items": [{"label": "fuel cost"}]}


def test_remote_prose_only_fails_after_retries():
    calls = []

    def post(url, json, timeout):
        calls.append(json)
        return _FakeHttp("I think the main criterion is fuel cost.")

    agent = RemoteAgent("http://example/chat", "m", retry_limit=2, post_fn=post)
    with pytest.raises(SchemaValidationError):
        agent.invoke(PERSONA, TASK, 0)
    assert len(calls) == 3
    # repair cycle re-sends the schema with the error message
    assert "rejected" in calls[1]["messages"][1]["content"]


def test_remote_transport_error_after_retries():
    def post(url, json, timeout):
        raise OSError("connection refused")

    agent = RemoteAgent("http://example/chat", "m", retry_limit=1, post_fn=post)
    with pytest.raises(TransportError):
        agent.invoke(PERSONA, TASK, 0)


def test_recording_round_trips_through_scripted():
    recorder = RecordingAgent(CallableAgent(lambda p, t, s: RESPONSE))
    assert recorder.invoke(PERSONA, TASK, 0) == RESPONSE
    replay = ScriptedAgent(recorder.fixture_payload())
    assert replay.invoke(PERSONA, TASK, 0) == RESPONSE


def test_recording_merges_seed_variants():
    recorder = RecordingAgent(
        CallableAgent(lambda p, t, s: {"items": [{"label": f"item {s}"}]})
    )
    recorder.invoke(PERSONA, TASK, 0)
    recorder.invoke(PERSONA, TASK, 1)
    replay = ScriptedAgent(recorder.fixture_payload())
    assert replay.invoke(PERSONA, TASK, 1) == {"items": [{"label": "item 1"}]}


# -- similarity provider ------------------------------------------------


def test_similarity_reflexive():
    assert similarity(JaccardSimilarity(), "fuel prices", "fuel prices") == 1.0


def test_similarity_token_overlap_hand_value():
    # |{cost, fuel}| / |{cost, of, fuel}| = 2/3
    value = similarity(JaccardSimilarity(), "cost of fuel", "fuel cost")
    assert value == pytest.approx(2 / 3)


def test_similarity_disjoint_tokens():
    assert similarity(JaccardSimilarity(), "fuel cost", "driver shortage") == 0.0


def test_similarity_symmetric_and_bounded():
    provider = JaccardSimilarity()
    pairs = [("a b c", "c d"), ("x", "x y"), ("long text here", "here")]
    for a, b in pairs:
        ab, ba = similarity(provider, a, b), similarity(provider, b, a)
        assert ab == ba
        assert 0.0 <= ab <= 1.0


def test_similarity_rejects_empty_text():
    with pytest.raises(ValidationError):
        similarity(JaccardSimilarity(), "   ", "fuel")

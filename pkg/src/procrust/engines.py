"""The five decision pipelines, each a function from a pipeline context to result fields.

Agents contribute proposals, weights, scores, influences, actions, and payoffs;
everything after those calls is deterministic and recorded as analyzer or
consolidator events. Out-of-range agent values are clamped to the declared
range and the clamp is traced; truncations and dedups are traced the same way.
"""

from __future__ import annotations

from typing import Any

from procrust.agents import AgentPersona, AgentTask
from procrust.canonical import normalize_text
from procrust.consolidate import ConsolidatedItem, ProposedItem, consolidate
from procrust.errors import AgentError, SchemaValidationError, ValidationError
from procrust.evalstats import PATH_LABELS, path_level_label
from procrust.model import ProcessKind, Scenario
from procrust.normalform import (
    MAX_STRATEGIES,
    NormalFormGame,
    Player,
    Strategy,
    analyze,
)
from procrust.pipeline import PipelineContext, evaluator_persona, stakeholder_personas
from procrust.qoc import (
    QocFrame,
    build_assessment,
    criterion_influence,
    detect_outliers,
    score_options,
)
from procrust.risk import RiskAssessment, RiskRating, group_divergence, score_risks
from procrust.sensitivity import (
    DEFAULT_LOOP_MAX_LEN,
    DEFAULT_LOOP_MIN_WEIGHT,
    DEFAULT_MAX_STRENGTH,
    ROLE_RULE,
    InfluenceMatrix,
    classify_roles,
    compute_metrics,
    find_loops,
)
from procrust.sequential import (
    MAX_BRANCHING,
    GameTree,
    TreeNode,
    backward_induction,
    validate_tree,
)
from procrust.similarity import provider_by_name

DEFAULT_PINNED_KIND = {
    ProcessKind.QOC: "option",
    ProcessKind.SENSITIVITY: "variable",
    ProcessKind.RISK: "risk",
}


def _provider(scenario: Scenario):
    return provider_by_name(scenario.config.get("similarity_provider", "jaccard"))


def _threshold(scenario: Scenario) -> float:
    return float(scenario.config.get("merge_threshold", 0.5))


def _pinned_proposals(scenario: Scenario, kind: str, default_kind: str) -> list[ProposedItem]:
    pinned_kind = scenario.config.get("pinned_kind", default_kind)
    if pinned_kind != kind:
        return []
    return [
        ProposedItem(label=label, description="user-pinned", proposer="user", kind=kind)
        for label in scenario.pinned_items
    ]


def _items_from_response(response: dict[str, Any], proposer: str, kind: str) -> list[ProposedItem]:
    items = []
    for raw in response["items"]:
        try:
            items.append(
                ProposedItem(
                    label=raw["label"],
                    description=raw.get("description", ""),
                    proposer=proposer,
                    kind=kind,
                )
            )
        except ValidationError as exc:
            raise SchemaValidationError(f"agent {proposer!r} proposed an unusable item: {exc}") from exc
    return items


def _propose_and_consolidate(
    ctx: PipelineContext,
    personas: list[AgentPersona],
    kind: str,
    stage: str,
    extra_context: dict[str, Any] | None = None,
    task_kind: str = "propose_items",
) -> list[ConsolidatedItem]:
    """Panel proposal of one item kind, merged with user-pinned items."""
    scenario = ctx.scenario
    context: dict[str, Any] = {"scenario": scenario.description, "kind": kind}
    if extra_context:
        context.update(extra_context)
    responses = ctx.ask_panel(
        stage,
        [(p, AgentTask(task_kind, context, "items.v1")) for p in personas],
    )
    proposals = _pinned_proposals(
        scenario, kind, DEFAULT_PINNED_KIND.get(scenario.process_kind, "option")
    )
    for agent_id in sorted(responses):
        proposals.extend(_items_from_response(responses[agent_id], agent_id, kind))
    clusters = consolidate(proposals, _provider(scenario), _threshold(scenario))
    ctx.consolidator(
        f"consolidate_{stage}",
        {"proposals": [item.to_payload() for item in proposals], "threshold": _threshold(scenario)},
        [cluster.to_payload() for cluster in clusters],
    )
    return clusters


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


# --- QOC -------------------------------------------------------------------

QOC_STAKEHOLDER_CAPS = frozenset({"propose_items", "weight_criteria", "score_option"})
BINARY_OPTIONS = ("approve", "reject")


def _fixed_option(label: str) -> ConsolidatedItem:
    item = ProposedItem(label=label, description="fixed binary option", proposer="user", kind="option")
    return ConsolidatedItem(canonical_label=label, members=(item,), pinned=True)


def run_qoc(ctx: PipelineContext) -> dict[str, Any]:
    scenario = ctx.scenario
    binary = bool(scenario.config.get("binary", False))
    question = scenario.config.get("question") or scenario.description
    personas = stakeholder_personas(scenario, QOC_STAKEHOLDER_CAPS)

    if binary:
        options = [_fixed_option(label) for label in BINARY_OPTIONS]
        ctx.orchestrate(
            "options",
            [cluster.to_payload() for cluster in options],
            rationale="binary mode: agent-proposed options suppressed",
        )
    else:
        options = _propose_and_consolidate(
            ctx, personas, "option", "propose_options", {"question": question}
        )
        if len(options) < 2:
            raise ValidationError(
                f"need >= 2 consolidated options, got {len(options)}; "
                "agents proposed too little variety"
            )
    criteria = _propose_and_consolidate(
        ctx, personas, "criterion", "propose_criteria", {"question": question}
    )
    if not criteria:
        raise ValidationError("no criteria were proposed")

    frame = QocFrame(question=question, options=tuple(options), criteria=tuple(criteria))
    option_labels = list(frame.option_labels)
    criterion_labels = list(frame.criterion_labels)

    weight_tasks = [
        (
            p,
            AgentTask(
                "weight_criteria",
                {"scenario": scenario.description, "question": question, "criteria": criterion_labels},
                "weights.v1",
            ),
        )
        for p in personas
    ]
    weight_responses = ctx.ask_panel("weight_criteria", weight_tasks)

    score_tasks = [
        (
            p,
            AgentTask(
                "score_option",
                {
                    "scenario": scenario.description,
                    "question": question,
                    "options": option_labels,
                    "criteria": criterion_labels,
                    "scale": {"min": 0, "max": 10},
                },
                "scores.v1",
            ),
        )
        for p in personas
    ]
    score_responses = ctx.ask_panel("score_options", score_tasks)

    assessments = []
    for persona in personas:
        try:
            assessments.append(
                build_assessment(
                    persona.agent_id,
                    weight_responses[persona.agent_id]["weights"],
                    score_responses[persona.agent_id]["scores"],
                    frame,
                )
            )
        except ValidationError as exc:
            raise SchemaValidationError(
                f"assessment from agent {persona.agent_id!r} is unusable: {exc}"
            ) from exc
    assessments.sort(key=lambda a: a.agent_id)
    ctx.analyzer(
        "normalize_assessments",
        {"weights": weight_responses, "scores": score_responses},
        [a.to_payload() for a in assessments],
    )

    result = score_options(frame, assessments)
    ctx.analyzer(
        "score",
        {"assessments": [a.to_payload() for a in assessments], "options": option_labels},
        {
            "per_option_totals": result.per_option_totals,
            "per_agent_totals": result.per_agent_totals,
            "decision": result.decision,
        },
    )
    result.outlier_flags = detect_outliers(assessments, frame)
    ctx.analyzer(
        "outliers",
        {"assessments": [a.to_payload() for a in assessments]},
        [flag.to_payload() for flag in result.outlier_flags],
    )
    result.criterion_influence = criterion_influence(frame, result)
    ctx.analyzer(
        "criterion_influence",
        {"decision": result.decision, "per_option_totals": result.per_option_totals},
        result.criterion_influence,
    )

    return {
        "question": question,
        "binary": binary,
        "options": option_labels,
        "criteria": criterion_labels,
        "consolidation": {
            "options": [cluster.to_payload() for cluster in options],
            "criteria": [cluster.to_payload() for cluster in criteria],
        },
        **result.to_payload(),
    }


# --- sensitivity -------------------------------------------------------------


def run_sensitivity(ctx: PipelineContext) -> dict[str, Any]:
    scenario = ctx.scenario
    config = scenario.config
    max_strength = float(config.get("max_strength", DEFAULT_MAX_STRENGTH))
    personas = stakeholder_personas(scenario, frozenset({"propose_items"}))
    evaluator = evaluator_persona(
        scenario, frozenset({"propose_items", "estimate_influence"})
    )

    variables = _propose_and_consolidate(ctx, personas, "variable", "propose_variables")
    if len(variables) < 2:
        raise ValidationError(f"need >= 2 consolidated variables, got {len(variables)}")
    labels = [cluster.canonical_label for cluster in variables]

    entries: list[list[float]] = []
    for i, source in enumerate(labels):
        row: list[float] = []
        for j, target in enumerate(labels):
            if i == j:
                row.append(0.0)
                continue
            task = AgentTask(
                "estimate_influence",
                {
                    "scenario": scenario.description,
                    "source": source,
                    "target": target,
                    "scale": {"min": -max_strength, "max": max_strength, "step": 1},
                },
                "influence.v1",
            )
            raw = float(ctx.ask("estimate_influence", evaluator, task)["influence"])
            value = _clamp(raw, -max_strength, max_strength)
            if value != raw:
                ctx.note(
                    "estimate_influence",
                    f"clamped influence {source!r} -> {target!r} from {raw} to {value}",
                    {"source": source, "target": target, "raw": raw, "stored": value},
                )
            row.append(value)
        entries.append(row)

    matrix = InfluenceMatrix(
        variables=tuple(variables),
        entries=tuple(tuple(row) for row in entries),
        max_strength=max_strength,
    )
    ctx.analyzer("matrix", {"variables": labels}, matrix.to_payload())

    metrics = compute_metrics(matrix)
    ctx.analyzer("metrics", matrix.to_payload(), metrics.to_payload())
    roles = classify_roles(metrics)
    ctx.analyzer(
        "roles",
        metrics.to_payload(),
        {"roles": dict(zip(labels, roles)), "rule": ROLE_RULE},
    )

    loop_min_weight = float(config.get("loop_min_weight", DEFAULT_LOOP_MIN_WEIGHT))
    loop_max_len = min(int(config.get("loop_max_len", DEFAULT_LOOP_MAX_LEN)), len(labels))
    loops = find_loops(matrix, loop_min_weight, loop_max_len)
    ctx.analyzer(
        "loops",
        {"min_abs_weight": loop_min_weight, "max_len": loop_max_len},
        [loop.to_payload() for loop in loops],
    )

    interpretation = None
    if config.get("interpret", True):
        summary_task = AgentTask(
            "propose_items",
            {
                "scenario": scenario.description,
                "purpose": "interpretation",
                "roles": dict(zip(labels, roles)),
                "loops": [loop.to_payload() for loop in loops[:5]],
            },
            "interpretation.v1",
        )
        interpretation = ctx.ask("interpret", evaluator, summary_task)["summary"]

    return {
        "variables": labels,
        "consolidation": [cluster.to_payload() for cluster in variables],
        "matrix": matrix.to_payload(),
        "metrics": metrics.to_payload(),
        "roles": dict(zip(labels, roles)),
        "role_rule": ROLE_RULE,
        "loops": [loop.to_payload() for loop in loops],
        "loop_params": {"min_abs_weight": loop_min_weight, "max_len": loop_max_len},
        "interpretation": interpretation,
    }


# --- player extraction shared by both game engines ----------------------------


def _extract_players(ctx: PipelineContext, evaluator: AgentPersona) -> tuple[Player, Player]:
    response = ctx.ask(
        "extract_players",
        evaluator,
        AgentTask(
            "propose_items",
            {"scenario": ctx.scenario.description, "purpose": "extract_players"},
            "players.v1",
        ),
    )
    players = []
    for raw in response["players"]:
        try:
            players.append(
                Player(
                    name=raw["name"],
                    objective=raw["objective"],
                    payoff_unit=raw["payoff_unit"],
                    value_range=(float(raw["value_range"][0]), float(raw["value_range"][1])),
                )
            )
        except ValidationError as exc:
            raise SchemaValidationError(f"player extraction unusable: {exc}") from exc
    return players[0], players[1]


def _player_personas(
    players: tuple[Player, Player], capabilities: frozenset[str]
) -> list[AgentPersona]:
    return [
        AgentPersona(
            agent_id=f"player{index + 1}",
            role_prompt=(
                f"You are {player.name}. Your objective: {player.objective}. "
                "Reason strictly from this role, not as a neutral observer."
            ),
            capabilities=capabilities,
        )
        for index, player in enumerate(players)
    ]


def _interpretation(
    ctx: PipelineContext, evaluator: AgentPersona, topic: dict[str, Any]
) -> str | None:
    if not ctx.scenario.config.get("interpret", True):
        return None
    task = AgentTask(
        "propose_items",
        {"scenario": ctx.scenario.description, "purpose": "interpretation", **topic},
        "interpretation.v1",
    )
    return ctx.ask("interpret", evaluator, task)["summary"]


# --- normal-form game ----------------------------------------------------------


def run_normal_game(ctx: PipelineContext) -> dict[str, Any]:
    scenario = ctx.scenario
    evaluator = evaluator_persona(scenario, frozenset({"propose_items", "assign_payoffs"}))
    players = _extract_players(ctx, evaluator)
    personas = _player_personas(players, frozenset({"propose_strategies"}))

    menus: list[tuple[Strategy, ...]] = []
    for index, persona in enumerate(personas):
        player = players[index]
        response = ctx.ask(
            "propose_strategies",
            persona,
            AgentTask(
                "propose_strategies",
                {
                    "scenario": scenario.description,
                    "player": player.name,
                    "objective": player.objective,
                    "max_strategies": MAX_STRATEGIES,
                },
                "strategies.v1",
            ),
        )
        strategies: list[Strategy] = []
        seen: set[str] = set()
        for raw in response["strategies"]:
            norm = normalize_text(raw["name"])
            if norm in seen:
                ctx.note(
                    "propose_strategies",
                    f"dropped duplicate strategy {raw['name']!r} for {player.name}",
                    {"player": player.name, "strategy": raw["name"]},
                )
                continue
            seen.add(norm)
            strategies.append(Strategy(name=raw["name"], summary=raw.get("summary", "")))
        if len(strategies) > MAX_STRATEGIES:
            dropped = [s.name for s in strategies[MAX_STRATEGIES:]]
            strategies = strategies[:MAX_STRATEGIES]
            ctx.note(
                "propose_strategies",
                f"truncated {player.name} strategies to {MAX_STRATEGIES}",
                {"player": player.name, "dropped": dropped},
            )
        menus.append(tuple(strategies))

    payoff_rows: list[tuple[tuple[float, float], ...]] = []
    for s1 in menus[0]:
        row: list[tuple[float, float]] = []
        for s2 in menus[1]:
            response = ctx.ask(
                "assign_payoffs",
                evaluator,
                AgentTask(
                    "assign_payoffs",
                    {
                        "scenario": scenario.description,
                        "players": [p.to_payload() for p in players],
                        "strategy1": s1.to_payload(),
                        "strategy2": s2.to_payload(),
                    },
                    "payoff_cell.v1",
                ),
            )
            cell = []
            for key, player in zip(("u1", "u2"), players):
                raw = float(response[key])
                value = _clamp(raw, *player.value_range)
                if value != raw:
                    ctx.note(
                        "assign_payoffs",
                        f"clamped {key} for ({s1.name!r}, {s2.name!r}) from {raw} to {value}",
                        {"cell": [s1.name, s2.name], "raw": raw, "stored": value},
                    )
                cell.append(value)
            row.append((cell[0], cell[1]))
        payoff_rows.append(tuple(row))

    game = NormalFormGame(
        players=players, strategies=(menus[0], menus[1]), payoffs=tuple(payoff_rows)
    )
    ctx.analyzer("game", {"strategies": [len(m) for m in menus]}, game.to_payload())
    analysis = analyze(game)
    ctx.analyzer("analysis", game.to_payload(), analysis.to_payload())
    interpretation = _interpretation(ctx, evaluator, {"analysis": analysis.to_payload()})

    return {
        "game": game.to_payload(),
        "analysis": analysis.to_payload(),
        "interpretation": interpretation,
    }


# --- sequential game -------------------------------------------------------------


def _expand_node(
    ctx: PipelineContext,
    persona: AgentPersona,
    player: Player,
    path: list[str],
    depth: int,
    horizon: int,
) -> tuple[list[str], bool]:
    """One expansion task; retried once when the reply is unusable."""
    task = AgentTask(
        "propose_actions",
        {
            "scenario": ctx.scenario.description,
            "player": player.name,
            "objective": player.objective,
            "path": path,
            "depth": depth,
            "horizon": horizon,
            "max_actions": MAX_BRANCHING,
        },
        "actions.v1",
    )
    last_problem = ""
    for _ in range(2):
        response = ctx.ask("expand", persona, task)
        terminate = bool(response.get("terminate", False))
        actions = [a["label"] for a in response["actions"]]
        if terminate and depth == 0:
            last_problem = "agent tried to terminate at the root"
            continue
        if terminate:
            if actions:
                ctx.note(
                    "expand",
                    "terminate marker overrides proposed actions",
                    {"path": path, "ignored": actions},
                )
            return [], True
        deduped: list[str] = []
        seen: set[str] = set()
        for label in actions:
            norm = normalize_text(label)
            if not norm:
                continue
            if norm in seen:
                ctx.note(
                    "expand",
                    f"dropped duplicate action {label!r}",
                    {"path": path, "action": label},
                )
                continue
            seen.add(norm)
            deduped.append(label)
        if len(deduped) > MAX_BRANCHING:
            ctx.note(
                "expand",
                f"truncated actions to {MAX_BRANCHING}",
                {"path": path, "dropped": deduped[MAX_BRANCHING:]},
            )
            deduped = deduped[:MAX_BRANCHING]
        if deduped:
            return deduped, False
        last_problem = "agent proposed no actions and no terminate marker"
    raise AgentError(f"malformed expansion at depth {depth} (path {path}): {last_problem}")


def build_tree(
    ctx: PipelineContext,
    players: tuple[Player, Player],
    personas: list[AgentPersona],
    horizon: int,
) -> GameTree:
    if horizon < 1:
        raise ValidationError(f"horizon must be >= 1, got {horizon}")
    nodes: dict[str, TreeNode] = {"n0": TreeNode(id="n0", depth=0, mover=0)}
    tree = GameTree(players=players, horizon=horizon, nodes=nodes)
    counter = 1
    queue = ["n0"]
    while queue:
        node = nodes[queue.pop(0)]
        if node.terminal:
            continue
        path = tree.path_to(node.id)
        actions, terminated = _expand_node(
            ctx, personas[node.mover], players[node.mover], path, node.depth, horizon
        )
        if terminated:
            node.mover = None
            continue
        for label in actions:
            child_id = f"n{counter}"
            counter += 1
            child_depth = node.depth + 1
            nodes[child_id] = TreeNode(
                id=child_id,
                depth=child_depth,
                mover=None if child_depth == horizon else 1 - node.mover,
                action_taken=label,
            )
            node.children.append(child_id)
            queue.append(child_id)
    validate_tree(tree, require_priced=False)
    return tree


def assign_terminal_payoffs(
    ctx: PipelineContext, tree: GameTree, evaluator: AgentPersona
) -> GameTree:
    for leaf_id in tree.leaves():
        node = tree.nodes[leaf_id]
        response = ctx.ask(
            "assign_payoffs",
            evaluator,
            AgentTask(
                "assign_payoffs",
                {
                    "scenario": ctx.scenario.description,
                    "players": [p.to_payload() for p in tree.players],
                    "path": tree.path_to(leaf_id),
                    "depth": node.depth,
                },
                "terminal_payoffs.v1",
            ),
        )
        values = []
        for key, player in zip(("u1", "u2"), tree.players):
            raw = float(response[key])
            value = _clamp(raw, *player.value_range)
            if value != raw:
                ctx.note(
                    "assign_payoffs",
                    f"clamped {key} at leaf {leaf_id} from {raw} to {value}",
                    {"leaf": leaf_id, "raw": raw, "stored": value},
                )
            values.append(value)
        node.payoffs = (values[0], values[1])
        node.rationale = response["rationale"]
    validate_tree(tree, require_priced=True)
    return tree


def run_sequential_game(ctx: PipelineContext) -> dict[str, Any]:
    scenario = ctx.scenario
    horizon = int(scenario.config.get("horizon", 4))
    evaluator = evaluator_persona(scenario, frozenset({"propose_items", "assign_payoffs"}))
    players = _extract_players(ctx, evaluator)
    personas = _player_personas(players, frozenset({"propose_actions"}))

    tree = build_tree(ctx, players, personas, horizon)
    ctx.analyzer("tree", {"horizon": horizon}, tree.to_payload())

    assign_terminal_payoffs(ctx, tree, evaluator)
    ctx.analyzer("priced_tree", {"leaves": tree.leaves()}, tree.to_payload())

    solution = backward_induction(tree)
    ctx.analyzer("solve", tree.to_payload(), solution.to_payload())
    for node_id in solution.ties:
        ctx.note(
            "solve",
            f"tie at node {node_id}; kept first child in stored order",
            {"node": node_id, "chosen": solution.choices[node_id]},
        )

    fields: dict[str, Any] = {
        "players": [p.to_payload() for p in players],
        "horizon": horizon,
        "tree": tree.to_payload(),
        "spe": solution.to_payload(),
    }

    step_labels = scenario.config.get("step_labels")
    if step_labels:
        mapping = {normalize_text(k): v for k, v in step_labels.items()}
        labeled = []
        for action in solution.spe_path:
            key = normalize_text(action)
            if key not in mapping:
                raise ValidationError(f"step_labels has no entry for action {action!r}")
            if mapping[key] not in PATH_LABELS:
                raise ValidationError(
                    f"step_labels maps {action!r} to unknown label {mapping[key]!r}"
                )
            labeled.append(mapping[key])
        rule = scenario.config.get("path_label_rule", "majority")
        fields["spe_step_labels"] = labeled
        fields["spe_path_label"] = path_level_label(labeled, rule)
        ctx.analyzer(
            "label_path",
            {"spe_path": list(solution.spe_path), "rule": rule},
            {"steps": labeled, "path_label": fields["spe_path_label"]},
        )

    fields["interpretation"] = _interpretation(
        ctx,
        evaluator,
        {"spe_path": list(solution.spe_path), "root_value": list(solution.root_value)},
    )
    return fields


# --- risk ---------------------------------------------------------------------


def run_risk(ctx: PipelineContext) -> dict[str, Any]:
    scenario = ctx.scenario
    personas = stakeholder_personas(scenario, frozenset({"identify_risks", "score_risk"}))
    risks = _propose_and_consolidate(
        ctx, personas, "risk", "identify_risks", task_kind="identify_risks"
    )
    if not risks:
        raise ValidationError("no risks were identified")
    labels = [cluster.canonical_label for cluster in risks]

    responses = ctx.ask_panel(
        "score_risks",
        [
            (
                p,
                AgentTask(
                    "score_risk",
                    {"scenario": scenario.description, "risks": labels},
                    "risk_scores.v1",
                ),
            )
            for p in personas
        ],
    )
    assessments = []
    for persona in personas:
        raw = responses[persona.agent_id]["assessments"]
        ratings = {}
        for label in labels:
            if label not in raw:
                raise SchemaValidationError(
                    f"agent {persona.agent_id!r} did not rate risk {label!r}"
                )
            try:
                ratings[label] = RiskRating(
                    probability=float(raw[label]["probability"]),
                    impact=float(raw[label]["impact"]),
                )
            except ValidationError as exc:
                raise SchemaValidationError(
                    f"agent {persona.agent_id!r} rating for {label!r} unusable: {exc}"
                ) from exc
        assessments.append(RiskAssessment(agent_id=persona.agent_id, ratings=ratings))
    assessments.sort(key=lambda a: a.agent_id)

    register = score_risks(list(risks), assessments)
    ctx.analyzer(
        "register",
        {"assessments": [a.to_payload() for a in assessments]},
        register.to_payload(),
    )

    groups = {s.id: s.group for s in scenario.stakeholders if s.group}
    group_offsets = None
    if groups:
        offsets = group_divergence(list(risks), assessments, groups)
        group_offsets = offsets
        ctx.analyzer("group_divergence", {"groups": groups}, offsets)

    return {
        "consolidation": [cluster.to_payload() for cluster in risks],
        "register": register.to_payload(),
        "assessments": [a.to_payload() for a in assessments],
        "groups": groups or None,
        "group_offsets": group_offsets,
    }


ENGINES = {
    ProcessKind.QOC: run_qoc,
    ProcessKind.SENSITIVITY: run_sensitivity,
    ProcessKind.NORMAL_GAME: run_normal_game,
    ProcessKind.SEQUENTIAL_GAME: run_sequential_game,
    ProcessKind.RISK: run_risk,
}

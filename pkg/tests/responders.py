"""Rule-based deterministic responders that stand in for live agents.

A Playbook supplies canned knowledge for the parts of a scenario that matter
to a test or bundled fixture; anything unspecified falls back to values
derived from a content hash, so responses stay deterministic across runs,
processes, and platforms. The fixture generator records these responders
into scripted-agent fixture files.
"""

import hashlib

from procrust.model import ProcessKind, Scenario, Stakeholder


def _h(*parts) -> int:
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


class Playbook:
    def __init__(
        self,
        items=None,  # {kind: {agent_id: [(label, description), ...]}}
        weights=None,  # {agent_id: {criterion: weight}}
        scores=None,  # {agent_id: {option: {criterion: score}}}
        influences=None,  # {(source, target): value}
        players=None,  # [player payload, player payload]
        strategies=None,  # {player_name: [(name, summary), ...]}
        payoff_cells=None,  # {(s1, s2): (u1, u2)}
        actions=None,  # callable (player, path_tuple, depth, seed) -> list[str] | "TERMINATE"
        terminal_payoffs=None,  # callable (path_tuple, seed) -> (u1, u2, rationale)
        risk_ratings=None,  # {agent_id: {risk: (probability, impact)}}
        interpretation="Scripted interpretation of the analysis.",
    ):
        self.items = items or {}
        self.weights = weights or {}
        self.scores = scores or {}
        self.influences = influences or {}
        self.players = players
        self.strategies = strategies or {}
        self.payoff_cells = payoff_cells or {}
        self.actions = actions
        self.terminal_payoffs = terminal_payoffs
        self.risk_ratings = risk_ratings or {}
        self.interpretation = interpretation

    # -- the backend callable ------------------------------------------

    def __call__(self, persona, task, seed):
        kind = task.task_kind
        context = task.context
        if task.response_schema_id == "players.v1":
            return {"players": self.players or _default_players()}
        if task.response_schema_id == "interpretation.v1":
            return {"summary": self.interpretation}
        if kind in ("propose_items", "identify_risks"):
            item_kind = context.get("kind", "option")
            canned = self.items.get(item_kind, {}).get(persona.agent_id)
            if canned is None:
                canned = [(f"auto {item_kind} {persona.agent_id}", "derived")]
            return {"items": [{"label": label, "description": desc} for label, desc in canned]}
        if kind == "weight_criteria":
            canned = self.weights.get(persona.agent_id)
            if canned is None:
                canned = {c: 1.0 + _h("w", persona.agent_id, c) % 5 for c in context["criteria"]}
            return {"weights": {c: canned[c] for c in context["criteria"]}}
        if kind == "score_option":
            table = {}
            for option in context["options"]:
                row = {}
                for criterion in context["criteria"]:
                    canned = self.scores.get(persona.agent_id, {}).get(option, {})
                    row[criterion] = canned.get(
                        criterion,
                        (_h("s", persona.agent_id, option, criterion) % 21) / 2.0,
                    )
                table[option] = row
            return {"scores": table}
        if kind == "estimate_influence":
            pair = (context["source"], context["target"])
            if pair in self.influences:
                return {"influence": self.influences[pair]}
            return {"influence": (_h("inf", *pair) % 7) - 3}
        if kind == "propose_strategies":
            canned = self.strategies.get(context["player"])
            if canned is None:
                canned = [("hold course", "stay put"), ("press hard", "push for more")]
            return {
                "strategies": [{"name": name, "summary": summary} for name, summary in canned]
            }
        if kind == "propose_actions":
            path = tuple(context["path"])
            if self.actions is not None:
                menu = self.actions(context["player"], path, context["depth"], seed)
            else:
                menu = ["advance", "hold"]
            if menu == "TERMINATE":
                return {"actions": [], "terminate": True}
            return {"actions": [{"label": label} for label in menu]}
        if kind == "assign_payoffs":
            if "path" in context:  # terminal payoff for a sequential leaf
                path = tuple(context["path"])
                if self.terminal_payoffs is not None:
                    u1, u2, rationale = self.terminal_payoffs(path, seed)
                else:
                    u1 = (_h("t1", *path) % 11) - 5
                    u2 = (_h("t2", *path) % 11) - 5
                    rationale = "derived outcome value"
                return {"u1": u1, "u2": u2, "rationale": rationale}
            pair = (context["strategy1"]["name"], context["strategy2"]["name"])
            if pair in self.payoff_cells:
                u1, u2 = self.payoff_cells[pair]
            else:
                u1 = (_h("u1", *pair) % 11) - 5
                u2 = (_h("u2", *pair) % 11) - 5
            return {"u1": u1, "u2": u2}
        if kind == "score_risk":
            out = {}
            for risk in context["risks"]:
                canned = self.risk_ratings.get(persona.agent_id, {})
                if risk in canned:
                    probability, impact = canned[risk]
                else:
                    probability = (_h("p", persona.agent_id, risk) % 101) / 100.0
                    impact = 1.0 + (_h("i", persona.agent_id, risk) % 5)
                out[risk] = {"probability": probability, "impact": impact}
            return {"assessments": out}
        raise AssertionError(f"responder has no rule for task kind {kind!r}")


def _default_players():
    return [
        {
            "name": "Side A",
            "objective": "maximize its own payoff",
            "payoff_unit": "points",
            "value_range": [-10, 10],
        },
        {
            "name": "Side B",
            "objective": "maximize its own payoff",
            "payoff_unit": "points",
            "value_range": [-10, 10],
        },
    ]


# --- bundled demo scenarios (one per engine) ---------------------------------


def qoc_scenario():
    scenario = Scenario(
        id="depot-site",
        description="Choose the location for the new regional parcel depot.",
        process_kind=ProcessKind.QOC,
        pinned_items=("north brownfield",),
        stakeholders=(
            Stakeholder(id="finance", role="the finance director"),
            Stakeholder(id="operations", role="the operations lead"),
        ),
        config={"question": "Which depot site should we build?"},
    )
    playbook = Playbook(
        items={
            "option": {
                "finance": [("city edge lot", "cheap land"), ("harbor plot", "near customers")],
                "operations": [("plot at harbor", "port access"), ("airport strip", "fast links")],
            },
            "criterion": {
                "finance": [("land cost", "capex"), ("tax relief", "subsidies")],
                "operations": [("transport access", "roads and rail"), ("land cost", "capex")],
            },
        },
        weights={
            "finance": {"land cost": 3.0, "tax relief": 1.0, "transport access": 1.0},
            "operations": {"land cost": 1.0, "tax relief": 1.0, "transport access": 3.0},
        },
        scores={
            "finance": {
                "north brownfield": {"land cost": 9.0, "tax relief": 8.0, "transport access": 4.0},
                "city edge lot": {"land cost": 7.0, "tax relief": 5.0, "transport access": 5.0},
                "plot at harbor": {"land cost": 3.0, "tax relief": 4.0, "transport access": 8.0},
                "airport strip": {"land cost": 2.0, "tax relief": 3.0, "transport access": 9.0},
            },
            "operations": {
                "north brownfield": {"land cost": 8.0, "tax relief": 7.0, "transport access": 5.0},
                "city edge lot": {"land cost": 6.0, "tax relief": 5.0, "transport access": 4.0},
                "plot at harbor": {"land cost": 4.0, "tax relief": 4.0, "transport access": 9.0},
                "airport strip": {"land cost": 2.0, "tax relief": 3.0, "transport access": 8.0},
            },
        },
    )
    return scenario, playbook


def dao_scenario():
    scenario = Scenario(
        id="dao-proposal-017",
        description=(
            "Proposal 017 asks the treasury for 120k tokens to fund a new "
            "liquidity-mining program run by an anonymous team."
        ),
        process_kind=ProcessKind.QOC,
        stakeholders=(
            Stakeholder(id="community", role="a long-term community member"),
            Stakeholder(id="treasury", role="the treasury steward"),
        ),
        config={"binary": True, "question": "Should the DAO fund proposal 017?"},
    )
    playbook = Playbook(
        items={
            "criterion": {
                "community": [("expected return", "upside"), ("team credibility", "track record")],
                "treasury": [("treasury impact", "runway"), ("team credibility", "identity risk")],
            }
        },
        weights={
            "community": {"expected return": 1.0, "team credibility": 2.0, "treasury impact": 1.0},
            "treasury": {"expected return": 1.0, "team credibility": 1.0, "treasury impact": 2.0},
        },
        # weighted sums come out 3.5 vs 6.5 and 3.0 vs 6.75: reject wins
        scores={
            "community": {
                "approve": {"expected return": 6.0, "team credibility": 2.0, "treasury impact": 4.0},
                "reject": {"expected return": 5.0, "team credibility": 7.0, "treasury impact": 7.0},
            },
            "treasury": {
                "approve": {"expected return": 5.0, "team credibility": 3.0, "treasury impact": 2.0},
                "reject": {"expected return": 4.0, "team credibility": 7.0, "treasury impact": 8.0},
            },
        },
    )
    return scenario, playbook


def sensitivity_scenario():
    scenario = Scenario(
        id="apparel-logistics",
        description="Model the apparel transport chain from East Asia to the Nordics.",
        process_kind=ProcessKind.SENSITIVITY,
        pinned_items=("fuel prices",),
        stakeholders=(
            Stakeholder(id="carrier", role="a sea-freight carrier planner"),
            Stakeholder(id="shipper", role="an apparel brand logistics manager"),
        ),
        config={"max_strength": 3, "loop_max_len": 3},
    )
    playbook = Playbook(
        items={
            "variable": {
                "carrier": [("port congestion", "queues"), ("freight rates", "spot prices")],
                "shipper": [("delivery time", "door to door"), ("freight rates", "contract prices")],
            }
        },
        influences={
            ("fuel prices", "freight rates"): 3,
            ("fuel prices", "port congestion"): 0,
            ("fuel prices", "delivery time"): 0,
            ("freight rates", "fuel prices"): 0,
            ("freight rates", "port congestion"): -1,
            ("freight rates", "delivery time"): 1,
            ("port congestion", "fuel prices"): 0,
            ("port congestion", "freight rates"): 2,
            ("port congestion", "delivery time"): 3,
            ("delivery time", "fuel prices"): 0,
            ("delivery time", "freight rates"): 1,
            ("delivery time", "port congestion"): -2,
        },
        interpretation=(
            "Fuel prices drive freight rates, which feed back through congestion "
            "and delivery time; congestion is the most reactive variable."
        ),
    )
    return scenario, playbook


def normal_game_scenario():
    scenario = Scenario(
        id="duopoly-entry",
        description="An incumbent platform and a challenger weigh entering a new market.",
        process_kind=ProcessKind.NORMAL_GAME,
        stakeholders=(),
        config={},
    )
    playbook = Playbook(
        players=[
            {
                "name": "Incumbent",
                "objective": "defend market share profitably",
                "payoff_unit": "profit (MUSD)",
                "value_range": [-100, 100],
            },
            {
                "name": "Challenger",
                "objective": "gain a foothold without burning cash",
                "payoff_unit": "profit (MUSD)",
                "value_range": [-100, 100],
            },
        ],
        strategies={
            "Incumbent": [("price war", "cut prices hard"), ("hold prices", "defend on brand")],
            "Challenger": [("enter", "launch in the market"), ("stay out", "wait and see")],
        },
        # one pure Nash at (hold prices, enter)
        payoff_cells={
            ("price war", "enter"): (-20, -30),
            ("price war", "stay out"): (40, 0),
            ("hold prices", "enter"): (30, 20),
            ("hold prices", "stay out"): (50, 0),
        },
        interpretation="Entry is safe because a price war hurts the incumbent more.",
    )
    return scenario, playbook


def sequential_game_scenario():
    scenario = Scenario(
        id="ultimatum-mini",
        description="A proposer splits a windfall; the responder can accept or reject.",
        process_kind=ProcessKind.SEQUENTIAL_GAME,
        stakeholders=(),
        config={"horizon": 2},
    )

    def actions(player, path, depth, seed):
        if path == ():
            return ["fair", "unfair"]
        if path == ("fair",):
            return "TERMINATE"
        if path == ("unfair",):
            return ["accept", "reject"]
        raise AssertionError(f"unexpected path {path}")

    def terminal_payoffs(path, seed):
        table = {
            ("fair",): (5, 5, "even split accepted by convention"),
            ("unfair", "accept"): (8, 2, "responder prefers scraps over nothing"),
            ("unfair", "reject"): (0, 0, "spite burns the whole pie"),
        }
        return table[path]

    playbook = Playbook(
        players=[
            {
                "name": "Proposer",
                "objective": "keep as much of the pie as possible",
                "payoff_unit": "pie share",
                "value_range": [0, 10],
            },
            {
                "name": "Responder",
                "objective": "get a fair share",
                "payoff_unit": "pie share",
                "value_range": [0, 10],
            },
        ],
        actions=actions,
        terminal_payoffs=terminal_payoffs,
        interpretation="Backward induction favors the unfair offer being accepted.",
    )
    return scenario, playbook


def risk_scenario():
    scenario = Scenario(
        id="warehouse-launch",
        description="Commission the automated warehouse before the winter peak.",
        process_kind=ProcessKind.RISK,
        pinned_items=("supplier insolvency",),
        stakeholders=(
            Stakeholder(id="engineering", role="the site engineering lead", group="delivery"),
            Stakeholder(id="procurement", role="the procurement manager", group="commercial"),
            Stakeholder(id="counsel", role="the in-house counsel", group="commercial"),
        ),
        config={},
    )
    playbook = Playbook(
        items={
            "risk": {
                "engineering": [
                    ("conveyor software slips", "integration effort"),
                    ("grid connection delayed", "utility dependency"),
                ],
                "procurement": [
                    ("grid connection is delayed", "utility backlog"),
                    ("steel price spike", "input costs"),
                ],
                "counsel": [("permit appeal", "neighbors may object")],
            }
        },
        risk_ratings={
            "engineering": {
                "supplier insolvency": (0.2, 4.0),
                "conveyor software slips": (0.6, 3.0),
                "grid connection is delayed": (0.5, 4.0),
                "steel price spike": (0.4, 2.0),
                "permit appeal": (0.1, 3.0),
            },
            "procurement": {
                "supplier insolvency": (0.3, 5.0),
                "conveyor software slips": (0.4, 3.0),
                "grid connection is delayed": (0.6, 4.0),
                "steel price spike": (0.5, 2.0),
                "permit appeal": (0.1, 2.0),
            },
            "counsel": {
                "supplier insolvency": (0.2, 4.0),
                "conveyor software slips": (0.3, 2.0),
                "grid connection is delayed": (0.5, 3.0),
                "steel price spike": (0.3, 2.0),
                "permit appeal": (0.4, 5.0),
            },
        },
    )
    return scenario, playbook


CRISIS_STEP_LABELS = {
    "blockade": "Escalate",
    "airstrike": "Escalate",
    "public warning": "SignalInfo",
    "backchannel": "SignalInfo",
    "withdraw missiles": "DeEscalate",
    "lift blockade": "DeEscalate",
    "pledge non invasion": "DeEscalate",
    "hold position": "Wait",
    "await response": "Wait",
}


def crisis_scenario():
    """Seed-varied sequential fixture for batch studies; mostly de-escalates."""
    scenario = Scenario(
        id="naval-standoff",
        description=(
            "Two nuclear powers face off over missile deployments on an island; "
            "each move can escalate, signal, de-escalate, or wait."
        ),
        process_kind=ProcessKind.SEQUENTIAL_GAME,
        stakeholders=(),
        config={
            "horizon": 4,
            "step_labels": CRISIS_STEP_LABELS,
            "interpret": False,
        },
    )

    def actions(player, path, depth, seed):
        # a few "stubborn" seeds never concede late and never stop early,
        # so the batch distribution keeps a small non-de-escalating minority
        stubborn = seed % 15 == 7
        if depth == 0:
            return [
                ["blockade", "public warning"],
                ["blockade", "airstrike"],
                ["public warning", "hold position"],
            ][seed % 3]
        if depth == 1:
            if stubborn:
                return ["backchannel", "hold position"]
            return [
                ["backchannel", "withdraw missiles"],
                ["withdraw missiles", "hold position"],
            ][(seed >> 2) % 2]
        if depth == 2:
            return [
                ["pledge non invasion", "airstrike"],
                ["lift blockade", "pledge non invasion"],
            ][(seed >> 1) % 2]
        if depth == 3:
            if stubborn:
                return ["airstrike", "hold position"]
            if seed % 10 < 3:
                return "TERMINATE"
            return [
                ["withdraw missiles", "hold position"],
                ["withdraw missiles", "airstrike"],
            ][(seed >> 3) % 2]
        raise AssertionError(f"unexpected depth {depth}")

    def terminal_payoffs(path, seed):
        final = CRISIS_STEP_LABELS[path[-1]]
        base = {"DeEscalate": (5, 5), "SignalInfo": (2, 2), "Wait": (1, 1), "Escalate": (-6, -6)}[
            final
        ]
        labels = [CRISIS_STEP_LABELS[a] for a in path]
        escalations = labels.count("Escalate")
        concessions = labels.count("DeEscalate")
        jitter = (_h("jitter", *path) % 3) - 1
        u1 = max(-10, min(10, base[0] + concessions - escalations + jitter))
        u2 = max(-10, min(10, base[1] + concessions - escalations))
        return (u1, u2, f"outcome after {len(path)} moves ending in {final.lower()}")

    playbook = Playbook(
        players=[
            {
                "name": "Coastal Power",
                "objective": "remove the missiles without open war",
                "payoff_unit": "security score",
                "value_range": [-10, 10],
            },
            {
                "name": "Island Patron",
                "objective": "keep leverage while avoiding open war",
                "payoff_unit": "security score",
                "value_range": [-10, 10],
            },
        ],
        actions=actions,
        terminal_payoffs=terminal_payoffs,
    )
    return scenario, playbook


ALL_SCENARIOS = {
    "qoc": qoc_scenario,
    "dao": dao_scenario,
    "sensitivity": sensitivity_scenario,
    "normal": normal_game_scenario,
    "sequential": sequential_game_scenario,
    "risk": risk_scenario,
    "crisis": crisis_scenario,
}

"""Regenerate the bundled fixtures under fixtures/.

Runs each demo scenario once per needed seed against its rule-based
responder, recording every agent exchange into a scripted-agent fixture
file, and writes the demo inputs for the eval subcommands. Run from the
repository root:

    python3 tools/make_fixtures.py
"""

import csv
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import responders  # noqa: E402
from procrust.agents import CallableAgent, RecordingAgent  # noqa: E402
from procrust.orchestrator import run_scenario  # noqa: E402

FIXTURES = ROOT / "fixtures"

# scenario key -> (file stem, seeds to record)
PLANS = {
    "qoc": ("depot_site", [0, 1]),
    "dao": ("dao_proposal_017", [0, 1]),
    "sensitivity": ("apparel_logistics", [0, 1]),
    "normal": ("duopoly_entry", [0, 1]),
    "sequential": ("ultimatum_mini", [0, 1]),
    "risk": ("warehouse_launch", [0, 1]),
    "crisis": ("naval_standoff", list(range(64))),
}

# synthetic per-pair decision data realizing the seven reference agreement rows
DECISION_ROWS = {
    "oss-20b": (70, 0, 27, 5),
    "oss-120b": (63, 7, 24, 8),
    "gpt-4-mini": (56, 14, 20, 12),
    "claude-4.5-haiku": (36, 34, 12, 20),
    "claude-4.5-sonnet": (36, 34, 10, 22),
    "gpt-5-mini": (32, 38, 8, 24),
    "gpt-5": (24, 46, 3, 29),
}


def write_scenarios() -> None:
    for key, (stem, seeds) in PLANS.items():
        scenario, playbook = responders.ALL_SCENARIOS[key]()
        recorder = RecordingAgent(CallableAgent(playbook))
        for seed in seeds:
            run_scenario(scenario, recorder, seed)
        (FIXTURES / f"{stem}.scenario.json").write_text(
            json.dumps(scenario.to_payload(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        recorder.save(FIXTURES / f"{stem}.agents.json")
        print(
            f"{stem}: {len(recorder.fixture_payload())} fixture entries "
            f"(seeds {seeds[0]}..{seeds[-1]})"
        )


def write_decision_csvs() -> None:
    directory = FIXTURES / "decisions"
    directory.mkdir(parents=True, exist_ok=True)
    for name, (yy, yn, ny, nn) in DECISION_ROWS.items():
        rows = []
        for reference, engine, count in (
            ("Y", "Y", yy),
            ("Y", "N", yn),
            ("N", "Y", ny),
            ("N", "N", nn),
        ):
            rows.extend((reference, engine) for _ in range(count))
        with open(directory / f"{name}.csv", "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["id", "reference", "engine"])
            for index, (reference, engine) in enumerate(rows, start=1):
                writer.writerow([f"p{index:03d}", reference, engine])
        print(f"decisions/{name}.csv: {len(rows)} pairs")


def write_eval_inputs() -> None:
    (FIXTURES / "crisis_reference.json").write_text(
        json.dumps(
            {
                "run_id": "reference",
                "steps": ["Escalate", "SignalInfo", "DeEscalate", "DeEscalate"],
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    (FIXTURES / "align_reference.json").write_text(
        json.dumps(
            ["fuel prices", "port congestion", "driver availability", "customs clearance time"],
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    (FIXTURES / "align_candidates.json").write_text(
        json.dumps(
            ["prices of fuel", "congestion at the port", "warehouse rent levels"], indent=2
        )
        + "\n",
        encoding="utf-8",
    )
    print("eval inputs written")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    write_scenarios()
    write_decision_csvs()
    write_eval_inputs()


if __name__ == "__main__":
    main()

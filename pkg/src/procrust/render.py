"""Report and export rendering: Markdown summaries, CSV tables, DOT graphs.

All emission orders are sorted or creation-ordered so rendered files are
byte-stable across identical runs.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Any

from procrust.errors import ValidationError


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines)


def _num(value: float) -> str:
    return f"{value:.4g}"


def report_markdown(result: dict[str, Any]) -> str:
    kind = result["process_kind"]
    builder = {
        "qoc": _qoc_report,
        "sensitivity": _sensitivity_report,
        "normal_game": _normal_report,
        "sequential_game": _sequential_report,
        "risk": _risk_report,
    }.get(kind)
    if builder is None:
        raise ValidationError(f"no report renderer for process kind {kind!r}")
    head = [
        f"# Run {result['run_id']}",
        "",
        f"- scenario: `{result['scenario_id']}`",
        f"- process: {kind}",
        f"- seed: {result['seed']}",
        "",
    ]
    return "\n".join(head) + builder(result) + "\n"


def _qoc_report(result: dict[str, Any]) -> str:
    parts = [f"## Decision: **{result['decision']}**", ""]
    parts.append(f"Question: {result['question']}")
    if result.get("binary"):
        parts.append("Mode: binary (fixed approve/reject options)")
    parts += ["", "### Option totals", ""]
    totals = result["per_option_totals"]
    parts.append(
        _md_table(
            ["Option", "Total"],
            [[option, _num(totals[option])] for option in sorted(totals, key=lambda o: -totals[o])],
        )
    )
    parts += ["", "### Criterion influence", ""]
    influence = result["criterion_influence"]
    parts.append(
        _md_table(
            ["Criterion", "Contribution share", "Decision-critical"],
            [
                [
                    criterion,
                    _num(influence[criterion]["contribution_share"]),
                    "yes" if influence[criterion]["decision_critical"] else "no",
                ]
                for criterion in result["criteria"]
            ],
        )
    )
    flags = result["outlier_flags"]
    parts += ["", f"Outlier evaluations: {len(flags)}"]
    for flag in flags:
        z = "undefined (zero dispersion)" if flag["z"] is None else _num(flag["z"])
        parts.append(
            f"- {flag['agent_id']} on ({flag['option']}, {flag['criterion']}): z = {z}"
        )
    return "\n".join(parts)


def _sensitivity_report(result: dict[str, Any]) -> str:
    metrics = result["metrics"]
    roles = result["roles"]
    rows = []
    for label in result["variables"]:
        m = metrics[label]
        q = "UNDEFINED" if m["Q"] is None else _num(m["Q"])
        rows.append([label, _num(m["AS"]), _num(m["PS"]), _num(m["P"]), q, roles[label]])
    parts = [
        "## System roles",
        "",
        _md_table(["Variable", "AS", "PS", "P", "Q", "Role"], rows),
        "",
        f"Role rule: {result['role_rule']}",
        "",
        f"### Feedback loops ({len(result['loops'])})",
        "",
    ]
    for loop in result["loops"]:
        cycle = " -> ".join(loop["cycle"] + [loop["cycle"][0]])
        parts.append(f"- {cycle}: {loop['sign']}, strength {_num(loop['strength'])}")
    if result.get("interpretation"):
        parts += ["", "### Interpretation", "", result["interpretation"]]
    return "\n".join(parts)


def _normal_report(result: dict[str, Any]) -> str:
    game = result["game"]
    analysis = result["analysis"]
    names1 = [s["name"] for s in game["strategies"][0]]
    names2 = [s["name"] for s in game["strategies"][1]]
    rows = []
    for i, name in enumerate(names1):
        cells = [
            f"({_num(game['payoffs'][i][j][0])}, {_num(game['payoffs'][i][j][1])})"
            for j in range(len(names2))
        ]
        rows.append([name] + cells)
    nash = analysis["pure_nash"]
    parts = [
        f"## {game['players'][0]['name']} vs {game['players'][1]['name']}",
        "",
        f"Payoff unit: {game['players'][0]['payoff_unit']} / {game['players'][1]['payoff_unit']}"
        f" ({analysis['kind']})",
        "",
        _md_table([""] + names2, rows),
        "",
        "### Equilibria and efficiency",
        "",
        "- pure Nash: "
        + (
            "; ".join(f"({names1[i]}, {names2[j]})" for i, j in nash)
            if nash
            else "none (no pure-strategy equilibrium)"
        ),
        "- Pareto-optimal cells: "
        + "; ".join(f"({names1[i]}, {names2[j]})" for i, j in analysis["pareto"]),
        "- strictly dominated: player1 "
        + str([names1[i] for i in analysis["dominated"]["player1"]])
        + ", player2 "
        + str([names2[j] for j in analysis["dominated"]["player2"]]),
    ]
    if result.get("interpretation"):
        parts += ["", "### Interpretation", "", result["interpretation"]]
    return "\n".join(parts)


def _sequential_report(result: dict[str, Any]) -> str:
    spe = result["spe"]
    parts = [
        "## Subgame-perfect equilibrium",
        "",
        "SPE path: " + " -> ".join(spe["spe_path"]),
        f"Root value: ({_num(spe['root_value'][0])}, {_num(spe['root_value'][1])})",
        f"Pareto-optimal leaves: {', '.join(spe['pareto_paths'])}",
        f"Dominated leaves: "
        + (
            "; ".join(f"{k} (beaten by {v})" for k, v in spe["dominated_paths"].items())
            or "none"
        ),
    ]
    if spe["ties"]:
        parts.append(f"Ties resolved by first-child order at: {', '.join(spe['ties'])}")
    if "spe_path_label" in result:
        parts += [
            "",
            f"Step labels: {', '.join(result['spe_step_labels'])}",
            f"Path-level label: **{result['spe_path_label']}**",
        ]
    if result.get("interpretation"):
        parts += ["", "### Interpretation", "", result["interpretation"]]
    return "\n".join(parts)


def _risk_report(result: dict[str, Any]) -> str:
    register = result["register"]
    rows = [
        [
            entry["label"],
            _num(entry["mean_probability"]),
            _num(entry["mean_impact"]),
            _num(entry["composite"]),
            entry["band"],
            _num(entry["divergence"]),
            ", ".join(entry["outlier_agents"]) or "-",
        ]
        for entry in register["risks"]
    ]
    parts = [
        "## Risk register",
        "",
        _md_table(
            ["Risk", "Mean p", "Mean impact", "Composite", "Band", "Divergence", "Outliers"],
            rows,
        ),
        "",
        f"Bands: low < {register['bands']['low_below']}, "
        f"medium < {register['bands']['medium_below']}, high otherwise.",
    ]
    if result.get("group_offsets"):
        parts += ["", "### Group offsets (mean composite vs overall)", ""]
        for risk_label in sorted(result["group_offsets"]):
            offsets = result["group_offsets"][risk_label]
            line = ", ".join(f"{group}: {_num(offsets[group])}" for group in sorted(offsets))
            parts.append(f"- {risk_label}: {line}")
    return "\n".join(parts)


def batch_markdown(summary: dict[str, Any]) -> str:
    parts = [
        f"# Batch: {summary['scenario_id']}",
        "",
        f"- process: {summary['process_kind']}",
        f"- runs: {summary['n']} (seeds {summary['base_seed']}.."
        f"{summary['base_seed'] + summary['n'] - 1})",
        f"- failures: {len(summary['failures'])}",
        "",
        "## Headline distribution",
        "",
        _md_table(
            ["Headline", "Runs"],
            [[headline, str(count)] for headline, count in summary["headline_counts"].items()],
        ),
        "",
        "## Runs",
        "",
        _md_table(
            ["Seed", "Run", "Headline"],
            [[str(row["seed"]), row["run_id"], row["headline"]] for row in summary["runs"]],
        ),
    ]
    if summary["failures"]:
        parts += ["", "## Failures", ""]
        parts.extend(
            f"- seed {f['seed']}: {f['kind']}: {f['error']}" for f in summary["failures"]
        )
    return "\n".join(parts) + "\n"


# --- file exports -----------------------------------------------------------------


def _write_csv(path: Path, rows: list[list[Any]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    path.write_text(buffer.getvalue(), encoding="utf-8")
    return path


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_run(run_dir: Path | str, fmt: str) -> list[Path]:
    """Write the per-engine exports for one persisted run; returns written paths."""
    import json

    directory = Path(run_dir)
    result_path = directory / "result.json"
    if not result_path.exists():
        raise ValidationError(f"{directory} has no result.json to render")
    result = json.loads(result_path.read_text(encoding="utf-8"))
    kind = result["process_kind"]
    if fmt == "md":
        path = directory / "report.md"
        path.write_text(report_markdown(result), encoding="utf-8")
        return [path]
    if fmt == "csv":
        return _export_csv(directory, kind, result)
    if fmt == "dot":
        return _export_dot(directory, kind, result)
    raise ValidationError(f"unknown render format {fmt!r} (expected dot, csv, or md)")


def _export_csv(directory: Path, kind: str, result: dict[str, Any]) -> list[Path]:
    written: list[Path] = []
    if kind == "sensitivity":
        labels = result["variables"]
        entries = result["matrix"]["entries"]
        rows = [["variable"] + labels]
        rows.extend([labels[i]] + list(entries[i]) for i in range(len(labels)))
        written.append(_write_csv(directory / "influence.csv", rows))
        metric_rows = [["variable", "AS", "PS", "P", "Q", "role"]]
        for label in labels:
            m = result["metrics"][label]
            q = "UNDEFINED" if m["Q"] is None else m["Q"]
            metric_rows.append([label, m["AS"], m["PS"], m["P"], q, result["roles"][label]])
        written.append(_write_csv(directory / "metrics.csv", metric_rows))
    elif kind == "qoc":
        options = result["options"]
        criteria = result["criteria"]
        assessments = result["assessments"]
        rows = [["option"] + criteria]
        for option in options:
            means = [
                sum(a["scores"][option][criterion] for a in assessments) / len(assessments)
                for criterion in criteria
            ]
            rows.append([option] + means)
        written.append(_write_csv(directory / "scores.csv", rows))
    elif kind == "normal_game":
        game = result["game"]
        names2 = [s["name"] for s in game["strategies"][1]]
        rows = [[""] + names2]
        for i, s1 in enumerate(game["strategies"][0]):
            rows.append(
                [s1["name"]]
                + [f"({cell[0]}, {cell[1]})" for cell in game["payoffs"][i]]
            )
        written.append(_write_csv(directory / "payoffs.csv", rows))
    elif kind == "risk":
        rows = [
            ["risk", "mean_probability", "mean_impact", "composite", "band", "divergence"]
        ]
        for entry in result["register"]["risks"]:
            rows.append(
                [
                    entry["label"],
                    entry["mean_probability"],
                    entry["mean_impact"],
                    entry["composite"],
                    entry["band"],
                    entry["divergence"],
                ]
            )
        written.append(_write_csv(directory / "register.csv", rows))
        written.append(_write_csv(directory / "heatmap.csv", _risk_heatmap(result)))
    elif kind == "sequential_game":
        rows = [["leaf", "path", "u1", "u2", "rationale"]]
        tree = result["tree"]
        for node_id in sorted(tree["nodes"], key=lambda i: int(i[1:])):
            node = tree["nodes"][node_id]
            if node["mover"] == "terminal" and node["payoffs"]:
                rows.append(
                    [
                        node_id,
                        " -> ".join(_path_of(tree, node_id)),
                        node["payoffs"][0],
                        node["payoffs"][1],
                        node["rationale"],
                    ]
                )
        written.append(_write_csv(directory / "leaves.csv", rows))
    return written


def _risk_heatmap(result: dict[str, Any]) -> list[list[Any]]:
    """5x5 occupancy: probability bins (rows) x impact bins (columns)."""
    grid = [[0] * 5 for _ in range(5)]
    for entry in result["register"]["risks"]:
        p_bin = min(int(entry["mean_probability"] / 0.2), 4)
        i_bin = min(int((entry["mean_impact"] - 1.0) / 0.8), 4)
        grid[p_bin][i_bin] += 1
    header = ["probability\\impact"] + [f"{1.0 + 0.8 * k:.1f}-{1.0 + 0.8 * (k + 1):.1f}" for k in range(5)]
    rows = [header]
    for p_bin in range(5):
        rows.append([f"{0.2 * p_bin:.1f}-{0.2 * (p_bin + 1):.1f}"] + grid[p_bin])
    return rows


def _path_of(tree_payload: dict[str, Any], node_id: str) -> list[str]:
    parents = {
        child: nid
        for nid, node in tree_payload["nodes"].items()
        for child in node["children"]
    }
    actions: list[str] = []
    current = node_id
    while current != tree_payload["root"]:
        actions.append(tree_payload["nodes"][current]["action_taken"])
        current = parents[current]
    return list(reversed(actions))


def _export_dot(directory: Path, kind: str, result: dict[str, Any]) -> list[Path]:
    if kind == "sensitivity":
        path = directory / "graph.dot"
        path.write_text(influence_dot(result), encoding="utf-8")
        return [path]
    if kind == "sequential_game":
        path = directory / "tree.dot"
        path.write_text(tree_dot(result), encoding="utf-8")
        return [path]
    raise ValidationError(f"no DOT export for process kind {kind!r}")


def influence_dot(result: dict[str, Any]) -> str:
    labels = result["variables"]
    entries = result["matrix"]["entries"]
    roles = result["roles"]
    lines = ["digraph influence {", "  rankdir=LR;"]
    for label in sorted(labels):
        lines.append(f'  "{_dot_escape(label)}" [label="{_dot_escape(label)}\\n{roles[label]}"];')
    index = {label: i for i, label in enumerate(labels)}
    for src in sorted(labels):
        for dst in sorted(labels):
            weight = entries[index[src]][index[dst]]
            if src != dst and weight != 0:
                sign = "+" if weight > 0 else ""
                lines.append(
                    f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}" [label="{sign}{weight:g}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_dot(result: dict[str, Any]) -> str:
    tree = result["tree"]
    spe = result["spe"]
    players = [p["name"] for p in result["players"]]
    on_path: set[tuple[str, str]] = set()
    node_id = tree["root"]
    while tree["nodes"][node_id]["mover"] != "terminal":
        nxt = spe["choices"][node_id]
        on_path.add((node_id, nxt))
        node_id = nxt

    lines = ["digraph tree {", "  rankdir=TB;"]
    for nid in sorted(tree["nodes"], key=lambda i: int(i[1:])):
        node = tree["nodes"][nid]
        if node["mover"] == "terminal":
            u1, u2 = node["payoffs"]
            label = f"({u1:g}, {u2:g})"
            if node.get("rationale"):
                label += "\\n" + _dot_escape(node["rationale"][:60])
            lines.append(f'  {nid} [shape=box, label="{label}"];')
        else:
            lines.append(f'  {nid} [label="{_dot_escape(players[node["mover"] - 1])}"];')
    for nid in sorted(tree["nodes"], key=lambda i: int(i[1:])):
        for child in tree["nodes"][nid]["children"]:
            action = _dot_escape(tree["nodes"][child]["action_taken"])
            style = ", penwidth=2.5, color=red" if (nid, child) in on_path else ""
            lines.append(f'  {nid} -> {child} [label="{action}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Independent brute-force checkers, kept deliberately naive and separate
from the implementations they verify. Shared by the unit tests and the
acceptance suite."""

import itertools
import random

from procrust.sequential import GameTree, TreeNode
from procrust.normalform import Player


def nash_oracle(payoffs):
    """All cells where no unilateral deviation strictly improves the deviator."""
    n1, n2 = len(payoffs), len(payoffs[0])
    out = set()
    for i in range(n1):
        for j in range(n2):
            ok = True
            for i2 in range(n1):
                if payoffs[i2][j][0] > payoffs[i][j][0]:
                    ok = False
            for j2 in range(n2):
                if payoffs[i][j2][1] > payoffs[i][j][1]:
                    ok = False
            if ok:
                out.add((i, j))
    return out


def pareto_oracle(payoffs):
    """All cells not improvable for one player without hurting the other."""
    n1, n2 = len(payoffs), len(payoffs[0])
    cells = [(i, j) for i in range(n1) for j in range(n2)]
    out = set()
    for i, j in cells:
        beaten = False
        for a, b in cells:
            if (a, b) == (i, j):
                continue
            ge1 = payoffs[a][b][0] >= payoffs[i][j][0]
            ge2 = payoffs[a][b][1] >= payoffs[i][j][1]
            gt = payoffs[a][b][0] > payoffs[i][j][0] or payoffs[a][b][1] > payoffs[i][j][1]
            if ge1 and ge2 and gt:
                beaten = True
                break
        if not beaten:
            out.add((i, j))
    return out


def cycle_oracle(entries, min_abs_weight, max_len):
    """Every simple directed cycle (canonical rotation) via permutation scan."""
    n = len(entries)
    found = set()
    for size in range(2, max_len + 1):
        for nodes in itertools.permutations(range(n), size):
            if nodes[0] != min(nodes):
                continue
            if all(
                abs(entries[nodes[k]][nodes[(k + 1) % size]]) >= min_abs_weight
                for k in range(size)
            ):
                found.add(nodes)
    return found


# --- extensive-form helpers ---------------------------------------------------

_PLAYERS = (
    Player(name="P1", objective="maximize own payoff", payoff_unit="points", value_range=(-99, 99)),
    Player(name="P2", objective="maximize own payoff", payoff_unit="points", value_range=(-99, 99)),
)


def random_priced_tree(rng: random.Random, horizon=4, profile_cap=500, payoff_range=(-6, 6)):
    """Random well-formed priced tree whose strategy-profile space stays enumerable."""
    nodes = {}
    counter = 0
    profiles = 1

    def build(depth, mover, action):
        nonlocal counter, profiles
        node_id = f"n{counter}"
        counter += 1
        terminal = depth == horizon or (depth > 0 and rng.random() < 0.3)
        branching = rng.choice([1, 2, 2, 3])
        if not terminal and profiles * branching > profile_cap:
            if depth > 0:
                terminal = True
            else:
                branching = 1
        if terminal:
            nodes[node_id] = TreeNode(
                id=node_id,
                depth=depth,
                mover=None,
                action_taken=action,
                payoffs=(
                    float(rng.randint(*payoff_range)),
                    float(rng.randint(*payoff_range)),
                ),
                rationale="scripted outcome",
            )
            return node_id
        profiles *= branching
        node = TreeNode(id=node_id, depth=depth, mover=mover, action_taken=action)
        nodes[node_id] = node
        node.children = [build(depth + 1, 1 - mover, f"a{k}") for k in range(branching)]
        return node_id

    root_id = build(0, 0, None)
    return GameTree(players=_PLAYERS, horizon=horizon, nodes=nodes, root_id=root_id)


def play_from(tree, profile, node_id):
    """Follow a pure strategy profile from ``node_id`` down to its leaf payoffs."""
    while not tree.nodes[node_id].terminal:
        node_id = profile[node_id]
    return tree.nodes[node_id].payoffs


def spe_profiles(tree):
    """All subgame-perfect pure profiles, by exhaustive enumeration plus the
    one-shot deviation test at every decision node."""
    decision_ids = [nid for nid in sorted(tree.nodes) if not tree.nodes[nid].terminal]
    menus = [tree.nodes[nid].children for nid in decision_ids]
    result = []
    for combo in itertools.product(*menus):
        profile = dict(zip(decision_ids, combo))
        ok = True
        for nid in decision_ids:
            node = tree.nodes[nid]
            value = play_from(tree, profile, profile[nid])[node.mover]
            for alt in node.children:
                if alt != profile[nid] and play_from(tree, profile, alt)[node.mover] > value:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            result.append(profile)
    return result


def qoc_totals_oracle(raw_weights_by_agent, scores_by_agent, options, criteria):
    """Literal double-loop weighted-sum totals, normalizing weights inline."""
    per_option = {option: 0.0 for option in options}
    agents = list(raw_weights_by_agent)
    for agent in agents:
        weight_sum = sum(raw_weights_by_agent[agent][c] for c in criteria)
        for option in options:
            total = 0.0
            for criterion in criteria:
                weight = raw_weights_by_agent[agent][criterion] / weight_sum
                total += weight * scores_by_agent[agent][option][criterion]
            per_option[option] += total
    return {option: value / len(agents) for option, value in per_option.items()}

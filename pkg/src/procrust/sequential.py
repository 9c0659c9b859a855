"""Extensive-form game trees: alternating turns, backward induction, path diagnostics.

Trees are built stage by stage (structure first, payoffs second), so the
well-formedness checks distinguish an unpriced tree from a fully priced one.
Node ids follow creation order, which makes every downstream ordering rule
(tie-breaks, leaf order, DOT emission) deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from procrust.errors import InvariantViolation, ValidationError
from procrust.normalform import Player

MAX_BRANCHING = 3


@dataclass
class TreeNode:
    id: str
    depth: int
    mover: int | None  # 0 or 1; None marks a terminal node
    action_taken: str | None = None
    children: list[str] = field(default_factory=list)
    payoffs: tuple[float, float] | None = None
    rationale: str | None = None

    @property
    def terminal(self) -> bool:
        return self.mover is None

    def to_payload(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "depth": self.depth,
            "mover": "terminal" if self.mover is None else self.mover + 1,
            "action_taken": self.action_taken,
            "children": list(self.children),
            "payoffs": list(self.payoffs) if self.payoffs is not None else None,
            "rationale": self.rationale,
        }


@dataclass
class GameTree:
    players: tuple[Player, Player]
    horizon: int
    nodes: dict[str, TreeNode]
    root_id: str = "n0"

    def node(self, node_id: str) -> TreeNode:
        return self.nodes[node_id]

    def leaves(self) -> list[str]:
        """Terminal node ids in depth-first preorder (stored child order)."""
        out: list[str] = []
        stack = [self.root_id]
        while stack:
            node = self.nodes[stack.pop()]
            if node.terminal:
                out.append(node.id)
            else:
                stack.extend(reversed(node.children))
        return out

    def path_to(self, node_id: str) -> list[str]:
        """Action labels from the root to ``node_id``."""
        parents = {c: n.id for n in self.nodes.values() for c in n.children}
        actions: list[str] = []
        current = node_id
        while current != self.root_id:
            actions.append(self.nodes[current].action_taken or "")
            current = parents[current]
        return list(reversed(actions))

    def to_payload(self) -> dict[str, Any]:
        return {
            "players": [p.to_payload() for p in self.players],
            "horizon": self.horizon,
            "root": self.root_id,
            "nodes": {node_id: node.to_payload() for node_id, node in sorted(self.nodes.items())},
        }


def validate_tree(tree: GameTree, require_priced: bool) -> None:
    """Re-check every structural invariant; raised violations name the node."""
    if tree.horizon < 1:
        raise ValidationError(f"horizon must be >= 1, got {tree.horizon}")
    root = tree.nodes.get(tree.root_id)
    if root is None:
        raise InvariantViolation("tree has no root node")
    if root.depth != 0:
        raise InvariantViolation(f"root depth must be 0, got {root.depth}")
    if root.terminal or root.mover != 0:
        raise InvariantViolation("player 1 must move at the root")

    seen: set[str] = set()
    stack = [tree.root_id]
    while stack:
        node = tree.nodes[stack.pop()]
        if node.id in seen:
            raise InvariantViolation(f"node {node.id} reachable twice")
        seen.add(node.id)
        if node.depth > tree.horizon:
            raise InvariantViolation(f"node {node.id} exceeds horizon {tree.horizon}")
        if node.terminal:
            if node.children:
                raise InvariantViolation(f"terminal node {node.id} has children")
            if require_priced:
                if node.payoffs is None:
                    raise InvariantViolation(f"terminal node {node.id} is unpriced")
                if not (node.rationale or "").strip():
                    raise InvariantViolation(f"terminal node {node.id} lacks a rationale")
            continue
        if node.depth == tree.horizon:
            raise InvariantViolation(f"node {node.id} at the horizon must be terminal")
        if not 1 <= len(node.children) <= MAX_BRANCHING:
            raise InvariantViolation(
                f"node {node.id} has {len(node.children)} children (expected 1..{MAX_BRANCHING})"
            )
        if node.payoffs is not None:
            raise InvariantViolation(f"decision node {node.id} carries payoffs")
        for child_id in node.children:
            child = tree.nodes.get(child_id)
            if child is None:
                raise InvariantViolation(f"node {node.id} references missing child {child_id}")
            if child.depth != node.depth + 1:
                raise InvariantViolation(f"child {child_id} depth must be {node.depth + 1}")
            if not child.action_taken:
                raise InvariantViolation(f"child {child_id} has no action label")
            if not child.terminal and child.mover != 1 - node.mover:
                raise InvariantViolation(f"movers must alternate at {child_id}")
            stack.append(child_id)
    unreachable = set(tree.nodes) - seen
    if unreachable:
        raise InvariantViolation(f"unreachable nodes: {sorted(unreachable)}")


@dataclass(frozen=True)
class SpeSolution:
    spe_path: tuple[str, ...]
    spe_leaf: str
    root_value: tuple[float, float]
    node_values: dict[str, tuple[float, float]]
    choices: dict[str, str]  # decision node id -> chosen child id
    ties: tuple[str, ...]  # decision node ids where the max was tied
    pareto_paths: frozenset[str]
    dominated_paths: dict[str, str]  # dominated leaf id -> witness leaf id

    def to_payload(self) -> dict[str, Any]:
        return {
            "spe_path": list(self.spe_path),
            "spe_leaf": self.spe_leaf,
            "root_value": list(self.root_value),
            "node_values": {k: list(v) for k, v in sorted(self.node_values.items())},
            "choices": dict(sorted(self.choices.items())),
            "ties": list(self.ties),
            "pareto_paths": sorted(self.pareto_paths),
            "dominated_paths": dict(sorted(self.dominated_paths.items())),
        }


def backward_induction(tree: GameTree) -> SpeSolution:
    """Solve the priced tree; ties go to the first child in stored order."""
    for leaf_id in tree.leaves():
        if tree.nodes[leaf_id].payoffs is None:
            raise ValidationError(f"terminal node {leaf_id} is unpriced")

    values: dict[str, tuple[float, float]] = {}
    choices: dict[str, str] = {}
    ties: list[str] = []

    def solve(node_id: str) -> tuple[float, float]:
        node = tree.nodes[node_id]
        if node.terminal:
            assert node.payoffs is not None
            values[node_id] = node.payoffs
            return node.payoffs
        child_values = [(child_id, solve(child_id)) for child_id in node.children]
        best_id, best_value = child_values[0]
        tied = False
        for child_id, value in child_values[1:]:
            if value[node.mover] > best_value[node.mover]:
                best_id, best_value = child_id, value
                tied = False
            elif value[node.mover] == best_value[node.mover]:
                tied = True
        if tied:
            ties.append(node_id)
        choices[node_id] = best_id
        values[node_id] = best_value
        return best_value

    root_value = solve(tree.root_id)

    path: list[str] = []
    current = tree.root_id
    while not tree.nodes[current].terminal:
        current = choices[current]
        path.append(tree.nodes[current].action_taken or "")
    if values[current] != root_value:
        raise InvariantViolation("SPE leaf value does not equal the root continuation value")

    return SpeSolution(
        spe_path=tuple(path),
        spe_leaf=current,
        root_value=root_value,
        node_values=values,
        choices=choices,
        ties=tuple(ties),
        pareto_paths=frozenset(pareto_paths(tree)),
        dominated_paths=dominated_paths(tree),
    )


def pareto_paths(tree: GameTree) -> set[str]:
    """Leaves not weakly dominated (with one strict inequality) by another leaf."""
    leaves = tree.leaves()
    payoff = {leaf: tree.nodes[leaf].payoffs for leaf in leaves}
    for leaf, value in payoff.items():
        if value is None:
            raise ValidationError(f"terminal node {leaf} is unpriced")
    out = set()
    for leaf in leaves:
        u1, u2 = payoff[leaf]
        if not any(
            payoff[other][0] >= u1
            and payoff[other][1] >= u2
            and (payoff[other][0] > u1 or payoff[other][1] > u2)
            for other in leaves
            if other != leaf
        ):
            out.add(leaf)
    return out


def dominated_paths(tree: GameTree) -> dict[str, str]:
    """Leaves strictly worse than some other leaf for both players, with a witness.

    The witness is the first leaf, in leaf order, among the maximal dominators
    (dominators not themselves strictly dominated by another dominator).
    """
    leaves = tree.leaves()
    payoff = {leaf: tree.nodes[leaf].payoffs for leaf in leaves}
    for leaf, value in payoff.items():
        if value is None:
            raise ValidationError(f"terminal node {leaf} is unpriced")

    def strictly_dominates(a: str, b: str) -> bool:
        return payoff[a][0] > payoff[b][0] and payoff[a][1] > payoff[b][1]

    out: dict[str, str] = {}
    for leaf in leaves:
        dominators = [other for other in leaves if strictly_dominates(other, leaf)]
        if not dominators:
            continue
        maximal = [
            d for d in dominators if not any(strictly_dominates(e, d) for e in dominators)
        ]
        out[leaf] = maximal[0]
    return out

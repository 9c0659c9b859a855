"""Two-player normal-form games: pure Nash, Pareto-optimal cells, dominance.

Pure-strategy analysis only; mixed equilibria are out of scope and results
are labeled accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from procrust.errors import ValidationError

MAX_STRATEGIES = 10


@dataclass(frozen=True)
class Player:
    name: str
    objective: str
    payoff_unit: str
    value_range: tuple[float, float]

    def __post_init__(self) -> None:
        lo, hi = self.value_range
        if lo > hi:
            raise ValidationError(f"player {self.name!r} has inverted value_range {self.value_range}")

    def to_payload(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "objective": self.objective,
            "payoff_unit": self.payoff_unit,
            "value_range": list(self.value_range),
        }


@dataclass(frozen=True)
class Strategy:
    name: str
    summary: str = ""

    def to_payload(self) -> dict[str, Any]:
        return {"name": self.name, "summary": self.summary}


@dataclass(frozen=True)
class NormalFormGame:
    players: tuple[Player, Player]
    strategies: tuple[tuple[Strategy, ...], tuple[Strategy, ...]]
    payoffs: tuple[tuple[tuple[float, float], ...], ...]  # [row i][col j] -> (u1, u2)

    def __post_init__(self) -> None:
        for index, menu in enumerate(self.strategies):
            if not 1 <= len(menu) <= MAX_STRATEGIES:
                raise ValidationError(
                    f"player {index + 1} must have 1..{MAX_STRATEGIES} strategies, has {len(menu)}"
                )
        n1, n2 = len(self.strategies[0]), len(self.strategies[1])
        if len(self.payoffs) != n1 or any(len(row) != n2 for row in self.payoffs):
            raise ValidationError(f"payoff matrix must be {n1}x{n2} and complete")
        for p, player in enumerate(self.players):
            lo, hi = player.value_range
            for i in range(n1):
                for j in range(n2):
                    value = self.payoffs[i][j][p]
                    if not lo <= value <= hi:
                        raise ValidationError(
                            f"payoff {value} at cell ({i},{j}) outside {player.name!r} "
                            f"range [{lo}, {hi}]"
                        )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.strategies[0]), len(self.strategies[1])

    def to_payload(self) -> dict[str, Any]:
        return {
            "players": [p.to_payload() for p in self.players],
            "strategies": [[s.to_payload() for s in menu] for menu in self.strategies],
            "payoffs": [[list(cell) for cell in row] for row in self.payoffs],
        }


def pure_nash(game: NormalFormGame) -> set[tuple[int, int]]:
    """Cells where neither player can weakly improve by a unilateral deviation."""
    n1, n2 = game.shape
    best_u1_per_col = [max(game.payoffs[i][j][0] for i in range(n1)) for j in range(n2)]
    best_u2_per_row = [max(game.payoffs[i][j][1] for j in range(n2)) for i in range(n1)]
    return {
        (i, j)
        for i in range(n1)
        for j in range(n2)
        if game.payoffs[i][j][0] == best_u1_per_col[j]
        and game.payoffs[i][j][1] == best_u2_per_row[i]
    }


def pareto_outcomes(game: NormalFormGame) -> set[tuple[int, int]]:
    """Cells not weakly dominated (with one strict inequality) by any other cell."""
    n1, n2 = game.shape
    cells = [(i, j) for i in range(n1) for j in range(n2)]
    result = set()
    for i, j in cells:
        u1, u2 = game.payoffs[i][j]
        dominated = any(
            game.payoffs[a][b][0] >= u1
            and game.payoffs[a][b][1] >= u2
            and (game.payoffs[a][b][0] > u1 or game.payoffs[a][b][1] > u2)
            for a, b in cells
            if (a, b) != (i, j)
        )
        if not dominated:
            result.add((i, j))
    return result


def dominated_strategies(game: NormalFormGame) -> dict[int, set[int]]:
    """Per player, strategies strictly dominated by some other own strategy."""
    n1, n2 = game.shape
    out: dict[int, set[int]] = {0: set(), 1: set()}
    for s in range(n1):
        for alt in range(n1):
            if alt != s and all(
                game.payoffs[alt][j][0] > game.payoffs[s][j][0] for j in range(n2)
            ):
                out[0].add(s)
                break
    for s in range(n2):
        for alt in range(n2):
            if alt != s and all(
                game.payoffs[i][alt][1] > game.payoffs[i][s][1] for i in range(n1)
            ):
                out[1].add(s)
                break
    return out


@dataclass(frozen=True)
class GameAnalysis:
    pure_nash: frozenset[tuple[int, int]]
    pareto: frozenset[tuple[int, int]]
    dominated: tuple[frozenset[int], frozenset[int]]
    kind: str = "pure-strategy analysis"

    def to_payload(self) -> dict[str, Any]:
        return {
            "pure_nash": [list(cell) for cell in sorted(self.pure_nash)],
            "pareto": [list(cell) for cell in sorted(self.pareto)],
            "dominated": {
                "player1": sorted(self.dominated[0]),
                "player2": sorted(self.dominated[1]),
            },
            "kind": self.kind,
        }


def analyze(game: NormalFormGame) -> GameAnalysis:
    dom = dominated_strategies(game)
    return GameAnalysis(
        pure_nash=frozenset(pure_nash(game)),
        pareto=frozenset(pareto_outcomes(game)),
        dominated=(frozenset(dom[0]), frozenset(dom[1])),
    )

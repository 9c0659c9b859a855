"""Cross-impact sensitivity analysis over a signed influence matrix.

Per-variable totals are magnitude measures (absolute values), so a strongly
negative driver counts as strongly active. Role boundaries sit at the median
of each axis with ties assigned to the low side, and the rule applied is
recorded with every result for comparability.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Any, Sequence

from procrust.consolidate import ConsolidatedItem, ProposedItem
from procrust.errors import ValidationError

ROLES = ("Active", "Critical", "Reactive", "Buffering")
ROLE_RULE = "median split, ties to the low side"

DEFAULT_MAX_STRENGTH = 3.0
DEFAULT_LOOP_MIN_WEIGHT = 1.0
DEFAULT_LOOP_MAX_LEN = 4


def _singleton(label: str) -> ConsolidatedItem:
    item = ProposedItem(label=label, description="", proposer="user", kind="variable")
    return ConsolidatedItem(canonical_label=label, members=(item,), pinned=True)


@dataclass(frozen=True)
class InfluenceMatrix:
    """Square signed matrix; entry [i][j] is the direct influence of i on j."""

    variables: tuple[ConsolidatedItem, ...]
    entries: tuple[tuple[float, ...], ...]
    max_strength: float = DEFAULT_MAX_STRENGTH

    def __post_init__(self) -> None:
        n = len(self.variables)
        if n < 2:
            raise ValidationError(f"influence matrix needs >= 2 variables, got {n}")
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValidationError(f"influence matrix must be {n}x{n}")
        for i in range(n):
            if self.entries[i][i] != 0:
                raise ValidationError(f"diagonal entry [{i}][{i}] must be 0 (no self-influence)")
            for j in range(n):
                if abs(self.entries[i][j]) > self.max_strength:
                    raise ValidationError(
                        f"entry [{i}][{j}] = {self.entries[i][j]} exceeds "
                        f"max strength {self.max_strength}"
                    )

    @classmethod
    def from_entries(
        cls,
        labels: Sequence[str],
        entries: Sequence[Sequence[float]],
        max_strength: float = DEFAULT_MAX_STRENGTH,
    ) -> InfluenceMatrix:
        return cls(
            variables=tuple(_singleton(label) for label in labels),
            entries=tuple(tuple(float(v) for v in row) for row in entries),
            max_strength=max_strength,
        )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v.canonical_label for v in self.variables)

    @property
    def n(self) -> int:
        return len(self.variables)

    def to_payload(self) -> dict[str, Any]:
        return {
            "variables": list(self.labels),
            "entries": [list(row) for row in self.entries],
            "max_strength": self.max_strength,
        }


@dataclass(frozen=True)
class VesterMetrics:
    labels: tuple[str, ...]
    active_sum: tuple[float, ...]
    passive_sum: tuple[float, ...]
    product: tuple[float, ...]
    quotient: tuple[float | None, ...]  # None encodes UNDEFINED (passive sum 0)

    def to_payload(self) -> dict[str, Any]:
        return {
            label: {
                "AS": self.active_sum[i],
                "PS": self.passive_sum[i],
                "P": self.product[i],
                "Q": self.quotient[i],
            }
            for i, label in enumerate(self.labels)
        }


def compute_metrics(matrix: InfluenceMatrix) -> VesterMetrics:
    """Active/passive sums of absolute influence, their product P and quotient Q."""
    n = matrix.n
    active = tuple(
        sum(abs(matrix.entries[i][j]) for j in range(n) if j != i) for i in range(n)
    )
    passive = tuple(
        sum(abs(matrix.entries[j][i]) for j in range(n) if j != i) for i in range(n)
    )
    product = tuple(a * p for a, p in zip(active, passive))
    quotient = tuple(a / p if p > 0 else None for a, p in zip(active, passive))
    return VesterMetrics(
        labels=matrix.labels,
        active_sum=active,
        passive_sum=passive,
        product=product,
        quotient=quotient,
    )


def classify_roles(metrics: VesterMetrics) -> tuple[str, ...]:
    """Quadrant roles relative to the medians of AS and PS."""
    if len(metrics.labels) < 2:
        raise ValidationError("role classification needs >= 2 variables")
    as_median = statistics.median(metrics.active_sum)
    ps_median = statistics.median(metrics.passive_sum)
    roles = []
    for a, p in zip(metrics.active_sum, metrics.passive_sum):
        high_as = a > as_median
        high_ps = p > ps_median
        if high_as and not high_ps:
            roles.append("Active")
        elif high_as and high_ps:
            roles.append("Critical")
        elif not high_as and high_ps:
            roles.append("Reactive")
        else:
            roles.append("Buffering")
    return tuple(roles)


@dataclass(frozen=True)
class FeedbackLoop:
    cycle: tuple[str, ...]  # variable labels; closing edge back to cycle[0] implied
    sign: str  # "reinforcing" | "balancing"
    strength: float  # product of absolute edge weights

    def to_payload(self) -> dict[str, Any]:
        return {"cycle": list(self.cycle), "sign": self.sign, "strength": self.strength}


def find_loops(
    matrix: InfluenceMatrix,
    min_abs_weight: float = DEFAULT_LOOP_MIN_WEIGHT,
    max_len: int = DEFAULT_LOOP_MAX_LEN,
) -> list[FeedbackLoop]:
    """All simple cycles of length <= max_len over edges with |weight| >= min_abs_weight.

    Each cycle is reported once, rotated to start at its smallest variable
    index, sorted by descending strength then lexicographic cycle labels.
    """
    if min_abs_weight <= 0:
        raise ValidationError(f"min_abs_weight must be positive, got {min_abs_weight}")
    if not 2 <= max_len <= matrix.n:
        raise ValidationError(f"max_len must be in [2, {matrix.n}], got {max_len}")

    n = matrix.n
    adjacency: list[list[int]] = [
        [j for j in range(n) if j != i and abs(matrix.entries[i][j]) >= min_abs_weight]
        for i in range(n)
    ]

    cycles: list[tuple[int, ...]] = []

    def extend(start: int, path: list[int], on_path: set[int]) -> None:
        current = path[-1]
        for nxt in adjacency[current]:
            if nxt == start and len(path) >= 2:
                cycles.append(tuple(path))
            elif nxt > start and nxt not in on_path and len(path) < max_len:
                path.append(nxt)
                on_path.add(nxt)
                extend(start, path, on_path)
                on_path.remove(nxt)
                path.pop()

    for start in range(n):
        extend(start, [start], {start})

    labels = matrix.labels
    loops = []
    for cycle in cycles:
        strength = 1.0
        negative_edges = 0
        for position, node in enumerate(cycle):
            nxt = cycle[(position + 1) % len(cycle)]
            weight = matrix.entries[node][nxt]
            strength *= abs(weight)
            if weight < 0:
                negative_edges += 1
        loops.append(
            FeedbackLoop(
                cycle=tuple(labels[i] for i in cycle),
                sign="reinforcing" if negative_edges % 2 == 0 else "balancing",
                strength=strength,
            )
        )
    loops.sort(key=lambda loop: (-loop.strength, loop.cycle))
    return loops

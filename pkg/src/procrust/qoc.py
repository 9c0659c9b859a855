"""Question-Option-Criteria scoring: weighted sums, outliers, criterion influence.

Each agent's criterion weights are normalized to sum to 1, per-agent option
totals are the weighted sums of that agent's scores, and options are ranked
by the unweighted mean of per-agent totals. Ties break lexicographically on
the option label so every decision is reproducible from the trace.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any

from procrust.consolidate import ConsolidatedItem
from procrust.errors import ValidationError

SCORE_MIN, SCORE_MAX = 0.0, 10.0

# modified z-score constant (0.6745 ~ the 75th percentile of the standard normal)
MODIFIED_Z_SCALE = 0.6745
OUTLIER_CUTOFF = 3.5
MIN_POPULATION_FOR_OUTLIERS = 3


@dataclass(frozen=True)
class QocFrame:
    question: str
    options: tuple[ConsolidatedItem, ...]
    criteria: tuple[ConsolidatedItem, ...]

    def __post_init__(self) -> None:
        if len(self.options) < 2:
            raise ValidationError(f"QOC frame needs >= 2 options, got {len(self.options)}")
        if len(self.criteria) < 1:
            raise ValidationError("QOC frame needs >= 1 criterion")
        for name, items in (("option", self.options), ("criterion", self.criteria)):
            labels = [item.canonical_label for item in items]
            if len(labels) != len(set(labels)):
                raise ValidationError(f"duplicate {name} labels in frame")

    @property
    def option_labels(self) -> tuple[str, ...]:
        return tuple(item.canonical_label for item in self.options)

    @property
    def criterion_labels(self) -> tuple[str, ...]:
        return tuple(item.canonical_label for item in self.criteria)


@dataclass(frozen=True)
class AgentAssessment:
    """One agent's normalized criterion weights and full option x criterion scores."""

    agent_id: str
    weights: dict[str, float]
    scores: dict[str, dict[str, float]]  # option -> criterion -> score

    def score(self, option: str, criterion: str) -> float:
        return self.scores[option][criterion]

    def to_payload(self) -> dict[str, Any]:
        return {"agent_id": self.agent_id, "weights": self.weights, "scores": self.scores}


def normalize_weights(raw: dict[str, float]) -> dict[str, float]:
    """Scale non-negative weights to sum to 1, preserving order."""
    if any(value < 0 for value in raw.values()):
        negative = [k for k, v in raw.items() if v < 0]
        raise ValidationError(f"negative weights for criteria {negative}")
    total = sum(raw.values())
    if total <= 0:
        raise ValidationError("all criterion weights are zero; at least one must be positive")
    return {criterion: value / total for criterion, value in raw.items()}


def build_assessment(
    agent_id: str,
    raw_weights: dict[str, float],
    scores: dict[str, dict[str, float]],
    frame: QocFrame,
) -> AgentAssessment:
    """Validate grid coverage and score bounds, normalizing the raw weights."""
    missing_weights = [c for c in frame.criterion_labels if c not in raw_weights]
    if missing_weights:
        raise ValidationError(f"agent {agent_id!r} has no weight for {missing_weights[0]!r}")
    for option in frame.option_labels:
        for criterion in frame.criterion_labels:
            try:
                value = scores[option][criterion]
            except KeyError:
                raise ValidationError(
                    f"agent {agent_id!r} is missing a score for cell "
                    f"({option!r}, {criterion!r})"
                ) from None
            if not SCORE_MIN <= value <= SCORE_MAX:
                raise ValidationError(
                    f"agent {agent_id!r} score {value} for ({option!r}, {criterion!r}) "
                    f"outside [{SCORE_MIN}, {SCORE_MAX}]"
                )
    normalized = normalize_weights({c: raw_weights[c] for c in frame.criterion_labels})
    trimmed = {
        option: {c: scores[option][c] for c in frame.criterion_labels}
        for option in frame.option_labels
    }
    return AgentAssessment(agent_id=agent_id, weights=normalized, scores=trimmed)


@dataclass(frozen=True)
class OutlierFlag:
    agent_id: str
    option: str
    criterion: str
    z: float | None  # None when the cell's MAD is zero (z undefined)

    def to_payload(self) -> dict[str, Any]:
        return {
            "agent_id": self.agent_id,
            "option": self.option,
            "criterion": self.criterion,
            "z": self.z,
        }


@dataclass
class QocResult:
    per_option_totals: dict[str, float]
    decision: str
    per_agent_totals: dict[str, dict[str, float]]
    assessments: tuple[AgentAssessment, ...]
    outlier_flags: tuple[OutlierFlag, ...] = ()
    criterion_influence: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_payload(self) -> dict[str, Any]:
        return {
            "per_option_totals": self.per_option_totals,
            "decision": self.decision,
            "per_agent_totals": self.per_agent_totals,
            "assessments": [a.to_payload() for a in self.assessments],
            "outlier_flags": [f.to_payload() for f in self.outlier_flags],
            "criterion_influence": self.criterion_influence,
        }


def score_options(frame: QocFrame, assessments: list[AgentAssessment]) -> QocResult:
    """Weighted-sum totals per agent, averaged across agents; argmax decision."""
    if not assessments:
        raise ValidationError("at least one assessment is required")
    per_agent: dict[str, dict[str, float]] = {}
    for assessment in assessments:
        totals = {}
        for option in frame.option_labels:
            totals[option] = sum(
                assessment.weights[criterion] * assessment.score(option, criterion)
                for criterion in frame.criterion_labels
            )
        per_agent[assessment.agent_id] = totals
    per_option = {
        option: sum(per_agent[a.agent_id][option] for a in assessments) / len(assessments)
        for option in frame.option_labels
    }
    best = max(per_option.values())
    decision = min(option for option, total in per_option.items() if total == best)
    return QocResult(
        per_option_totals=per_option,
        decision=decision,
        per_agent_totals=per_agent,
        assessments=tuple(assessments),
    )


def detect_outliers(
    assessments: list[AgentAssessment], frame: QocFrame
) -> tuple[OutlierFlag, ...]:
    """Per-cell modified z-scores across agents; below 3 agents nothing is flagged.

    When the cell's MAD is zero the z-score is undefined and any score that
    differs from the median is flagged with z = None.
    """
    if len(assessments) < MIN_POPULATION_FOR_OUTLIERS:
        return ()
    flags: list[OutlierFlag] = []
    for option in frame.option_labels:
        for criterion in frame.criterion_labels:
            values = [a.score(option, criterion) for a in assessments]
            center = statistics.median(values)
            mad = statistics.median([abs(v - center) for v in values])
            for assessment, value in zip(assessments, values):
                if mad == 0:
                    if value != center:
                        flags.append(OutlierFlag(assessment.agent_id, option, criterion, None))
                else:
                    z = MODIFIED_Z_SCALE * (value - center) / mad
                    if abs(z) >= OUTLIER_CUTOFF:
                        flags.append(OutlierFlag(assessment.agent_id, option, criterion, z))
    return tuple(flags)


def criterion_influence(frame: QocFrame, result: QocResult) -> dict[str, dict[str, Any]]:
    """Contribution share of each criterion to the winning total, plus criticality.

    The share numerator is the cross-agent mean of each agent's own
    weight x score product for the winning option, so the shares sum to
    exactly the winning total's composition. A criterion is decision-critical
    when removing it (and renormalizing the remaining weights) changes the
    argmax; removing the only criterion is defined as critical.
    """
    decision = result.decision
    assessments = result.assessments
    total = result.per_option_totals[decision]
    shares: dict[str, float] = {}
    for criterion in frame.criterion_labels:
        contribution = sum(
            a.weights[criterion] * a.score(decision, criterion) for a in assessments
        ) / len(assessments)
        shares[criterion] = contribution / total if total != 0 else 0.0
    if total == 0 and frame.criterion_labels:
        # degenerate all-zero totals: split evenly so shares still sum to 1
        shares = {c: 1.0 / len(frame.criterion_labels) for c in frame.criterion_labels}

    influence: dict[str, dict[str, Any]] = {}
    for criterion in frame.criterion_labels:
        remaining = [c for c in frame.criterion_labels if c != criterion]
        if not remaining:
            critical = len(frame.options) > 1
        else:
            reduced_frame = QocFrame(
                question=frame.question,
                options=frame.options,
                criteria=tuple(
                    item for item in frame.criteria if item.canonical_label != criterion
                ),
            )
            reduced = []
            for assessment in assessments:
                raw = {c: assessment.weights[c] for c in remaining}
                if sum(raw.values()) <= 0:
                    raw = {c: 1.0 for c in remaining}
                reduced.append(
                    AgentAssessment(
                        agent_id=assessment.agent_id,
                        weights=normalize_weights(raw),
                        scores={
                            option: {c: assessment.scores[option][c] for c in remaining}
                            for option in frame.option_labels
                        },
                    )
                )
            critical = score_options(reduced_frame, reduced).decision != decision
        influence[criterion] = {
            "contribution_share": shares[criterion],
            "decision_critical": critical,
        }
    return influence

"""Risk scoring: probability x impact aggregation, bands, divergence, group offsets."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Any

from procrust.consolidate import ConsolidatedItem
from procrust.errors import ValidationError
from procrust.qoc import MIN_POPULATION_FOR_OUTLIERS, MODIFIED_Z_SCALE, OUTLIER_CUTOFF

PROBABILITY_RANGE = (0.0, 1.0)
IMPACT_RANGE = (1.0, 5.0)

# artifact conventions, echoed in result metadata
BAND_LOW_BELOW = 1.0
BAND_MEDIUM_BELOW = 2.5


@dataclass(frozen=True)
class RiskRating:
    probability: float
    impact: float

    def __post_init__(self) -> None:
        if not PROBABILITY_RANGE[0] <= self.probability <= PROBABILITY_RANGE[1]:
            raise ValidationError(f"probability {self.probability} outside {PROBABILITY_RANGE}")
        if not IMPACT_RANGE[0] <= self.impact <= IMPACT_RANGE[1]:
            raise ValidationError(f"impact {self.impact} outside {IMPACT_RANGE}")

    @property
    def composite(self) -> float:
        return self.probability * self.impact


@dataclass(frozen=True)
class RiskAssessment:
    agent_id: str
    ratings: dict[str, RiskRating]  # risk label -> rating

    def to_payload(self) -> dict[str, Any]:
        return {
            "agent_id": self.agent_id,
            "ratings": {
                label: {"probability": r.probability, "impact": r.impact}
                for label, r in self.ratings.items()
            },
        }


def band_for(composite: float) -> str:
    if composite < BAND_LOW_BELOW:
        return "low"
    if composite < BAND_MEDIUM_BELOW:
        return "medium"
    return "high"


@dataclass(frozen=True)
class RiskEntry:
    label: str
    pinned: bool
    mean_probability: float
    mean_impact: float
    composite: float
    band: str
    divergence: float
    outlier_agents: tuple[str, ...]

    def to_payload(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "pinned": self.pinned,
            "mean_probability": self.mean_probability,
            "mean_impact": self.mean_impact,
            "composite": self.composite,
            "band": self.band,
            "divergence": self.divergence,
            "outlier_agents": list(self.outlier_agents),
        }


@dataclass(frozen=True)
class RiskRegister:
    risks: tuple[RiskEntry, ...]

    def to_payload(self) -> dict[str, Any]:
        return {
            "risks": [entry.to_payload() for entry in self.risks],
            "bands": {"low_below": BAND_LOW_BELOW, "medium_below": BAND_MEDIUM_BELOW},
        }


def _coverage_check(risks: list[ConsolidatedItem], assessments: list[RiskAssessment]) -> None:
    if not assessments:
        raise ValidationError("at least one risk assessment is required")
    for assessment in assessments:
        for item in risks:
            if item.canonical_label not in assessment.ratings:
                raise ValidationError(
                    f"agent {assessment.agent_id!r} has no rating for risk "
                    f"{item.canonical_label!r}"
                )


def score_risks(
    risks: list[ConsolidatedItem], assessments: list[RiskAssessment]
) -> RiskRegister:
    """Aggregate ratings into a register sorted by descending composite score.

    Composite = mean probability x mean impact. Divergence is the sample
    standard deviation of per-agent composites (0 for a single assessment);
    outlier agents follow the same MAD rule as QOC score outliers.
    """
    _coverage_check(risks, assessments)
    entries = []
    for item in risks:
        label = item.canonical_label
        ratings = [a.ratings[label] for a in assessments]
        mean_probability = sum(r.probability for r in ratings) / len(ratings)
        mean_impact = sum(r.impact for r in ratings) / len(ratings)
        composite = mean_probability * mean_impact
        per_agent = [r.composite for r in ratings]
        divergence = statistics.stdev(per_agent) if len(per_agent) >= 2 else 0.0
        outliers: list[str] = []
        if len(assessments) >= MIN_POPULATION_FOR_OUTLIERS:
            center = statistics.median(per_agent)
            mad = statistics.median([abs(v - center) for v in per_agent])
            for assessment, value in zip(assessments, per_agent):
                if mad == 0:
                    if value != center:
                        outliers.append(assessment.agent_id)
                elif abs(MODIFIED_Z_SCALE * (value - center) / mad) >= OUTLIER_CUTOFF:
                    outliers.append(assessment.agent_id)
        entries.append(
            RiskEntry(
                label=label,
                pinned=item.pinned,
                mean_probability=mean_probability,
                mean_impact=mean_impact,
                composite=composite,
                band=band_for(composite),
                divergence=divergence,
                outlier_agents=tuple(outliers),
            )
        )
    entries.sort(key=lambda e: (-e.composite, e.label))
    return RiskRegister(risks=tuple(entries))


def group_divergence(
    risks: list[ConsolidatedItem],
    assessments: list[RiskAssessment],
    groups: dict[str, str],
) -> dict[str, dict[str, float]]:
    """Per risk, each stakeholder group's mean composite offset from the overall mean."""
    _coverage_check(risks, assessments)
    unassigned = [a.agent_id for a in assessments if a.agent_id not in groups]
    if unassigned:
        raise ValidationError(f"agents without a stakeholder group: {unassigned}")
    out: dict[str, dict[str, float]] = {}
    for item in risks:
        label = item.canonical_label
        overall = sum(a.ratings[label].composite for a in assessments) / len(assessments)
        by_group: dict[str, list[float]] = {}
        for assessment in assessments:
            by_group.setdefault(groups[assessment.agent_id], []).append(
                assessment.ratings[label].composite
            )
        out[label] = {
            group: sum(values) / len(values) - overall
            for group, values in sorted(by_group.items())
        }
    return out

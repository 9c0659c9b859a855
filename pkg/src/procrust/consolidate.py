"""Merge independently proposed items into a unified, provenance-preserving set.

Greedy star clustering over a similarity provider: items are processed
user-first, then by descending label length, then lexicographically; each
item joins the first existing cluster whose canonical member is at least
``threshold`` similar, otherwise it founds a new cluster. User-pinned items
always found their own cluster so the pinned label stays canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from procrust.similarity import SimilarityProvider
from procrust.canonical import normalize_text
from procrust.errors import ValidationError

ITEM_KINDS = frozenset({"option", "criterion", "variable", "risk", "strategy"})

USER_PROPOSER = "user"


@dataclass(frozen=True)
class ProposedItem:
    label: str
    description: str
    proposer: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ITEM_KINDS:
            raise ValidationError(f"unknown item kind: {self.kind!r}")
        if not normalize_text(self.label):
            raise ValidationError(f"item label {self.label!r} is empty after normalization")

    def to_payload(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "description": self.description,
            "proposer": self.proposer,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class ConsolidatedItem:
    canonical_label: str
    members: tuple[ProposedItem, ...]
    pinned: bool

    def to_payload(self) -> dict[str, Any]:
        return {
            "canonical_label": self.canonical_label,
            "members": [m.to_payload() for m in self.members],
            "pinned": self.pinned,
        }


def _processing_key(item: ProposedItem) -> tuple:
    norm = normalize_text(item.label)
    user_rank = 0 if item.proposer == USER_PROPOSER else 1
    return (user_rank, -len(norm), norm, item.proposer, item.description)


def consolidate(
    items: list[ProposedItem],
    provider: SimilarityProvider,
    threshold: float | None = None,
) -> list[ConsolidatedItem]:
    """Cluster ``items`` into a non-redundant set; every input lands in exactly one cluster."""
    if threshold is None:
        threshold = provider.threshold_default
    if not 0 < threshold <= 1:
        raise ValidationError(f"threshold must be in (0, 1], got {threshold}")
    kinds = {item.kind for item in items}
    if len(kinds) > 1:
        raise ValidationError(f"cannot consolidate mixed kinds: {sorted(kinds)}")
    if not items:
        return []

    clusters: list[dict[str, Any]] = []  # creation order; canonical = founder label
    for item in sorted(items, key=_processing_key):
        norm = normalize_text(item.label)
        home = None
        if item.proposer != USER_PROPOSER:
            for cluster in clusters:
                if provider.similarity(norm, cluster["canonical"]) >= threshold:
                    home = cluster
                    break
        if home is None:
            clusters.append({"canonical": norm, "members": [item]})
        else:
            home["members"].append(item)

    consolidated = [
        ConsolidatedItem(
            canonical_label=cluster["canonical"],
            members=tuple(cluster["members"]),
            pinned=any(m.proposer == USER_PROPOSER for m in cluster["members"]),
        )
        for cluster in clusters
    ]
    consolidated.sort(key=lambda c: (-len(c.members), c.canonical_label))
    return consolidated

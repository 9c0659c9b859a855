"""Scenario intake record shared by every pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from procrust.canonical import normalize_text
from procrust.errors import ValidationError

SCHEMA_VERSION = 1


class ProcessKind(str, Enum):
    QOC = "qoc"
    SENSITIVITY = "sensitivity"
    NORMAL_GAME = "normal_game"
    SEQUENTIAL_GAME = "sequential_game"
    RISK = "risk"


@dataclass(frozen=True)
class Stakeholder:
    """One stakeholder perspective: becomes an agent persona in the pipelines."""

    id: str
    role: str
    group: str | None = None

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"id": self.id, "role": self.role}
        if self.group is not None:
            payload["group"] = self.group
        return payload


@dataclass(frozen=True)
class Scenario:
    """Natural-language problem statement plus process selection and pinned elements."""

    id: str
    description: str
    process_kind: ProcessKind
    pinned_items: tuple[str, ...] = ()
    stakeholders: tuple[Stakeholder, ...] = ()
    config: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id or not self.id.strip():
            raise ValidationError("scenario id must be non-empty")
        if not isinstance(self.process_kind, ProcessKind):
            raise ValidationError(f"unknown process_kind: {self.process_kind!r}")
        seen: set[str] = set()
        for label in self.pinned_items:
            norm = normalize_text(label)
            if not norm:
                raise ValidationError("pinned item label is empty after normalization")
            if norm in seen:
                raise ValidationError(f"duplicate pinned item after normalization: {norm!r}")
            seen.add(norm)
        ids = [s.id for s in self.stakeholders]
        if len(ids) != len(set(ids)):
            raise ValidationError("stakeholder ids must be unique")

    def to_payload(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "id": self.id,
            "description": self.description,
            "process_kind": self.process_kind.value,
            "pinned_items": list(self.pinned_items),
            "stakeholders": [s.to_payload() for s in self.stakeholders],
            "config": self.config,
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> Scenario:
        if not isinstance(payload, dict):
            raise ValidationError("scenario document must be a JSON object")
        version = payload.get("schema_version", SCHEMA_VERSION)
        if not isinstance(version, int) or version > SCHEMA_VERSION:
            raise ValidationError(f"unsupported scenario schema_version: {version!r}")
        try:
            kind = ProcessKind(payload["process_kind"])
        except KeyError:
            raise ValidationError("scenario is missing process_kind") from None
        except ValueError:
            raise ValidationError(
                f"unknown process_kind: {payload['process_kind']!r} "
                f"(expected one of {[k.value for k in ProcessKind]})"
            ) from None
        stakeholders = []
        for index, raw in enumerate(payload.get("stakeholders", [])):
            if isinstance(raw, str):
                stakeholders.append(Stakeholder(id=f"s{index + 1}", role=raw))
            elif isinstance(raw, dict) and "role" in raw:
                stakeholders.append(
                    Stakeholder(
                        id=str(raw.get("id", f"s{index + 1}")),
                        role=str(raw["role"]),
                        group=raw.get("group"),
                    )
                )
            else:
                raise ValidationError(f"stakeholder #{index} must be a string or an object with a role")
        return cls(
            id=str(payload.get("id", "")),
            description=str(payload.get("description", "")),
            process_kind=kind,
            pinned_items=tuple(payload.get("pinned_items", [])),
            stakeholders=tuple(stakeholders),
            config=dict(payload.get("config", {})),
        )

"""Canonical serialization, hashing, and text normalization.

Every digest in a run trace is a SHA-256 over the canonical JSON form
defined here, so results are reproducible across platforms.
"""

from __future__ import annotations

import hashlib
import json
import unicodedata


def canonical_json(payload) -> str:
    """Serialize to canonical JSON: sorted keys, no insignificant whitespace."""
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    )


def canonical_bytes(payload) -> bytes:
    return canonical_json(payload).encode("utf-8")


def digest(payload) -> str:
    """Hex SHA-256 of the canonical serialization of ``payload``."""
    return hashlib.sha256(canonical_bytes(payload)).hexdigest()


def normalize_text(text: str) -> str:
    """Unicode NFC, case-fold, collapse internal whitespace (also strips ends)."""
    folded = unicodedata.normalize("NFC", text).casefold()
    return " ".join(folded.split())


def tokens(text: str) -> frozenset[str]:
    """Normalized word set of ``text``, used by the mock similarity provider."""
    return frozenset(normalize_text(text).split())

"""Text-similarity providers: symmetric, reflexive, bounded to [0, 1].

Deterministic analyzers may use these directly (they are pure functions of
their inputs); embedding-backed providers plug in behind the same interface.
"""

from __future__ import annotations

from procrust.canonical import normalize_text, tokens
from procrust.errors import ValidationError


class SimilarityProvider:
    name = "abstract"
    threshold_default = 0.5

    def similarity(self, a: str, b: str) -> float:
        left, right = normalize_text(a), normalize_text(b)
        if not left or not right:
            raise ValidationError("similarity requires non-empty text after normalization")
        return self._score(left, right)

    def _score(self, a: str, b: str) -> float:
        raise NotImplementedError


class JaccardSimilarity(SimilarityProvider):
    """Token-overlap stand-in for embeddings: intersection over union of word sets."""

    name = "jaccard"

    def _score(self, a: str, b: str) -> float:
        left, right = tokens(a), tokens(b)
        return len(left & right) / len(left | right)


def similarity(provider: SimilarityProvider, a: str, b: str) -> float:
    return provider.similarity(a, b)


PROVIDERS = {"jaccard": JaccardSimilarity}


def provider_by_name(name: str) -> SimilarityProvider:
    try:
        return PROVIDERS[name]()
    except KeyError:
        raise ValidationError(
            f"unknown similarity provider {name!r} (available: {sorted(PROVIDERS)})"
        ) from None

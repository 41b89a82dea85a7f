"""Transcript keyword analysis producing the bounded speech concern signal.

Matching is exact-phrase over a lowercased token stream; no stemming, no
negation handling.  The score is a clamped heuristic: each distinct matched
category contributes 0.25 and every repeat occurrence within a category adds
0.05, capped at 1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from pneumoscreen.errors import InvalidConfig

CATEGORY_NAMES = ("fever", "cough", "breathlessness", "chest_discomfort")

CATEGORY_WEIGHT = 0.25
EXTRA_OCCURRENCE_WEIGHT = 0.05

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split on Unicode whitespace/punctuation, lowercase."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class KeywordVocabulary:
    """Fixed clinical keyword phrases, one set per symptom category."""

    categories: dict[str, tuple[tuple[str, ...], ...]]

    @classmethod
    def from_dict(cls, raw: dict) -> "KeywordVocabulary":
        if set(raw) != set(CATEGORY_NAMES):
            raise InvalidConfig(
                f"vocabulary must define exactly the categories {CATEGORY_NAMES}"
            )
        categories = {}
        for name in CATEGORY_NAMES:
            phrases = []
            for phrase in raw[name]:
                tokens = tuple(tokenize(phrase))
                if not tokens:
                    raise InvalidConfig(f"empty phrase in category {name!r}")
                phrases.append(tokens)
            if not phrases:
                raise InvalidConfig(f"category {name!r} has no phrases")
            categories[name] = tuple(phrases)
        return cls(categories)

    @classmethod
    def from_json(cls, text: str) -> "KeywordVocabulary":
        return cls.from_dict(json.loads(text))

    @classmethod
    def default(cls) -> "KeywordVocabulary":
        data = resources.files("pneumoscreen.data").joinpath("vocabulary.json")
        return cls.from_json(data.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class SpeechSignal:
    score: float
    matched: dict[str, list[tuple[str, int]]]

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "matched": {
                cat: [{"phrase": p, "count": c} for p, c in hits]
                for cat, hits in self.matched.items()
            },
        }


def _count_phrase(tokens: list[str], phrase: tuple[str, ...]) -> int:
    n, m = len(tokens), len(phrase)
    count = 0
    for i in range(n - m + 1):
        if tuple(tokens[i : i + m]) == phrase:
            count += 1
    return count


def analyze_transcript(text: str, vocab: KeywordVocabulary | None = None) -> SpeechSignal:
    """Compute the speech-derived concern signal from a plain-text transcript.

    score = min(1, 0.25*C + 0.05*E) with C the number of distinct categories
    matched and E the total occurrences beyond the first per category.
    """
    if vocab is None:
        vocab = KeywordVocabulary.default()
    tokens = tokenize(text)
    matched: dict[str, list[tuple[str, int]]] = {}
    categories_hit = 0
    extra = 0
    for name, phrases in vocab.categories.items():
        hits = []
        total = 0
        for phrase in phrases:
            count = _count_phrase(tokens, phrase)
            if count:
                hits.append((" ".join(phrase), count))
                total += count
        if hits:
            matched[name] = hits
            categories_hit += 1
            extra += total - 1
    score = min(1.0, CATEGORY_WEIGHT * categories_hit + EXTRA_OCCURRENCE_WEIGHT * extra)
    return SpeechSignal(score=score, matched=matched)

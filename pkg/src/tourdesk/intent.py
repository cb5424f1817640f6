"""Intent classification by exemplar similarity.

Each information category carries a handful of exemplar questions.  An
utterance is scored against every exemplar with the two-stage similarity
and assigned to the best-scoring category, provided the winning score
clears the acceptance threshold for the method that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .embeddings import (
    EmbeddedUtterance,
    EmbeddingStore,
    Segmenter,
    TokenizedUtterance,
    embed,
    tokenize,
)
from .errors import DegenerateMeanError, EmptyUtteranceError, LoadError
from .similarity import Method, Thresholds, two_stage_similarity


@dataclass(frozen=True)
class IntentCategory:
    """An information need defined by exemplar questions.

    ``answer_slot`` selects the attraction field the answer is built
    from; ``source`` records whether the entry is an original sample
    category or an invented extension.
    """

    id: str
    answer_slot: str
    exemplars: tuple[TokenizedUtterance, ...]
    embedded_exemplars: tuple[EmbeddedUtterance, ...]
    source: str = "invented"


@dataclass(frozen=True)
class Matched:
    category_id: str
    score: float
    method: Method


@dataclass(frozen=True)
class NoMatch:
    best_score: float | None = None


Classification = Matched | NoMatch


class CategoryRegistry:
    """Order-stable, id-unique collection of categories."""

    def __init__(self, categories: list[IntentCategory]):
        seen = set()
        for cat in categories:
            if cat.id in seen:
                raise LoadError(f"duplicate category id {cat.id}")
            seen.add(cat.id)
        self._categories = tuple(categories)
        self._by_id = {c.id: c for c in categories}

    def __iter__(self):
        return iter(self._categories)

    def __len__(self) -> int:
        return len(self._categories)

    def __contains__(self, category_id: str) -> bool:
        return category_id in self._by_id

    def __getitem__(self, category_id: str) -> IntentCategory:
        return self._by_id[category_id]

    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self._categories)


def load_categories(
    path: str | Path,
    store: EmbeddingStore,
    segmenter: Segmenter | None = None,
) -> CategoryRegistry:
    """Load the category file and embed every exemplar up front.

    Fails loudly if a category repeats an id, has no exemplars, or has
    an exemplar with no in-vocabulary tokens.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise LoadError(f"{path}: expected a list of categories")

    categories: list[IntentCategory] = []
    for entry in raw:
        cat_id = entry.get("id")
        if not cat_id:
            raise LoadError(f"{path}: category without id")
        exemplar_texts = entry.get("exemplars") or []
        if not exemplar_texts:
            raise LoadError(f"{path}: category {cat_id}: empty exemplar list")
        tokenized, embedded = [], []
        for text in exemplar_texts:
            tok = tokenize(text, segmenter)
            emb = embed(store, tok)
            if len(emb.tokens) == 0:
                raise LoadError(
                    f"{path}: category {cat_id}: exemplar unusable "
                    f"(all tokens out of vocabulary): {text!r}"
                )
            tokenized.append(tok)
            embedded.append(emb)
        categories.append(
            IntentCategory(
                id=cat_id,
                answer_slot=entry.get("answer_slot", ""),
                exemplars=tuple(tokenized),
                embedded_exemplars=tuple(embedded),
                source=entry.get("source", "invented"),
            )
        )
    return CategoryRegistry(categories)


def score_category(
    utterance: EmbeddedUtterance,
    category: IntentCategory,
    thresholds: Thresholds,
) -> tuple[float, Method] | None:
    """Best exemplar score for one category, or None if nothing is comparable."""
    best: tuple[float, Method] | None = None
    for exemplar in category.embedded_exemplars:
        try:
            result = two_stage_similarity(utterance, exemplar, thresholds)
        except (EmptyUtteranceError, DegenerateMeanError):
            continue
        if best is None or result.score > best[0]:
            best = (result.score, result.method)
    return best


def classify(
    utterance: str,
    registry: CategoryRegistry,
    store: EmbeddingStore,
    thresholds: Thresholds,
    segmenter: Segmenter | None = None,
) -> Classification:
    """Assign the utterance to its best category or report NoMatch.

    Ties break in registry order.  Degenerate inputs (nothing in
    vocabulary) are a NoMatch, never an error.
    """
    emb = embed(store, tokenize(utterance, segmenter))
    if len(emb.tokens) == 0:
        return NoMatch(best_score=None)

    winner: tuple[str, float, Method] | None = None
    for category in registry:
        scored = score_category(emb, category, thresholds)
        if scored is None:
            continue
        score, method = scored
        if winner is None or score > winner[1]:
            winner = (category.id, score, method)

    if winner is None:
        return NoMatch(best_score=None)
    cat_id, score, method = winner
    accept = thresholds.wrd_accept if method is Method.WRD else thresholds.cosine_accept
    if score >= accept:
        return Matched(category_id=cat_id, score=score, method=method)
    return NoMatch(best_score=score)

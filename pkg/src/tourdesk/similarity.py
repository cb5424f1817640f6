"""Sentence similarity by Word Rotator's Distance with a cosine fallback.

A sentence is a set of word vectors.  Each word carries mass proportional
to its vector norm, moving word x to word y costs ``1 - cos(x, y)``, and
the sentence distance is the optimal transport cost between the two mass
distributions.  Similarity is ``1 - distance``.

When that similarity is too low to be trusted, a second stage scores the
pair by the cosine of the (unweighted) mean word vectors, which tends to
be more forgiving.  ``two_stage_similarity`` implements the switch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .embeddings import EmbeddedUtterance
from .errors import DegenerateMeanError, EmptyUtteranceError, InvalidInputError
from .ot import TransportPlan, solve_ot

__all__ = [
    "Method",
    "MassDistribution",
    "TransportPlan",
    "SimilarityResult",
    "Thresholds",
    "norm_masses",
    "cost_matrix",
    "solve_ot",
    "wrd_similarity",
    "cosine_mean_similarity",
    "two_stage_similarity",
]


class Method(str, Enum):
    WRD = "WRD"
    COSINE_MEAN = "COSINE_MEAN"


@dataclass(frozen=True)
class MassDistribution:
    """Strictly positive masses summing to one (within 1e-12)."""

    masses: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=np.float64)
        if masses.ndim != 1 or len(masses) == 0:
            raise InvalidInputError("mass distribution must be a nonempty vector")
        if (masses <= 0).any():
            raise InvalidInputError("masses must be strictly positive")
        if abs(masses.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"masses sum to {masses.sum()!r}, expected 1")
        masses = masses.copy()
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)

    def __len__(self) -> int:
        return len(self.masses)


@dataclass(frozen=True)
class SimilarityResult:
    """Score in [-1, 1] plus the method that produced it.

    ``distance`` is the transport cost in [0, 2] and is only present for
    the WRD method, where ``score == 1 - distance``.
    """

    score: float
    method: Method
    distance: float | None = None


@dataclass(frozen=True)
class Thresholds:
    """Similarity thresholds; all values live in [-1, 1].

    ``wrd_fallback`` decides when to fall through to the cosine stage;
    the two accept thresholds gate intent classification per method.
    The cosine bar is stricter because mean-vector cosine tends to
    inflate similarity.
    """

    wrd_fallback: float = 0.55
    wrd_accept: float = 0.55
    cosine_accept: float = 0.80

    def __post_init__(self):
        for name in ("wrd_fallback", "wrd_accept", "cosine_accept"):
            value = getattr(self, name)
            if not -1.0 <= value <= 1.0:
                raise InvalidInputError(f"threshold {name}={value!r} outside [-1, 1]")


def norm_masses(vectors: np.ndarray) -> MassDistribution:
    """Mass of word i is ||x_i|| / sum_k ||x_k||."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] == 0:
        raise InvalidInputError("need a nonempty (n, d) array of word vectors")
    norms = np.linalg.norm(vectors, axis=1)
    if (norms == 0).any():
        raise InvalidInputError("zero-norm vector has no transportable mass")
    return MassDistribution(masses=norms / norms.sum())


def cost_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Angular transport cost c[i, j] = 1 - cos(x_i, y_j), in [0, 2]."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or y.ndim != 2 or x.shape[0] == 0 or y.shape[0] == 0:
        raise InvalidInputError("need nonempty (n, d) arrays of word vectors")
    if x.shape[1] != y.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}"
        )
    nx = np.linalg.norm(x, axis=1)
    ny = np.linalg.norm(y, axis=1)
    if (nx == 0).any() or (ny == 0).any():
        raise InvalidInputError("zero-norm vector has undefined angular cost")
    cos = (x @ y.T) / np.outer(nx, ny)
    return np.clip(1.0 - cos, 0.0, 2.0)


def _require_nonempty(u: EmbeddedUtterance, side: str) -> None:
    if len(u.tokens) == 0:
        raise EmptyUtteranceError(f"{side} utterance has no in-vocabulary tokens")


def wrd_similarity(a: EmbeddedUtterance, b: EmbeddedUtterance) -> SimilarityResult:
    """Word Rotator's Distance similarity: score = 1 - transport cost."""
    _require_nonempty(a, "left")
    _require_nonempty(b, "right")
    if len(a.tokens) == 1 and len(b.tokens) == 1:
        # forced one-cell coupling: distance is exactly 1 - cos
        va, vb = a.vectors[0], b.vectors[0]
        na, nb = np.linalg.norm(va), np.linalg.norm(vb)
        if na == 0.0 or nb == 0.0:
            raise InvalidInputError("zero-norm vector has undefined angular cost")
        distance = min(2.0, max(0.0, 1.0 - float(np.dot(va, vb) / (na * nb))))
    else:
        plan = solve_ot(
            norm_masses(a.vectors).masses,
            norm_masses(b.vectors).masses,
            cost_matrix(a.vectors, b.vectors),
        )
        distance = plan.value
    return SimilarityResult(score=1.0 - distance, method=Method.WRD, distance=distance)


def cosine_mean_similarity(a: EmbeddedUtterance, b: EmbeddedUtterance) -> SimilarityResult:
    """Cosine of the two unweighted mean word vectors."""
    _require_nonempty(a, "left")
    _require_nonempty(b, "right")
    mean_a = a.vectors.mean(axis=0)
    mean_b = b.vectors.mean(axis=0)
    na = float(np.linalg.norm(mean_a))
    nb = float(np.linalg.norm(mean_b))
    if na == 0.0 or nb == 0.0:
        raise DegenerateMeanError("mean word vector has zero norm")
    score = float(np.dot(mean_a, mean_b) / (na * nb))
    score = min(1.0, max(-1.0, score))
    return SimilarityResult(score=score, method=Method.COSINE_MEAN, distance=None)


def two_stage_similarity(
    a: EmbeddedUtterance, b: EmbeddedUtterance, thresholds: Thresholds
) -> SimilarityResult:
    """WRD first; fall back to mean-vector cosine when it scores too low."""
    first = wrd_similarity(a, b)
    if first.score > thresholds.wrd_fallback:
        return first
    return cosine_mean_similarity(a, b)

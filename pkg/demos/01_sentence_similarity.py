"""
Sentence similarity with Word Rotator's Distance
================================================

Every word carries mass proportional to its vector norm; moving word x
onto word y costs 1 - cos(x, y); the sentence distance is the cheapest
transport plan between the two sides, solved exactly.  Score = 1 - cost.

Run from the repository root:  python3 demos/01_sentence_similarity.py
"""

from pathlib import Path

from tourdesk import (
    Thresholds,
    embed,
    load_embeddings,
    tokenize,
    two_stage_similarity,
    wrd_similarity,
)

DATA = Path(__file__).resolve().parents[1] / "data"

store = load_embeddings(DATA / "embeddings_demo.txt")
print(f"loaded {len(store)} word vectors of dimension {store.dim}\n")

pairs = [
    ("How much is the entrance fee?", "How much is the entrance fee?"),
    ("How much is the entrance fee?", "How much does a ticket cost?"),
    ("How much is the entrance fee?", "What are the hours of operation?"),
    ("Can I park my car there?", "Is there a parking lot?"),
    ("Can I park my car there?", "Are there restaurants nearby?"),
]

print(f"{'sentence A':<34} {'sentence B':<34} {'WRD score':>9}")
for left, right in pairs:
    a = embed(store, tokenize(left))
    b = embed(store, tokenize(right))
    result = wrd_similarity(a, b)
    print(f"{left:<34} {right:<34} {result.score:>9.4f}")

# The two-stage rule falls back to mean-vector cosine (a more forgiving
# measure) whenever the transport score lands at or below the threshold.
print("\ntwo-stage method selection at different thresholds:")
a = embed(store, tokenize("How much is the entrance fee?"))
b = embed(store, tokenize("When does it open?"))
for threshold in (0.1, 0.55, 0.9):
    picked = two_stage_similarity(a, b, Thresholds(wrd_fallback=threshold))
    print(f"  threshold {threshold:>4}: score {picked.score:.4f} via {picked.method.value}")

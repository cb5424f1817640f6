"""
Classifying visitor questions into information categories
=========================================================

Each category ships a few exemplar questions.  A visitor utterance is
scored against every exemplar (transport similarity first, cosine
fallback) and lands in the best category if the score clears the
acceptance bar for the method that produced it.

Run from the repository root:  python3 demos/02_intent_classification.py
"""

from pathlib import Path

from tourdesk import Matched, Thresholds, classify, load_categories, load_embeddings

DATA = Path(__file__).resolve().parents[1] / "data"

store = load_embeddings(DATA / "embeddings_demo.txt")
registry = load_categories(DATA / "categories.json", store)
thresholds = Thresholds()

print("categories:", ", ".join(registry.ids()), "\n")

questions = [
    "How much is the entrance fee?",       # exemplar, exact match
    "what time do you open",               # paraphrase
    "is it expensive to get in",
    "can I reach it by train",
    "where can we eat lunch around there",
    "qqq zzz",                             # nothing in vocabulary
]

for text in questions:
    result = classify(text, registry, store, thresholds)
    if isinstance(result, Matched):
        print(f"{text!r:<42} -> {result.category_id:<12} "
              f"(score {result.score:.3f}, {result.method.value})")
    else:
        shown = "none" if result.best_score is None else f"{result.best_score:.3f}"
        print(f"{text!r:<42} -> NoMatch      (best score {shown})")

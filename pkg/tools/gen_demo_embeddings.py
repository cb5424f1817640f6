"""Regenerate data/embeddings_demo.txt.

The demo vocabulary is grouped into topic clusters; words in a cluster
share a base direction plus noise, so paraphrases land near each other
and cross-topic questions stay far apart.  Function words get small
norms, which the norm-proportional transport mass naturally discounts.

Deterministic: fixed seed, fixed vocabulary order.
"""

from pathlib import Path

import numpy as np

DIM = 16
SEED = 20220620

CLUSTERS = {
    "price": [
        "price", "prices", "fee", "fees", "cost", "costs", "expensive", "cheap",
        "entrance", "admission", "ticket", "tickets", "yen", "pay", "charge", "much",
    ],
    "time": [
        "hours", "hour", "time", "open", "opens", "opening", "close", "closes",
        "closed", "operation", "schedule", "when", "today", "late", "early",
    ],
    "parking": [
        "park", "parking", "car", "cars", "lot", "drive", "driving", "vehicle", "garage",
    ],
    "access": [
        "train", "trains", "station", "bus", "subway", "rail", "get", "reach",
        "access", "travel", "way", "directions", "nearest", "far", "go", "come",
    ],
    "food": [
        "restaurant", "restaurants", "eat", "eating", "food", "lunch", "dinner",
        "meal", "cafe", "nearby", "around", "hungry", "drink",
    ],
    "overview": [
        "tell", "about", "describe", "place", "spot", "attraction", "famous",
        "known", "see", "visit", "like", "good", "best", "interesting", "more",
        "information", "recommend",
    ],
    "nature": [
        "zoo", "animals", "penguin", "garden", "flower", "flowers", "lavender",
        "farm", "canal", "museum", "aquarium", "view", "winter", "summer",
    ],
    "social": [
        "hello", "hi", "thanks", "thank", "please", "sorry", "name", "nice",
        "meet", "yes", "no", "okay", "ok", "fine", "sure", "alright", "bye",
        "goodbye", "right",
    ],
    "function": [
        "i", "you", "me", "my", "your", "is", "are", "was", "it", "its", "the",
        "a", "an", "there", "here", "that", "this", "what", "where", "how",
        "many", "of", "to", "for", "at", "in", "on", "by", "and", "or", "not",
        "do", "does", "can", "could", "shall", "will", "am", "be", "they",
    ],
    "names": ["sato", "suzuki", "takahashi", "tanaka", "watanabe", "ito"],
}


def build_vectors() -> dict[str, np.ndarray]:
    rng = np.random.default_rng(SEED)
    vectors: dict[str, np.ndarray] = {}
    for cluster, words in CLUSTERS.items():
        base = rng.normal(size=DIM)
        base /= np.linalg.norm(base)
        for word in words:
            noise = rng.normal(size=DIM) * 0.25
            vec = base + noise
            # function words carry little transport mass; content words more
            target_norm = rng.uniform(0.3, 0.55) if cluster == "function" else rng.uniform(0.9, 1.4)
            vec *= target_norm / np.linalg.norm(vec)
            vectors[word] = vec
    return vectors


def main() -> None:
    vectors = build_vectors()
    out = Path(__file__).resolve().parents[1] / "data" / "embeddings_demo.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} {DIM}\n")
        for word, vec in vectors.items():
            comps = " ".join(f"{x:.6f}" for x in vec)
            fh.write(f"{word} {comps}\n")
    print(f"wrote {len(vectors)} vectors of dim {DIM} to {out}")


if __name__ == "__main__":
    main()

import json

import numpy as np
import pytest

from tourdesk.embeddings import EmbeddingStore, embed, load_embeddings, tokenize
from tourdesk.errors import LoadError
from tourdesk.intent import Matched, NoMatch, classify, load_categories
from tourdesk.similarity import Method, Thresholds

from conftest import DATA_DIR
from oracles import oracle_wrd_distance

THRESHOLDS = Thresholds()


@pytest.fixture(scope="module")
def store():
    return load_embeddings(DATA_DIR / "embeddings_demo.txt")


@pytest.fixture(scope="module")
def registry(store):
    return load_categories(DATA_DIR / "categories.json", store)


def write_categories(tmp_path, entries):
    path = tmp_path / "categories.json"
    path.write_text(json.dumps(entries), encoding="utf-8")
    return path


class TestLoadCategories:
    def test_shipped_registry(self, registry):
        assert registry.ids()[:3] == ("PriceRemark", "TimeRemark", "Parking")
        assert len(registry) == 6
        assert registry["PriceRemark"].source == "paper"
        assert registry["Restaurants"].source == "invented"

    def test_exemplars_embedded_in_order(self, registry):
        price = registry["PriceRemark"]
        assert price.exemplars[0].raw == "How much is the entrance fee?"
        assert len(price.embedded_exemplars[0].tokens) > 0

    def test_duplicate_id_rejected(self, tmp_path, store):
        path = write_categories(tmp_path, [
            {"id": "Parking", "answer_slot": "parking", "exemplars": ["Can I park?"]},
            {"id": "Parking", "answer_slot": "parking", "exemplars": ["Parking?"]},
        ])
        with pytest.raises(LoadError, match="duplicate category id Parking"):
            load_categories(path, store)

    def test_empty_exemplars_rejected(self, tmp_path, store):
        path = write_categories(tmp_path, [
            {"id": "X", "answer_slot": "price_yen", "exemplars": []},
        ])
        with pytest.raises(LoadError, match="empty exemplar list"):
            load_categories(path, store)

    def test_fully_oov_exemplar_rejected(self, tmp_path, store):
        path = write_categories(tmp_path, [
            {"id": "X", "answer_slot": "price_yen", "exemplars": ["qqqq zzzz"]},
        ])
        with pytest.raises(LoadError, match="exemplar unusable"):
            load_categories(path, store)


class TestClassify:
    def test_price_self_match(self, registry, store):
        result = classify("How much is the entrance fee?", registry, store, THRESHOLDS)
        assert isinstance(result, Matched)
        assert result.category_id == "PriceRemark"
        assert result.method is Method.WRD
        assert result.score == pytest.approx(1.0, abs=1e-9)

    def test_time_self_match(self, registry, store):
        result = classify("What are the hours of operation?", registry, store, THRESHOLDS)
        assert isinstance(result, Matched)
        assert result.category_id == "TimeRemark"
        assert result.score == pytest.approx(1.0, abs=1e-9)

    def test_parking_self_match(self, registry, store):
        result = classify("Can I park my car there?", registry, store, THRESHOLDS)
        assert isinstance(result, Matched)
        assert result.category_id == "Parking"
        assert result.score == pytest.approx(1.0, abs=1e-9)

    def test_every_exemplar_self_matches(self, registry, store):
        for category in registry:
            for exemplar in category.exemplars:
                result = classify(exemplar.raw, registry, store, THRESHOLDS)
                assert isinstance(result, Matched), (category.id, exemplar.raw)
                assert result.category_id == category.id
                assert result.score == pytest.approx(1.0, abs=1e-9)
                assert result.method is Method.WRD

    def test_fully_oov_is_nomatch(self, registry, store):
        result = classify("xyzzy blorp", registry, store, THRESHOLDS)
        assert isinstance(result, NoMatch)
        assert result.best_score is None

    def test_empty_utterance_is_nomatch(self, registry, store):
        assert isinstance(classify("", registry, store, THRESHOLDS), NoMatch)

    def test_determinism(self, registry, store):
        text = "when does the zoo open"
        first = classify(text, registry, store, THRESHOLDS)
        for _ in range(3):
            assert classify(text, registry, store, THRESHOLDS) == first

    def test_paraphrase_winner_matches_brute_force_oracle(self, registry, store):
        # independent sweep: recompute every exemplar similarity with the
        # exhaustive-enumeration transport solver and take the argmax
        text = "what time do you open"
        emb = embed(store, tokenize(text))
        best_id, best_score = None, -np.inf
        for category in registry:
            for exemplar in category.embedded_exemplars:
                wrd_score = 1.0 - oracle_wrd_distance(emb.vectors, exemplar.vectors)
                if wrd_score > THRESHOLDS.wrd_fallback:
                    score = wrd_score
                else:
                    ma = emb.vectors.mean(axis=0)
                    mb = exemplar.vectors.mean(axis=0)
                    score = float(np.dot(ma, mb) / (np.linalg.norm(ma) * np.linalg.norm(mb)))
                if score > best_score:
                    best_id, best_score = category.id, score

        result = classify(text, registry, store, THRESHOLDS)
        assert isinstance(result, Matched)
        assert result.category_id == best_id
        assert result.score == pytest.approx(best_score, abs=1e-9)

    def test_argmax_invariant_under_global_scaling(self, registry, store):
        texts = [
            "what time do you open",
            "how much does it cost to get in",
            "is parking available",
            "can i get there by train",
        ]
        scaled = EmbeddingStore(
            store.dim, {t: store[t] * 3.7 for t in store.tokens()}
        )
        scaled_registry = load_categories(DATA_DIR / "categories.json", scaled)
        for text in texts:
            base = classify(text, registry, store, THRESHOLDS)
            after = classify(text, scaled_registry, scaled, THRESHOLDS)
            assert type(base) is type(after)
            if isinstance(base, Matched):
                assert base.category_id == after.category_id

    def test_tie_breaks_by_registry_order(self, tmp_path, store):
        # identical exemplar in two categories: first one wins
        path = tmp_path / "cats.json"
        path.write_text(json.dumps([
            {"id": "First", "answer_slot": "price_yen", "exemplars": ["how much is it"]},
            {"id": "Second", "answer_slot": "price_yen", "exemplars": ["how much is it"]},
        ]), encoding="utf-8")
        registry = load_categories(path, store)
        result = classify("how much is it", registry, store, THRESHOLDS)
        assert isinstance(result, Matched)
        assert result.category_id == "First"

    def test_below_threshold_reports_best_score(self, registry, store):
        strict = Thresholds(wrd_fallback=0.55, wrd_accept=0.999999, cosine_accept=0.999999)
        result = classify("what time do you open", registry, store, strict)
        assert isinstance(result, NoMatch)
        assert result.best_score is not None

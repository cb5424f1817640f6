import numpy as np
import pytest

from tourdesk.embeddings import (
    EmbeddingStore,
    embed,
    load_embeddings,
    save_embeddings,
    tokenize,
)
from tourdesk.errors import LoadError, TokenizationError


def write(tmp_path, text):
    path = tmp_path / "vectors.txt"
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEmbeddings:
    def test_basic_load(self, tmp_path):
        store = load_embeddings(write(tmp_path, "2 2\na 1 0\nb 0 1\n"))
        assert store.dim == 2
        assert len(store) == 2
        assert np.array_equal(store["a"], [1.0, 0.0])
        assert np.array_equal(store["b"], [0.0, 1.0])

    def test_wrong_component_count_names_row(self, tmp_path):
        with pytest.raises(LoadError, match="row 2: expected 3 components"):
            load_embeddings(write(tmp_path, "1 3\na 1 0\n"))

    def test_duplicate_token(self, tmp_path):
        with pytest.raises(LoadError, match="duplicate token a"):
            load_embeddings(write(tmp_path, "2 2\na 1 0\na 0 1\n"))

    def test_malformed_header(self, tmp_path):
        with pytest.raises(LoadError, match="malformed header"):
            load_embeddings(write(tmp_path, "two 2\na 1 0\n"))
        with pytest.raises(LoadError, match="malformed header"):
            load_embeddings(write(tmp_path, "2\na 1 0\n"))

    def test_non_numeric_component(self, tmp_path):
        with pytest.raises(LoadError, match="row 3: non-numeric"):
            load_embeddings(write(tmp_path, "2 2\na 1 0\nb x 1\n"))

    def test_count_mismatch(self, tmp_path):
        with pytest.raises(LoadError, match="declares 3"):
            load_embeddings(write(tmp_path, "3 2\na 1 0\nb 0 1\n"))

    def test_tolerates_extra_whitespace(self, tmp_path):
        store = load_embeddings(write(tmp_path, "1 2\na   1\t0\n"))
        assert np.array_equal(store["a"], [1.0, 0.0])

    def test_round_trip_via_save(self, tmp_path):
        store = EmbeddingStore(3, {"x": np.array([1.5, -2.25, 0.125])})
        out = tmp_path / "saved.txt"
        save_embeddings(store, out)
        again = load_embeddings(out)
        assert np.array_equal(again["x"], store["x"])

    def test_store_vectors_read_only(self, tmp_path):
        store = load_embeddings(write(tmp_path, "1 2\na 1 0\n"))
        with pytest.raises(ValueError):
            store["a"][0] = 5.0


class TestTokenize:
    def test_table_style_question(self):
        assert tokenize("Can I park my car there?").tokens == (
            "can", "i", "park", "my", "car", "there",
        )

    def test_empty(self):
        assert tokenize("").tokens == ()

    def test_case_and_punctuation(self):
        assert tokenize("Hello,   HELLO!").tokens == ("hello", "hello")

    def test_apostrophe_folds_into_token(self):
        assert tokenize("it's okay").tokens == ("its", "okay")

    def test_hyphen_splits(self):
        assert tokenize("car-park").tokens == ("car", "park")

    def test_nfkc_normalization(self):
        # full-width latin folds to ascii
        assert tokenize("Ｈello").tokens == ("hello",)

    def test_deterministic(self):
        a = tokenize("Some Text, here!")
        b = tokenize("Some Text, here!")
        assert a == b

    def test_idempotent_on_joined_output(self):
        tokens = tokenize("What ARE the hours, of operation?!").tokens
        again = tokenize(" ".join(tokens)).tokens
        assert again == tokens

    def test_custom_segmenter(self):
        toks = tokenize("abc", segmenter=lambda t: [t[:1], t[1:]])
        assert toks.tokens == ("a", "bc")

    def test_segmenter_output_normalized(self):
        toks = tokenize("x", segmenter=lambda t: ["  FOO  bar ", ""])
        assert toks.tokens == ("foo", "bar")

    def test_segmenter_failure_carries_diagnostics(self):
        def broken(text):
            raise RuntimeError("dictionary missing")

        with pytest.raises(TokenizationError) as err:
            tokenize("x", segmenter=broken)
        assert "dictionary missing" in str(err.value)
        assert isinstance(err.value.diagnostics, RuntimeError)


class TestEmbed:
    def test_all_in_vocabulary(self, tiny_store):
        result = embed(tiny_store, tokenize("a b"))
        assert result.tokens == ("a", "b")
        assert np.array_equal(result.vectors, [[1.0, 0.0], [0.0, 1.0]])
        assert result.oov == ()

    def test_oov_routed(self, tiny_store):
        result = embed(tiny_store, tokenize("a zzz"))
        assert result.tokens == ("a",)
        assert result.oov == ("zzz",)

    def test_zero_norm_routed_to_oov(self, tiny_store):
        result = embed(tiny_store, tokenize("z0"))
        assert result.tokens == ()
        assert result.vectors.shape == (0, 2)
        assert result.oov == ("z0",)

    def test_partition_counts(self, tiny_store):
        u = tokenize("a unknown b z0 c")
        result = embed(tiny_store, u)
        assert len(result.tokens) + len(result.oov) == len(u.tokens)
        assert sorted(result.tokens + result.oov) == sorted(u.tokens)

    def test_round_trip_every_stored_token(self, tiny_store):
        for token in tiny_store.tokens():
            if not np.any(tiny_store[token]):
                continue
            result = embed(tiny_store, tokenize(token))
            assert np.array_equal(result.vectors[0], tiny_store[token])

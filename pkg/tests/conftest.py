import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for tests.oracles imports

from tourdesk.embeddings import EmbeddedUtterance, EmbeddingStore


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """One visible pass/fail line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    name = getattr(item.function, "_criterion", None)
    if not name:
        return
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        status = "PASS" if report.passed else "FAIL"
        reporter.write_line(f"[acceptance] {status}  {name}")

REPO_ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = REPO_ROOT / "data"
CONFIG_PATH = REPO_ROOT / "config" / "demo.json"


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def tiny_store() -> EmbeddingStore:
    return EmbeddingStore(
        2,
        {
            "a": np.array([1.0, 0.0]),
            "b": np.array([0.0, 1.0]),
            "c": np.array([2.0, 0.0]),
            "d": np.array([-1.0, 0.0]),
            "z0": np.array([0.0, 0.0]),
        },
    )


def embedded(*vectors) -> EmbeddedUtterance:
    """Build an EmbeddedUtterance directly from raw vectors."""
    matrix = np.asarray(vectors, dtype=np.float64)
    tokens = tuple(f"w{i}" for i in range(len(matrix)))
    return EmbeddedUtterance(tokens=tokens, vectors=matrix, oov=())


def synthetic_store(rng: np.random.Generator, vocab_size: int = 50, dim: int = 8) -> EmbeddingStore:
    """Random dense store with varied norms and no zero vectors."""
    entries = {}
    for k in range(vocab_size):
        vec = rng.normal(size=dim)
        vec *= rng.uniform(0.3, 2.5) / np.linalg.norm(vec)
        entries[f"word{k:02d}"] = vec
    return EmbeddingStore(dim, entries)


def random_utterance(rng: np.random.Generator, store: EmbeddingStore, max_len: int = 6) -> EmbeddedUtterance:
    vocab = sorted(store.tokens())
    length = int(rng.integers(1, max_len + 1))
    tokens = tuple(vocab[int(k)] for k in rng.integers(0, len(vocab), size=length))
    return EmbeddedUtterance(
        tokens=tokens,
        vectors=np.stack([store[t] for t in tokens]),
        oov=(),
    )

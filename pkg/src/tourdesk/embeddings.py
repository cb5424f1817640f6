"""Word vectors, tokenization, and utterance embedding.

The vector file format is plain UTF-8 text: a ``<count> <dim>`` header
line followed by one ``<token> <v1> ... <v_dim>`` row per entry.  Any
whitespace is accepted between fields on read; writes use single spaces.

Tokenization is pluggable: the default segmenter handles languages with
whitespace word boundaries, while languages that need real morphological
analysis plug in an external adapter behind the same callable interface.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import LoadError, TokenizationError

Segmenter = Callable[[str], Sequence[str]]

# Apostrophes vanish ("it's" -> "its"); all other punctuation and symbol
# characters act as separators ("car-park" -> "car", "park").
_APOSTROPHES = {"'", "’", "ʼ"}


def default_segmenter(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace."""
    normalized = unicodedata.normalize("NFKC", text).casefold()
    out: list[str] = []
    for ch in normalized:
        if ch in _APOSTROPHES:
            continue
        if unicodedata.category(ch)[0] in ("P", "S"):
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out).split()


class EmbeddingStore:
    """Immutable token -> dense-vector map of a fixed dimensionality."""

    def __init__(self, dim: int, entries: Mapping[str, np.ndarray]):
        if dim <= 0:
            raise LoadError(f"vector dimensionality must be positive, got {dim}")
        self._dim = int(dim)
        vectors = {}
        for token, vec in entries.items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (self._dim,):
                raise LoadError(
                    f"token {token!r}: expected {self._dim} components, got {arr.shape}"
                )
            arr = arr.copy()
            arr.setflags(write=False)
            vectors[token] = arr
        self._entries = vectors

    @property
    def dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, token: str) -> bool:
        return token in self._entries

    def __getitem__(self, token: str) -> np.ndarray:
        return self._entries[token]

    def get(self, token: str) -> np.ndarray | None:
        return self._entries.get(token)

    def tokens(self) -> Iterable[str]:
        return self._entries.keys()


@dataclass(frozen=True)
class TokenizedUtterance:
    """Raw text plus its normalized token sequence."""

    raw: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class EmbeddedUtterance:
    """In-vocabulary tokens with their vectors; dropped tokens land in ``oov``."""

    tokens: tuple[str, ...]
    vectors: np.ndarray  # shape (len(tokens), dim)
    oov: tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.tokens)


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """Load a vector file, validating the header and every row.

    Raises LoadError naming the offending row for malformed headers,
    wrong component counts, duplicate tokens, or non-numeric components.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    rows = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not rows:
        raise LoadError(f"{path}: empty vector file")

    header_no, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise LoadError(f"{path}: row {header_no}: malformed header {header!r}")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise LoadError(f"{path}: row {header_no}: malformed header {header!r}") from None
    if count < 0 or dim <= 0:
        raise LoadError(f"{path}: row {header_no}: malformed header {header!r}")

    entries: dict[str, np.ndarray] = {}
    for line_no, line in rows[1:]:
        fields = line.split()
        token = fields[0]
        if len(fields) - 1 != dim:
            raise LoadError(
                f"{path}: row {line_no}: expected {dim} components, got {len(fields) - 1}"
            )
        if token in entries:
            raise LoadError(f"{path}: row {line_no}: duplicate token {token}")
        try:
            entries[token] = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError:
            raise LoadError(
                f"{path}: row {line_no}: non-numeric component in {line!r}"
            ) from None

    if len(entries) != count:
        raise LoadError(f"{path}: header declares {count} entries, file has {len(entries)}")
    return EmbeddingStore(dim, entries)


def save_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store back out in the same text format (single-space separated)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(store)} {store.dim}\n")
        for token in store.tokens():
            comps = " ".join(repr(float(x)) for x in store[token])
            fh.write(f"{token} {comps}\n")


def tokenize(text: str, segmenter: Segmenter | None = None) -> TokenizedUtterance:
    """Segment raw text into normalized tokens.

    The default segmenter lowercases, strips punctuation, and splits on
    whitespace.  An external adapter receives the raw text; its output is
    NFKC-normalized, casefolded, and re-split so the token invariants
    (no empties, no whitespace) hold regardless of adapter behavior.
    """
    if segmenter is None:
        return TokenizedUtterance(raw=text, tokens=tuple(default_segmenter(text)))
    try:
        raw_tokens = segmenter(text)
    except Exception as exc:
        raise TokenizationError(f"segmenter failed on {text!r}: {exc}", diagnostics=exc)
    tokens: list[str] = []
    for tok in raw_tokens:
        normalized = unicodedata.normalize("NFKC", str(tok)).casefold()
        tokens.extend(normalized.split())
    return TokenizedUtterance(raw=text, tokens=tuple(tokens))


def embed(store: EmbeddingStore, utterance: TokenizedUtterance) -> EmbeddedUtterance:
    """Look up each token; OOV and zero-norm tokens are routed to ``oov``."""
    kept: list[str] = []
    vectors: list[np.ndarray] = []
    oov: list[str] = []
    for token in utterance.tokens:
        vec = store.get(token)
        if vec is None or not np.any(vec):
            oov.append(token)
        else:
            kept.append(token)
            vectors.append(vec)
    if vectors:
        matrix = np.stack(vectors)
    else:
        matrix = np.empty((0, store.dim), dtype=np.float64)
    matrix.setflags(write=False)
    return EmbeddedUtterance(tokens=tuple(kept), vectors=matrix, oov=tuple(oov))

"""Deterministic WordPiece-style subword tokenizer.

Greedy longest-match-first splitting against a fixed vocabulary;
continuation pieces carry the ``##`` prefix. Words are normalized
(lowercased, edge punctuation stripped) before splitting, so joining the
pieces of a word span reproduces the normalized word exactly. The bundled
vocabulary covers every printable ASCII character as both an initial and
a continuation piece, so any normalized ASCII word splits without [UNK];
words containing other characters become a single [UNK].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .normalize import DEFAULT_POLICY, NormalizationPolicy

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
MASK_TOKEN = "[MASK]"
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN, MASK_TOKEN)

_BUNDLED_VOCAB = Path(__file__).parent / "data" / "vocab.txt"


@dataclass
class TokenSequence:
    """Subword tokens plus word-boundary spans, one span per surviving word.

    word_boundaries partition [0, len(tokens)) without gaps or overlaps;
    every span is non-empty.
    """

    tokens: list[str]
    word_boundaries: list[tuple[int, int]]
    source_id: str = ""
    _words: list[str] | None = field(default=None, repr=False, compare=False)

    def words(self) -> list[str]:
        """Normalized words recovered by detokenizing each word span."""
        if self._words is None:
            self._words = [detokenize(self.tokens[a:b]) for a, b in self.word_boundaries]
        return self._words

    def truncate(self, max_tokens: int) -> "TokenSequence":
        """Largest whole-word prefix with at most max_tokens tokens."""
        if len(self.tokens) <= max_tokens:
            return self
        keep = 0
        for _, end in self.word_boundaries:
            if end > max_tokens:
                break
            keep = end
        n_words = sum(1 for _, end in self.word_boundaries if end <= keep)
        return TokenSequence(
            tokens=self.tokens[:keep],
            word_boundaries=self.word_boundaries[:n_words],
            source_id=self.source_id,
        )


def detokenize(pieces: Iterable[str]) -> str:
    """Rejoin word pieces, stripping continuation prefixes."""
    return "".join(p[2:] if p.startswith("##") else p for p in pieces)


class WordPieceTokenizer:
    """Immutable after construction; safe to share across workers."""

    def __init__(self, vocab: Iterable[str], policy: NormalizationPolicy = DEFAULT_POLICY):
        self.vocab: dict[str, int] = {}
        for piece in vocab:
            if piece in self.vocab:
                raise ValueError(f"duplicate vocab entry: {piece!r}")
            self.vocab[piece] = len(self.vocab)
        for required in (MASK_TOKEN, UNK_TOKEN):
            if required not in self.vocab:
                raise ValueError(f"vocabulary must contain {required}")
        self.inv_vocab = list(self.vocab)
        self.policy = policy
        self.mask_token = MASK_TOKEN
        self.unk_token = UNK_TOKEN
        specials = set(SPECIAL_TOKENS)
        # Pool for random-token corruption: everything except control tokens.
        self.corruption_candidates = [p for p in self.inv_vocab if p not in specials]
        self._max_piece = max(
            (len(p) - 2 if p.startswith("##") else len(p)) for p in self.inv_vocab
        )
        self._cache: dict[str, list[str]] = {}

    @classmethod
    def from_file(cls, path: str | Path, policy: NormalizationPolicy = DEFAULT_POLICY) -> "WordPieceTokenizer":
        with Path(path).open(encoding="utf-8") as fh:
            pieces = [line.rstrip("\n") for line in fh if line.rstrip("\n")]
        return cls(pieces, policy)

    @classmethod
    def default(cls, policy: NormalizationPolicy = DEFAULT_POLICY) -> "WordPieceTokenizer":
        """Tokenizer over the small bundled vocabulary."""
        return cls.from_file(_BUNDLED_VOCAB, policy)

    def vocab_size(self) -> int:
        return len(self.vocab)

    def split_word(self, word: str) -> list[str]:
        """Greedy longest-match pieces for one normalized word."""
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        pieces: list[str] = []
        start = 0
        n = len(word)
        while start < n:
            found = None
            for end in range(min(n, start + self._max_piece), start, -1):
                sub = word[start:end]
                if start > 0:
                    sub = "##" + sub
                if sub in self.vocab:
                    found = sub
                    start = end
                    break
            if found is None:
                pieces = [UNK_TOKEN]
                break
            pieces.append(found)
        self._cache[word] = pieces
        return pieces

    def tokenize(self, text: str, source_id: str = "") -> TokenSequence:
        tokens: list[str] = []
        boundaries: list[tuple[int, int]] = []
        for word in self.policy.normalize_words(text):
            pieces = self.split_word(word)
            boundaries.append((len(tokens), len(tokens) + len(pieces)))
            tokens.extend(pieces)
        return TokenSequence(tokens=tokens, word_boundaries=boundaries, source_id=source_id)

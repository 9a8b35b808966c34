"""Corpus tokenization, concept frequency counting, and lexicon extraction.

Frequencies count word-boundary-aligned occurrences of each concept
surface; nested and overlapping occurrences are counted independently
(one mention of "stanford university" also counts "stanford" and
"university"). Counting is shardable: per-shard Counters merge
associatively, so results are independent of ordering and worker count.
"""

from __future__ import annotations

import hashlib
import logging
import multiprocessing
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .kg import KnowledgeGraph
from .matcher import ConceptMatcher
from .tokenizer import TokenSequence, WordPieceTokenizer

log = logging.getLogger(__name__)


class LexiconEntry(NamedTuple):
    surface: str
    frequency: int
    word_count: int


@dataclass
class ConceptLexicon:
    """Concepts short and frequent enough to be maskable.

    Every entry satisfies word_count < max_words and
    frequency > min_occurrences (both strict), checked at build.
    """

    entries: dict[int, LexiconEntry]
    max_words: int
    min_occurrences: int

    def __post_init__(self) -> None:
        for concept_id, e in self.entries.items():
            if e.word_count >= self.max_words:
                raise ValueError(f"concept {concept_id} has {e.word_count} words (limit {self.max_words})")
            if e.frequency <= self.min_occurrences:
                raise ValueError(f"concept {concept_id} occurs {e.frequency} times (needs > {self.min_occurrences})")

    def ids(self) -> frozenset[int]:
        return frozenset(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, concept_id: int) -> bool:
        return concept_id in self.entries

    def to_tsv(self) -> str:
        """surface, id, frequency, word_count; sorted by id, bit-stable."""
        lines = [
            f"{e.surface}\t{concept_id}\t{e.frequency}\t{e.word_count}"
            for concept_id, e in sorted(self.entries.items())
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def write_tsv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_tsv(), encoding="utf-8")

    @classmethod
    def from_tsv(cls, path: str | Path, max_words: int, min_occurrences: int) -> "ConceptLexicon":
        entries: dict[int, LexiconEntry] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                surface, id_str, freq_str, wc_str = line.rstrip("\n").split("\t")
                entries[int(id_str)] = LexiconEntry(surface, int(freq_str), int(wc_str))
        return cls(entries=entries, max_words=max_words, min_occurrences=min_occurrences)

    def digest(self) -> str:
        return hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()


def tokenize(text: str, tokenizer: WordPieceTokenizer, source_id: str = "") -> TokenSequence:
    """Subword-tokenize one sequence; see WordPieceTokenizer.tokenize."""
    return tokenizer.tokenize(text, source_id)


def iter_corpus_lines(path: str | Path) -> Iterator[tuple[str, str]]:
    """(source_id, text) per non-blank line; a file, or a directory of files
    read in sorted name order."""
    p = Path(path)
    files = sorted(f for f in p.iterdir() if f.is_file()) if p.is_dir() else [p]
    for f in files:
        with f.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.rstrip("\n")
                if text.strip():
                    yield f"{f.name}:{lineno}", text


def read_sequences(path: str | Path, tokenizer: WordPieceTokenizer) -> list[TokenSequence]:
    """Tokenize a whole corpus file or directory into memory."""
    return [tokenize(text, tokenizer, source_id) for source_id, text in iter_corpus_lines(path)]


def _graph_patterns(g: KnowledgeGraph) -> list[tuple[int, tuple[str, ...]]]:
    return [(c.id, tuple(c.surface.split())) for c in g.nodes]


# Per-worker automaton, built once from the initializer (patterns are
# cheap to ship; the automaton is not picklable by intent).
_worker_matcher: ConceptMatcher | None = None


def _init_worker(patterns: list[tuple[int, tuple[str, ...]]]) -> None:
    global _worker_matcher
    _worker_matcher = ConceptMatcher(patterns)


def _count_chunk(word_lists: list[list[str]]) -> Counter:
    assert _worker_matcher is not None
    counts: Counter = Counter()
    for words in word_lists:
        for concept_id, _start, _end in _worker_matcher.scan(words):
            counts[concept_id] += 1
    return counts


def count_concept_frequencies(
    sequences: Iterable[TokenSequence],
    g: KnowledgeGraph,
    workers: int = 1,
) -> dict[int, int]:
    """Word-boundary-aligned occurrence count per graph concept.

    Overlapping and nested occurrences count independently. Order of the
    sequence stream does not affect the result.
    """
    patterns = _graph_patterns(g)
    if workers <= 1:
        matcher = ConceptMatcher(patterns)
        counts: Counter = Counter()
        for seq in sequences:
            for concept_id, _start, _end in matcher.scan(seq.words()):
                counts[concept_id] += 1
        return dict(counts)

    word_lists = [seq.words() for seq in sequences]
    chunk_size = max(1, (len(word_lists) + workers - 1) // workers)
    chunks = [word_lists[i : i + chunk_size] for i in range(0, len(word_lists), chunk_size)]
    with multiprocessing.Pool(workers, initializer=_init_worker, initargs=(patterns,)) as pool:
        partials = pool.map(_count_chunk, chunks)
    total: Counter = Counter()
    for part in partials:
        total.update(part)
    return dict(total)


def build_lexicon(
    g: KnowledgeGraph,
    freqs: dict[int, int],
    max_words: int = 5,
    min_occurrences: int = 10,
) -> ConceptLexicon:
    """Concepts with word_count < max_words and frequency > min_occurrences.

    Both bounds strict. An empty result is legal on toy corpora and only
    warns.
    """
    entries: dict[int, LexiconEntry] = {}
    for c in g.nodes:
        freq = freqs.get(c.id, 0)
        if c.word_count < max_words and freq > min_occurrences:
            entries[c.id] = LexiconEntry(c.surface, freq, c.word_count)
    if not entries:
        log.warning(
            "lexicon is empty (max_words=%d, min_occurrences=%d over %d concepts)",
            max_words, min_occurrences, len(g),
        )
    return ConceptLexicon(entries=entries, max_words=max_words, min_occurrences=min_occurrences)

"""Multi-pattern concept matching over word sequences.

An Aho-Corasick automaton whose alphabet is whole words rather than
characters. Three build phases:

    1. Goto trie: insert each concept surface as its word sequence.
    2. Failure links (BFS from the root): on a mismatch at a node, the
       failure link points to the longest proper suffix of the current
       word path that is also a prefix of some pattern.
    3. Output merging: each state's output is its own patterns plus the
       patterns reachable through its failure chain, so nested matches
       ("university" ending inside "stanford university") are reported
       at the same position.

Matching is a single left-to-right pass. Words that occur in no pattern
reset the automaton to the root with one dictionary probe, which is the
common case on natural text. All matches are reported, including nested
and overlapping ones; span selection policy belongs to the masker.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

from .tokenizer import TokenSequence

if TYPE_CHECKING:
    from .corpus import ConceptLexicon


class EmptyLexiconError(ValueError):
    """Compiling a matcher from a lexicon with no entries."""


class ConceptSpan(NamedTuple):
    """One concept occurrence, as word indices and projected token indices.

    A NamedTuple rather than a dataclass: annotation allocates one of
    these per match across the whole corpus.
    """

    concept_id: int
    word_start: int
    word_end: int
    token_start: int
    token_end: int


@dataclass
class AnnotatedSequence:
    """A token sequence with every located concept span.

    Spans are sorted by (word_start, word_end, concept_id) and may nest or
    overlap; each concept occurs at most once per start position.
    """

    sequence: TokenSequence
    spans: list[ConceptSpan]


class ConceptMatcher:
    """Immutable word-level Aho-Corasick automaton; shareable across workers."""

    def __init__(self, patterns: Iterable[tuple[int, Sequence[str]]]):
        """patterns: (concept_id, word tuple) pairs; insertion order fixes
        tie order in outputs, so callers should pass a sorted iterable."""
        word_ids: dict[str, int] = {}
        goto: list[dict[int, int]] = [{}]
        own: list[list[tuple[int, int]]] = [[]]
        n_patterns = 0
        max_len = 0
        for concept_id, words in patterns:
            if not words:
                raise ValueError(f"empty pattern for concept {concept_id}")
            state = 0
            for word in words:
                wid = word_ids.setdefault(word, len(word_ids))
                nxt = goto[state].get(wid)
                if nxt is None:
                    nxt = len(goto)
                    goto[state][wid] = nxt
                    goto.append({})
                    own.append([])
                state = nxt
            own[state].append((concept_id, len(words)))
            n_patterns += 1
            max_len = max(max_len, len(words))
        if n_patterns == 0:
            raise EmptyLexiconError("no patterns to compile")

        # Failure links by BFS; outputs merged along the failure chain.
        fail = [0] * len(goto)
        out: list[tuple[tuple[int, int], ...]] = [()] * len(goto)
        out[0] = tuple(own[0])
        queue: deque[int] = deque()
        for wid, child in goto[0].items():
            fail[child] = 0
            out[child] = tuple(own[child])
            queue.append(child)
        while queue:
            state = queue.popleft()
            for wid, child in goto[state].items():
                f = fail[state]
                while f and wid not in goto[f]:
                    f = fail[f]
                fail[child] = goto[f].get(wid, 0)
                out[child] = tuple(own[child]) + out[fail[child]]
                queue.append(child)

        self._word_ids = word_ids
        self._goto = goto
        self._fail = fail
        self._out = out
        self.pattern_count = n_patterns
        self.max_pattern_words = max_len

    def scan(self, words: Sequence[str]) -> list[tuple[int, int, int]]:
        """All (concept_id, word_start, word_end) matches in one pass.

        The hot path: a word outside every pattern resets to the root with
        a single dict probe; pattern words walk goto with the fail chain.
        """
        goto = self._goto
        fail = self._fail
        out = self._out
        state = 0
        hits: list[tuple[int, int, int]] = []
        append = hits.append
        for j, wid in enumerate(map(self._word_ids.get, words)):
            if wid is None:
                state = 0
                continue
            nxt = goto[state].get(wid)
            while nxt is None and state:
                state = fail[state]
                nxt = goto[state].get(wid)
            state = nxt if nxt is not None else 0
            emit = out[state]
            if emit:
                end = j + 1
                for concept_id, length in emit:
                    append((concept_id, end - length, end))
        return hits

    def annotate(self, t: TokenSequence) -> AnnotatedSequence:
        """Locate every lexicon concept in t as word-aligned spans."""
        boundaries = t.word_boundaries
        spans = [
            ConceptSpan(cid, ws, we, boundaries[ws][0], boundaries[we - 1][1])
            for cid, ws, we in self.scan(t.words())
        ]
        spans.sort(key=lambda s: (s.word_start, s.word_end, s.concept_id))
        return AnnotatedSequence(sequence=t, spans=spans)


def compile_matcher(lexicon: "ConceptLexicon") -> ConceptMatcher:
    """Build the matching automaton over all lexicon surfaces."""
    if not lexicon.entries:
        raise EmptyLexiconError("cannot compile a matcher from an empty lexicon")
    patterns = [
        (concept_id, tuple(entry.surface.split()))
        for concept_id, entry in sorted(lexicon.entries.items())
    ]
    return ConceptMatcher(patterns)


def annotate(m: ConceptMatcher, t: TokenSequence) -> AnnotatedSequence:
    return m.annotate(t)


def write_annotations_jsonl(path: str | Path, annotated: Iterable[AnnotatedSequence]) -> None:
    """Annotation dump: one JSON object per sequence with its word spans."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for a in annotated:
            doc = {
                "source_id": a.sequence.source_id,
                "spans": [
                    {"concept_id": s.concept_id, "word_start": s.word_start, "word_end": s.word_end}
                    for s in a.spans
                ],
            }
            fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")))
            fh.write("\n")

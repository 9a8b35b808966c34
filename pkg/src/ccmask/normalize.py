"""Text normalization shared by the graph loader, tokenizer, and matcher.

Graph surfaces and corpus words must be canonicalized identically or
concept lookups silently miss (e.g. a node "Hot_Dog" vs. corpus "hot dog.").
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_EDGE_PUNCT = re.compile(r"^\W+|\W+$")


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw node surfaces and corpus words are canonicalized.

    Defaults match ConceptNet-style inputs: surfaces use underscores for
    spaces and mixed case; corpus text carries punctuation stuck to words.
    """

    lowercase: bool = True
    underscores_to_spaces: bool = True
    strip_edge_punctuation: bool = True

    def normalize_word(self, word: str) -> str:
        if self.lowercase:
            word = word.lower()
        if self.strip_edge_punctuation:
            word = _EDGE_PUNCT.sub("", word)
        return word

    def normalize_words(self, text: str) -> list[str]:
        """Split on whitespace and normalize each word.

        Words that normalize to nothing (pure punctuation) are dropped.
        """
        if self.underscores_to_spaces:
            text = text.replace("_", " ")
        out = []
        for raw in text.split():
            word = self.normalize_word(raw)
            if word:
                out.append(word)
        return out

    def normalize_surface(self, surface: str) -> str:
        """Canonical single-space form of a node surface."""
        return " ".join(self.normalize_words(surface))


DEFAULT_POLICY = NormalizationPolicy()

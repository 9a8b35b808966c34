import random
from pathlib import Path

import pytest

from ccmask import WordPieceTokenizer, load_graph
from ccmask.corpus import build_lexicon, count_concept_frequencies, read_sequences
from ccmask.kg import Concept, KnowledgeGraph

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def toy_graph_path() -> Path:
    return DATA / "toy_graph.tsv"


@pytest.fixture(scope="session")
def toy_corpus_path() -> Path:
    return DATA / "toy_corpus.txt"


@pytest.fixture(scope="session")
def tokenizer() -> WordPieceTokenizer:
    return WordPieceTokenizer.default()


@pytest.fixture(scope="session")
def toy_pipeline(toy_graph_path, toy_corpus_path, tokenizer):
    """Graph, sequences, frequencies, and lexicon over the committed fixtures."""
    g = load_graph(toy_graph_path)
    sequences = read_sequences(toy_corpus_path, tokenizer)
    freqs = count_concept_frequencies(sequences, g)
    lexicon = build_lexicon(g, freqs, max_words=5, min_occurrences=3)
    assert lexicon.entries, "toy fixtures must produce a non-empty lexicon"
    return g, sequences, freqs, lexicon


def make_graph(n: int, edges: list[tuple[int, int]]) -> KnowledgeGraph:
    """Direct-construction helper for query tests (bypasses load_graph)."""
    nodes = [Concept(id=i, surface=f"c{i:03d}", word_count=1) for i in range(n)]
    neighbor_sets: list[set[int]] = [set() for _ in range(n)]
    unique = set()
    for a, b in edges:
        if a == b:
            continue
        unique.add((min(a, b), max(a, b)))
        neighbor_sets[a].add(b)
        neighbor_sets[b].add(a)
    return KnowledgeGraph(nodes, [sorted(s) for s in neighbor_sets], len(unique))


def random_edges(rng: random.Random, n: int, avg_degree: float = 3.0) -> list[tuple[int, int]]:
    """Sparse random undirected edge list without self-loops or duplicates."""
    target = min(int(n * avg_degree / 2), n * (n - 1) // 2)
    edges = set()
    while len(edges) < target:
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)

import random

import pytest

from ccmask import WordPieceTokenizer, load_graph
from ccmask.corpus import (
    ConceptLexicon,
    LexiconEntry,
    build_lexicon,
    count_concept_frequencies,
    iter_corpus_lines,
    read_sequences,
)

from .oracles import naive_counts


def graph_from_surfaces(tmp_path, edges):
    path = tmp_path / "g.tsv"
    path.write_text(
        "".join(f"R\t{a.replace(' ', '_')}\t{b.replace(' ', '_')}\n" for a, b in edges),
        encoding="utf-8",
    )
    return load_graph(path)


@pytest.fixture(scope="module")
def tok():
    return WordPieceTokenizer.default()


class TestCounting:
    def test_simple_count(self, tmp_path, tok):
        g = graph_from_surfaces(tmp_path, [("dog", "cat")])
        seqs = [tok.tokenize("the dog barks"), tok.tokenize("a dog")]
        freqs = count_concept_frequencies(seqs, g)
        assert freqs[g.id_of("dog")] == 2

    def test_nested_occurrences_count_independently(self, tmp_path, tok):
        g = graph_from_surfaces(
            tmp_path,
            [("stanford", "stanford university"), ("stanford university", "university")],
        )
        seqs = [tok.tokenize("she attends stanford university now")]
        freqs = count_concept_frequencies(seqs, g)
        assert freqs[g.id_of("stanford")] == 1
        assert freqs[g.id_of("stanford university")] == 1
        assert freqs[g.id_of("university")] == 1

    def test_matches_quadratic_oracle(self, tmp_path, tok):
        rng = random.Random(7)
        pool = [f"w{i}" for i in range(30)]
        surfaces = sorted({" ".join(rng.sample(pool, rng.randint(1, 3))) for _ in range(40)})
        g = graph_from_surfaces(tmp_path, list(zip(surfaces, surfaces[1:] + surfaces[:1])))
        lines = [" ".join(rng.choice(pool) for _ in range(rng.randint(3, 25))) for _ in range(100)]
        seqs = [tok.tokenize(line, str(i)) for i, line in enumerate(lines)]

        patterns = {tuple(c.surface.split()): c.id for c in g.nodes}
        expected = naive_counts(patterns, 3, [s.words() for s in seqs])
        assert count_concept_frequencies(seqs, g) == dict(expected)

    def test_order_independent(self, tmp_path, tok):
        g = graph_from_surfaces(tmp_path, [("dog", "cat"), ("cat", "bird")])
        seqs = [tok.tokenize(t) for t in ["dog cat", "bird", "cat cat dog"]]
        shuffled = list(seqs)
        random.Random(0).shuffle(shuffled)
        assert count_concept_frequencies(seqs, g) == count_concept_frequencies(shuffled, g)

    def test_per_document_counts_merge_to_global(self, tmp_path, tok):
        g = graph_from_surfaces(tmp_path, [("dog", "cat"), ("cat", "bird")])
        seqs = [tok.tokenize(t) for t in ["dog cat dog", "bird cat", "dog bird bird"]]
        merged: dict[int, int] = {}
        for s in seqs:
            for cid, n in count_concept_frequencies([s], g).items():
                merged[cid] = merged.get(cid, 0) + n
        assert merged == count_concept_frequencies(seqs, g)

    def test_worker_count_does_not_change_result(self, tmp_path, tok):
        g = graph_from_surfaces(tmp_path, [("dog", "cat"), ("cat", "bird")])
        seqs = [tok.tokenize(f"dog cat bird w{i}") for i in range(20)]
        assert count_concept_frequencies(seqs, g, workers=1) == count_concept_frequencies(
            seqs, g, workers=3
        )


class TestLexicon:
    def make_graph_with(self, tmp_path, surface):
        return graph_from_surfaces(tmp_path, [(surface, "zzz filler")])

    def test_word_count_bound_is_strict(self, tmp_path):
        g = self.make_graph_with(tmp_path, "a b c d e")  # 5 words
        lex = build_lexicon(g, {g.id_of("a b c d e"): 1000}, max_words=5, min_occurrences=10)
        assert g.id_of("a b c d e") not in lex

    def test_frequency_bound_is_strict(self, tmp_path):
        g = self.make_graph_with(tmp_path, "red fox")
        lex = build_lexicon(g, {g.id_of("red fox"): 10}, max_words=5, min_occurrences=10)
        assert g.id_of("red fox") not in lex

    def test_boundary_inclusion(self, tmp_path):
        g = self.make_graph_with(tmp_path, "fox")
        lex = build_lexicon(g, {g.id_of("fox"): 11}, max_words=5, min_occurrences=10)
        assert g.id_of("fox") in lex
        assert lex.entries[g.id_of("fox")] == LexiconEntry("fox", 11, 1)

    def test_empty_lexicon_warns_but_builds(self, tmp_path, caplog):
        g = self.make_graph_with(tmp_path, "fox")
        with caplog.at_level("WARNING"):
            lex = build_lexicon(g, {}, max_words=5, min_occurrences=10)
        assert len(lex) == 0
        assert any("empty" in r.message for r in caplog.records)

    def test_invariants_checked_at_construction(self):
        with pytest.raises(ValueError):
            ConceptLexicon({1: LexiconEntry("a b c d e", 100, 5)}, max_words=5, min_occurrences=10)
        with pytest.raises(ValueError):
            ConceptLexicon({1: LexiconEntry("a", 10, 1)}, max_words=5, min_occurrences=10)

    def test_tsv_roundtrip_and_digest_stability(self, tmp_path):
        lex = ConceptLexicon(
            {3: LexiconEntry("dog", 40, 1), 1: LexiconEntry("hot dog", 12, 2)},
            max_words=5,
            min_occurrences=10,
        )
        path = tmp_path / "lexicon.tsv"
        lex.write_tsv(path)
        again = ConceptLexicon.from_tsv(path, max_words=5, min_occurrences=10)
        assert again == lex
        assert again.digest() == lex.digest()
        # sorted by id regardless of insertion order
        assert path.read_text(encoding="utf-8").splitlines()[0].startswith("hot dog\t1")


class TestCorpusIO:
    def test_file_and_directory_inputs(self, tmp_path, tok):
        d = tmp_path / "corpus"
        d.mkdir()
        (d / "b.txt").write_text("second file\n", encoding="utf-8")
        (d / "a.txt").write_text("first file\n\nafter blank\n", encoding="utf-8")
        ids = [sid for sid, _ in iter_corpus_lines(d)]
        assert ids == ["a.txt:1", "a.txt:3", "b.txt:1"]  # sorted files, blanks skipped

        seqs = read_sequences(d / "a.txt", tok)
        assert [s.source_id for s in seqs] == ["a.txt:1", "a.txt:3"]

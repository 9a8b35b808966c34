import random

import pytest

from ccmask.corpus import ConceptLexicon, LexiconEntry
from ccmask.curriculum import (
    CurriculumConfig,
    CurriculumError,
    CurriculumPlan,
    baseline_length_schedule,
    baseline_masking_ratio_schedule,
    baseline_rarity,
    baseline_reverse,
    build_stages,
    select_initial_concepts,
)

from .conftest import make_graph, random_edges
from .oracles import hop_distances, stages_oracle


def lexicon_for(graph, ids, freqs=None):
    entries = {
        cid: LexiconEntry(graph.concept(cid).surface, (freqs or {}).get(cid, 100), 1)
        for cid in ids
    }
    return ConceptLexicon(entries=entries, max_words=5, min_occurrences=0)


class TestConfig:
    def test_defaults_match_documented_best_settings(self):
        cfg = CurriculumConfig()
        assert (cfg.initial_count, cfg.hops, cfg.stages) == (3000, 2, 4)
        assert cfg.min_frequency == 100_000
        assert cfg.include_nonconcept_words_in_final

    @pytest.mark.parametrize(
        "kwargs", [{"initial_count": 0}, {"hops": 0}, {"stages": 1}, {"min_frequency": -1}]
    )
    def test_validation(self, kwargs):
        with pytest.raises(CurriculumError):
            CurriculumConfig(**kwargs)


class TestInitialSelection:
    def test_top_m_by_degree(self):
        # degrees: node0 has 5, node1 has 4, node2 has 3 (plus leaf padding)
        edges = [(0, i) for i in range(3, 8)] + [(1, i) for i in range(8, 12)] + [(2, i) for i in range(12, 15)]
        g = make_graph(15, edges)
        freqs = {i: 1000 for i in range(15)}
        lex = lexicon_for(g, range(15), freqs)
        cfg = CurriculumConfig(initial_count=2, min_frequency=1)
        assert select_initial_concepts(g, lex, freqs, cfg) == {0, 1}

    def test_frequency_filter_excludes_high_degree(self):
        edges = [(0, i) for i in range(1, 6)] + [(1, 2)]
        g = make_graph(6, edges)
        freqs = {i: 1000 for i in range(6)}
        freqs[0] = 3  # the hub is rare in the corpus
        lex = lexicon_for(g, range(6), freqs)
        cfg = CurriculumConfig(initial_count=2, min_frequency=10)
        assert 0 not in select_initial_concepts(g, lex, freqs, cfg)

    def test_clamp_with_warning(self, caplog):
        g = make_graph(3, [(0, 1), (1, 2)])
        freqs = {0: 50, 1: 50, 2: 1}
        lex = lexicon_for(g, range(3), freqs)
        cfg = CurriculumConfig(initial_count=3000, min_frequency=10)
        with caplog.at_level("WARNING"):
            chosen = select_initial_concepts(g, lex, freqs, cfg)
        assert chosen == {0, 1}
        assert any("frequency filter" in r.message for r in caplog.records)

    def test_tie_break_deterministic(self):
        # identical degree everywhere; frequency then surface decide
        g = make_graph(4, [(0, 1), (2, 3)])
        freqs = {0: 10, 1: 20, 2: 20, 3: 10}
        lex = lexicon_for(g, range(4), freqs)
        cfg = CurriculumConfig(initial_count=2, min_frequency=1)
        # c001 and c002 share degree 1 and frequency 20; surfaces break the tie
        assert select_initial_concepts(g, lex, freqs, cfg) == {1, 2}


class TestBuildStages:
    def test_path_graph_expansion(self):
        g = make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        lex = lexicon_for(g, range(5))
        cfg = CurriculumConfig(initial_count=1, hops=2, stages=3, min_frequency=0)
        plan = build_stages(g, {0}, cfg, lex)
        assert plan.stages[0] == {0}
        assert plan.stages[1] == {0, 1, 2}
        assert plan.stages[2] == frozenset(range(5))

    def test_two_stage_degenerate(self):
        g = make_graph(3, [(0, 1), (1, 2)])
        lex = lexicon_for(g, range(3))
        cfg = CurriculumConfig(initial_count=1, hops=1, stages=2, min_frequency=0)
        plan = build_stages(g, {0}, cfg, lex)
        assert [set(s) for s in plan.stages] == [{0}, {0, 1, 2}]

    def test_empty_intersection_is_config_error(self):
        g = make_graph(3, [(0, 1), (1, 2)])
        lex = lexicon_for(g, [2])
        cfg = CurriculumConfig(initial_count=1, hops=1, stages=2, min_frequency=0)
        with pytest.raises(CurriculumError):
            build_stages(g, {0}, cfg, lex)
        with pytest.raises(CurriculumError):
            build_stages(g, set(), cfg, lex)

    def test_expansion_passes_through_nonlexicon_nodes(self):
        # 0-1-2 path where the middle node is not maskable
        g = make_graph(3, [(0, 1), (1, 2)])
        lex = lexicon_for(g, [0, 2])
        cfg = CurriculumConfig(initial_count=1, hops=2, stages=3, min_frequency=0)
        plan = build_stages(g, {0}, cfg, lex)
        assert plan.stages[1] == {0, 2}  # reached 2 through the non-lexicon 1

    def test_matches_distance_oracle_on_random_graphs(self):
        rng = random.Random(99)
        for _ in range(10):
            n = rng.randint(5, 60)
            edges = random_edges(rng, n)
            g = make_graph(n, edges)
            lex_ids = set(rng.sample(range(n), max(2, n // 2)))
            lex = lexicon_for(g, lex_ids)
            s1 = {rng.choice(sorted(lex_ids))}
            k = rng.randint(1, 3)
            stages = rng.randint(2, 5)
            cfg = CurriculumConfig(initial_count=1, hops=k, stages=stages, min_frequency=0)
            plan = build_stages(g, s1, cfg, lex)
            dist = hop_distances(n, edges)
            expected = stages_oracle(dist, s1, lex_ids, k, stages)
            assert [set(s) for s in plan.stages] == expected

    def test_nesting_and_saturation(self):
        rng = random.Random(5)
        n = 30
        edges = random_edges(rng, n, avg_degree=4)
        g = make_graph(n, edges)
        lex = lexicon_for(g, range(n))
        cfg = CurriculumConfig(initial_count=1, hops=n, stages=4, min_frequency=0)
        plan = build_stages(g, {0}, cfg, lex)
        plan.check_nesting()
        # k >= diameter: the second stage already holds node 0's whole component
        dist = hop_distances(n, edges)
        component = {v for v in range(n) if dist[0, v] < float("inf")}
        assert set(plan.stages[1]) == component


class TestRarity:
    def test_sort_and_split(self):
        lex = ConceptLexicon(
            {
                0: LexiconEntry("a", 10, 1),
                1: LexiconEntry("b", 8, 1),
                2: LexiconEntry("c", 6, 1),
                3: LexiconEntry("d", 4, 1),
            },
            max_words=5,
            min_occurrences=3,
        )
        freqs = {cid: e.frequency for cid, e in lex.entries.items()}
        plan = baseline_rarity(lex, freqs, 2)
        assert plan.stages[0] == {0, 1}
        assert plan.stages[1] == {0, 1, 2, 3}
        plan.check_nesting()

    def test_k1_rejected(self):
        lex = ConceptLexicon({0: LexiconEntry("a", 10, 1)}, max_words=5, min_occurrences=3)
        with pytest.raises(CurriculumError):
            baseline_rarity(lex, {0: 10}, 1)

    def test_frequency_ties_break_lexicographically(self):
        lex = ConceptLexicon(
            {
                0: LexiconEntry("zebra", 10, 1),
                1: LexiconEntry("apple", 10, 1),
                2: LexiconEntry("mango", 10, 1),
                3: LexiconEntry("berry", 4, 1),
            },
            max_words=5,
            min_occurrences=3,
        )
        freqs = {cid: e.frequency for cid, e in lex.entries.items()}
        p1 = baseline_rarity(lex, freqs, 4)
        p2 = baseline_rarity(lex, freqs, 4)
        assert p1.stages == p2.stages
        assert p1.stages[0] == {1}  # apple first among the tie


class TestReverse:
    def plan(self):
        return CurriculumPlan(
            stages=(frozenset({1}), frozenset({1, 2}), frozenset({1, 2, 3}), frozenset({1, 2, 3, 4})),
            visit_order=(1, 2, 3, 4),
            final_includes_all_words=True,
            kind="ccm",
            provenance={},
        )

    def test_visit_order_reversed_sets_kept(self):
        rev = baseline_reverse(self.plan())
        assert rev.visit_order == (4, 3, 2, 1)
        assert rev.stages == self.plan().stages

    def test_involution(self):
        p = self.plan()
        assert baseline_reverse(baseline_reverse(p)).visit_order == p.visit_order


class TestSchedules:
    def test_length_reference_schedule(self):
        assert baseline_length_schedule(4) == [64, 128, 256, 512]

    def test_length_prefix_and_extension(self):
        assert baseline_length_schedule(2) == [64, 128]
        assert baseline_length_schedule(5) == [64, 128, 256, 512, 1024]
        with pytest.raises(CurriculumError):
            baseline_length_schedule(0)

    def test_masking_ratio_endpoints(self):
        ratio = baseline_masking_ratio_schedule(1_000_000)
        assert ratio(0) == pytest.approx(0.10)
        assert ratio(1_000_000) == pytest.approx(0.15)
        assert ratio(500_000) == pytest.approx(0.125)
        assert ratio(2_000_000) == pytest.approx(0.15)  # clamped past the end


class TestPlanSerialization:
    def build(self):
        g = make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        lex = lexicon_for(g, range(5))
        cfg = CurriculumConfig(initial_count=1, hops=1, stages=3, min_frequency=0)
        return g, lex, cfg, build_stages(g, {0}, cfg, lex)

    def test_roundtrip_exact(self, tmp_path):
        _, _, _, plan = self.build()
        path = tmp_path / "plan.json"
        plan.write(path)
        assert CurriculumPlan.read(path) == plan
        plan.write(tmp_path / "again.json")
        assert (tmp_path / "again.json").read_bytes() == path.read_bytes()

    def test_provenance_tracks_inputs(self):
        g, lex, cfg, plan = self.build()
        smaller = ConceptLexicon(
            {cid: e for cid, e in list(lex.entries.items())[:3]}, max_words=5, min_occurrences=10
        )
        other_lex = build_stages(g, {0}, cfg, smaller)
        assert other_lex.provenance["lexicon_digest"] != plan.provenance["lexicon_digest"]

        other_cfg = CurriculumConfig(initial_count=1, hops=2, stages=3, min_frequency=0)
        assert (
            build_stages(g, {0}, other_cfg, lex).provenance["config"]
            != plan.provenance["config"]
        )

        g2 = make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        assert (
            build_stages(g2, {0}, cfg, lex).provenance["graph_digest"]
            != plan.provenance["graph_digest"]
        )

    def test_stage_set_range_check(self):
        _, _, _, plan = self.build()
        with pytest.raises(CurriculumError):
            plan.stage_set(0)
        with pytest.raises(CurriculumError):
            plan.stage_set(4)

"""Initial concept selection, nested stage construction, and baseline curricula.

Stage sets grow by k-hop expansion over the full graph: paths may pass
through concepts that never made the lexicon, but only lexicon members
are admitted into a stage, since anything else cannot be masked anyway.
The final stage always covers the whole lexicon (optionally plus all
non-concept words, handled downstream by the masker).
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .corpus import ConceptLexicon
from .kg import KnowledgeGraph

log = logging.getLogger(__name__)


class CurriculumError(ValueError):
    """Invalid curriculum configuration or an unbuildable stage set."""


@dataclass(frozen=True)
class CurriculumConfig:
    initial_count: int = 3000
    hops: int = 2
    stages: int = 4
    min_frequency: int = 100_000
    include_nonconcept_words_in_final: bool = True

    def __post_init__(self) -> None:
        if self.initial_count < 1:
            raise CurriculumError(f"initial_count must be >= 1, got {self.initial_count}")
        if self.hops < 1:
            raise CurriculumError(f"hops must be >= 1, got {self.hops}")
        if self.stages < 2:
            raise CurriculumError(f"stages must be >= 2, got {self.stages}")
        if self.min_frequency < 0:
            raise CurriculumError(f"min_frequency must be >= 0, got {self.min_frequency}")

    def as_dict(self) -> dict:
        return {
            "initial_count": self.initial_count,
            "hops": self.hops,
            "stages": self.stages,
            "min_frequency": self.min_frequency,
            "include_nonconcept_words_in_final": self.include_nonconcept_words_in_final,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurriculumConfig":
        return cls(**d)


@dataclass(frozen=True)
class CurriculumPlan:
    """Nested stage sets S_1 ... S_K plus visit order and provenance.

    stages[i-1] is the concept-id set eligible at stage i; nesting
    S_{i-1} subset-of S_i holds for every generated plan. visit_order is
    the stage sequence the scheduler walks (reversed for the hard-to-easy
    baseline); provenance carries the config snapshot and input digests.
    """

    stages: tuple[frozenset[int], ...]
    visit_order: tuple[int, ...]
    final_includes_all_words: bool
    kind: str
    provenance: dict = field(compare=True, hash=False, default_factory=dict)

    @property
    def num_stages(self) -> int:
        return len(self.stages)

    def stage_set(self, stage: int) -> frozenset[int]:
        """Concept ids for stage in 1..K."""
        if not 1 <= stage <= self.num_stages:
            raise CurriculumError(f"stage {stage} out of range 1..{self.num_stages}")
        return self.stages[stage - 1]

    def check_nesting(self) -> None:
        for i in range(1, len(self.stages)):
            if not self.stages[i - 1] <= self.stages[i]:
                raise CurriculumError(f"stage {i} is not a subset of stage {i + 1}")

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "final_includes_all_words": self.final_includes_all_words,
            "visit_order": list(self.visit_order),
            "stages": [sorted(s) for s in self.stages],
            "provenance": self.provenance,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_json(cls, text: str) -> "CurriculumPlan":
        doc = json.loads(text)
        return cls(
            stages=tuple(frozenset(s) for s in doc["stages"]),
            visit_order=tuple(doc["visit_order"]),
            final_includes_all_words=doc["final_includes_all_words"],
            kind=doc["kind"],
            provenance=doc["provenance"],
        )

    @classmethod
    def read(cls, path: str | Path) -> "CurriculumPlan":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _provenance(cfg: CurriculumConfig, g: KnowledgeGraph | None, lex: ConceptLexicon) -> dict:
    return {
        "config": cfg.as_dict(),
        "graph_digest": g.digest() if g is not None else "",
        "lexicon_digest": lex.digest(),
    }


def select_initial_concepts(
    g: KnowledgeGraph,
    lex: ConceptLexicon,
    freqs: dict[int, int],
    cfg: CurriculumConfig,
) -> set[int]:
    """Top-M concepts by graph degree among those frequent enough in the corpus.

    Candidates must occur at least cfg.min_frequency times; ties at the
    degree cutoff break by higher frequency, then lexicographic surface,
    so selection is deterministic. If fewer than M survive the frequency
    filter, all survivors are returned with a warning.
    """
    survivors = [c.id for c in g.nodes if freqs.get(c.id, 0) >= cfg.min_frequency]
    survivors.sort(key=lambda cid: (-g.degree(cid), -freqs.get(cid, 0), g.concept(cid).surface))
    if len(survivors) < cfg.initial_count:
        log.warning(
            "only %d concepts pass the frequency filter (wanted %d initial concepts)",
            len(survivors), cfg.initial_count,
        )
    selected = set(survivors[: cfg.initial_count])
    outside = len(selected - set(lex.ids()))
    if outside:
        log.debug("%d selected initial concepts are outside the lexicon", outside)
    return selected


def build_stages(
    g: KnowledgeGraph,
    s1: set[int],
    cfg: CurriculumConfig,
    lex: ConceptLexicon,
) -> CurriculumPlan:
    """Expand the initial set into K nested stages by repeated k-hop growth.

    S_1 is the initial set restricted to the lexicon; each intermediate
    stage adds the lexicon members within cfg.hops of the previous stage;
    the final stage is the whole lexicon.
    """
    if not s1:
        raise CurriculumError("initial concept set is empty")
    lex_ids = lex.ids()
    current = frozenset(s1) & lex_ids
    if not current:
        raise CurriculumError("no initial concept survives the lexicon intersection")
    stages = [current]
    for _ in range(2, cfg.stages):
        expansion = g.k_hop_neighborhood(current, cfg.hops)
        current = current | (frozenset(expansion) & lex_ids)
        stages.append(current)
    stages.append(lex_ids)
    return CurriculumPlan(
        stages=tuple(stages),
        visit_order=tuple(range(1, cfg.stages + 1)),
        final_includes_all_words=cfg.include_nonconcept_words_in_final,
        kind="ccm",
        provenance=_provenance(cfg, g, lex),
    )


def baseline_rarity(
    lex: ConceptLexicon,
    freqs: dict[int, int],
    stages: int,
    include_nonconcept_words_in_final: bool = True,
) -> CurriculumPlan:
    """Frequency curriculum: most frequent concepts first, in K cumulative buckets.

    Concepts sort by descending corpus frequency (ties lexicographic by
    surface); stage i takes the top floor(i*n/K).
    """
    if stages < 2:
        raise CurriculumError(f"stages must be >= 2, got {stages}")
    ranked = sorted(
        lex.entries,
        key=lambda cid: (-freqs.get(cid, lex.entries[cid].frequency), lex.entries[cid].surface),
    )
    n = len(ranked)
    stage_sets = []
    for i in range(1, stages + 1):
        cut = (i * n) // stages
        stage_sets.append(frozenset(ranked[:cut]))
    cfg = {"kind": "rarity", "stages": stages}
    return CurriculumPlan(
        stages=tuple(stage_sets),
        visit_order=tuple(range(1, stages + 1)),
        final_includes_all_words=include_nonconcept_words_in_final,
        kind="rarity",
        provenance={"config": cfg, "graph_digest": "", "lexicon_digest": lex.digest()},
    )


def baseline_reverse(plan: CurriculumPlan) -> CurriculumPlan:
    """Hard-to-easy variant: identical stage sets, reversed visit order.

    An involution: reversing twice restores the original visit order.
    """
    return replace(plan, visit_order=tuple(reversed(plan.visit_order)))


def baseline_length_schedule(stages: int) -> list[int]:
    """Max sequence length per stage: 64 doubling upward (64, 128, 256, 512, ...)."""
    if stages < 1:
        raise CurriculumError(f"stages must be >= 1, got {stages}")
    return [64 * 2**i for i in range(stages)]


def baseline_masking_ratio_schedule(total_steps: int) -> Callable[[int], float]:
    """Masking ratio rising linearly from 10% to 15% over total_steps."""
    if total_steps < 1:
        raise CurriculumError(f"total_steps must be >= 1, got {total_steps}")

    def ratio(step: int) -> float:
        return min(0.15, max(0.10, 0.10 + 0.05 * step / total_steps))

    return ratio


def config_digest(cfg: dict) -> str:
    """Stable digest of any JSON-serializable config snapshot."""
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode("utf-8")).hexdigest()

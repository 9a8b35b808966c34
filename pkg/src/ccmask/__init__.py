"""Concept-curriculum masking: staged MLM training data from a knowledge
graph and a text corpus."""

from .corpus import (
    ConceptLexicon,
    LexiconEntry,
    build_lexicon,
    count_concept_frequencies,
    iter_corpus_lines,
    read_sequences,
    tokenize,
)
from .curriculum import (
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
from .kg import Concept, GraphError, KnowledgeGraph, UnknownConceptError, load_graph
from .masker import (
    CorruptionOdds,
    MaskedExample,
    ScheduleConfig,
    StageEligibility,
    dynamic_mask_probability,
    mask_sequence,
    run_schedule,
    stage_eligible_set,
)
from .matcher import AnnotatedSequence, ConceptMatcher, ConceptSpan, annotate, compile_matcher
from .normalize import DEFAULT_POLICY, NormalizationPolicy
from .tokenizer import TokenSequence, WordPieceTokenizer

__version__ = "0.1.0"

"""Staged masked-example generation.

Whole-concept masking: a selected concept span is corrupted as one unit,
all of its subword tokens together. Each eligible span is independently
selected with a per-sequence dynamic probability p_d chosen so the
expected masked-token fraction approximates the target ratio (p_d =
target * total_tokens / covered_tokens, clamped to [0, 1]). A selected
span draws one corruption mode with 80/10/10 odds: mask replaces every
token with the mask token, random replaces each token with an
independently drawn vocabulary token, keep leaves tokens unchanged but
still labeled.

Overlapping selections corrupt the union of positions. Per position, the
first-drawn mask/random decision wins and a keep never reverts it;
mask/random applied after an earlier keep does take effect.

The schedule walks warmup (plain MLM, stage tag 0), then each curriculum
stage in visit order, then repeats from warmup until max_steps. Every
example's randomness comes from a seed derived from (run seed, step), so
generation can be sharded by step range without changing output.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .curriculum import CurriculumPlan
from .matcher import AnnotatedSequence
from .tokenizer import WordPieceTokenizer

log = logging.getLogger(__name__)


class CorruptionOdds(NamedTuple):
    mask: float = 0.8
    random: float = 0.1
    keep: float = 0.1


DEFAULT_ODDS = CorruptionOdds()


class MaskUnit(NamedTuple):
    """One independently selectable masking unit (a concept span, a
    non-concept word, or a single warmup token)."""

    concept_id: int | None
    token_start: int
    token_end: int


@dataclass(frozen=True)
class MaskedExample:
    original_tokens: list[str]
    corrupted_tokens: list[str]
    label_positions: list[int]
    stage: int
    seed: int
    step: int = 0


@dataclass(frozen=True)
class ScheduleConfig:
    warmup_steps: int
    steps_per_stage: int
    max_steps: int
    loop_policy: str = "repeat-from-mlm"

    def __post_init__(self) -> None:
        if self.warmup_steps < 0:
            raise ValueError(f"warmup_steps must be >= 0, got {self.warmup_steps}")
        if self.steps_per_stage < 1:
            raise ValueError(f"steps_per_stage must be >= 1, got {self.steps_per_stage}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.loop_policy != "repeat-from-mlm":
            raise ValueError(f"unknown loop_policy {self.loop_policy!r}")


@dataclass(frozen=True)
class StageEligibility:
    """What may be masked at one stage: plain token-level MLM, or a
    concept set, optionally extended with non-concept words."""

    kind: str  # "mlm" | "concepts"
    concept_ids: frozenset[int] = frozenset()
    include_nonconcept_words: bool = False


def stage_eligible_set(plan: CurriculumPlan, stage: int) -> StageEligibility:
    """Eligibility descriptor for stage 0 (warmup) through K (final)."""
    if stage == 0:
        return StageEligibility(kind="mlm")
    if not 1 <= stage <= plan.num_stages:
        raise ValueError(f"stage {stage} out of range 0..{plan.num_stages}")
    include = stage == plan.num_stages and plan.final_includes_all_words
    return StageEligibility(
        kind="concepts",
        concept_ids=plan.stage_set(stage),
        include_nonconcept_words=include,
    )


def candidate_units(a: AnnotatedSequence, eligibility: StageEligibility) -> list[MaskUnit]:
    """Selectable units for one sequence under a stage's eligibility."""
    seq = a.sequence
    if eligibility.kind == "mlm":
        return [MaskUnit(None, i, i + 1) for i in range(len(seq.tokens))]
    units = [
        MaskUnit(s.concept_id, s.token_start, s.token_end)
        for s in a.spans
        if s.concept_id in eligibility.concept_ids
    ]
    if eligibility.include_nonconcept_words:
        covered_words: set[int] = set()
        for s in a.spans:
            covered_words.update(range(s.word_start, s.word_end))
        for w, (start, end) in enumerate(seq.word_boundaries):
            if w not in covered_words:
                units.append(MaskUnit(None, start, end))
        units.sort(key=lambda u: (u.token_start, u.token_end, -1 if u.concept_id is None else u.concept_id))
    return units


def _units_mask_probability(units: Sequence[MaskUnit], total_tokens: int, target_ratio: float) -> float:
    if not 0.0 < target_ratio < 1.0:
        raise ValueError(f"target_ratio must be in (0, 1), got {target_ratio}")
    covered: set[int] = set()
    for u in units:
        covered.update(range(u.token_start, u.token_end))
    if not covered:
        return 0.0
    return min(1.0, target_ratio * total_tokens / len(covered))


def dynamic_mask_probability(
    a: AnnotatedSequence,
    eligible: frozenset[int] | set[int],
    target_ratio: float = 0.15,
) -> float:
    """Span-selection probability hitting the target masked-token fraction.

    p_d = min(1, target_ratio * total / covered) where covered counts the
    distinct token positions under at least one eligible concept span;
    0 when nothing is covered.
    """
    elig = StageEligibility(kind="concepts", concept_ids=frozenset(eligible))
    units = candidate_units(a, elig)
    return _units_mask_probability(units, len(a.sequence.tokens), target_ratio)


def corrupt_tokens(
    tokens: Sequence[str],
    units: Sequence[MaskUnit],
    p_d: float,
    rng: random.Random,
    tokenizer: WordPieceTokenizer,
    odds: CorruptionOdds = DEFAULT_ODDS,
) -> tuple[list[str], list[int], list[tuple[MaskUnit, str]]]:
    """Select and corrupt units; returns (corrupted, labels, decisions).

    decisions lists every selected unit with its drawn mode, for callers
    that audit whole-unit corruption.
    """
    corrupted = list(tokens)
    labels: set[int] = set()
    mode_at: dict[int, str] = {}
    decisions: list[tuple[MaskUnit, str]] = []
    candidates = tokenizer.corruption_candidates
    for unit in units:
        if rng.random() >= p_d:
            continue
        draw = rng.random()
        if draw < odds.mask:
            mode = "mask"
        elif draw < odds.mask + odds.random:
            mode = "random"
        else:
            mode = "keep"
        decisions.append((unit, mode))
        for pos in range(unit.token_start, unit.token_end):
            labels.add(pos)
            prev = mode_at.get(pos)
            if prev in ("mask", "random"):
                continue
            if mode == "mask":
                corrupted[pos] = tokenizer.mask_token
                mode_at[pos] = "mask"
            elif mode == "random":
                corrupted[pos] = candidates[rng.randrange(len(candidates))]
                mode_at[pos] = "random"
            elif prev is None:
                mode_at[pos] = "keep"
    return corrupted, sorted(labels), decisions


def mask_sequence(
    a: AnnotatedSequence,
    eligible: frozenset[int] | set[int],
    p_d: float,
    rng: random.Random,
    tokenizer: WordPieceTokenizer,
    odds: CorruptionOdds = DEFAULT_ODDS,
    *,
    stage: int = 0,
    step: int = 0,
    seed: int = 0,
) -> MaskedExample:
    """Whole-concept masking of the eligible spans of one sequence."""
    elig = StageEligibility(kind="concepts", concept_ids=frozenset(eligible))
    units = candidate_units(a, elig)
    corrupted, labels, _ = corrupt_tokens(a.sequence.tokens, units, p_d, rng, tokenizer, odds)
    return MaskedExample(
        original_tokens=list(a.sequence.tokens),
        corrupted_tokens=corrupted,
        label_positions=labels,
        stage=stage,
        seed=seed,
        step=step,
    )


def derive_example_seed(base_seed: int, step: int) -> int:
    """Stable per-step seed; independent of worker layout."""
    digest = hashlib.sha256(f"{base_seed}:{step}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def _epoch_permutation(n: int, base_seed: int, epoch: int) -> list[int]:
    order = list(range(n))
    if epoch > 0:
        digest = hashlib.sha256(f"{base_seed}:epoch:{epoch}".encode("ascii")).digest()
        random.Random(int.from_bytes(digest[:8], "big")).shuffle(order)
    return order


@dataclass(frozen=True)
class StepSpec:
    """Everything needed to generate the example at one step."""

    step: int
    stage: int
    eligibility: StageEligibility
    target_ratio: float = 0.15
    max_tokens: int | None = None  # per-step truncation; MLM eligibility only


def schedule_cycle(sched: ScheduleConfig, visit_order: Sequence[int]) -> list[int]:
    """One pass of stage tags: warmup zeros then each stage in visit order."""
    cycle = [0] * sched.warmup_steps
    for stage in visit_order:
        cycle.extend([stage] * sched.steps_per_stage)
    if not cycle:
        raise ValueError("schedule cycle is empty (no warmup and no stages)")
    return cycle


def generate_examples(
    annotated: Sequence[AnnotatedSequence],
    specs: Iterable[StepSpec],
    tokenizer: WordPieceTokenizer,
    base_seed: int,
    odds: CorruptionOdds = DEFAULT_ODDS,
) -> Iterator[MaskedExample]:
    """Run any step-spec stream against the corpus.

    Step t draws sequence perm_e[t mod n] of epoch e = t // n; epoch 0 is
    corpus order and later epochs reshuffle deterministically from the
    seed. Randomness is fully determined by (base_seed, step).
    """
    if not annotated:
        raise ValueError("no sequences to mask")
    n = len(annotated)
    perms: dict[int, list[int]] = {}
    for spec in specs:
        epoch, idx = divmod(spec.step, n)
        perm = perms.get(epoch)
        if perm is None:
            perm = perms[epoch] = _epoch_permutation(n, base_seed, epoch)
            perms.pop(epoch - 2, None)  # only the current epoch is hot
        a = annotated[perm[idx]]
        if spec.max_tokens is not None:
            if spec.eligibility.kind != "mlm":
                raise ValueError("per-step truncation is only supported for MLM eligibility")
            a = AnnotatedSequence(a.sequence.truncate(spec.max_tokens), [])
        seed = derive_example_seed(base_seed, spec.step)
        rng = random.Random(seed)
        units = candidate_units(a, spec.eligibility)
        p_d = _units_mask_probability(units, len(a.sequence.tokens), spec.target_ratio)
        corrupted, labels, _ = corrupt_tokens(a.sequence.tokens, units, p_d, rng, tokenizer, odds)
        yield MaskedExample(
            original_tokens=list(a.sequence.tokens),
            corrupted_tokens=corrupted,
            label_positions=labels,
            stage=spec.stage,
            seed=seed,
            step=spec.step,
        )


def run_schedule(
    annotated: Sequence[AnnotatedSequence],
    plan: CurriculumPlan,
    sched: ScheduleConfig,
    tokenizer: WordPieceTokenizer,
    base_seed: int,
    target_ratio: float = 0.15,
    step_range: range | None = None,
    odds: CorruptionOdds = DEFAULT_ODDS,
) -> Iterator[MaskedExample]:
    """Emit the warmup -> stages -> repeat example stream for a plan.

    step_range generates just a slice of the stream (for sharded workers);
    concatenating shard outputs in step order reproduces the full run.
    """
    cycle = schedule_cycle(sched, plan.visit_order)
    if len(cycle) > sched.max_steps:
        log.warning(
            "max_steps=%d does not cover one curriculum pass (%d steps)",
            sched.max_steps, len(cycle),
        )
    eligibility = {stage: stage_eligible_set(plan, stage) for stage in range(plan.num_stages + 1)}
    steps = step_range if step_range is not None else range(sched.max_steps)
    specs = (
        StepSpec(
            step=step,
            stage=cycle[step % len(cycle)],
            eligibility=eligibility[cycle[step % len(cycle)]],
            target_ratio=target_ratio,
        )
        for step in steps
    )
    return generate_examples(annotated, specs, tokenizer, base_seed, odds)


def example_to_dict(ex: MaskedExample) -> dict:
    return {
        "step": ex.step,
        "stage": ex.stage,
        "tokens": ex.original_tokens,
        "corrupted": ex.corrupted_tokens,
        "labels": [{"pos": p, "original_token": ex.original_tokens[p]} for p in ex.label_positions],
        "seed": ex.seed,
    }


def example_to_json(ex: MaskedExample) -> str:
    return json.dumps(example_to_dict(ex), sort_keys=True, separators=(",", ":"))


def example_from_dict(doc: dict) -> MaskedExample:
    return MaskedExample(
        original_tokens=list(doc["tokens"]),
        corrupted_tokens=list(doc["corrupted"]),
        label_positions=[lab["pos"] for lab in doc["labels"]],
        stage=doc["stage"],
        seed=doc["seed"],
        step=doc["step"],
    )


def write_examples_jsonl(path: str | Path, examples: Iterable[MaskedExample]) -> Counter:
    """Write the stream; returns per-stage example counts for the manifest."""
    counts: Counter = Counter()
    with Path(path).open("w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(example_to_json(ex))
            fh.write("\n")
            counts[ex.stage] += 1
    return counts


def read_examples_jsonl(path: str | Path) -> Iterator[MaskedExample]:
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield example_from_dict(json.loads(line))

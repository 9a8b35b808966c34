"""Pipeline orchestration: build, mask, report, verify.

Exit codes: 0 success, 1 internal error, 2 usage or config error. Every
subcommand validates its config before touching the output directory, so
a validation failure never leaves partial artifacts. All artifacts are
byte-deterministic given identical inputs, config, and seed (no
timestamps anywhere).

Config file: a JSON object whose keys are the long flag names with
underscores (graph, corpus, out, vocab, initial_count, hops, stages,
min_frequency, max_words, min_occurrences, target_mask_ratio,
warmup_steps, steps_per_stage, max_steps, max_length, seed, workers,
curriculum, dump_annotations, hf_threshold, rc_threshold). Explicit
flags win over the config file.
"""

from __future__ import annotations

import argparse
import json
import logging
import statistics
import sys
from collections import Counter
from pathlib import Path
from typing import Callable, Iterator, Sequence

from . import corpus as corpus_mod
from . import kg as kg_mod
from . import masker as masker_mod
from .corpus import ConceptLexicon
from .curriculum import (
    CurriculumConfig,
    CurriculumError,
    CurriculumPlan,
    baseline_length_schedule,
    baseline_masking_ratio_schedule,
    baseline_rarity,
    baseline_reverse,
    build_stages,
    config_digest,
    select_initial_concepts,
)
from .masker import ScheduleConfig, StageEligibility, StepSpec, schedule_cycle
from .matcher import AnnotatedSequence, compile_matcher, write_annotations_jsonl
from .tokenizer import WordPieceTokenizer

log = logging.getLogger("ccmask")

CURRICULUM_KINDS = ("ccm", "rarity", "reverse", "masking-ratio", "length", "none")

DEFAULTS = {
    "vocab": None,
    "initial_count": 3000,
    "hops": 2,
    "stages": 4,
    "min_frequency": 100_000,
    "max_words": 5,
    "min_occurrences": 10,
    "target_mask_ratio": 0.15,
    "warmup_steps": 100_000,
    "steps_per_stage": 100_000,
    "max_steps": 1_000_000,
    "max_length": 128,
    "seed": 0,
    "workers": 1,
    "curriculum": "ccm",
    "dump_annotations": False,
    "hf_threshold": None,
    "rc_threshold": None,
}


class ConfigError(Exception):
    """Bad usage or configuration; maps to exit code 2."""


class PhaseError(Exception):
    """A pipeline phase failed; message names the phase."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccmask", description="curriculum masking pipeline")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, help="JSON config file; flags override it")
        p.add_argument("--out", type=Path, help="artifact directory")
        p.add_argument("-v", "--verbose", action="count", default=0, dest="verbose_sub")

    p_build = sub.add_parser("build", help="graph index, lexicon, and curriculum plan")
    common(p_build)
    p_build.add_argument("--graph", type=Path, help="TSV edge file")
    p_build.add_argument("--corpus", type=Path, help="text file or directory, one sequence per line")
    p_build.add_argument("--vocab", type=Path, help="wordpiece vocab (default: bundled)")
    p_build.add_argument("--initial-count", type=int, dest="initial_count")
    p_build.add_argument("--hops", type=int)
    p_build.add_argument("--stages", type=int)
    p_build.add_argument("--min-frequency", type=int, dest="min_frequency")
    p_build.add_argument("--max-words", type=int, dest="max_words")
    p_build.add_argument("--min-occurrences", type=int, dest="min_occurrences")
    p_build.add_argument("--workers", type=int)

    p_mask = sub.add_parser("mask", help="emit the staged masked-example stream")
    common(p_mask)
    p_mask.add_argument("--corpus", type=Path)
    p_mask.add_argument("--vocab", type=Path)
    p_mask.add_argument("--curriculum", choices=CURRICULUM_KINDS)
    p_mask.add_argument("--target-mask-ratio", type=float, dest="target_mask_ratio")
    p_mask.add_argument("--warmup-steps", type=int, dest="warmup_steps")
    p_mask.add_argument("--steps-per-stage", type=int, dest="steps_per_stage")
    p_mask.add_argument("--max-steps", type=int, dest="max_steps")
    p_mask.add_argument("--max-length", type=int, dest="max_length")
    p_mask.add_argument("--seed", type=int)
    p_mask.add_argument(
        "--dump-annotations", action="store_true", default=None, dest="dump_annotations",
        help="also write annotations.jsonl with every concept span",
    )

    p_report = sub.add_parser("report", help="per-concept analytics and stage coverage")
    common(p_report)
    p_report.add_argument("--corpus", type=Path)
    p_report.add_argument("--vocab", type=Path)
    p_report.add_argument("--max-length", type=int, dest="max_length")
    p_report.add_argument("--hf-threshold", type=int, dest="hf_threshold")
    p_report.add_argument("--rc-threshold", type=int, dest="rc_threshold")

    p_verify = sub.add_parser("verify", help="check invariants of existing artifacts")
    common(p_verify)

    return parser


def _load_config(args: argparse.Namespace) -> dict:
    """Config file values overridden by explicit flags, then defaults."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        path: Path = args.config
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        unknown = set(loaded) - set(DEFAULTS) - {"graph", "corpus", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in ("command", "config", "verbose", "verbose_sub"):
            continue
        if value is not None:
            cfg[key] = value
    for key in ("graph", "corpus", "out", "vocab"):
        if cfg.get(key) is not None:
            cfg[key] = Path(cfg[key])
    return cfg


def _require(cfg: dict, *keys: str) -> None:
    for key in keys:
        if cfg.get(key) is None:
            raise ConfigError(f"--{key.replace('_', '-')} is required")


def _require_file(path: Path, what: str) -> None:
    if not path.exists():
        raise ConfigError(f"{what} not found: {path}")


def _tokenizer(cfg: dict) -> WordPieceTokenizer:
    if cfg.get("vocab"):
        _require_file(cfg["vocab"], "vocab file")
        return WordPieceTokenizer.from_file(cfg["vocab"])
    return WordPieceTokenizer.default()


def _config_snapshot(cfg: dict) -> dict:
    snap = {}
    for key, value in sorted(cfg.items()):
        snap[key] = str(value) if isinstance(value, Path) else value
    return snap


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- build


def cmd_build(cfg: dict) -> int:
    _require(cfg, "graph", "corpus", "out")
    _require_file(cfg["graph"], "graph file")
    _require_file(cfg["corpus"], "corpus")
    if cfg["vocab"]:
        _require_file(cfg["vocab"], "vocab file")
    curriculum_cfg = CurriculumConfig(
        initial_count=cfg["initial_count"],
        hops=cfg["hops"],
        stages=cfg["stages"],
        min_frequency=cfg["min_frequency"],
    )
    out: Path = cfg["out"]
    out.mkdir(parents=True, exist_ok=True)

    phase = "loading graph"
    try:
        g = kg_mod.load_graph(cfg["graph"])
        tokenizer = _tokenizer(cfg)

        phase = "tokenizing corpus"
        sequences = corpus_mod.read_sequences(cfg["corpus"], tokenizer)
        if not sequences:
            raise ConfigError(f"corpus is empty: {cfg['corpus']}")

        phase = "counting concept frequencies"
        freqs = corpus_mod.count_concept_frequencies(sequences, g, workers=cfg["workers"])

        phase = "building lexicon"
        lexicon = corpus_mod.build_lexicon(
            g, freqs, max_words=cfg["max_words"], min_occurrences=cfg["min_occurrences"]
        )

        phase = "selecting initial concepts"
        s1 = select_initial_concepts(g, lexicon, freqs, curriculum_cfg)

        phase = "building stages"
        plan = build_stages(g, s1, curriculum_cfg, lexicon)

        phase = "writing artifacts"
        kg_mod.write_graph_index(g, out)
        lexicon.write_tsv(out / "lexicon.tsv")
        plan.write(out / "plan.json")
        freq_lines = [f"{cid}\t{freqs[cid]}" for cid in sorted(freqs)]
        (out / "frequencies.tsv").write_text(
            "\n".join(freq_lines) + ("\n" if freq_lines else ""), encoding="utf-8"
        )
        stats = {
            "graph": {
                "nodes": len(g),
                "edges": g.edge_count,
                "load_report": g.load_report.as_dict() if g.load_report else None,
            },
            "corpus": {"sequences": len(sequences), "tokens": sum(len(s.tokens) for s in sequences)},
            "lexicon": {"size": len(lexicon)},
            "stages": {str(i + 1): len(s) for i, s in enumerate(plan.stages)},
            "initial_concepts": len(s1),
            "config": _config_snapshot(cfg),
            "digests": {
                "graph": g.digest(),
                "lexicon": lexicon.digest(),
                "config": config_digest(_config_snapshot(cfg)),
            },
        }
        _write_json(out / "build_stats.json", stats)
    except (ConfigError, CurriculumError):
        raise
    except Exception as exc:
        raise PhaseError(f"build failed while {phase}: {exc}") from exc

    sizes = " <= ".join(str(len(s)) for s in plan.stages)
    log.info("build done: %d nodes, lexicon %d, stage sizes %s", len(g), len(lexicon), sizes)
    return 0


# ---------------------------------------------------------------- mask


def _load_artifacts(out: Path) -> tuple[ConceptLexicon, CurriculumPlan, dict]:
    for name in ("lexicon.tsv", "plan.json", "build_stats.json"):
        _require_file(out / name, f"build artifact {name}")
    stats = json.loads((out / "build_stats.json").read_text(encoding="utf-8"))
    build_cfg = stats["config"]
    lexicon = ConceptLexicon.from_tsv(
        out / "lexicon.tsv",
        max_words=int(build_cfg["max_words"]),
        min_occurrences=int(build_cfg["min_occurrences"]),
    )
    plan = CurriculumPlan.read(out / "plan.json")
    return lexicon, plan, stats


def _annotated_corpus(
    cfg: dict,
    tokenizer: WordPieceTokenizer,
    lexicon: ConceptLexicon | None,
    max_tokens: int,
) -> list[AnnotatedSequence]:
    """Tokenize, truncate to whole words, and (when a lexicon is given)
    annotate every corpus sequence."""
    sequences = [
        s.truncate(max_tokens)
        for s in corpus_mod.read_sequences(cfg["corpus"], tokenizer)
    ]
    sequences = [s for s in sequences if s.tokens]
    if not sequences:
        raise ConfigError(f"corpus is empty: {cfg['corpus']}")
    if lexicon is None or not lexicon.entries:
        return [AnnotatedSequence(s, []) for s in sequences]
    matcher = compile_matcher(lexicon)
    return [matcher.annotate(s) for s in sequences]


def _mlm_specs(
    steps: int,
    stage_of: Callable[[int], int],
    ratio_of: Callable[[int], float],
    max_tokens_of: Callable[[int], int | None],
) -> Iterator[StepSpec]:
    mlm = StageEligibility(kind="mlm")
    for step in range(steps):
        yield StepSpec(
            step=step,
            stage=stage_of(step),
            eligibility=mlm,
            target_ratio=ratio_of(step),
            max_tokens=max_tokens_of(step),
        )


def cmd_mask(cfg: dict) -> int:
    _require(cfg, "out", "corpus")
    _require_file(cfg["corpus"], "corpus")
    kind = cfg["curriculum"]
    if kind not in CURRICULUM_KINDS:
        raise ConfigError(f"unknown curriculum kind: {kind}")
    out: Path = cfg["out"]
    _require_file(out / "build_stats.json", "build artifact build_stats.json")
    sched = ScheduleConfig(
        warmup_steps=cfg["warmup_steps"],
        steps_per_stage=cfg["steps_per_stage"],
        max_steps=cfg["max_steps"],
    )
    tokenizer = _tokenizer(cfg)
    target = cfg["target_mask_ratio"]
    seed = cfg["seed"]
    lexicon, plan, _stats = _load_artifacts(out)

    if kind in ("ccm", "rarity", "reverse"):
        if kind == "rarity":
            freqs = {cid: e.frequency for cid, e in lexicon.entries.items()}
            run_plan = baseline_rarity(
                lexicon, freqs, plan.num_stages,
                include_nonconcept_words_in_final=plan.final_includes_all_words,
            )
        elif kind == "reverse":
            run_plan = baseline_reverse(plan)
        else:
            run_plan = plan
        annotated = _annotated_corpus(cfg, tokenizer, lexicon, cfg["max_length"])
        examples = masker_mod.run_schedule(
            annotated, run_plan, sched, tokenizer, seed, target_ratio=target
        )
    elif kind == "none":
        annotated = _annotated_corpus(cfg, tokenizer, None, cfg["max_length"])
        specs = _mlm_specs(sched.max_steps, lambda s: 0, lambda s: target, lambda s: None)
        examples = masker_mod.generate_examples(annotated, specs, tokenizer, seed)
    elif kind == "masking-ratio":
        annotated = _annotated_corpus(cfg, tokenizer, None, cfg["max_length"])
        ratio = baseline_masking_ratio_schedule(sched.max_steps)
        specs = _mlm_specs(sched.max_steps, lambda s: 0, ratio, lambda s: None)
        examples = masker_mod.generate_examples(annotated, specs, tokenizer, seed)
    else:  # length
        lengths = baseline_length_schedule(plan.num_stages)
        annotated = _annotated_corpus(cfg, tokenizer, None, lengths[-1])
        cycle_len = plan.num_stages * sched.steps_per_stage

        def stage_of(step: int) -> int:
            return (step % cycle_len) // sched.steps_per_stage + 1

        specs = _mlm_specs(
            sched.max_steps,
            stage_of,
            lambda s: target,
            lambda step: lengths[stage_of(step) - 1],
        )
        examples = masker_mod.generate_examples(annotated, specs, tokenizer, seed)

    if cfg["dump_annotations"]:
        write_annotations_jsonl(out / "annotations.jsonl", annotated)
    counts = masker_mod.write_examples_jsonl(out / "examples.jsonl", examples)
    manifest = {
        "curriculum": kind,
        "seed": seed,
        "target_mask_ratio": target,
        "warmup_steps": sched.warmup_steps,
        "steps_per_stage": sched.steps_per_stage,
        "max_steps": sched.max_steps,
        "max_length": cfg["max_length"],
        "stages": plan.num_stages,
        "visit_order": list(baseline_reverse(plan).visit_order) if kind == "reverse" else list(plan.visit_order),
        "counts": {str(stage): n for stage, n in sorted(counts.items())},
        "total": sum(counts.values()),
        "digests": {
            "lexicon": lexicon.digest(),
            "config": config_digest(_config_snapshot(cfg)),
        },
        "config": _config_snapshot(cfg),
    }
    _write_json(out / "manifest.json", manifest)
    log.info("masked %d examples (%s curriculum)", manifest["total"], kind)
    return 0


# ---------------------------------------------------------------- report


def _quadrant(freq: int, degree: int, hf: int, rc: int) -> str:
    high_f = freq >= hf
    high_c = degree >= rc
    if high_f and high_c:
        return "HF-RC"
    if high_f:
        return "HF-only"
    if high_c:
        return "RC-only"
    return "neither"


def cmd_report(cfg: dict) -> int:
    _require(cfg, "out")
    out: Path = cfg["out"]
    for name in ("graph_nodes.tsv", "graph_edges.tsv", "lexicon.tsv", "build_stats.json"):
        _require_file(out / name, f"build artifact {name}")
    g = kg_mod.read_graph_index(out)
    lexicon, plan, stats = _load_artifacts(out)

    if not lexicon.entries:
        log.warning("lexicon is empty; writing empty report")
        (out / "concepts_report.tsv").write_text("", encoding="utf-8")
        _write_json(out / "coverage.json", {"stages": {}})
        return 0

    freqs = [e.frequency for e in lexicon.entries.values()]
    degrees = [g.degree(cid) for cid in lexicon.entries]
    hf = cfg["hf_threshold"] if cfg["hf_threshold"] is not None else int(statistics.median(freqs))
    rc = cfg["rc_threshold"] if cfg["rc_threshold"] is not None else int(statistics.median(degrees))

    lines = []
    for cid, entry in sorted(lexicon.entries.items()):
        degree = g.degree(cid)
        lines.append(f"{entry.surface}\t{degree}\t{entry.frequency}\t{_quadrant(entry.frequency, degree, hf, rc)}")
    (out / "concepts_report.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    coverage: dict[str, float] = {}
    if cfg.get("corpus"):
        _require_file(cfg["corpus"], "corpus")
        tokenizer = _tokenizer(cfg)
        annotated = _annotated_corpus(cfg, tokenizer, lexicon, cfg["max_length"])
        total_tokens = sum(len(a.sequence.tokens) for a in annotated)
        for stage in range(1, plan.num_stages + 1):
            eligible = plan.stage_set(stage)
            include_words = stage == plan.num_stages and plan.final_includes_all_words
            covered = 0
            for a in annotated:
                positions: set[int] = set()
                for span in a.spans:
                    if span.concept_id in eligible:
                        positions.update(range(span.token_start, span.token_end))
                if include_words:
                    covered_words: set[int] = set()
                    for span in a.spans:
                        covered_words.update(range(span.word_start, span.word_end))
                    for w, (ts, te) in enumerate(a.sequence.word_boundaries):
                        if w not in covered_words:
                            positions.update(range(ts, te))
                covered += len(positions)
            coverage[str(stage)] = round(covered / total_tokens, 6) if total_tokens else 0.0
    _write_json(
        out / "coverage.json",
        {"stages": coverage, "thresholds": {"hf": hf, "rc": rc}},
    )
    log.info("report written for %d concepts (hf>=%d, rc>=%d)", len(lexicon), hf, rc)
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(cfg: dict) -> int:
    _require(cfg, "out")
    out: Path = cfg["out"]
    for name in ("graph_nodes.tsv", "graph_edges.tsv", "lexicon.tsv", "plan.json", "build_stats.json"):
        _require_file(out / name, f"build artifact {name}")
    problems: list[str] = []

    g = kg_mod.read_graph_index(out)
    try:
        lexicon, plan, stats = _load_artifacts(out)
    except ValueError as exc:
        print(f"FAIL lexicon invariants: {exc}")
        return 1

    try:
        plan.check_nesting()
    except CurriculumError as exc:
        problems.append(f"plan nesting: {exc}")
    if not lexicon.ids() <= plan.stages[-1]:
        problems.append("final stage does not cover the lexicon")

    prov = plan.provenance
    if prov.get("graph_digest") and prov["graph_digest"] != g.digest():
        problems.append("plan provenance: graph digest mismatch")
    if prov.get("lexicon_digest") and prov["lexicon_digest"] != lexicon.digest():
        problems.append("plan provenance: lexicon digest mismatch")

    examples_path = out / "examples.jsonl"
    manifest_path = out / "manifest.json"
    if examples_path.exists() and manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        sched = ScheduleConfig(
            warmup_steps=manifest["warmup_steps"],
            steps_per_stage=manifest["steps_per_stage"],
            max_steps=manifest["max_steps"],
        )
        kind = manifest["curriculum"]
        if kind in ("ccm", "rarity", "reverse"):
            cycle = schedule_cycle(sched, manifest["visit_order"])
        elif kind == "length":
            cycle = [s for s in range(1, manifest["stages"] + 1) for _ in range(sched.steps_per_stage)]
        else:
            cycle = [0]
        counts: Counter = Counter()
        for i, ex in enumerate(masker_mod.read_examples_jsonl(examples_path)):
            counts[ex.stage] += 1
            if ex.step != i:
                problems.append(f"example {i}: step field is {ex.step}")
                break
            if len(ex.corrupted_tokens) != len(ex.original_tokens):
                problems.append(f"example {i}: corrupted length differs from original")
                break
            if ex.label_positions != sorted(set(ex.label_positions)):
                problems.append(f"example {i}: label positions not sorted/unique")
                break
            if ex.label_positions and not (
                0 <= ex.label_positions[0] and ex.label_positions[-1] < len(ex.original_tokens)
            ):
                problems.append(f"example {i}: label position out of range")
                break
            labeled = set(ex.label_positions)
            if any(
                o != c for p, (o, c) in enumerate(zip(ex.original_tokens, ex.corrupted_tokens))
                if p not in labeled
            ):
                problems.append(f"example {i}: unlabeled position was corrupted")
                break
            if ex.stage != cycle[i % len(cycle)]:
                problems.append(f"example {i}: stage {ex.stage} does not match schedule")
                break
        expected = {int(k): v for k, v in manifest["counts"].items()}
        if dict(counts) != expected:
            problems.append(f"per-stage counts {dict(counts)} differ from manifest {expected}")

    if problems:
        for p in problems:
            print(f"FAIL {p}")
        return 1
    print("OK all artifact invariants hold")
    return 0


# ---------------------------------------------------------------- main


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    verbosity = args.verbose + getattr(args, "verbose_sub", 0)
    logging.basicConfig(
        level=logging.DEBUG if verbosity > 1 else logging.INFO if verbosity else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    commands = {"build": cmd_build, "mask": cmd_mask, "report": cmd_report, "verify": cmd_verify}
    try:
        cfg = _load_config(args)
        return commands[args.command](cfg)
    except (ConfigError, CurriculumError, kg_mod.GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PhaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Generate a synthetic graph + corpus + vocab for desk-scale trend runs.

No corpus download is possible here, so this stands in for a small natural
corpus. Concepts sit in four rings of decreasing centrality: ring 0 is
densely interconnected and very frequent, each outer ring connects only to
the ring inside it and appears progressively more rarely. Sentences embed
a concept next to its actual graph neighbors plus Zipfian filler, so
masked-concept prediction is learnable from co-occurrence, and difficulty
rises ring by ring. With --hops 1 --stages 4 the curriculum stages align
with the rings.

Outputs: graph.tsv (edge list), corpus.txt (one sentence per line),
vocab.txt (whole-word vocabulary for the trainer). Deterministic per seed.
"""
import argparse
import itertools
import random
from pathlib import Path

RING_SIZES = [30, 60, 120, 240]
RING_ANCHOR_WEIGHT = [0.45, 0.25, 0.18, 0.12]
TWO_WORD_SHARE = 0.08  # rings 1..3 only
FILLER_POOL = 4000  # long Zipf tail, like the non-concept mass of real text

FUNCTION_WORDS = [
    "the", "a", "and", "near", "while", "under", "behind", "with",
    "seemed", "stayed", "was", "looked", "beside", "then",
]

TEMPLATES = [
    "{a} {f1} {f2} near the {b} and {c} {f3} {f4} {f5}",
    "the {a} {f1} {f2} behind {b} while {c} {f3} {f4} {f5}",
    "{a} {f1} beside the {b} {f2} {f3} and {c} {f4} {f5}",
    "under {a} the {b} {f1} {f2} {f3} with {c} {f4} {f5}",
    "{a} {f1} near {b} {f2} then {c} {f3} {f4} {f5}",
]

CONSONANTS = "bdfgklmnprstvz"
VOWELS = "aeiou"


def syllable_words(count: int, rng: random.Random, syllables: int = 3) -> list[str]:
    pool = ["".join(p) for p in itertools.product(CONSONANTS, VOWELS)]
    words: set[str] = set()
    while len(words) < count:
        words.add("".join(rng.choice(pool) for _ in range(syllables)))
    out = sorted(words)
    rng.shuffle(out)
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("toy"))
    ap.add_argument("--sentences", type=int, default=170_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    words = syllable_words(sum(RING_SIZES) + FILLER_POOL, rng)
    rings: list[list[str]] = []
    idx = 0
    for size in RING_SIZES:
        rings.append(words[idx : idx + size])
        idx += size
    filler = words[idx:]

    # two-word concepts built from same-ring singles (rings 1..3)
    for ring_i in (1, 2, 3):
        singles = rings[ring_i]
        n_two = int(len(singles) * TWO_WORD_SHARE)
        pairs = []
        for _ in range(n_two):
            a, b = rng.sample(singles, 2)
            pairs.append(f"{a} {b}")
        rings[ring_i] = singles + pairs

    edges: set[tuple[str, str]] = set()

    def add_edge(a: str, b: str) -> None:
        if a != b:
            edges.add((a, b) if a < b else (b, a))

    for c in rings[0]:
        for peer in rng.sample([x for x in rings[0] if x != c], 12):
            add_edge(c, peer)
    for ring_i in (1, 2, 3):
        inner = rings[ring_i - 1]
        for c in rings[ring_i]:
            if " " in c:
                for part in c.split():
                    add_edge(c, part)  # compound links to its components
            for peer in rng.sample(inner, rng.randint(2, 4)):
                add_edge(c, peer)

    adjacency: dict[str, list[str]] = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    for c in adjacency:
        adjacency[c].sort()

    concepts = [c for ring in rings for c in ring]
    anchor_weights = []
    for ring_i, ring in enumerate(rings):
        anchor_weights += [RING_ANCHOR_WEIGHT[ring_i] / len(ring)] * len(ring)

    # Zipfian filler: heavy tail so final-stage whole-word masking still
    # contains genuinely rare targets, as natural text would
    filler_weights = [(r + 2) ** -1.05 for r in range(len(filler))]

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    with (out / "graph.tsv").open("w", encoding="utf-8") as fh:
        fh.write("# synthetic ringed concept graph\n")
        for a, b in sorted(edges):
            fh.write(f"RelatedTo\t{a.replace(' ', '_')}\t{b.replace(' ', '_')}\n")

    with (out / "corpus.txt").open("w", encoding="utf-8") as fh:
        for _ in range(args.sentences):
            anchor = rng.choices(concepts, weights=anchor_weights, k=1)[0]
            neighbors = adjacency.get(anchor, [])
            picks = rng.sample(neighbors, min(2, len(neighbors))) if neighbors else []
            while len(picks) < 2:
                picks.append(rng.choices(filler, weights=filler_weights, k=1)[0])
            f1, f2, f3, f4, f5 = rng.choices(filler, weights=filler_weights, k=5)
            sentence = rng.choice(TEMPLATES).format(
                a=anchor, b=picks[0], c=picks[1], f1=f1, f2=f2, f3=f3, f4=f4, f5=f5
            )
            fh.write(sentence + "\n")

    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += FUNCTION_WORDS
    seen = set(vocab)
    for w in words:
        if w not in seen:
            seen.add(w)
            vocab.append(w)
    (out / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")

    print(
        f"wrote {len(edges)} edges, {args.sentences} sentences, "
        f"{len(vocab)} vocab pieces to {out}/"
    )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate the committed toy fixtures (tests/data/).

A ~50-node themed concept graph and a 500-line corpus whose sentences
embed concept surfaces next to their graph neighbors, so the toy
pipeline produces a non-trivial lexicon and curriculum. Deterministic
(seed 0); rerunning is byte-stable.
"""
import random
from pathlib import Path

THEMES = {
    "animals": ["dog", "cat", "horse", "cow", "sheep", "rabbit", "polar bear",
                "mouse", "bird", "fish", "animal"],
    "food": ["bread", "cheese", "milk", "apple", "ice cream", "hot dog",
             "soup", "rice", "butter", "honey", "food"],
    "school": ["school", "teacher", "student", "book", "library", "lesson",
               "high school", "classroom", "homework", "university"],
    "city": ["city", "street", "house", "market", "train station", "park",
             "bridge", "river", "tower", "harbor"],
    "weather": ["rain", "snow", "wind", "storm", "cloud", "sun", "winter",
                "summer", "thunder", "weather"],
}

BRIDGES = [
    ("dog", "house"), ("cat", "house"), ("horse", "street"), ("cow", "milk"),
    ("sheep", "winter"), ("fish", "river"), ("fish", "food"), ("bird", "park"),
    ("apple", "market"), ("bread", "market"), ("student", "city"),
    ("teacher", "book"), ("school", "street"), ("library", "city"),
    ("rain", "river"), ("snow", "winter"), ("sun", "summer"), ("storm", "harbor"),
    ("hot dog", "market"), ("ice cream", "summer"), ("train station", "street"),
    ("high school", "student"), ("university", "library"), ("park", "sun"),
    ("animal", "food"), ("weather", "city"),
]

TEMPLATES = [
    "the {a} was near the {b} all morning",
    "every {a} in the {b} looked quiet today",
    "people saw a {a} beside the {b} after lunch",
    "a small {a} stood by the {b} for hours",
    "the old {a} and the {b} were famous here",
    "children liked the {a} more than the {b}",
    "nobody expected the {a} behind the {b} that evening",
    "the {a} near our {b} seemed very calm",
]

FILLER = ["yesterday", "quietly", "suddenly", "perhaps", "together", "downtown",
          "outside", "nearby", "slowly", "often"]

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> None:
    rng = random.Random(0)
    edges: list[tuple[str, str, str]] = []
    for concepts in THEMES.values():
        hub = concepts[-1]
        for c in concepts[:-1]:
            edges.append(("RelatedTo", c, hub))
        for i in range(len(concepts) - 1):
            for j in range(i + 1, len(concepts) - 1):
                if rng.random() < 0.25:
                    edges.append(("RelatedTo", concepts[i], concepts[j]))
    for a, b in BRIDGES:
        edges.append(("RelatedTo", a, b))

    OUT.mkdir(parents=True, exist_ok=True)
    with (OUT / "toy_graph.tsv").open("w", encoding="utf-8") as fh:
        fh.write("# toy fixture graph\n")
        for rel, a, b in edges:
            fh.write(f"{rel}\t{a.replace(' ', '_')}\t{b.replace(' ', '_')}\n")

    pairs = [(a, b) for _rel, a, b in edges]
    lines = []
    for _ in range(500):
        a, b = rng.choice(pairs)
        if rng.random() < 0.5:
            a, b = b, a
        line = rng.choice(TEMPLATES).format(a=a, b=b)
        if rng.random() < 0.4:
            line = f"{line} {rng.choice(FILLER)}"
        lines.append(line)
    (OUT / "toy_corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(edges)} edges and {len(lines)} corpus lines to {OUT}")


if __name__ == "__main__":
    main()

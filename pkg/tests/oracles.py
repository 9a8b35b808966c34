"""Independent reference implementations the tests check against.

Nothing here may call into ccmask's traversal, matching, or scheduling
code; these are the other side of every dual-route check.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


def hop_distances(n: int, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    """All-pairs shortest-path hop counts via scipy, not the package BFS."""
    edges = list(edges)
    if not edges:
        m = csr_matrix((n, n))
    else:
        rows = [a for a, b in edges] + [b for a, b in edges]
        cols = [b for a, b in edges] + [a for a, b in edges]
        m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return shortest_path(m, method="D", unweighted=True)


def khop_oracle(dist: np.ndarray, seeds: set[int], k: int) -> set[int]:
    """Nodes at hop distance 1..k from any seed (seeds excluded)."""
    out = set()
    for v in range(dist.shape[0]):
        d = min(dist[s, v] for s in seeds)
        if 1 <= d <= k:
            out.add(v)
    return out


def stages_oracle(
    dist: np.ndarray,
    s1: set[int],
    lex_ids: set[int],
    k: int,
    stages: int,
) -> list[set[int]]:
    """Iterated k-hop expansion using the distance matrix."""
    current = set(s1) & lex_ids
    out = [set(current)]
    for _ in range(2, stages):
        reach = khop_oracle(dist, current, k)
        current = current | (reach & lex_ids)
        out.append(set(current))
    out.append(set(lex_ids))
    return out


def naive_scan(
    patterns: dict[tuple[str, ...], int],
    max_len: int,
    words: Sequence[str],
) -> set[tuple[int, int, int]]:
    """Test every (start, length <= max_len) window against the pattern set."""
    hits = set()
    n = len(words)
    for i in range(n):
        for length in range(1, min(max_len, n - i) + 1):
            pid = patterns.get(tuple(words[i : i + length]))
            if pid is not None:
                hits.add((pid, i, i + length))
    return hits


def naive_counts(
    patterns: dict[tuple[str, ...], int],
    max_len: int,
    word_lists: Iterable[Sequence[str]],
) -> Counter:
    """Quadratic per-sentence window scan, counting every occurrence."""
    counts: Counter = Counter()
    for words in word_lists:
        n = len(words)
        for i in range(n):
            for length in range(1, min(max_len, n - i) + 1):
                pid = patterns.get(tuple(words[i : i + length]))
                if pid is not None:
                    counts[pid] += 1
    return counts


def unroll_oracle(warmup: int, per_stage: int, stage_order: Sequence[int], total: int) -> list[int]:
    cycle = [0] * warmup
    for s in stage_order:
        cycle.extend([s] * per_stage)
    return [cycle[t % len(cycle)] for t in range(total)]

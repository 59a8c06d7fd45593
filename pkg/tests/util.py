"""Shared helpers for the test suite: small-instance sampling and
independent oracles that do not go through the code under test."""

from __future__ import annotations

from functools import lru_cache

from maxqp import GeneratorSpec, SplitMix64, WeightedGraph, generate


def random_graph(seed: int, n: int, m: int, real: bool = False) -> WeightedGraph:
    m = min(m, n * (n - 1) // 2)
    return generate(GeneratorSpec("sparse-random", seed, {"n": n, "m": m, "real": real}))


def sample_small(seed: int, max_n: int = 12, real_every: int = 3):
    """One reproducible small instance per seed; weights alternate unit/real."""
    rng = SplitMix64(seed)
    n = 2 + rng.randrange(max_n - 1)
    m = rng.randrange(n * (n - 1) // 2 + 1)
    return random_graph(10_000 + seed, n, m, real=(seed % real_every == 0))


def exhaustive_opt(G: WeightedGraph) -> float:
    """Plain enumeration of all 2^n assignments; intentionally naive."""
    best = 0.0
    for mask in range(1 << G.n):
        x = [1 if mask >> i & 1 else -1 for i in range(G.n)]
        val = sum(w * x[u] * x[v] for u, v, w in G.edges)
        best = max(best, val)
    return best


def max_matching_size(G: WeightedGraph) -> int:
    """Maximum-cardinality matching size by bitmask DP over vertex subsets."""
    pairs = [(u, v) for u, v, _ in G.edges]

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        out = best(mask & ~(1 << v))  # leave v unmatched
        for a, b in pairs:
            if (a == v or b == v) and mask >> a & 1 and mask >> b & 1:
                out = max(out, 1 + best(mask & ~(1 << a) & ~(1 << b)))
        return out

    result = best((1 << G.n) - 1)
    best.cache_clear()
    return result


def is_bipartite(G: WeightedGraph) -> bool:
    color = [0] * G.n
    for s in range(G.n):
        if color[s]:
            continue
        color[s] = 1
        stack = [s]
        while stack:
            v = stack.pop()
            for u, _ in G.adjacency[v]:
                if color[u] == 0:
                    color[u] = -color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True

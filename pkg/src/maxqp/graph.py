"""Core instance/solution types and the sign-flip composition primitives.

The objective used everywhere is the edge-based sum over stored undirected
edges: val_x(G) = sum over {u,v} in E of a_uv * x_u * x_v.  This is half of
the full symmetric double sum over the matrix A; one convention is used
throughout and all reported values follow it.

Vertex ids are 0-based in this module; the file formats in :mod:`maxqp.io`
translate from the 1-based external convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

#: absolute tolerance for float value comparisons (integer weights are exact)
VALUE_TOL = 1e-9


class WeightedGraph:
    """Symmetric sparse MaxQP instance as an undirected edge-weighted graph.

    Immutable after construction: no self-loops, each unordered edge stored
    once with a nonzero weight.  `unit` is true iff every |w| == 1.
    """

    __slots__ = ("n", "edges", "adjacency", "unit", "_arrays")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]]):
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        canon = []
        seen = set()
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"vertex id out of range: ({u}, {v})")
            if u == v:
                raise ValidationError(f"self-loop on vertex {u} is not allowed")
            if not math.isfinite(w):
                raise ValidationError(f"non-finite weight on edge ({u}, {v})")
            if w == 0:
                raise ValidationError(f"zero weight on edge ({u}, {v})")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v, float(w)))
        canon.sort()
        self.n = n
        self.edges = canon
        adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in canon:
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        self.adjacency = adjacency
        self.unit = all(abs(w) == 1.0 for _, _, w in canon)
        self._arrays = None

    @classmethod
    def _from_canonical(cls, n: int, edges: list[tuple[int, int, float]]):
        """Fast path for generators: edges already unique, u < v, nonzero."""
        self = cls.__new__(cls)
        self.n = n
        self.edges = sorted(edges)
        adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        self.adjacency = adjacency
        self.unit = all(w == 1.0 or w == -1.0 for _, _, w in self.edges)
        self._arrays = None
        return self

    def edge_arrays(self):
        """Cached (u, v, w) numpy columns of the edge list, for bulk passes."""
        if self._arrays is None:
            import numpy as np

            cols = np.array(self.edges, dtype=np.float64).reshape(-1, 3)
            eu = cols[:, 0].astype(np.int64)
            ev = cols[:, 1].astype(np.int64)
            ew = np.ascontiguousarray(cols[:, 2])
            self._arrays = (eu, ev, ew)
        return self._arrays

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        """Weight of edge {u, v}; raises if the edge is absent."""
        for x, w in self.adjacency[u]:
            if x == v:
                return w
        raise ValidationError(f"no edge ({u}, {v})")

    def has_edge(self, u: int, v: int) -> bool:
        return any(x == v for x, _ in self.adjacency[u])

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m}, unit={self.unit})"


def load_graph(n: int, entries: Iterable[tuple[int, int, float]]) -> WeightedGraph:
    """Build a graph from raw (possibly asymmetric/duplicated) entries.

    All entries for the same unordered pair are merged by averaging, the
    symmetrization rule a' = (a_uv + a_vu) / 2 applied uniformly.  Pairs whose
    average is zero are dropped.  Self-loops are rejected.
    """
    sums: dict[tuple[int, int], float] = {}
    counts: dict[tuple[int, int], int] = {}
    for u, v, w in entries:
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"vertex id out of range: ({u}, {v})")
        if u == v:
            raise ValidationError(f"self-loop on vertex {u} is not allowed")
        if not math.isfinite(w):
            raise ValidationError(f"non-finite weight on edge ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        sums[key] = sums.get(key, 0.0) + float(w)
        counts[key] = counts.get(key, 0) + 1
    merged = []
    for key in sorted(sums):
        w = sums[key] / counts[key]
        if w != 0.0:
            merged.append((key[0], key[1], w))
    return WeightedGraph(n, merged)


@dataclass(frozen=True)
class Assignment:
    """A vector x in {-1,+1}^n with its cached objective value."""

    values: tuple[int, ...]
    value: float

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.values):
            raise ValidationError("assignment entries must be -1 or +1")


def evaluate(G: WeightedGraph, values: Sequence[int]) -> float:
    """Edge-based objective: sum of a_uv * x_u * x_v over stored edges."""
    if len(values) != G.n:
        raise ValidationError(f"assignment length {len(values)} != n = {G.n}")
    total = 0.0
    for u, v, w in G.edges:
        total += w * values[u] * values[v]
    return total


def solution(G: WeightedGraph, values: Sequence[int]) -> Assignment:
    """Wrap a sign vector as an Assignment with its evaluated value."""
    return Assignment(tuple(values), evaluate(G, values))


def evaluate_partial(G: WeightedGraph, signs: Mapping[int, int]) -> float:
    """Objective restricted to edges with both endpoints in `signs`."""
    total = 0.0
    for u, su in signs.items():
        for v, w in G.adjacency[u]:
            if u < v and v in signs:
                total += w * su * signs[v]
    return total


def _normalize_subset(
    G: WeightedGraph,
    vertices: Sequence[int],
    start: Mapping[int, int] | None = None,
) -> tuple[dict[int, int], float]:
    """Single vertex scan making every back-edge partial sum nonnegative.

    Scans `vertices` in increasing id order; for each vertex the contribution
    of its edges to already-scanned vertices is made >= 0 by flipping the
    vertex if needed.  Returns the signs and the resulting value on the
    induced subgraph, which is >= 0.
    """
    order = sorted(vertices)
    inset = set(order)
    signs: dict[int, int] = {}
    total = 0.0
    for i in order:
        s = start[i] if start is not None else 1
        z = 0.0
        for j, w in G.adjacency[i]:
            if j < i and j in inset:
                z += w * s * signs[j]
        if z < 0:
            s = -s
            z = -z
        signs[i] = s
        total += z
    return signs, total


def normalize_nonneg(G: WeightedGraph, start: Assignment | None = None) -> Assignment:
    """Compute an assignment with value >= 0 in O(n + m).

    Starts from `start` (all +1 when absent) and flips vertices left to right
    whenever the partial contribution of back-edges is negative.
    """
    base = start.values if start is not None else None
    if base is not None and len(base) != G.n:
        raise ValidationError("start assignment length mismatch")
    signs, total = _normalize_subset(
        G, range(G.n), dict(enumerate(base)) if base is not None else None
    )
    values = tuple(signs[i] for i in range(G.n))
    return Assignment(values, total)


def cross_contribution(
    G: WeightedGraph, x1: Mapping[int, int], x2: Mapping[int, int]
) -> float:
    """Sum of a_uv * x_u * x_v over edges between the two vertex sets."""
    small, big = (x1, x2) if len(x1) <= len(x2) else (x2, x1)
    total = 0.0
    for u, su in small.items():
        for v, w in G.adjacency[u]:
            if v in big:
                total += w * su * big[v]
    return total


def combine_disjoint(
    G: WeightedGraph,
    x1: Mapping[int, int],
    x2: Mapping[int, int],
    z1: float | None = None,
    z2: float | None = None,
) -> tuple[dict[int, int], float]:
    """Merge solutions of two disjoint induced subgraphs without losing value.

    Returns whichever of x1 u x2 and (-x1) u x2 has value >= z1 + z2 on the
    union (the unflipped one when both qualify), together with that value.
    `z1`/`z2` may be passed to skip re-evaluation.
    """
    if any(v in x2 for v in x1):
        raise ValidationError("vertex sets of the two solutions overlap")
    if z1 is None:
        z1 = evaluate_partial(G, x1)
    if z2 is None:
        z2 = evaluate_partial(G, x2)
    c = cross_contribution(G, x1, x2)
    combined = dict(x2)
    if c >= 0:
        combined.update(x1)
        return combined, z1 + z2 + c
    combined.update((v, -s) for v, s in x1.items())
    return combined, z1 + z2 - c


def extend_from_induced(G: WeightedGraph, x: Mapping[int, int]) -> Assignment:
    """Complete a solution on an induced subgraph to all of G.

    The remainder is solved to nonnegative value by the scan above and glued
    on with the sign choice of `combine_disjoint`, so the result has value
    >= the value of x on the induced subgraph.
    """
    for v in x:
        if not 0 <= v < G.n:
            raise ValidationError(f"vertex id out of range: {v}")
    rest = [v for v in range(G.n) if v not in x]
    if not rest:
        values = tuple(x[i] for i in range(G.n))
        return Assignment(values, evaluate(G, values))
    signs0, z0 = _normalize_subset(G, rest)
    combined, total = combine_disjoint(G, x, signs0, z2=z0)
    values = tuple(combined[i] for i in range(G.n))
    return Assignment(values, total)


@dataclass(frozen=True)
class InstanceStats:
    abs_weight: float
    max_degree: int
    degeneracy: int
    density: Fraction = field(default_factory=lambda: Fraction(0))


def degeneracy_order(G: WeightedGraph) -> tuple[int, list[int]]:
    """Degeneracy and a peeling order via repeated minimum-degree removal.

    Bucket-queue implementation, O(n + m).
    """
    n = G.n
    if n == 0:
        return 0, []
    deg = [G.degree(v) for v in range(n)]
    maxdeg = max(deg)
    buckets: list[list[int]] = [[] for _ in range(maxdeg + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    removed = [False] * n
    order = []
    d = 0
    cur = 0
    while len(order) < n:
        if not buckets[cur]:
            cur += 1
            continue
        v = buckets[cur].pop()
        # lazy deletion: skip entries that were re-bucketed at a lower degree
        if removed[v] or deg[v] != cur:
            continue
        removed[v] = True
        order.append(v)
        d = max(d, cur)
        for u, _ in G.adjacency[v]:
            if not removed[u]:
                deg[u] -= 1
                buckets[deg[u]].append(u)
                if deg[u] < cur:
                    cur = deg[u]
    return d, order


def stats(G: WeightedGraph) -> InstanceStats:
    """Exact max degree, degeneracy, density m/n, and total absolute weight."""
    abs_weight = sum(abs(w) for _, _, w in G.edges)
    max_degree = max((G.degree(v) for v in range(G.n)), default=0)
    d, _ = degeneracy_order(G)
    density = Fraction(G.m, G.n) if G.n else Fraction(0)
    return InstanceStats(abs_weight, max_degree, d, density)


def induced_subgraph(
    G: WeightedGraph, vertices: Iterable[int]
) -> tuple[WeightedGraph, list[int]]:
    """Induced subgraph with vertices relabeled 0..k-1 in increasing id order.

    Returns the subgraph and `old_of`, mapping new ids back to ids in G.
    """
    old_of = sorted(set(vertices))
    new_of = {old: new for new, old in enumerate(old_of)}
    edges = []
    for u, v, w in G.edges:
        if u in new_of and v in new_of:
            edges.append((new_of[u], new_of[v], w))
    return WeightedGraph(len(old_of), edges), old_of

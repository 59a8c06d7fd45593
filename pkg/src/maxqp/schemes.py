"""Layering- and partition-based (1 - eps)-approximation schemes.

Both schemes delete a small residue class of the instance, solve the
remainder exactly with the treewidth engine, and lift the solution back.
Neither verifies minor-freeness; they verify the consequence they actually
need (the achieved decomposition widths) and fail loudly otherwise.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, ValidationError
from .graph import (
    WeightedGraph,
    combine_disjoint,
    extend_from_induced,
    induced_subgraph,
)
from .packing import ApproxResult
from .treewidth import DEFAULT_WIDTH_CAP, solve_exact


@dataclass(frozen=True)
class LayerStructure:
    """BFS layers; layer indices are shared across connected components."""

    layers: tuple[tuple[int, ...], ...]
    layer_of: tuple[int, ...]

    def residue_classes(self, k: int) -> list[list[int]]:
        """Class i = union of layers whose index is congruent to i mod k."""
        classes: list[list[int]] = [[] for _ in range(k)]
        for v, li in enumerate(self.layer_of):
            classes[li % k].append(v)
        return classes


def bfs_layers(G: WeightedGraph, root: int | None = None) -> LayerStructure:
    """Exact BFS distance layers.

    Components are processed in increasing min-id order; each runs its own
    BFS (from `root` for the component containing it, from the minimum id
    otherwise) and the layer indices of all components are shared.
    """
    if root is not None and not 0 <= root < G.n:
        raise ValidationError(f"root {root} out of range")
    layer_of = [-1] * G.n
    layers: list[list[int]] = []
    seen = [False] * G.n
    for seed in range(G.n):
        if seen[seed]:
            continue
        # find this component and pick its start vertex
        comp = []
        dq = deque([seed])
        seen[seed] = True
        while dq:
            v = dq.popleft()
            comp.append(v)
            for u, _ in G.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    dq.append(u)
        start = root if root is not None and root in comp else seed
        dist = {start: 0}
        dq = deque([start])
        while dq:
            v = dq.popleft()
            d = dist[v]
            layer_of[v] = d
            while len(layers) <= d:
                layers.append([])
            layers[d].append(v)
            for u, _ in G.adjacency[v]:
                if u not in dist:
                    dist[u] = d + 1
                    dq.append(u)
    return LayerStructure(
        tuple(tuple(sorted(layer)) for layer in layers), tuple(layer_of)
    )


def _solve_induced_exact(G, vertices, width_cap, label):
    """Exact signs for G[vertices] as a dict on original ids."""
    sub, old_of = induced_subgraph(G, vertices)
    try:
        sol, _ = solve_exact(sub, width_cap)
    except CapacityError as e:
        raise CapacityError(
            f"width cap exceeded while solving {label} (width {e.achieved})",
            achieved=e.achieved,
        ) from e
    return {old_of[i]: s for i, s in enumerate(sol.values)}, sol.value


def solve_baker(
    G: WeightedGraph, eps: float, width_cap: int = DEFAULT_WIDTH_CAP
) -> ApproxResult:
    """Layering scheme: delete one residue class mod k, solve the rest exactly.

    k is the smallest integer with 4/k <= eps.  Returns the best of the k
    lifted solutions; value >= (1 - eps) * opt on instances where every
    remainder fits the width cap.
    """
    if not 0 < eps <= 1:
        raise ValidationError("epsilon must be in (0, 1]")
    k = math.ceil(4 / eps)
    structure = bfs_layers(G)
    classes = structure.residue_classes(k)
    best = None
    best_i = -1
    for i in range(k):
        drop = set(classes[i])
        keep = [v for v in range(G.n) if v not in drop]
        signs, _ = _solve_induced_exact(G, keep, width_cap, f"G_{i}")
        sol = extend_from_induced(G, signs)
        if best is None or sol.value > best.value:
            best, best_i = sol, i
    guarantee = Fraction(max(k - 4, 0), k)
    cert = {"epsilon": eps, "k": k, "chosen_class": best_i}
    return ApproxResult(best, guarantee, cert)


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint cover of V used by the partition scheme."""

    parts: tuple[tuple[int, ...], ...]
    source: str  # "external-file" | "bfs-layer-heuristic"

    @property
    def k(self) -> int:
        return len(self.parts)


def load_partition(n: int, raw_parts, source: str = "external-file") -> VertexPartition:
    """Validate an externally supplied partition: disjoint cover of V."""
    seen: set[int] = set()
    parts = []
    for part in raw_parts:
        pset = set(part)
        if any(not 0 <= v < n for v in pset):
            raise ValidationError("partition mentions an out-of-range vertex")
        if pset & seen:
            raise ValidationError("partition parts overlap")
        seen |= pset
        parts.append(tuple(sorted(pset)))
    if seen != set(range(n)):
        raise ValidationError("partition does not cover every vertex")
    if not parts:
        raise ValidationError("partition must have at least one part")
    return VertexPartition(tuple(parts), source)


def heuristic_partition(G: WeightedGraph, k: int) -> VertexPartition:
    """Part i = vertices whose BFS layer index is congruent to i mod k.

    For planar-like inputs the union of any k-1 parts tends to have small
    treewidth; the scheme checks achieved widths rather than assuming it.
    """
    if k < 1:
        raise ValidationError("k must be at least 1")
    classes = bfs_layers(G).residue_classes(k)
    return VertexPartition(
        tuple(tuple(c) for c in classes), "bfs-layer-heuristic"
    )


def solve_partition_scheme(
    G: WeightedGraph,
    eps: float,
    partition: VertexPartition | None = None,
    width_cap: int = DEFAULT_WIDTH_CAP,
) -> ApproxResult:
    """Partition scheme for unit instances: drop each part's boundary edges.

    For every part V_i, G[V_i] and G[V \\ V_i] are solved exactly and glued
    with the lossless disjoint-union composition; the best of the k results
    is returned.  With h = max(1, ceil(m/n)) witnessing the instance's edge
    density, the default k = ceil(6h/eps) makes the best solution
    (1 - eps)-approximate whenever every subproblem fits the width cap.
    """
    if not G.unit:
        raise ValidationError("partition scheme requires unit weights")
    if not 0 < eps <= 1:
        raise ValidationError("epsilon must be in (0, 1]")
    if G.n == 0:
        return ApproxResult(extend_from_induced(G, {}), Fraction(1), {"k": 0})
    h = max(1, math.ceil(G.m / G.n))
    if partition is None:
        k = math.ceil(6 * h / eps)
        partition = heuristic_partition(G, k)
    k = partition.k
    best = None
    best_i = -1
    for i, part in enumerate(partition.parts):
        inside = list(part)
        outside = [v for v in range(G.n) if v not in set(part)]
        if inside and outside:
            x1, z1 = _solve_induced_exact(G, inside, width_cap, f"G[V_{i}]")
            x2, z2 = _solve_induced_exact(G, outside, width_cap, f"G[V \\ V_{i}]")
            signs, _ = combine_disjoint(G, x1, x2, z1=z1, z2=z2)
        else:
            signs, _ = _solve_induced_exact(G, inside or outside, width_cap, f"G_{i}")
        sol = extend_from_induced(G, signs)
        if best is None or sol.value > best.value:
            best, best_i = sol, i
    guarantee = Fraction(max(k - 6 * h, 0), k)
    cert = {
        "epsilon": eps,
        "k": k,
        "h": h,
        "partition_source": partition.source,
        "chosen_part": best_i,
    }
    return ApproxResult(best, guarantee, cert)

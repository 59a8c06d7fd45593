"""Local structures: good/bad predicates, easy packings, and the three
matching/packing-based approximation drivers.

An *easy* subgraph is a connected split graph whose clique side is a single
center edge, whose remaining (outside) vertices form an independent set
adjacent only to the center endpoints, and which contains no bad triangle.
Packing disjoint easy subgraphs yields a solution worth one unit per packed
edge on unit-weight instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InternalError, ValidationError
from .graph import (
    Assignment,
    WeightedGraph,
    cross_contribution,
    extend_from_induced,
    induced_subgraph,
    stats,
)
from .matching import Matching, greedy_sorted_matching, maximal_matching, maximum_matching


def edge_is_good(G: WeightedGraph, values, u: int, v: int) -> bool:
    """True iff a_uv * x_u * x_v > 0 for the given assignment."""
    w = G.weight(u, v)
    return w * values[u] * values[v] > 0


def triangle_is_good(G: WeightedGraph, u: int, v: int, w: int) -> bool:
    """True iff the three (unit) weights of the triangle multiply to +1.

    Exactly the triangles all of whose edges can be made good simultaneously.
    """
    if not G.unit:
        raise ValidationError("triangle predicate requires unit weights")
    p = G.weight(u, v) * G.weight(v, w) * G.weight(w, u)
    return p > 0


@dataclass(frozen=True)
class EasyPacking:
    """Disjoint vertex sets each inducing an easy subgraph of G."""

    parts: tuple[tuple[int, ...], ...]
    centers: tuple[tuple[int, int], ...]
    edge_count: int
    covered: frozenset[int]
    leftover: frozenset[int]


def _part_edge_count(G: WeightedGraph, part) -> int:
    inpart = set(part)
    return sum(
        1 for u in part for v, _ in G.adjacency[u] if u < v and v in inpart
    )


def check_easy_packing(G: WeightedGraph, P: EasyPacking) -> None:
    """Structural validator; raises ValidationError on any breach."""
    seen: set[int] = set()
    for part, (cu, cv) in zip(P.parts, P.centers):
        pset = set(part)
        if pset & seen:
            raise ValidationError("packing parts are not disjoint")
        seen |= pset
        if cu not in pset or cv not in pset:
            raise ValidationError("center endpoints not inside their part")
        if not G.has_edge(cu, cv):
            raise ValidationError(f"center pair ({cu}, {cv}) is not an edge")
        outside = pset - {cu, cv}
        for o in outside:
            nbrs = {v for v, _ in G.adjacency[o] if v in pset}
            if not nbrs:
                raise ValidationError(f"part is disconnected at vertex {o}")
            if not nbrs <= {cu, cv}:
                raise ValidationError(
                    f"outside vertex {o} adjacent to a non-center vertex"
                )
            if nbrs == {cu, cv} and not triangle_is_good(G, o, cu, cv):
                raise ValidationError(
                    f"bad triangle ({o}, {cu}, {cv}) inside a part"
                )
    if seen != set(P.covered):
        raise ValidationError("covered set disagrees with parts")
    expected = sum(_part_edge_count(G, part) for part in P.parts)
    if expected != P.edge_count:
        raise ValidationError("edge_count disagrees with parts")


def _packing_from_parts(G: WeightedGraph, parts, centers) -> EasyPacking:
    covered = frozenset(v for part in parts for v in part)
    leftover = frozenset(range(G.n)) - covered
    edge_count = sum(_part_edge_count(G, part) for part in parts)
    return EasyPacking(
        tuple(tuple(sorted(p)) for p in parts),
        tuple(centers),
        edge_count,
        covered,
        leftover,
    )


def matching_to_solution(G: WeightedGraph, M: Matching) -> Assignment:
    """Solution with value >= w(M), built edge by edge in O(m) total.

    Each matched pair is oriented so its own edge contributes |a_uv|, then
    glued onto the accumulated solution with the sign choice that keeps the
    cross contribution nonnegative.  Unmatched vertices are filled in by the
    nonnegative scan and glued on the same way.
    """
    n = G.n
    adj = G.adjacency
    signs = [0] * n
    total = 0.0
    k = len(M.edges)
    if k:
        eu, ev, ew = G.edge_arrays()
        me = np.array(M.edges, dtype=np.int64)
        pidx = np.full(n, -1, dtype=np.int64)
        pidx[me[:, 0]] = np.arange(k)
        pidx[me[:, 1]] = np.arange(k)
        pu, pv = pidx[eu], pidx[ev]
        # each pair's own edge weight (the matched edge is the only in-pair edge)
        own = np.flatnonzero((pu == pv) & (pu >= 0))
        pw = np.empty(k)
        pw[pu[own]] = ew[own]
        sv0 = np.where(pw > 0, 1.0, -1.0)
        # cross edges between distinct pairs, bucketed by the later-placed pair
        ci = np.flatnonzero((pu >= 0) & (pv >= 0) & (pu != pv))
        order = ci[np.argsort(np.maximum(pu[ci], pv[ci]), kind="stable")]
        bp = np.maximum(pu[order], pv[order])
        u_in_later = pu[order] == bp
        this_end = np.where(u_in_later, eu[order], ev[order])
        known = np.where(u_in_later, ev[order], eu[order]).tolist()
        # fold the tentative sign of the later endpoint into the coefficient
        coeff = (ew[order] * np.where(this_end == me[bp, 0], 1.0, sv0[bp])).tolist()
        starts = np.searchsorted(bp, np.arange(k + 1)).tolist()
        pwl, svl = pw.tolist(), sv0.tolist()
        mul, mvl = me[:, 0].tolist(), me[:, 1].tolist()
        for i in range(k):
            c = 0.0
            for t in range(starts[i], starts[i + 1]):
                c += coeff[t] * signs[known[t]]
            su, sv = 1, int(svl[i])
            if c < 0:
                su, sv, c = -su, -sv, -c
            signs[mul[i]] = su
            signs[mvl[i]] = sv
            total += abs(pwl[i]) + c
    # remainder: nonnegative scan among unmatched vertices only
    rest_val = 0.0
    for i in range(n):
        if M.matched[i] is not None:
            continue
        s = 1
        z = 0.0
        for j, wj in adj[i]:
            if j < i and M.matched[j] is None:
                z += wj * s * signs[j]
        if z < 0:
            s, z = -s, -z
        signs[i] = s
        rest_val += z
    # glue the two halves; flip the matched side if the cut is negative
    if k and 2 * k < n:
        sarr = np.array(signs, dtype=np.float64)
        inm = pidx >= 0
        cross = np.flatnonzero(inm[eu] != inm[ev])
        c = float(np.dot(ew[cross], sarr[eu[cross]] * sarr[ev[cross]]))
        if c < 0:
            for i in range(n):
                if M.matched[i] is not None:
                    signs[i] = -signs[i]
            c = -c
        total += c
    return Assignment(tuple(signs), total + rest_val)


def packing_to_solution(G: WeightedGraph, P: EasyPacking) -> Assignment:
    """Solution with value >= m(F) for a valid easy packing of a unit instance.

    Within each part the center edge is oriented first; every outside vertex
    copies the sign forced by its center neighbor(s).  Good-triangle closure
    makes each in-part edge contribute +1.
    """
    if not G.unit:
        raise ValidationError("packing_to_solution requires unit weights")
    signs: dict[int, int] = {}
    total = 0.0
    for part, (cu, cv) in zip(P.parts, P.centers):
        pset = set(part)
        local = {cu: 1, cv: 1 if G.weight(cu, cv) > 0 else -1}
        for o in part:
            if o in (cu, cv):
                continue
            nbrs = {v: w for v, w in G.adjacency[o] if v in pset}
            forced = None
            for c in (cu, cv):
                if c in nbrs:
                    want = local[c] * (1 if nbrs[c] > 0 else -1)
                    if forced is None:
                        forced = want
                    elif forced != want:
                        raise ValidationError(
                            f"bad triangle ({o}, {cu}, {cv}) inside a part"
                        )
            if forced is None:
                raise ValidationError(f"part is disconnected at vertex {o}")
            local[o] = forced
        z = float(_part_edge_count(G, part))
        c = cross_contribution(G, local, signs)
        if c < 0:
            local = {a: -s for a, s in local.items()}
            c = -c
        signs.update(local)
        total += z + c
    out = extend_from_induced(G, signs)
    if out.value + 1e-9 < P.edge_count:
        raise InternalError("packing solution fell below its packed edge count")
    return out


def easypack(G: WeightedGraph) -> EasyPacking:
    """Greedy easy packing seeded from a maximal matching.

    Steps: (1) maximal matching M, unmatched set I; (2-3) for each matched
    edge {x, y}, if two unmatched vertices each form a triangle with it, split
    it into the two center edges {u, x} and {v, y}; (4) seed parts from the
    resulting edges; (5) attach remaining unmatched vertices that form a path
    or a good triangle with some center.  All scans in increasing id order.
    """
    if not G.unit:
        raise ValidationError("easypack requires unit weights")
    M = maximal_matching(G)
    istar = {v for v in range(G.n) if M.matched[v] is None and G.degree(v) > 0}
    mstar: list[tuple[int, int]] = []
    for x, y in M.edges:
        nx = {v for v, _ in G.adjacency[x]}
        ny = {v for v, _ in G.adjacency[y]}
        common = sorted(nx & ny & istar)
        if len(common) >= 2:
            u, v = common[0], common[1]
            mstar.append(tuple(sorted((u, x))))
            mstar.append(tuple(sorted((v, y))))
            istar -= {u, v}
        else:
            mstar.append((x, y))
    parts = [[a, b] for a, b in mstar]
    centers = list(mstar)
    for v in sorted(istar):
        nbrs = {u for u, _ in G.adjacency[v]}
        for idx, (cx, cy) in enumerate(centers):
            adj_x, adj_y = cx in nbrs, cy in nbrs
            if adj_x != adj_y:
                parts[idx].append(v)
                istar.discard(v)
                break
            if adj_x and adj_y and triangle_is_good(G, v, cx, cy):
                parts[idx].append(v)
                istar.discard(v)
                break
    return _packing_from_parts(G, parts, centers)


def star_packing(G: WeightedGraph) -> EasyPacking:
    """Star packing seeded from a maximum-cardinality matching.

    Unmatched vertices are scanned in increasing id order and attached to the
    first part that stays a star.  Requires a unit instance without isolated
    vertices.
    """
    if not G.unit:
        raise ValidationError("star_packing requires unit weights")
    if any(G.degree(v) == 0 for v in range(G.n)):
        raise ValidationError("star_packing requires no isolated vertices")
    M = maximum_matching(G)
    parts = [[x, y] for x, y in M.edges]
    centers = list(M.edges)
    # star hub per part; fixed by the first attached outside vertex
    hub: list[int | None] = [None] * len(parts)
    unmatched = sorted(v for v in range(G.n) if M.matched[v] is None)
    for v in unmatched:
        nbrs = {u for u, _ in G.adjacency[v]}
        for idx, (x, y) in enumerate(centers):
            adj_x, adj_y = x in nbrs, y in nbrs
            if adj_x and adj_y:
                continue  # would close a triangle
            if not (adj_x or adj_y):
                continue
            t = x if adj_x else y
            if hub[idx] is None:
                hub[idx] = t
            elif hub[idx] != t:
                continue
            parts[idx].append(v)
            break
    return _packing_from_parts(G, parts, centers)


@dataclass(frozen=True)
class ApproxResult:
    """A solution together with its claimed factor and certificate quantities."""

    assignment: Assignment
    guarantee: Fraction
    certificate: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.assignment.value


def _trivial_result(G: WeightedGraph, extra: dict) -> ApproxResult:
    out = extend_from_induced(G, {})
    return ApproxResult(out, Fraction(1), {"trivial": True, **extra})


def solve_bounded_degree(G: WeightedGraph) -> ApproxResult:
    """Greedy-matching driver: 1/(2*max_degree) of the optimum, any weights."""
    if G.m == 0:
        return _trivial_result(G, {"abs_weight": 0.0})
    abs_weight = float(np.abs(G.edge_arrays()[2]).sum())
    max_degree = max(len(a) for a in G.adjacency)
    M = greedy_sorted_matching(G)
    out = matching_to_solution(G, M)
    guarantee = Fraction(1, 2 * max_degree)
    if out.value + 1e-9 < M.total_abs_weight:
        raise InternalError("matching solution fell below w(M*)")
    if out.value + 1e-9 < float(guarantee) * abs_weight:
        raise InternalError("bounded-degree certificate violated")
    cert = {
        "matching_weight": M.total_abs_weight,
        "abs_weight": abs_weight,
        "max_degree": max_degree,
    }
    return ApproxResult(out, guarantee, cert)


def solve_degenerate(G: WeightedGraph) -> ApproxResult:
    """EasyPack driver: 1/(2*degeneracy) of the optimum on unit instances."""
    if not G.unit:
        raise ValidationError("solve_degenerate requires unit weights")
    st = stats(G)
    if G.m == 0:
        return _trivial_result(G, {"degeneracy": st.degeneracy})
    P = easypack(G)
    out = packing_to_solution(G, P)
    guarantee = Fraction(1, 2 * st.degeneracy)
    if 2 * P.edge_count < len(P.covered):
        raise InternalError("easy packing fell below |V_F|/2 packed edges")
    cert = {
        "packed_edges": P.edge_count,
        "covered": len(P.covered),
        "degeneracy": st.degeneracy,
    }
    return ApproxResult(out, guarantee, cert)


def solve_dense(G: WeightedGraph) -> ApproxResult:
    """Star-packing driver: 1/(3*density) of the optimum on unit instances.

    Isolated vertices are stripped first; the density in the guarantee is the
    stripped graph's, since the bound only holds without isolated vertices.
    """
    if not G.unit:
        raise ValidationError("solve_dense requires unit weights")
    if G.m == 0:
        return _trivial_result(G, {"density": "0"})
    alive = [v for v in range(G.n) if G.degree(v) > 0]
    H, old_of = induced_subgraph(G, alive)
    P = star_packing(H)
    sol_h = packing_to_solution(H, P)
    signs = {old_of[i]: s for i, s in enumerate(sol_h.values)}
    out = extend_from_induced(G, signs)
    density = Fraction(H.m, H.n)
    guarantee = Fraction(1, 1) / (3 * density)
    if guarantee > 1:
        guarantee = Fraction(1)
    if out.value + 1e-9 < float(Fraction(H.m, 1) / (3 * density)):
        raise InternalError("dense certificate violated")
    cert = {
        "packed_edges": P.edge_count,
        "m": H.m,
        "density": str(density),
    }
    return ApproxResult(out, guarantee, cert)

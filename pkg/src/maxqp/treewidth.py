"""Exact solving on bounded-treewidth instances.

Pipeline: min-fill elimination ordering -> clique-tree decomposition ->
nice-form conversion (leaf / introduce / forget / join nodes) -> dynamic
program over bag sign masks with backtracking reconstruction.

The DP is exact for *any* valid decomposition; the heuristic only affects
runtime.  Instances whose achieved width exceeds the cap are rejected with a
CapacityError instead of silently running an exponential table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .graph import Assignment, WeightedGraph, evaluate

DEFAULT_WIDTH_CAP = 20


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[tuple[int, ...], ...]
    parent: tuple[int | None, ...]  # parent[root] is None
    root: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(i)
        return ch


def validate_decomposition(G: WeightedGraph, td: TreeDecomposition) -> None:
    """Check vertex coverage, edge coverage, and connected vertex traces."""
    if not td.bags:
        if G.n == 0:
            return
        raise ValidationError("decomposition has no bags")
    containing: dict[int, list[int]] = {v: [] for v in range(G.n)}
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < G.n:
                raise ValidationError(f"bag {i} mentions unknown vertex {v}")
            containing[v].append(i)
    for v in range(G.n):
        if not containing[v]:
            raise ValidationError(f"vertex {v} appears in no bag")
    for u, v, _ in G.edges:
        if not any(u in td.bags[i] for i in containing[v]):
            raise ValidationError(f"edge ({u}, {v}) covered by no bag")
    # trace connectivity: within the bags containing v, exactly one has its
    # parent outside the trace
    bagsets = [set(b) for b in td.bags]
    for v in range(G.n):
        trace = containing[v]
        tops = sum(
            1
            for i in trace
            if td.parent[i] is None or v not in bagsets[td.parent[i]]
        )
        if tops != 1:
            raise ValidationError(f"bags containing vertex {v} are not connected")


def build_decomposition(
    G: WeightedGraph, width_cap: int = DEFAULT_WIDTH_CAP
) -> TreeDecomposition:
    """Clique-tree decomposition from a min-fill elimination ordering.

    Raises CapacityError (carrying the achieved width) when the heuristic
    width exceeds `width_cap`.
    """
    n = G.n
    if n == 0:
        return TreeDecomposition((), (), 0)
    adj: list[set[int]] = [set(u for u, _ in G.adjacency[v]) for v in range(n)]
    alive = set(range(n))

    fill: dict[int, int] = {}

    def fill_count(v: int) -> int:
        nbrs = [u for u in adj[v] if u in alive]
        missing = 0
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if nbrs[j] not in adj[nbrs[i]]:
                    missing += 1
        return missing

    for v in alive:
        fill[v] = fill_count(v)

    order: list[int] = []
    bags: list[tuple[int, ...]] = []
    elim_pos: dict[int, int] = {}
    for step in range(n):
        v = min(alive, key=lambda u: (fill[u], u))
        nbrs = sorted(u for u in adj[v] if u in alive)
        bags.append(tuple(sorted([v] + nbrs)))
        order.append(v)
        elim_pos[v] = step
        alive.discard(v)
        dirty = set(nbrs)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                a, b = nbrs[i], nbrs[j]
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    dirty |= adj[a] & adj[b] & alive
        for u in dirty:
            if u in alive:
                fill[u] = fill_count(u)

    width = max(len(b) for b in bags) - 1
    if width > width_cap:
        raise CapacityError(
            f"decomposition width {width} exceeds cap {width_cap}", achieved=width
        )

    # parent of v's bag: the bag of the earliest-eliminated remaining member;
    # isolated tails chain onto the last bag so the result is a single tree
    parent: list[int | None] = [None] * n
    last_rootless = None
    for i, v in enumerate(order):
        rest = [u for u in bags[i] if u != v]
        if rest:
            parent[i] = elim_pos[min(rest, key=lambda u: elim_pos[u])]
        elif last_rootless is not None:
            parent[last_rootless] = i
            last_rootless = i
        else:
            last_rootless = i
    root = n - 1
    td = TreeDecomposition(tuple(bags), tuple(parent), root)
    return td


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted decomposition with leaf/introduce/forget/join nodes only."""

    bags: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]  # "leaf" | "introduce" | "forget" | "join"
    children: tuple[tuple[int, ...], ...]
    special: tuple[int | None, ...]  # introduced / forgotten vertex
    root: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node)
            else:
                stack.append((node, True))
                for c in self.children[node]:
                    stack.append((c, False))
        return out


def validate_nice(G: WeightedGraph, ntd: NiceTreeDecomposition) -> None:
    td = TreeDecomposition(
        ntd.bags,
        _parents_from_children(ntd.children, ntd.root),
        ntd.root,
    )
    validate_decomposition(G, td)
    for i, kind in enumerate(ntd.kinds):
        bag = set(ntd.bags[i])
        ch = ntd.children[i]
        if kind == "leaf":
            if ch or len(bag) != 1:
                raise ValidationError(f"node {i}: malformed leaf")
        elif kind == "introduce":
            (c,) = ch
            cb = set(ntd.bags[c])
            if not (cb < bag and len(bag - cb) == 1 and ntd.special[i] in bag - cb):
                raise ValidationError(f"node {i}: malformed introduce")
        elif kind == "forget":
            (c,) = ch
            cb = set(ntd.bags[c])
            if not (bag < cb and len(cb - bag) == 1 and ntd.special[i] in cb - bag):
                raise ValidationError(f"node {i}: malformed forget")
        elif kind == "join":
            if len(ch) != 2 or any(set(ntd.bags[c]) != bag for c in ch):
                raise ValidationError(f"node {i}: malformed join")
        else:
            raise ValidationError(f"node {i}: unknown kind {kind!r}")


def _parents_from_children(children, root):
    parent: list[int | None] = [None] * len(children)
    for i, ch in enumerate(children):
        for c in ch:
            parent[c] = i
    parent[root] = None
    return tuple(parent)


def to_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a valid decomposition to nice form with the same width."""
    if not td.bags:
        return NiceTreeDecomposition((), (), (), (), 0)
    bags: list[tuple[int, ...]] = []
    kinds: list[str] = []
    children: list[tuple[int, ...]] = []
    special: list[int | None] = []

    def add(bag, kind, ch, sp=None) -> int:
        bags.append(tuple(sorted(bag)))
        kinds.append(kind)
        children.append(tuple(ch))
        special.append(sp)
        return len(bags) - 1

    def chain(top: int, target) -> int:
        """Forget then introduce, one vertex at a time, from bags[top] to target."""
        cur = set(bags[top])
        target = set(target)
        for v in sorted(cur - target):
            cur.discard(v)
            top = add(cur, "forget", [top], v)
        for v in sorted(target - cur):
            cur.add(v)
            top = add(cur, "introduce", [top], v)
        return top

    ch_of = td.children()
    done: dict[int, int] = {}
    stack = [(td.root, False)]
    while stack:
        node, ready = stack.pop()
        if not ready:
            stack.append((node, True))
            for c in ch_of[node]:
                stack.append((c, False))
            continue
        bag = td.bags[node]
        if not ch_of[node]:
            first = min(bag)
            top = add([first], "leaf", [])
            top = chain(top, bag)
        else:
            tops = [chain(done[c], bag) for c in ch_of[node]]
            top = tops[0]
            for t in tops[1:]:
                top = add(bag, "join", [top, t])
        done[node] = top
    return NiceTreeDecomposition(
        tuple(bags), tuple(kinds), tuple(children), tuple(special), done[td.root]
    )


def _sign_array(size: int, pos: int) -> np.ndarray:
    masks = np.arange(size, dtype=np.int64)
    return 1.0 - 2.0 * ((masks >> pos) & 1)


def _expand_index(size_child: int, pos: int) -> np.ndarray:
    """Index of each child mask inside the parent mask space, bit `pos` = 0."""
    masks = np.arange(size_child, dtype=np.int64)
    low = masks & ((1 << pos) - 1)
    high = (masks >> pos) << (pos + 1)
    return high | low


def _bag_value(G: WeightedGraph, bag: tuple[int, ...]) -> np.ndarray:
    """val_x(G[bag]) for every sign mask over the bag."""
    size = 1 << len(bag)
    pos = {v: i for i, v in enumerate(bag)}
    out = np.zeros(size)
    for u in bag:
        for v, w in G.adjacency[u]:
            if u < v and v in pos:
                out += w * _sign_array(size, pos[u]) * _sign_array(size, pos[v])
    return out


def solve_treewidth(G: WeightedGraph, ntd: NiceTreeDecomposition) -> Assignment:
    """Optimal assignment via dynamic programming over the nice decomposition.

    Bag assignments are encoded as bitmasks (bit i set => bag[i] gets -1).
    Tables are kept for backtracking; memory is O(nodes * 2^(width+1)).
    """
    if G.n == 0:
        return Assignment((), 0.0)
    order = ntd.postorder()
    tables: dict[int, np.ndarray] = {}
    for node in order:
        bag = ntd.bags[node]
        kind = ntd.kinds[node]
        size = 1 << len(bag)
        if kind == "leaf":
            tables[node] = np.zeros(size)
        elif kind == "introduce":
            (c,) = ntd.children[node]
            v = ntd.special[node]
            p = bag.index(v)
            base = _expand_index(size >> 1, p)
            table = np.empty(size)
            child = tables[c]
            table[base] = child
            table[base | (1 << p)] = child
            sv = _sign_array(size, p)
            pos = {u: i for i, u in enumerate(bag)}
            for u, w in G.adjacency[v]:
                if u in pos:
                    table += w * sv * _sign_array(size, pos[u])
            tables[node] = table
        elif kind == "forget":
            (c,) = ntd.children[node]
            v = ntd.special[node]
            p = ntd.bags[c].index(v)
            idx0 = _expand_index(size, p)
            child = tables[c]
            tables[node] = np.maximum(child[idx0], child[idx0 | (1 << p)])
        else:  # join
            cy, cz = ntd.children[node]
            tables[node] = tables[cy] + tables[cz] - _bag_value(G, bag)

    root_table = tables[ntd.root]
    best_mask = int(np.argmax(root_table))  # first maximum: deterministic

    signs = [0] * G.n
    stack: list[tuple[int, int]] = [(ntd.root, best_mask)]
    while stack:
        node, mask = stack.pop()
        bag = ntd.bags[node]
        for i, v in enumerate(bag):
            signs[v] = 1 if not (mask >> i) & 1 else -1
        kind = ntd.kinds[node]
        if kind == "leaf":
            continue
        if kind == "introduce":
            (c,) = ntd.children[node]
            p = bag.index(ntd.special[node])
            cm = ((mask >> (p + 1)) << p) | (mask & ((1 << p) - 1))
            stack.append((c, cm))
        elif kind == "forget":
            (c,) = ntd.children[node]
            p = ntd.bags[c].index(ntd.special[node])
            i0 = ((mask >> p) << (p + 1)) | (mask & ((1 << p) - 1))
            i1 = i0 | (1 << p)
            child = tables[c]
            cm = i1 if child[i1] > child[i0] else i0  # ties keep +1
            stack.append((c, cm))
        else:
            cy, cz = ntd.children[node]
            stack.append((cy, mask))
            stack.append((cz, mask))

    if any(s == 0 for s in signs):
        raise ValidationError("decomposition does not cover every vertex")
    value = evaluate(G, signs)
    return Assignment(tuple(signs), value)


def solve_exact(
    G: WeightedGraph, width_cap: int = DEFAULT_WIDTH_CAP
) -> tuple[Assignment, int]:
    """Decompose, convert, and solve; returns (assignment, achieved width)."""
    td = build_decomposition(G, width_cap)
    ntd = to_nice(td)
    return solve_treewidth(G, ntd), td.width if td.bags else 0


def solve_exact_auto(
    G: WeightedGraph, width_cap: int = DEFAULT_WIDTH_CAP, brute_cap: int = 24
) -> Assignment:
    """Treewidth DP when the heuristic width fits; brute force fallback."""
    try:
        out, _ = solve_exact(G, width_cap)
        return out
    except CapacityError:
        if G.n <= brute_cap:
            from .oracle import brute_force

            return brute_force(G, cap=brute_cap)
        raise

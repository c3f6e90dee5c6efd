"""Proper edge colorings of 3-regular graphs with 3 or 4 colors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, graph_id

EXHAUSTIVE_MAX_VERTICES = 14
GREEDY_RESTARTS = 1000


@dataclass(frozen=True)
class EdgeColoring:
    """Map edge -> color index in 0..num_colors-1, proper on shared vertices."""

    colors: dict[tuple[int, int], int]
    num_colors: int

    def as_layers(self, g: Graph) -> list[list[tuple[int, int]]]:
        """Edges grouped by color; within a layer no two edges share a vertex."""
        layers: list[list[tuple[int, int]]] = [[] for _ in range(self.num_colors)]
        for e in g.edges:
            layers[self.colors[e]].append(e)
        return layers


def check_proper(g: Graph, coloring: EdgeColoring) -> bool:
    if set(coloring.colors) != set(g.edges):
        return False
    seen: dict[tuple[int, int], None] = {}
    for (u, v), c in coloring.colors.items():
        if not 0 <= c < coloring.num_colors:
            return False
        for key in ((u, c), (v, c)):
            if key in seen:
                return False
            seen[key] = None
    return True


def _compact(g: Graph, raw: dict[tuple[int, int], int]) -> EdgeColoring:
    remap: dict[int, int] = {}
    colors = {}
    for e in g.edges:
        c = raw[e]
        if c not in remap:
            remap[c] = len(remap)
        colors[e] = remap[c]
    return EdgeColoring(colors, len(remap))


def _exhaustive_3color(g: Graph) -> dict[tuple[int, int], int] | None:
    """Backtracking over edges in a connectivity-first order. None if class 2."""
    adj_edges: dict[int, list[int]] = {v: [] for v in range(g.n_vertices)}
    for i, (u, v) in enumerate(g.edges):
        adj_edges[u].append(i)
        adj_edges[v].append(i)
    # order edges so each one touches an already-placed vertex where possible
    order: list[int] = []
    placed = [False] * g.n_edges
    for start in range(g.n_edges):
        if placed[start]:
            continue
        queue = [start]
        placed[start] = True
        while queue:
            i = queue.pop(0)
            order.append(i)
            u, v = g.edges[i]
            for w in (u, v):
                for j in adj_edges[w]:
                    if not placed[j]:
                        placed[j] = True
                        queue.append(j)
    used = [0] * g.n_vertices  # bitmask of colors at each vertex
    assigned: dict[tuple[int, int], int] = {}

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        u, v = g.edges[order[pos]]
        taken = used[u] | used[v]
        for c in range(3):
            bit = 1 << c
            if taken & bit:
                continue
            used[u] |= bit
            used[v] |= bit
            assigned[(u, v)] = c
            if rec(pos + 1):
                return True
            used[u] &= ~bit
            used[v] &= ~bit
        return False

    return assigned if rec(0) else None


def _greedy_3color(g: Graph, seed: int) -> dict[tuple[int, int], int] | None:
    """One randomized pass: most saturated edge first, lowest free color."""
    rng = np.random.default_rng(seed)
    used = [0] * g.n_vertices
    assigned: dict[tuple[int, int], int] = {}
    remaining = list(range(g.n_edges))
    while remaining:
        best_sat = -1
        best: list[int] = []
        for i in remaining:
            u, v = g.edges[i]
            sat = bin(used[u] | used[v]).count("1")
            if sat > best_sat:
                best_sat, best = sat, [i]
            elif sat == best_sat:
                best.append(i)
        i = best[int(rng.integers(len(best)))]
        u, v = g.edges[i]
        taken = used[u] | used[v]
        c = next((c for c in range(3) if not taken & (1 << c)), None)
        if c is None:
            return None
        used[u] |= 1 << c
        used[v] |= 1 << c
        assigned[(u, v)] = c
        remaining.remove(i)
    return assigned


def _misra_gries(g: Graph) -> dict[tuple[int, int], int]:
    """Constructive max_degree+1 coloring via fan rotations and path inversions."""
    adj = g.adjacency()
    max_deg = max((len(a) for a in adj), default=0)
    n_colors = max_deg + 1
    color: dict[tuple[int, int], int] = {}
    used: list[set[int]] = [set() for _ in range(g.n_vertices)]

    def key(a, b):
        return (a, b) if a < b else (b, a)

    def ecol(a, b):
        return color.get(key(a, b))

    def uncolor(a, b):
        c = color.pop(key(a, b))
        used[a].discard(c)
        used[b].discard(c)

    def set_color(a, b, c):
        if key(a, b) in color:
            uncolor(a, b)
        color[key(a, b)] = c
        used[a].add(c)
        used[b].add(c)

    def free_color(v):
        return next(c for c in range(n_colors) if c not in used[v])

    for u, v in g.edges:
        if (u, v) in color:
            continue
        # maximal fan of u starting at v: each next edge's color is free on
        # the previous fan vertex
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            ext = next(
                (
                    w
                    for w in adj[u]
                    if w not in in_fan and ecol(u, w) is not None and ecol(u, w) not in used[last]
                ),
                None,
            )
            if ext is None:
                break
            fan.append(ext)
            in_fan.add(ext)
        c = free_color(u)
        d = free_color(fan[-1])
        if c != d:
            # invert the maximal path from u whose edges alternate d, c, d, ...
            x, prev, want = u, -1, d
            path = []
            while True:
                nxt = next((w for w in adj[x] if w != prev and ecol(x, w) == want), None)
                if nxt is None:
                    break
                path.append((x, nxt))
                prev, x = x, nxt
                want = c if want == d else d
            # two-phase swap: recoloring in place would transiently give a
            # path vertex two edges of one color, corrupting the used sets
            flipped = [(a, b, d if ecol(a, b) == c else c) for a, b in path]
            for a, b, _ in flipped:
                uncolor(a, b)
            for a, b, cc in flipped:
                set_color(a, b, cc)
        # d is now free on u; rotate the shortest fan prefix ending at a
        # vertex with d free (the inversion may have shortened fan validity)
        w_idx = None
        for i, w in enumerate(fan):
            if d in used[w]:
                continue
            if all(ecol(u, fan[j]) is not None and ecol(u, fan[j]) not in used[fan[j - 1]] for j in range(1, i + 1)):
                w_idx = i
                break
        if w_idx is None:
            raise AssertionError("fan rotation has no valid pivot")
        shifted = [ecol(u, fan[j + 1]) for j in range(w_idx)]
        for j in range(1, w_idx + 1):
            uncolor(u, fan[j])
        for j, cj in enumerate(shifted):
            set_color(u, fan[j], cj)
        set_color(u, fan[w_idx], d)
    return color


def edge_color(g: Graph, exhaustive_max: int = EXHAUSTIVE_MAX_VERTICES, restarts: int = GREEDY_RESTARTS) -> EdgeColoring:
    """Proper edge coloring with 3 colors when one is found, else 4.

    Small graphs get an exhaustive 3-colorability decision; larger ones get
    seeded greedy restarts. Both fall back to the constructive 4-color
    routine, so the result is always proper with num_colors in {3, 4} for
    3-regular inputs.
    """
    if g.n_edges == 0:
        return EdgeColoring({}, 0)
    raw = None
    if g.n_vertices <= exhaustive_max:
        raw = _exhaustive_3color(g)
    else:
        base = int(graph_id(g), 16)
        for r in range(restarts):
            raw = _greedy_3color(g, seed=(base + r) % 2**63)
            if raw is not None:
                break
    if raw is None:
        raw = _misra_gries(g)
    out = _compact(g, raw)
    if not check_proper(g, out):
        raise AssertionError("internal error: improper edge coloring")
    return out

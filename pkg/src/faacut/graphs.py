"""3-regular graphs: sampling, cut/energy evaluation, file formats."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

MAX_RESTARTS = 10_000


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n_vertices-1.

    Edges are stored as (u, v) with u < v, sorted lexicographically.
    The container itself does not require 3-regularity; generation,
    file loading and the benchmark drivers do.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GraphError(f"need at least one vertex, got {self.n_vertices}")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise GraphError(f"bad edge ({u}, {v}) for n_vertices={self.n_vertices}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise GraphError("edges must be sorted lexicographically")

    @classmethod
    def from_edges(cls, n_vertices: int, edges) -> "Graph":
        """Normalize an edge iterable (any order, any orientation)."""
        norm = sorted((min(u, v), max(u, v)) for u, v in edges)
        return cls(n_vertices, tuple(norm))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy()
        e = np.asarray(self.edges, dtype=np.int64)
        return e[:, 0], e[:, 1]


def validate_3regular(g: Graph) -> None:
    deg = g.degrees()
    bad = np.nonzero(deg != 3)[0]
    if bad.size:
        raise GraphError(f"vertex {int(bad[0])} has degree {int(deg[bad[0]])}, expected 3")


def generate_3regular(n_vertices: int, seed: int) -> Graph:
    """Sample a uniform random simple 3-regular graph (configuration model).

    Pairs up 3 half-edge stubs per vertex uniformly at random and restarts
    from scratch whenever the pairing produces a self-loop or parallel edge.
    Raises GraphError for invalid sizes or if no simple pairing is found
    within MAX_RESTARTS attempts.
    """
    if n_vertices < 4 or n_vertices % 2 != 0:
        raise GraphError(f"3-regular graphs need even n_vertices >= 4, got {n_vertices}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n_vertices, dtype=np.int64), 3)
    for _ in range(MAX_RESTARTS):
        perm = rng.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if np.any(a == b):
            continue
        u, v = np.minimum(a, b), np.maximum(a, b)
        keys = u * n_vertices + v
        if np.unique(keys).size != keys.size:
            continue
        return Graph.from_edges(n_vertices, zip(u.tolist(), v.tolist()))
    raise GraphError(f"no simple 3-regular pairing found in {MAX_RESTARTS} restarts")


def graph_id(g: Graph) -> str:
    """Short content hash; stable across runs and processes."""
    h = hashlib.sha256()
    h.update(f"{g.n_vertices}".encode())
    for u, v in g.edges:
        h.update(f":{u},{v}".encode())
    return h.hexdigest()[:12]


# -- assignments ---------------------------------------------------------
#
# A spin assignment is a length-n_vertices array of bits, one per vertex.
# Bit 0 maps the vertex to the "up" / +1 partition side, bit 1 to -1.


def as_bits(bits, n_vertices: int) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.shape[0] != n_vertices:
        raise GraphError(f"assignment must have length {n_vertices}, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise GraphError("assignment entries must be 0 or 1")
    return arr.astype(np.uint8)


def cut_size(g: Graph, bits) -> int:
    """Number of edges whose endpoints land on different sides."""
    b = as_bits(bits, g.n_vertices)
    u, v = g.edge_arrays()
    return int(np.count_nonzero(b[u] != b[v]))


def energy(g: Graph, bits) -> int:
    """Ising energy sum_{(u,v) in E} z_u z_v with z = (-1)^bit.

    energy = n_edges - 2 * cut_size, so minimizing energy maximizes the cut.
    """
    return g.n_edges - 2 * cut_size(g, bits)


def energies_of_samples(g: Graph, samples: np.ndarray) -> np.ndarray:
    """Vectorized energy for a (n_samples, n_vertices) bit matrix."""
    s = np.asarray(samples, dtype=np.uint8)
    if s.ndim != 2 or s.shape[1] != g.n_vertices:
        raise GraphError(f"samples must be (n, {g.n_vertices}), got {s.shape}")
    u, v = g.edge_arrays()
    cuts = np.count_nonzero(s[:, u] != s[:, v], axis=1)
    return (g.n_edges - 2 * cuts).astype(np.int64)


def bits_to_int(bits) -> int:
    """Big-endian integer: bit of vertex 0 is the most significant."""
    out = 0
    for b in np.asarray(bits).tolist():
        out = (out << 1) | int(b)
    return out


def int_to_bits(value: int, n_vertices: int) -> np.ndarray:
    return np.array([(value >> (n_vertices - 1 - i)) & 1 for i in range(n_vertices)], dtype=np.uint8)


def bits_to_str(bits) -> str:
    return "".join(str(int(b)) for b in np.asarray(bits).tolist())


def str_to_bits(s: str) -> np.ndarray:
    if not s or any(c not in "01" for c in s):
        raise GraphError(f"bad assignment string {s!r}")
    return np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")


# -- file formats --------------------------------------------------------
#
# Graph file: first line "n_vertices n_edges", then one "u v" line per edge.
# Blank lines and lines starting with '#' are ignored.
#
# Optimum sidecar (<graph>.opt): line 1 the minimum energy (integer),
# line 2 the witness assignment as a 0/1 string of length n_vertices.


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n_vertices} {g.n_edges}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def load_graph(path, require_3regular: bool = True) -> Graph:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"{path}: header must be 'n_vertices n_edges'")
    try:
        n_vertices, n_edges = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"{path}: bad header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != n_edges:
        raise GraphError(f"{path}: header promises {n_edges} edges, file has {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"{path}: bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"{path}: bad edge line {ln!r}") from exc
        if u == v:
            raise GraphError(f"{path}: self-loop at vertex {u}")
        edges.append((u, v))
    try:
        g = Graph.from_edges(n_vertices, edges)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from exc
    if require_3regular:
        try:
            validate_3regular(g)
        except GraphError as exc:
            raise GraphError(f"{path}: {exc}") from exc
    return g


def save_opt(path, min_energy: int, bits) -> None:
    with open(path, "w") as fh:
        fh.write(f"{int(min_energy)}\n{bits_to_str(bits)}\n")


def load_opt(path, n_vertices: int) -> tuple[int, np.ndarray]:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) != 2:
        raise GraphError(f"{path}: sidecar must have exactly two lines")
    try:
        min_energy = int(lines[0])
    except ValueError as exc:
        raise GraphError(f"{path}: bad energy line {lines[0]!r}") from exc
    bits = str_to_bits(lines[1])
    if bits.shape[0] != n_vertices:
        raise GraphError(f"{path}: witness length {bits.shape[0]} != n_vertices {n_vertices}")
    return min_energy, bits

"""Hypercubes (implicit) and small generic graphs (explicit).

The hypercube Q_n has vertex set {0,1}^n with an edge wherever exactly one
coordinate differs, so graph distance equals Hamming distance and a vertex
is just an n-bit machine word. All production paths stay implicit; an
explicit adjacency-list hypercube exists only to cross-validate the word
arithmetic at small n.

Generic graphs hold an all-pairs BFS distance table and exist to host
small instances (cycles, paths, random test graphs) for the exact solvers.

Coordinate convention used throughout the package: coordinate 1 is the
most significant bit of the n-bit word, matching the left-to-right reading
of the packing file format.
"""

from collections import deque

import numpy as np

from .errors import CapExceededError, DisconnectedGraphError, ParseError

# A vertex must fit one machine word; in-scope constructions stop at n=28.
MAX_DIMENSION = 63

# Explicit materialization is for cross-validation only.
MAX_EXPLICIT_DIMENSION = 8


def hamming_distance(u: int, v: int) -> int:
    """Graph distance in Q_n: number of differing coordinates."""
    return (u ^ v).bit_count()


def weight(u: int) -> int:
    """Hamming weight wt(u), the distance of u from the all-zeros word."""
    return u.bit_count()


def check_dimension(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"dimension must be an int, got {type(n).__name__}")
    if n < 1 or n > MAX_DIMENSION:
        raise CapExceededError(
            f"dimension {n} outside supported range 1..{MAX_DIMENSION}"
        )
    return n


def check_vertex(v: int, n: int) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise TypeError(f"vertex must be an int, got {type(v).__name__}")
    if v < 0 or v >> n:
        raise ValueError(f"vertex {v} does not fit in {n} bits")
    return v


def parse_vertex(s: str, n: int) -> int:
    """Read an n-character 0/1 string, most significant coordinate first."""
    if len(s) != n or set(s) - {"0", "1"}:
        raise ValueError(f"expected an {n}-character 0/1 string, got {s!r}")
    return int(s, 2)


def format_vertex(v: int, n: int) -> str:
    """Render a vertex as an n-character 0/1 string (coordinate 1 = MSB)."""
    return format(v, f"0{n}b")


class Hypercube:
    """Implicit Q_n. Immutable; safe to share across threads."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        object.__setattr__(self, "n", check_dimension(n))

    def __setattr__(self, name, value):
        raise AttributeError("Hypercube is immutable")

    @property
    def num_vertices(self) -> int:
        return 1 << self.n

    def vertices(self):
        return range(1 << self.n)

    def distance(self, u: int, v: int) -> int:
        return (u ^ v).bit_count()

    def radius(self) -> int:
        # Every vertex has eccentricity n (its complement is at distance n).
        return self.n

    def __eq__(self, other):
        return isinstance(other, Hypercube) and other.n == self.n

    def __hash__(self):
        return hash(("Hypercube", self.n))

    def __repr__(self):
        return f"Hypercube({self.n})"


class GenericGraph:
    """Small explicit graph with a cached all-pairs BFS distance table.

    Intended for instances up to a few thousand vertices; the table is
    computed lazily on first distance query and reused afterwards.
    Vertices are 0-based integer ids. Immutable after construction.
    """

    def __init__(self, vertex_count: int, edges):
        if vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        adj = [[] for _ in range(vertex_count)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u} not allowed")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.n_vertices = vertex_count
        self.adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        self.edges = tuple(sorted(seen))
        self._dist = None

    @property
    def num_vertices(self) -> int:
        return self.n_vertices

    def vertices(self):
        return range(self.n_vertices)

    def dist_matrix(self) -> np.ndarray:
        """All-pairs distances, int16, -1 where unreachable."""
        if self._dist is None:
            n = self.n_vertices
            dist = np.full((n, n), -1, dtype=np.int16)
            for s in range(n):
                dist[s, s] = 0
                q = deque([s])
                row = dist[s]
                while q:
                    u = q.popleft()
                    du = row[u]
                    for w in self.adjacency[u]:
                        if row[w] < 0:
                            row[w] = du + 1
                            q.append(w)
            self._dist = dist
        return self._dist

    def distance(self, u: int, v: int):
        """Shortest-path edge count, or None if unreachable."""
        n = self.n_vertices
        if not (0 <= u < n and 0 <= v < n):
            raise IndexError(f"vertex pair ({u},{v}) out of range 0..{n - 1}")
        d = int(self.dist_matrix()[u, v])
        return None if d < 0 else d

    def is_connected(self) -> bool:
        return bool((self.dist_matrix()[0] >= 0).all())

    def eccentricity(self, v: int) -> int:
        row = self.dist_matrix()[v]
        if (row < 0).any():
            raise DisconnectedGraphError("eccentricity undefined: graph is disconnected")
        return int(row.max())

    def radius(self) -> int:
        d = self.dist_matrix()
        if (d < 0).any():
            raise DisconnectedGraphError("radius undefined: graph is disconnected")
        return int(d.max(axis=1).min())

    def diameter(self) -> int:
        d = self.dist_matrix()
        if (d < 0).any():
            raise DisconnectedGraphError("diameter undefined: graph is disconnected")
        return int(d.max())

    def __repr__(self):
        return f"GenericGraph({self.n_vertices} vertices, {len(self.edges)} edges)"


# ---------------------------------------------------------------------------
# Constructors for common test instances
# ---------------------------------------------------------------------------

def cycle_graph(k: int) -> GenericGraph:
    if k < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return GenericGraph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> GenericGraph:
    return GenericGraph(k, [(i, i + 1) for i in range(k - 1)])


def hypercube_graph(n: int) -> GenericGraph:
    """Explicit Q_n as an adjacency-list graph, for cross-validation only."""
    check_dimension(n)
    if n > MAX_EXPLICIT_DIMENSION:
        raise CapExceededError(
            f"explicit hypercube capped at n={MAX_EXPLICIT_DIMENSION}, got {n}"
        )
    edges = []
    for v in range(1 << n):
        for b in range(n):
            w = v ^ (1 << b)
            if w > v:
                edges.append((v, w))
    return GenericGraph(1 << n, edges)


def random_connected_graph(num_vertices: int, rng, extra_edge_prob: float = 0.3) -> GenericGraph:
    """Random connected graph: a random spanning tree plus extra edges."""
    if num_vertices < 1:
        raise ValueError("need at least one vertex")
    edges = []
    for v in range(1, num_vertices):
        edges.append((rng.randrange(v), v))
    for u in range(num_vertices):
        for v in range(u + 1, num_vertices):
            if rng.random() < extra_edge_prob:
                edges.append((u, v))
    return GenericGraph(num_vertices, edges)


# ---------------------------------------------------------------------------
# Edge-list file format:  "p <vertex_count> <edge_count>" then "e <u> <v>"
# lines with 0-based ids; blank lines and '#' comments are ignored.
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> GenericGraph:
    vertex_count = None
    edge_count = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if vertex_count is not None:
                raise ParseError("duplicate 'p' header", lineno)
            if len(fields) != 3:
                raise ParseError("expected 'p <vertex_count> <edge_count>'", lineno)
            try:
                vertex_count, edge_count = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError("non-integer counts in 'p' header", lineno) from None
            if vertex_count < 1:
                raise ParseError("vertex count must be positive", lineno)
        elif fields[0] == "e":
            if vertex_count is None:
                raise ParseError("edge before 'p' header", lineno)
            if len(fields) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError("non-integer vertex id", lineno) from None
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ParseError(f"vertex id out of range 0..{vertex_count - 1}", lineno)
            if u == v:
                raise ParseError("self-loops not allowed", lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if vertex_count is None:
        raise ParseError("missing 'p <vertex_count> <edge_count>' header")
    if edge_count is not None and len(edges) != edge_count:
        raise ParseError(f"header announced {edge_count} edges, found {len(edges)}")
    return GenericGraph(vertex_count, edges)


def load_graph(path) -> GenericGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: GenericGraph) -> str:
    lines = [f"p {g.num_vertices} {len(g.edges)}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"

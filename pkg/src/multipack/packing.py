"""Multipacking and dominating-broadcast verifiers.

A set M of vertices is a multipacking when every ball N_k[v] contains at
most k members of M, for every vertex v and every radius k >= 1. The
verifier works per vertex through an equivalent sorted-distance criterion:
with d_1 <= d_2 <= ... the member distances from v in sorted order, the
condition holds at v exactly when d_i >= i for every i >= 2. (If some
d_i < i then the ball of radius d_i holds at least i > d_i members;
conversely a violated radius k means d_{k+1} <= k.) That reduces the whole
check to one popcount/sort sweep of O(2^n * |M|) words, vectorized over
vertex blocks and embarrassingly parallel across block ranges.

A broadcast f dominates when every vertex lies within distance f(v) of
some vertex v with f(v) >= 1; its cost is the sum of the powers.

Violation witnesses are canonical: the lexicographically smallest
violating (vertex, radius) pair, so runs are reproducible regardless of
chunking or thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError
from .graphs import (
    GenericGraph,
    Hypercube,
    check_dimension,
    check_vertex,
    format_vertex,
    hamming_distance,
    parse_vertex,
)

# Vertices per numpy block in the exhaustive sweep; 2^16 keeps the
# per-block distance matrix comfortably in cache for |M| <= 32.
_BLOCK = 1 << 16


@dataclass(frozen=True)
class Packing:
    """A candidate multipacking: dimension n plus ordered, duplicate-free members."""

    n: int
    members: tuple
    trace: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        check_dimension(self.n)
        object.__setattr__(self, "members", tuple(self.members))
        for m in self.members:
            check_vertex(m, self.n)
        if len(set(self.members)) != len(self.members):
            raise ValueError("packing members must be duplicate-free")

    @property
    def size(self) -> int:
        return len(self.members)

    def member_strings(self):
        return [format_vertex(m, self.n) for m in self.members]

    def distance_matrix(self) -> np.ndarray:
        """Pairwise Hamming distances between members (uint8)."""
        mem = np.array(self.members, dtype=np.uint64)
        return np.bitwise_count(mem[:, None] ^ mem[None, :])

    def __repr__(self):
        shown = ",".join(self.member_strings()[:6])
        more = "" if self.size <= 6 else f",... ({self.size} members)"
        return f"Packing(n={self.n}, {{{shown}{more}}})"


@dataclass(frozen=True)
class ViolationWitness:
    """A ball N_k[center] holding count > k members; count > radius always."""

    center: int
    radius: int
    count: int

    def __post_init__(self):
        if self.count <= self.radius:
            raise ValueError("witness must have count > radius")


@dataclass(frozen=True)
class Broadcast:
    """A broadcast: positive integer powers on a subset of vertices."""

    graph: object  # Hypercube or GenericGraph
    powers: dict

    def __post_init__(self):
        nv = self.graph.num_vertices
        for v, p in self.powers.items():
            if not (0 <= v < nv):
                raise ValueError(f"broadcast vertex {v} not in graph")
            if p < 1:
                raise ValueError(f"broadcast power at {v} must be >= 1, got {p}")
        object.__setattr__(self, "powers", dict(self.powers))

    @property
    def cost(self) -> int:
        return sum(self.powers.values())


def ball_count(p: Packing, v: int, k: int) -> int:
    """Number of members within distance k of v."""
    check_vertex(v, p.n)
    if k < 0:
        raise ValueError("radius must be non-negative")
    return sum(1 for m in p.members if hamming_distance(v, m) <= k)


def sorted_distance_check(p: Packing, v: int):
    """Smallest violated radius at v, or None if all ball constraints hold.

    With sorted member distances d_1 <= ... <= d_s from v, the constraints
    hold at v iff d_i >= i for all i >= 2; the smallest violated radius is
    min(d_i) over the violating indices.
    """
    check_vertex(v, p.n)
    if p.size <= 1:
        return None
    dists = sorted(hamming_distance(v, m) for m in p.members)
    violated = [d for i, d in enumerate(dists[1:], start=2) if d < i]
    return min(violated) if violated else None


def _scan_block(members: np.ndarray, start: int, stop: int):
    """Smallest violating (vertex, radius, count) in [start, stop), or None."""
    size = len(members)
    v = np.arange(start, stop, dtype=np.uint64)
    d = np.bitwise_count(v[:, None] ^ members[None, :])
    d.sort(axis=1)
    ranks = np.arange(2, size + 1, dtype=np.uint8)
    bad = d[:, 1:] < ranks
    rows = np.nonzero(bad.any(axis=1))[0]
    if len(rows) == 0:
        return None
    row = int(rows[0])
    k = int(d[row, 1:][bad[row]].min())
    count = int((d[row] <= k).sum())
    return start + row, k, count


def _block_ranges(total: int):
    return [(lo, min(lo + _BLOCK, total)) for lo in range(0, total, _BLOCK)]


def find_violation(p: Packing, threads: int = 1):
    """Exhaustive sweep of all 2^n vertices.

    Returns the lexicographically smallest violating (vertex, radius) as a
    ViolationWitness, or None when p is a multipacking. With threads > 1
    the vertex space is partitioned into block ranges scanned in waves;
    the merge keeps the smallest witness, so the result is identical to
    the single-threaded scan.
    """
    if p.size <= 1:
        return None
    members = np.array(p.members, dtype=np.uint64)
    ranges = _block_ranges(1 << p.n)
    if threads is None or threads <= 1 or len(ranges) == 1:
        for lo, hi in ranges:
            hit = _scan_block(members, lo, hi)
            if hit is not None:
                return ViolationWitness(*hit)
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for wave_start in range(0, len(ranges), threads):
            wave = ranges[wave_start : wave_start + threads]
            hits = list(pool.map(lambda r: _scan_block(members, *r), wave))
            for hit in hits:  # wave is in vertex order; first hit is smallest
                if hit is not None:
                    return ViolationWitness(*hit)
    return None


def is_multipacking(p: Packing, threads: int = 1) -> bool:
    """True iff every ball N_k[v] contains at most k members, all v, all k >= 1."""
    return find_violation(p, threads=threads) is None


def find_violation_in_graph(g: GenericGraph, members) -> ViolationWitness | None:
    """Multipacking check on an explicit graph via its distance table.

    Unreachable pairs count as infinitely far, so they never land in any
    ball. Same witness convention as the hypercube sweep.
    """
    members = list(members)
    if len(set(members)) != len(members):
        raise ValueError("members must be duplicate-free")
    if len(members) <= 1:
        return None
    dist = g.dist_matrix()[:, members].astype(np.int32)
    dist[dist < 0] = np.iinfo(np.int32).max  # unreachable: never inside a ball
    d = np.sort(dist, axis=1)
    ranks = np.arange(2, len(members) + 1, dtype=np.int32)
    bad = d[:, 1:] < ranks
    rows = np.nonzero(bad.any(axis=1))[0]
    if len(rows) == 0:
        return None
    row = int(rows[0])
    k = int(d[row, 1:][bad[row]].min())
    count = int((d[row] <= k).sum())
    return ViolationWitness(row, k, count)


def is_multipacking_in_graph(g: GenericGraph, members) -> bool:
    return find_violation_in_graph(g, members) is None


# ---------------------------------------------------------------------------
# Dominating broadcasts
# ---------------------------------------------------------------------------

def find_uncovered(b: Broadcast):
    """Smallest vertex not within distance f(v) of any powered vertex v, or None."""
    g = b.graph
    if not b.powers:
        return 0  # nothing transmits; vertex 0 exists and is uncovered
    if isinstance(g, Hypercube):
        total = g.num_vertices
        for lo, hi in _block_ranges(total):
            v = np.arange(lo, hi, dtype=np.uint64)
            covered = np.zeros(hi - lo, dtype=bool)
            for center, power in b.powers.items():
                covered |= np.bitwise_count(v ^ np.uint64(center)) <= power
            holes = np.nonzero(~covered)[0]
            if len(holes):
                return lo + int(holes[0])
        return None
    dist = g.dist_matrix()
    covered = np.zeros(g.num_vertices, dtype=bool)
    for center, power in b.powers.items():
        row = dist[center]
        covered |= (row >= 0) & (row <= power)
    holes = np.nonzero(~covered)[0]
    return int(holes[0]) if len(holes) else None


def is_dominating_broadcast(b: Broadcast) -> bool:
    return find_uncovered(b) is None


# ---------------------------------------------------------------------------
# File formats.
#
# Packing file:   "q <n>" then one member per line as an n-character 0/1
#                 string, most significant coordinate first.
# Broadcast file: "q <n>" (hypercube) or "g <path>" (edge-list graph file),
#                 then lines "<vertex> <power>". Hypercube vertices are
#                 0/1 strings; graph vertices are 0-based integer ids.
# Blank lines and '#' comments are ignored in both.
# ---------------------------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_packing(text: str) -> Packing:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty packing file")
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 2 or fields[0] != "q":
        raise ParseError("expected header 'q <n>'", lineno)
    try:
        n = int(fields[1])
    except ValueError:
        raise ParseError("dimension must be an integer", lineno) from None
    check_dimension(n)
    members = []
    seen = set()
    for lineno, line in lines[1:]:
        try:
            v = parse_vertex(line, n)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if v in seen:
            raise ParseError(f"duplicate member {line}", lineno)
        seen.add(v)
        members.append(v)
    return Packing(n, tuple(members))


def format_packing(p: Packing) -> str:
    return "\n".join([f"q {p.n}"] + p.member_strings()) + "\n"


def load_packing(path) -> Packing:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_packing(fh.read())


def save_packing(p: Packing, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_packing(p))


def parse_broadcast(text: str, graph_loader=None) -> Broadcast:
    """Parse a broadcast file; graph_loader resolves 'g <path>' references."""
    from .graphs import load_graph

    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty broadcast file")
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 2 or fields[0] not in ("q", "g"):
        raise ParseError("expected header 'q <n>' or 'g <path>'", lineno)
    if fields[0] == "q":
        try:
            n = int(fields[1])
        except ValueError:
            raise ParseError("dimension must be an integer", lineno) from None
        check_dimension(n)
        graph = Hypercube(n)
        read_vertex = lambda tok: parse_vertex(tok, n)
    else:
        loader = graph_loader or load_graph
        graph = loader(fields[1])
        read_vertex = int
    powers = {}
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 2:
            raise ParseError("expected '<vertex> <power>'", lineno)
        try:
            v = read_vertex(fields[0])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        try:
            power = int(fields[1])
        except ValueError:
            raise ParseError("power must be an integer", lineno) from None
        if power < 1:
            raise ParseError("power must be >= 1 (omit zero-power vertices)", lineno)
        if not (0 <= v < graph.num_vertices):
            raise ParseError(f"vertex {fields[0]} not in graph", lineno)
        if v in powers:
            raise ParseError(f"duplicate vertex {fields[0]}", lineno)
        powers[v] = power
    return Broadcast(graph, powers)


def load_broadcast(path) -> Broadcast:
    import os

    base = os.path.dirname(os.path.abspath(path))

    def loader(ref):
        from .graphs import load_graph

        return load_graph(ref if os.path.isabs(ref) else os.path.join(base, ref))

    with open(path, "r", encoding="utf-8") as fh:
        return parse_broadcast(fh.read(), graph_loader=loader)


def format_broadcast(b: Broadcast) -> str:
    if not isinstance(b.graph, Hypercube):
        raise ValueError("only hypercube broadcasts can be serialized standalone")
    n = b.graph.n
    lines = [f"q {n}"]
    for v in sorted(b.powers):
        lines.append(f"{format_vertex(v, n)} {b.powers[v]}")
    return "\n".join(lines) + "\n"

"""Exact solvers for the multipacking number and broadcast domination number.

Small instances only; these are the oracles of record that the
constructions and certificates are checked against.

mp(G) is found by branch and bound over vertices in a fixed order. A
partial set is extended only with vertices that keep every ball constraint
satisfiable, tracked incrementally as a per-vertex table C[v][k] counting
chosen members within distance k of v; the set is a multipacking iff
C[v][k] <= k for all v and all k >= 1. Candidates are re-filtered at every
node, and a branch is cut when even taking all remaining candidates cannot
beat the incumbent. On hypercubes the search optionally fixes the
all-zeros word into the set (vertex-transitivity makes this loss-free) and
warms the incumbent with the recursive construction.

gamma_b(G) is found by feasibility search on the total cost c = 1, 2, ...
up to the radius (a center broadcast of power radius always dominates, so
the loop terminates). For each c, power multisets are enumerated as
nonincreasing partitions of c and centers as combinations per equal-power
group, which kills the factorial symmetry of permuting equal powers. A
partition whose summed maximum ball sizes cannot reach |V| is skipped
outright; only provably infeasible assignments are pruned, so the first
feasible cost is exactly gamma_b.
"""

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .construct import build_half_packing
from .errors import CapExceededError
from .graphs import GenericGraph, Hypercube
from .packing import Broadcast, Packing

DEFAULT_MP_MAX_N = 8
DEFAULT_GAMMA_MAX_N = 6
DEFAULT_MAX_VERTICES = 64


@dataclass(frozen=True)
class ExactResult:
    optimum: int
    witness: object  # Packing / tuple of vertex ids / Broadcast
    nodes: int
    seconds: float


def _distance_table(g):
    """(V, V) distance matrix; unreachable encoded as a value beyond any radius."""
    if isinstance(g, Hypercube):
        v = np.arange(g.num_vertices, dtype=np.uint64)
        return np.bitwise_count(v[:, None] ^ v[None, :]).astype(np.int16)
    d = g.dist_matrix().astype(np.int16).copy()
    finite_max = int(d.max(initial=0))
    d[d < 0] = finite_max + 1
    return d


def exact_mp(
    g,
    max_n: int = DEFAULT_MP_MAX_N,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    fix_origin: bool = True,
    warm_start: bool = True,
) -> ExactResult:
    """Exact multipacking number with a certified witness.

    fix_origin and warm_start only apply to hypercube instances; disabling
    them reproduces the plain unpruned search (used to validate the
    symmetry argument on small cubes).
    """
    t0 = time.perf_counter()
    if isinstance(g, Hypercube):
        if g.n > max_n:
            raise CapExceededError(f"exact mp capped at hypercube n={max_n}, got {g.n}")
        order = sorted(g.vertices(), key=lambda v: (v.bit_count(), v))
    elif isinstance(g, GenericGraph):
        if g.num_vertices > max_vertices:
            raise CapExceededError(
                f"exact mp capped at {max_vertices} vertices, got {g.num_vertices}"
            )
        order = list(g.vertices())
        fix_origin = False
        warm_start = False
    else:
        raise TypeError(f"expected Hypercube or GenericGraph, got {type(g).__name__}")

    nv = g.num_vertices
    dist = _distance_table(g)
    maxk = int(dist[dist <= nv].max(initial=0)) if isinstance(g, GenericGraph) else g.n
    if isinstance(g, GenericGraph):
        maxk = int(np.minimum(dist, nv).max(initial=0))
        finite = dist[dist <= maxk]
        maxk = int(finite.max(initial=0))
    ks = np.arange(maxk + 1, dtype=np.int16)
    # inc[u][v][k] = 1 when adding member u raises the count of N_k[v]
    inc = (ks[None, None, :] >= dist[:, :, None]).astype(np.int16)
    thresholds = ks[1:]

    best_set: list = []
    if warm_start:
        seed = build_half_packing(g.n, verify=False)
        best_set = list(seed.members)
    best_size = len(best_set)
    nodes = 0

    def feasible_subset(counts, cands):
        if len(cands) == 0:
            return cands
        sums = counts[None, :, 1:] + inc[cands][:, :, 1:]
        ok = (sums <= thresholds).all(axis=(1, 2))
        return cands[ok]

    def extend(chosen, cands, counts):
        nonlocal best_size, best_set, nodes
        nodes += 1
        if len(chosen) > best_size:
            best_size = len(chosen)
            best_set = list(chosen)
        for i in range(len(cands)):
            if len(chosen) + (len(cands) - i) <= best_size:
                break
            u = int(cands[i])
            counts2 = counts + inc[u]
            chosen.append(u)
            extend(chosen, feasible_subset(counts2, cands[i + 1 :]), counts2)
            chosen.pop()

    zero_counts = np.zeros((nv, maxk + 1), dtype=np.int16)
    order_arr = np.array(order, dtype=np.int64)
    if fix_origin:
        counts = inc[order[0]].copy()
        extend([order[0]], feasible_subset(counts, order_arr[1:]), counts)
    else:
        extend([], feasible_subset(zero_counts, order_arr), zero_counts)

    elapsed = time.perf_counter() - t0
    if isinstance(g, Hypercube):
        witness = Packing(g.n, tuple(sorted(best_set)))
    else:
        witness = tuple(sorted(best_set))
    return ExactResult(best_size, witness, nodes, elapsed)


def _partitions(total: int, max_part: int):
    """Nonincreasing positive integer partitions of total with parts <= max_part."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def _center_assignments(groups, available):
    """Distinct-vertex assignments; equal-power centers in ascending id order."""
    if not groups:
        yield ()
        return
    power, mult = groups[0]
    for combo in itertools.combinations(available, mult):
        taken = set(combo)
        rest_avail = [v for v in available if v not in taken]
        for rest in _center_assignments(groups[1:], rest_avail):
            yield tuple((v, power) for v in combo) + rest


def exact_gamma_b(
    g,
    max_n: int = DEFAULT_GAMMA_MAX_N,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> ExactResult:
    """Exact broadcast domination number with a certified witness."""
    t0 = time.perf_counter()
    if isinstance(g, Hypercube):
        if g.n > max_n:
            raise CapExceededError(f"exact gamma_b capped at hypercube n={max_n}, got {g.n}")
        r = g.radius()
    elif isinstance(g, GenericGraph):
        if g.num_vertices > max_vertices:
            raise CapExceededError(
                f"exact gamma_b capped at {max_vertices} vertices, got {g.num_vertices}"
            )
        r = g.radius()  # raises DisconnectedGraphError when disconnected
    else:
        raise TypeError(f"expected Hypercube or GenericGraph, got {type(g).__name__}")

    nv = g.num_vertices
    dist = _distance_table(g)
    # ball_max[p]: the largest ball of radius p anywhere in the graph
    ball_max = [int((dist <= p).sum(axis=1).max()) for p in range(r + 1)]
    vertices = list(range(nv))
    nodes = 0

    for cost in range(1, r + 1):
        for partition in _partitions(cost, r):
            if sum(ball_max[p] for p in partition) < nv:
                continue  # cannot cover |V| even with disjoint best-case balls
            groups = [(p, len(list(run))) for p, run in itertools.groupby(partition)]
            for assignment in _center_assignments(groups, vertices):
                nodes += 1
                covered = np.zeros(nv, dtype=bool)
                for v, power in assignment:
                    covered |= dist[v] <= power
                if covered.all():
                    witness = Broadcast(g, dict(assignment))
                    elapsed = time.perf_counter() - t0
                    return ExactResult(cost, witness, nodes, elapsed)
    raise RuntimeError("unreachable: a radius broadcast from a center always dominates")


def duality_check(g, **solver_kwargs) -> dict:
    """Solve both problems and report mp, gamma_b and their ratio.

    mp <= gamma_b always holds (weak duality) and is asserted. The
    conjectured gamma_b <= 2*mp is asserted only on hypercubes, where it
    is a theorem; on generic graphs it is reported via conjecture_holds.
    """
    mp_kwargs = {k: v for k, v in solver_kwargs.items() if k in ("max_n", "max_vertices", "fix_origin", "warm_start")}
    gb_kwargs = {k: v for k, v in solver_kwargs.items() if k in ("max_vertices",)}
    if "gamma_max_n" in solver_kwargs:
        gb_kwargs["max_n"] = solver_kwargs["gamma_max_n"]
    mp_res = exact_mp(g, **mp_kwargs)
    gb_res = exact_gamma_b(g, **gb_kwargs)
    mp_val, gb_val = mp_res.optimum, gb_res.optimum
    if mp_val > gb_val:
        raise RuntimeError(
            f"duality violated: mp={mp_val} > gamma_b={gb_val}; solver bug"
        )
    conjecture_holds = gb_val <= 2 * mp_val
    if isinstance(g, Hypercube) and not conjecture_holds:
        raise RuntimeError(
            f"gamma_b={gb_val} > 2*mp={2 * mp_val} on a hypercube; solver bug"
        )
    return {
        "mp": mp_val,
        "gamma_b": gb_val,
        "ratio": gb_val / mp_val,
        "conjecture_holds": conjecture_holds,
        "mp_result": mp_res,
        "gamma_b_result": gb_res,
    }

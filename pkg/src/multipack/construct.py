"""Certified multipacking constructions.

Everything here reduces to one combiner: given multipackings P_0 in Q_{n0}
and P_1 in Q_{n1} with n0 >= n1, the set

    (0^(n-n0) . P_0)  union  (1^(n-n1) . P_1),
    n = n0 + max(|P_0|, 2) + max(|P_1|, 2) - 1

is a multipacking in Q_n with |P_0| + |P_1| members. Two schedules of the
combiner are provided:

* build_half_packing(n): the halving recursion. For even n = 2k it splits
  k into ceil(k/2) + floor(k/2), combines packings of those sizes taken
  from dimensions 2*ceil(k/2) and 2*floor(k/2), and zero-prefixes up to n;
  odd n embeds from n-1. It always yields at least floor(n/2) members.
* build_doubling_sequence(i): combines two copies of the previous stage,
  starting from ({000,111}, Q_3). Stage i lands in dimension 2^(i+1) - i
  with 2^i members, which for i >= 3 exceeds floor(n/2).

Every construction carries a replayable trace: a nested dict recording the
base cases and combiner/embedding steps, from which the exact member list
can be rebuilt bit for bit.

By default every combine re-verifies its inputs and output with the
exhaustive verifier up to dimension 24 (about 3*10^8 popcounts); beyond
that the combiner's correctness argument is trusted unless the caller
raises verify_limit.
"""

from .errors import CapExceededError
from .graphs import MAX_DIMENSION, format_vertex
from .packing import Packing, find_violation

# Exhaustive re-verification is on by default up to this dimension.
DEFAULT_VERIFY_LIMIT = 24

# The halving recursion and doubling sequence stay within this dimension
# unless the caller raises the cap (hard ceiling: MAX_DIMENSION).
DEFAULT_CAP = 28

_BASE_MEMBERS = {
    1: (0b0,),
    2: (0b00,),
    3: (0b000, 0b111),
    4: (0b0000, 0b1111),
    5: (0b00000, 0b11111),
    6: (0b000000, 0b000111, 0b111000, 0b111111),
}


def _trace_of(p: Packing) -> dict:
    if p.trace is not None:
        return p.trace
    return {"op": "literal", "n": p.n, "members": list(p.member_strings())}


def _require_multipacking(p: Packing, role: str, threads: int):
    witness = find_violation(p, threads=threads)
    if witness is not None:
        raise ValueError(
            f"{role} is not a multipacking: ball of radius {witness.radius} "
            f"around {format_vertex(witness.center, p.n)} holds {witness.count} members"
        )


def base_packing(n: int) -> Packing:
    """Certified maximum multipacking of Q_n for n = 1..6 (sizes 1,1,2,2,2,4)."""
    if n not in _BASE_MEMBERS:
        raise ValueError(f"base packings exist for n = 1..6, got {n}")
    return Packing(n, _BASE_MEMBERS[n], trace={"op": "base", "n": n})


def prefix_concat(bit: int, m: int, s: Packing) -> Packing:
    """Prepend m copies of bit to every member, embedding into Q_{n+m}."""
    if bit not in (0, 1):
        raise ValueError("prefix bit must be 0 or 1")
    if m < 0:
        raise ValueError("prefix length must be non-negative")
    new_n = s.n + m
    if new_n > MAX_DIMENSION:
        raise CapExceededError(f"dimension {new_n} exceeds word size {MAX_DIMENSION}")
    if m == 0:
        return s
    prefix = ((1 << m) - 1) << s.n if bit else 0
    members = tuple(prefix | x for x in s.members)
    trace = {"op": "prefix", "bit": bit, "count": m, "inner": _trace_of(s)}
    return Packing(new_n, members, trace=trace)


def embed_up(p: Packing, target_n: int) -> Packing:
    """Zero-prefix into Q_{target_n}; distances between members are unchanged."""
    if target_n < p.n:
        raise ValueError(f"cannot embed Q_{p.n} packing down into Q_{target_n}")
    if target_n == p.n:
        return p
    if target_n > MAX_DIMENSION:
        raise CapExceededError(f"dimension {target_n} exceeds word size {MAX_DIMENSION}")
    members = p.members  # zero prefix leaves the words untouched
    trace = {"op": "embed", "n": target_n, "inner": _trace_of(p)}
    return Packing(target_n, members, trace=trace)


def truncate(p: Packing, size: int) -> Packing:
    """Keep the first `size` members. Subsets of multipackings stay multipackings."""
    if size < 0:
        raise ValueError("size must be non-negative")
    if size >= p.size:
        return p
    trace = {"op": "truncate", "size": size, "inner": _trace_of(p)}
    return Packing(p.n, p.members[:size], trace=trace)


def combine(p0: Packing, p1: Packing, verify: bool = True, threads: int = 1) -> Packing:
    """Combiner: 0-prefixed copy of p0 united with a 1-prefixed copy of p1.

    Output dimension n = n0 + max(|p0|,2) + max(|p1|,2) - 1, member count
    |p0| + |p1|. Requires n0 >= n1 and, when verify is set, certifies both
    inputs and the output with the exhaustive verifier.
    """
    if p0.n < p1.n:
        raise ValueError(f"combine needs n0 >= n1, got {p0.n} < {p1.n}")
    if verify:
        _require_multipacking(p0, "first input", threads)
        _require_multipacking(p1, "second input", threads)
    n = p0.n + max(p0.size, 2) + max(p1.size, 2) - 1
    if n > MAX_DIMENSION:
        raise CapExceededError(f"combined dimension {n} exceeds word size {MAX_DIMENSION}")
    low_block = tuple(p0.members)  # 0-prefix: words unchanged
    ones = ((1 << (n - p1.n)) - 1) << p1.n
    high_block = tuple(ones | x for x in p1.members)
    out = Packing(
        n,
        low_block + high_block,
        trace={"op": "combine", "left": _trace_of(p0), "right": _trace_of(p1)},
    )
    if verify:
        witness = find_violation(out, threads=threads)
        if witness is not None:  # the combiner argument rules this out
            raise RuntimeError(
                f"combine produced a non-multipacking (violation at "
                f"{format_vertex(witness.center, n)}, k={witness.radius}); "
                "this is a bug"
            )
    return out


def build_half_packing(
    n: int,
    verify: bool = True,
    verify_limit: int = DEFAULT_VERIFY_LIMIT,
    cap_n: int = DEFAULT_CAP,
    threads: int = 1,
) -> Packing:
    """Certified multipacking of Q_n with at least floor(n/2) members.

    The halving recursion: even n = 2k with k >= 4 combines packings of
    sizes ceil(k/2) and floor(k/2) drawn from dimensions 2*ceil(k/2) and
    2*floor(k/2) (truncating when a base case supplies more members than
    the split needs, so the combined dimension never overshoots n), then
    zero-prefixes up to n. Even n <= 6 return the full base packings, odd
    n embed from n-1. Sizes can exceed floor(n/2): n = 6 yields 4.
    """
    if n < 1 or n > min(cap_n, MAX_DIMENSION):
        raise CapExceededError(f"dimension cap: need 1 <= n <= {min(cap_n, MAX_DIMENSION)}, got {n}")

    memo = {}

    def build(dim: int) -> Packing:
        if dim in memo:
            return memo[dim]
        if dim <= 6:
            out = base_packing(dim)
        elif dim % 2 == 1:
            out = embed_up(build(dim - 1), dim)
        else:
            k = dim // 2
            hi, lo = (k + 1) // 2, k // 2
            part0 = truncate(build(2 * hi), hi)
            part1 = truncate(build(2 * lo), lo)
            check = verify and dim <= verify_limit
            out = embed_up(combine(part0, part1, verify=check, threads=threads), dim)
        memo[dim] = out
        return out

    return build(n)


def build_doubling_sequence(
    i: int,
    verify: bool = True,
    verify_limit: int = DEFAULT_VERIFY_LIMIT,
    cap_n: int = DEFAULT_CAP,
    threads: int = 1,
):
    """Stage i of the doubling construction: (n_i, packing of 2^i members).

    Starts from (3, {000, 111}) and combines two copies of the previous
    stage, so n_i = n_{i-1} + 2*p_{i-1} - 1 and p_i = 2*p_{i-1}; in closed
    form n_i = 2^(i+1) - i and p_i = 2^i.
    """
    if i < 1:
        raise ValueError(f"stage index must be >= 1, got {i}")
    n_target = (1 << (i + 1)) - i
    if n_target > min(cap_n, MAX_DIMENSION):
        raise CapExceededError(
            f"dimension cap: stage {i} needs Q_{n_target}, cap is {min(cap_n, MAX_DIMENSION)}"
        )
    p = base_packing(3)
    for _ in range(i - 1):
        check = verify and (p.n + 2 * p.size - 1) <= verify_limit
        p = combine(p, p, verify=check, threads=threads)
    assert p.n == n_target and p.size == 1 << i
    return p.n, p


def replay_trace(trace: dict) -> Packing:
    """Rebuild a packing bit for bit from its construction trace."""
    op = trace["op"]
    if op == "base":
        return base_packing(trace["n"])
    if op == "literal":
        n = trace["n"]
        return Packing(n, tuple(int(s, 2) for s in trace["members"]))
    if op == "prefix":
        return prefix_concat(trace["bit"], trace["count"], replay_trace(trace["inner"]))
    if op == "embed":
        return embed_up(replay_trace(trace["inner"]), trace["n"])
    if op == "truncate":
        return truncate(replay_trace(trace["inner"]), trace["size"])
    if op == "combine":
        return combine(replay_trace(trace["left"]), replay_trace(trace["right"]), verify=False)
    if op == "flip":
        inner = replay_trace(trace["inner"])
        mask = int(trace["mask"], 2)
        return Packing(inner.n, tuple(x ^ mask for x in inner.members), trace=trace)
    raise ValueError(f"unknown trace op {op!r}")

"""Constructive solver producing a 1-relaxed envy-free allocation.

Dispatch mirrors the existence argument:

* unequal group sizes: a seat-preserving allocation maximizing the smaller
  group's utility is already envy-free on both sides;
* equal sizes: if no "perfectly swapped" counterpart of the initial
  assignment exists, the initial assignment is envy-free; otherwise a
  circulation balances each school's two group counts to within one, and if
  the balanced allocation still has a swapped counterpart, excess/deficient
  schools are paired off by moving group-1 students along paths of a swap
  graph until both groups hold identical per-school counts (equal utilities,
  hence no envy either way).

Tie-breaking is deterministic throughout: lowest-id excess school, BFS with
ascending neighbor expansion, lowest-id student on parallel swap edges, and
a prefer-current-school objective in the balancing step, so repeated runs
reproduce the same output.

A note on envy between a group and itself: it can never occur.  A justifying
allocation would need the group's per-school seats to fit inside its own
current seats at every school while the totals are equal, which forces
equality school by school and therefore equal utility, contradicting the
required strict gain.  Only the two ordered cross-group pairs ever matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    Allocation,
    Instance,
    initial_allocation,
    is_amount_preserving,
    utility,
)
from .errors import (
    InternalError,
    NoPathError,
    PreconditionViolatedError,
    SizeMismatchError,
)
from .flow import FlowNetwork, max_flow, min_cost_circulation

__all__ = [
    "SolvePath",
    "SolveResult",
    "SwapGraph",
    "build_swap_graph",
    "max_utility_amount_preserving",
    "find_perfectly_swapped",
    "balanced_allocation",
    "adjust",
    "solve",
]


class SolvePath(Enum):
    """Which branch of the construction produced the result."""

    UNEQUAL_SIZES = "unequal_sizes"
    INITIAL_IS_EF = "initial_is_ef"
    BALANCED_IS_EF = "balanced_is_ef"
    ADJUSTED = "adjusted"


@dataclass
class SolveResult:
    allocation: Allocation
    path_taken: SolvePath
    adjust_iterations: int = 0
    # intermediate artifacts, kept for diagnostics and the benchmark harness
    initial_swapped: Allocation | None = None
    balanced: Allocation | None = None
    balanced_swapped: Allocation | None = None


def _types_by_access(inst: Instance, flags: np.ndarray):
    """Group students carrying equal (flag, accessible-set) pairs.

    Students inside a type are interchangeable in every flow built here, so
    collapsing them shrinks the networks considerably when accessibility
    patterns repeat.  Returns [(flag, student_ids, accessible_ids)] ordered
    by first member, with ascending student ids inside each type.
    """
    buckets: dict[tuple, list[int]] = {}
    indptr, indices = inst.acc_indptr, inst.acc_indices
    for j in range(inst.num_students):
        key = (int(flags[j]), indices[indptr[j] : indptr[j + 1]].tobytes())
        buckets.setdefault(key, []).append(j)
    return [
        (key[0], np.asarray(studs, dtype=np.int64), inst.accessible_of(studs[0]))
        for key, studs in buckets.items()
    ]


def _distribute(assign: np.ndarray, students: np.ndarray, schools, quantities) -> None:
    """Assign quantities[i] of the given students (ascending) to schools[i]."""
    pos = 0
    for k, q in zip(schools, quantities):
        q = int(q)
        if q:
            assign[students[pos : pos + q]] = int(k)
            pos += q
    if pos != len(students):
        raise InternalError("flow decode did not place every student")


def max_utility_amount_preserving(inst: Instance, group: int) -> Allocation:
    """Seat-preserving allocation maximizing the given group's utility.

    Solved as a min-cost circulation: every student occupies one unit of an
    accessible school, every school holds exactly its capacity, and units
    used by the target group earn the school's value.
    """
    if group not in (1, 2):
        raise ValueError("group must be 1 or 2")
    n, m = inst.num_students, inst.num_schools
    types = _types_by_access(inst, (inst.group_of == group).astype(np.int64))
    num_types = len(types)
    source = 0
    school0 = 1 + num_types
    sink = school0 + m

    tails, heads, lowers, uppers, costs = [], [], [], [], []

    def edge(t, h, lo, up, c=0):
        tails.append(t)
        heads.append(h)
        lowers.append(lo)
        uppers.append(up)
        costs.append(c)

    type_edges = []
    values = inst.value_of
    for t, (is_target, studs, acc) in enumerate(types):
        mult = len(studs)
        edge(source, 1 + t, mult, mult)
        first = len(tails)
        for k in acc:
            edge(1 + t, school0 + int(k), 0, mult, -int(values[k]) if is_target else 0)
        type_edges.append(range(first, len(tails)))
    for k in range(m):
        cap = int(inst.capacity[k])
        edge(school0 + k, sink, cap, cap)
    edge(sink, source, n, n)

    net = FlowNetwork._trusted(sink + 1, tails, heads, lowers, uppers, costs)
    result = min_cost_circulation(net)
    if result is None:
        raise InternalError("seat-preserving optimum infeasible on a valid instance")
    _, flows = result
    assign = np.empty(n, dtype=np.int64)
    for (is_target, studs, acc), edges in zip(types, type_edges):
        _distribute(assign, studs, acc, flows[list(edges)])
    return Allocation.for_instance(inst, assign)


def find_perfectly_swapped(inst: Instance, base: Allocation) -> Allocation | None:
    """An allocation whose per-school group counts are base's with the two
    groups exchanged, or None when no such allocation exists.

    Requires equal group sizes.  The two groups are matched independently:
    group i students must fill, school by school, exactly the seats the
    other group occupies under base.  Each matching is a max-flow whose
    school capacities must all saturate.
    """
    if inst.group_size(1) != inst.group_size(2):
        raise SizeMismatchError(
            "perfectly swapped allocations require equal group sizes"
        )
    n, m = inst.num_students, inst.num_schools
    assign = np.empty(n, dtype=np.int64)
    all_types = _types_by_access(inst, inst.group_of)
    for group in (1, 2):
        other = 3 - group
        targets = base.counts[:, other - 1]
        members = inst.members(group)
        types = [t for t in all_types if t[0] == group]
        num_types = len(types)
        source = 0
        school0 = 1 + num_types
        sink = school0 + m
        tails, heads, uppers = [], [], []
        type_edges = []
        for t, (_flag, studs, acc) in enumerate(types):
            tails.append(source)
            heads.append(1 + t)
            uppers.append(len(studs))
            first = len(tails)
            for k in acc:
                tails.append(1 + t)
                heads.append(school0 + int(k))
                uppers.append(len(studs))
            type_edges.append(range(first, len(tails)))
        for k in range(m):
            tails.append(school0 + k)
            heads.append(sink)
            uppers.append(int(targets[k]))
        zeros = [0] * len(tails)
        net = FlowNetwork._trusted(sink + 1, tails, heads, zeros, uppers, zeros)
        value, flows = max_flow(net, source, sink)
        if value < len(members):
            return None
        for (_flag, studs, acc), edges in zip(types, type_edges):
            _distribute(assign, studs, acc, flows[list(edges)])
    return Allocation.for_instance(inst, assign)


def _require_swapped_pair(a: Allocation, a_swapped: Allocation, what: str) -> None:
    if not (
        np.array_equal(a_swapped.counts[:, 0], a.counts[:, 1])
        and np.array_equal(a_swapped.counts[:, 1], a.counts[:, 0])
    ):
        raise PreconditionViolatedError(
            f"{what}: second allocation is not perfectly swapped w.r.t. the first"
        )


def balanced_allocation(inst: Instance, b: Allocation, b_swapped: Allocation) -> Allocation:
    """Seat-preserving allocation with per-school group counts differing by
    at most one, assigning every student to their school under either b or
    b_swapped.

    One circulation decides it: student units route through (school, group)
    pair nodes whose outflow is pinned to [floor(c/2), ceil(c/2)], while each
    school still hands exactly its capacity to the sink.  Feasibility is
    guaranteed because pushing half a unit along both of each student's
    candidate edges satisfies every bound, and integrality of the flow
    polytope then yields an integer solution.  Among the integral solutions
    we take one moving the fewest students away from b, which makes the
    outcome deterministic in the common no-tie cases.
    """
    if not is_amount_preserving(inst, b):
        raise PreconditionViolatedError("balanced_allocation: base is not seat-preserving")
    _require_swapped_pair(b, b_swapped, "balanced_allocation")

    n, m = inst.num_students, inst.num_schools
    source = 0
    pair0 = 1 + n  # node for (school k, group h) is pair0 + 2k + (h-1)
    school0 = pair0 + 2 * m
    sink = school0 + m
    tails, heads, lowers, uppers, costs = [], [], [], [], []

    def edge(t, h, lo, up, c=0):
        tails.append(t)
        heads.append(h)
        lowers.append(lo)
        uppers.append(up)
        costs.append(c)
        return len(tails) - 1

    stay_edges = np.empty(n, dtype=np.int64)
    for j in range(n):
        edge(source, 1 + j, 1, 1)
    group_of, b_assign, bs_assign = inst.group_of, b.assign, b_swapped.assign
    for j in range(n):
        g = int(group_of[j])
        stay_k = int(b_assign[j])
        move_k = int(bs_assign[j])
        stay_edges[j] = edge(1 + j, pair0 + 2 * stay_k + (g - 1), 0, 1)
        # parallel edge when both allocations agree; unit cost otherwise
        edge(1 + j, pair0 + 2 * move_k + (g - 1), 0, 1, 0 if move_k == stay_k else 1)
    for k in range(m):
        c = int(inst.capacity[k])
        for h in (0, 1):
            edge(pair0 + 2 * k + h, school0 + k, c // 2, (c + 1) // 2)
        edge(school0 + k, sink, c, c)
    edge(sink, source, n, n)

    net = FlowNetwork._trusted(sink + 1, tails, heads, lowers, uppers, costs)
    result = min_cost_circulation(net)
    if result is None:
        raise InternalError("balancing circulation infeasible despite the half-unit witness")
    _, flows = result
    assign = np.where(flows[stay_edges] == 1, b.assign, b_swapped.assign)
    alloc = Allocation.for_instance(inst, assign)

    counts = alloc.counts
    if not (
        np.array_equal(counts.sum(axis=1), inst.capacity)
        and np.array_equal(counts.min(axis=1), inst.capacity // 2)
        and np.array_equal(counts.max(axis=1), (inst.capacity + 1) // 2)
    ):
        raise InternalError("balancing output violates the floor/ceil split")
    return alloc


@dataclass
class SwapGraph:
    """Directed graph on schools with one edge per group-1 student, pointing
    from the student's current school to their target school."""

    num_schools: int
    edges: list[tuple[int, int, int]]  # (student, from_school, to_school)
    delta: np.ndarray  # per school: group-1 count minus group-2 count
    excess: np.ndarray  # schools with delta == +1
    deficient: np.ndarray  # schools with delta == -1

    @property
    def phi(self) -> int:
        """Total imbalance; drops by exactly 2 per adjustment step."""
        return int(np.abs(self.delta).sum())


def build_swap_graph(inst: Instance, x_assign: np.ndarray, target_assign: np.ndarray) -> SwapGraph:
    members1 = inst.members(1)
    members2 = inst.members(2)
    m = inst.num_schools
    out = np.bincount(x_assign[members1], minlength=m)
    cnt2 = np.bincount(x_assign[members2], minlength=m)
    delta = out - cnt2
    indeg = np.bincount(target_assign[members1], minlength=m)
    # degree identity: out-degree minus in-degree equals the group imbalance
    if not np.array_equal(out - indeg, delta):
        raise InternalError("swap graph degree identity violated")
    edges = [(int(j), int(x_assign[j]), int(target_assign[j])) for j in members1]
    return SwapGraph(
        num_schools=m,
        edges=edges,
        delta=delta,
        excess=np.flatnonzero(delta == 1),
        deficient=np.flatnonzero(delta == -1),
    )


def _bfs_to_deficient(graph: SwapGraph, start: int) -> list[int]:
    """Shortest path from an excess school to any deficient school, expanding
    neighbors in ascending school order.  Self-loops never advance a search."""
    adjacency: dict[int, list[int]] = {}
    for _j, u, v in graph.edges:
        if u != v:
            adjacency.setdefault(u, []).append(v)
    for u in adjacency:
        adjacency[u] = sorted(set(adjacency[u]))
    deficient = set(int(k) for k in graph.deficient)
    parent: dict[int, int | None] = {start: None}
    queue = [start]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in adjacency.get(u, ()):
            if v in parent:
                continue
            parent[v] = u
            if v in deficient:
                path = [v]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(v)
    raise NoPathError(f"no deficient school reachable from excess school {start}")


def _adjust(inst: Instance, a: Allocation, a_swapped: Allocation) -> tuple[Allocation, int]:
    if not is_amount_preserving(inst, a):
        raise PreconditionViolatedError("adjust: allocation is not seat-preserving")
    _require_swapped_pair(a, a_swapped, "adjust")
    if int(np.abs(a.counts[:, 0] - a.counts[:, 1]).max(initial=0)) > 1:
        raise PreconditionViolatedError("adjust: per-school group difference exceeds 1")

    x = a.assign.copy()
    target = a_swapped.assign
    m = inst.num_schools
    iterations = 0
    while True:
        graph = build_swap_graph(inst, x, target)
        if len(graph.excess) == 0:
            break
        phi = graph.phi
        start = int(graph.excess.min())
        path = _bfs_to_deficient(graph, start)
        for u, v in zip(path, path[1:]):
            # lowest-id student whose swap edge realizes this path edge;
            # already-moved students sit on self-loops and can never match
            j = min(j for (j, fu, fv) in graph.edges if fu == u and fv == v)
            x[j] = target[j]
        iterations += 1
        new_graph = build_swap_graph(inst, x, target)
        if new_graph.phi != phi - 2:
            raise InternalError("imbalance did not drop by exactly 2 in an adjustment step")
        if iterations > m:
            raise InternalError("adjustment exceeded its iteration bound")

    alloc = Allocation.for_instance(inst, x)
    if not np.array_equal(alloc.counts[:, 0], alloc.counts[:, 1]):
        raise InternalError("adjustment terminated with unequal group counts")
    return alloc, iterations


def adjust(inst: Instance, a: Allocation, a_swapped: Allocation) -> Allocation:
    """Equalize the two groups' per-school counts by moving group-1 students
    to their target schools along excess-to-deficient paths.

    Requires a seat-preserving allocation with per-school group difference at
    most 1 and a perfectly swapped counterpart.  The output deviates from
    capacity by at most 1 per school, holds identical per-school counts for
    both groups (hence equal utilities), never moves a group-2 student, and
    moves each group-1 student at most once, only to their target school.
    """
    alloc, _ = _adjust(inst, a, a_swapped)
    return alloc


def solve(inst: Instance) -> SolveResult:
    """A 1-relaxed envy-free allocation, with the construction branch taken.

    Runs in polynomial time: every stage is a single flow computation except
    the adjustment loop, which performs at most m/2 path moves.
    """
    n1, n2 = inst.group_size(1), inst.group_size(2)
    if n1 != n2:
        smaller = 1 if n1 < n2 else 2
        alloc = max_utility_amount_preserving(inst, smaller)
        return SolveResult(alloc, SolvePath.UNEQUAL_SIZES)

    b = initial_allocation(inst)
    b_swapped = find_perfectly_swapped(inst, b)
    if b_swapped is None:
        return SolveResult(b, SolvePath.INITIAL_IS_EF, initial_swapped=None)

    balanced = balanced_allocation(inst, b, b_swapped)
    balanced_swapped = find_perfectly_swapped(inst, balanced)
    if balanced_swapped is None:
        return SolveResult(
            balanced,
            SolvePath.BALANCED_IS_EF,
            initial_swapped=b_swapped,
            balanced=balanced,
        )

    adjusted, iterations = _adjust(inst, balanced, balanced_swapped)
    if utility(inst, adjusted, 1) != utility(inst, adjusted, 2):
        raise InternalError("adjusted allocation has unequal group utilities")
    return SolveResult(
        adjusted,
        SolvePath.ADJUSTED,
        adjust_iterations=iterations,
        initial_swapped=b_swapped,
        balanced=balanced,
        balanced_swapped=balanced_swapped,
    )

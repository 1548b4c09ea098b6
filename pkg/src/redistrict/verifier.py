"""Independent certification of 1-relaxed envy-freeness.

An allocation passes when (1) every school's headcount deviates from its
capacity by at most one, and (2) for neither ordered pair of groups does a
justifying alternative allocation exist.  A justifying allocation for the
pair (envier, envied) must assign every student to an accessible school,
keep per-school deviations within n times the checked allocation's
deviation, strictly raise the envier's utility, and fit the envier's
per-school seats inside the envied group's current seats.

Two routes compute the same verdicts: an exact flow optimization
(:func:`check_1ref`) and exhaustive enumeration (:func:`brute_force_check`),
kept deliberately independent so each can audit the other.

Envy of a group toward itself is impossible (seat-subset plus equal totals
force equal utility, never a strict gain), so only the ordered pairs (1, 2)
and (2, 1) are examined.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import prod

import numpy as np

from .core import Allocation, Instance, deviation, utility
from .errors import InternalError, TooLargeError
from .flow import FlowNetwork, min_cost_circulation
from .solver import _distribute, _types_by_access

__all__ = [
    "PairStatus",
    "PairVerdict",
    "EnvyReport",
    "check_1ref",
    "brute_force_check",
    "brute_force_solve",
    "ENUMERATION_GUARD",
]

ENUMERATION_GUARD = 10**7
_BLOCK = 1 << 15


class PairStatus(Enum):
    NO_ENVY = "no_envy"
    ENVY = "envy"
    # the envied group holds fewer seats than the envier has students, so no
    # full assignment can satisfy the seat-subset condition
    NOT_APPLICABLE = "not_applicable"


@dataclass
class PairVerdict:
    status: PairStatus
    witness: Allocation | None = None
    witness_utility: int | None = None


@dataclass
class EnvyReport:
    deviation: int
    deviation_ok: bool
    pairs: dict[tuple[int, int], PairVerdict]
    is_1ref: bool

    def summary(self) -> str:
        lines = [
            f"deviation: {self.deviation} "
            f"({'within' if self.deviation_ok else 'exceeds'} the per-school limit of 1)"
        ]
        for (i1, i2), verdict in sorted(self.pairs.items()):
            if verdict.status is PairStatus.ENVY:
                lines.append(
                    f"group {i1} envies group {i2}: justifying utility "
                    f"{verdict.witness_utility}, witness {verdict.witness.assign.tolist()}"
                )
            elif verdict.status is PairStatus.NOT_APPLICABLE:
                lines.append(f"group {i1} cannot envy group {i2} (too few seats to cover it)")
            else:
                lines.append(f"group {i1} does not envy group {i2}")
        lines.append("1-relaxed envy-free" if self.is_1ref else "NOT 1-relaxed envy-free")
        return "\n".join(lines)


def _recheck_witness(inst: Instance, x: Allocation, d: int, i1: int, witness: Allocation) -> None:
    """Arithmetic re-check of the three justification conditions; a failure
    means the optimizer or its decoding is broken, never bad input."""
    i2 = 3 - i1
    n = inst.num_students
    dev_w = int(np.abs(witness.school_counts() - inst.capacity).max(initial=0))
    if dev_w > n * d:
        raise InternalError("witness violates the deviation budget")
    if utility(inst, witness, i1) <= utility(inst, x, i1):
        raise InternalError("witness does not strictly improve the envier")
    if np.any(witness.counts[:, i1 - 1] > x.counts[:, i2 - 1]):
        raise InternalError("witness seats are not a subset of the envied group's seats")


def _flow_pair_check(inst: Instance, x: Allocation, i1: int, d: int) -> PairVerdict:
    i2 = 3 - i1
    if inst.group_size(i2) < inst.group_size(i1):
        return PairVerdict(PairStatus.NOT_APPLICABLE)

    n, m = inst.num_students, inst.num_schools
    caps = x.counts[:, i2 - 1]
    lo = np.maximum(0, inst.capacity - n * d)
    hi = np.minimum(n, inst.capacity + n * d)

    # maximize the envier's utility over all justifying allocations: students
    # route through (school, side) nodes; envier units are capped by the
    # envied group's seats and earn the school value, others are uncapped
    types = _types_by_access(inst, (inst.group_of == i1).astype(np.int64))
    num_types = len(types)
    source = 0
    pair0 = 1 + num_types  # envier node for school k: pair0 + 2k; others: +1
    school0 = pair0 + 2 * m
    sink = school0 + m
    tails, heads, lowers, uppers, costs = [], [], [], [], []

    def edge(t, h, lo, up, c=0):
        tails.append(t)
        heads.append(h)
        lowers.append(lo)
        uppers.append(up)
        costs.append(c)

    type_edges = []
    for t, (is_envier, studs, acc) in enumerate(types):
        mult = len(studs)
        edge(source, 1 + t, mult, mult)
        first = len(tails)
        side = 0 if is_envier else 1
        for k in acc:
            edge(1 + t, pair0 + 2 * int(k) + side, 0, mult)
        type_edges.append(range(first, len(tails)))
    for k in range(m):
        edge(pair0 + 2 * k, school0 + k, 0, int(caps[k]), -int(inst.value_of[k]))
        edge(pair0 + 2 * k + 1, school0 + k, 0, n)
        edge(school0 + k, sink, int(lo[k]), int(hi[k]))
    edge(sink, source, n, n)

    net = FlowNetwork._trusted(sink + 1, tails, heads, lowers, uppers, costs)
    result = min_cost_circulation(net)
    if result is None:
        return PairVerdict(PairStatus.NO_ENVY)  # nothing satisfies the conditions
    cost, flows = result
    best = -cost
    if best <= utility(inst, x, i1):
        return PairVerdict(PairStatus.NO_ENVY)

    assign = np.empty(n, dtype=np.int64)
    for (_is_envier, studs, acc), edges in zip(types, type_edges):
        _distribute(assign, studs, acc, flows[list(edges)])
    witness = Allocation.for_instance(inst, assign)
    _recheck_witness(inst, x, d, i1, witness)
    return PairVerdict(PairStatus.ENVY, witness, best)


def check_1ref(inst: Instance, x: Allocation) -> EnvyReport:
    """Certify 1-relaxed envy-freeness via two exact flow optimizations.

    For each ordered group pair the maximum justifiable utility is computed;
    envy is reported, with a re-checked witness allocation, exactly when it
    strictly exceeds the group's current utility.
    """
    d = deviation(inst, x)
    pairs = {(i1, 3 - i1): _flow_pair_check(inst, x, i1, d) for i1 in (1, 2)}
    is_1ref = d <= 1 and all(v.status is not PairStatus.ENVY for v in pairs.values())
    return EnvyReport(d, d <= 1, pairs, is_1ref)


# --- exhaustive enumeration ------------------------------------------------

def _space_size(inst: Instance) -> int:
    return prod(
        int(inst.acc_indptr[j + 1] - inst.acc_indptr[j]) for j in range(inst.num_students)
    )


def _guard(inst: Instance) -> int:
    size = _space_size(inst)
    if size > ENUMERATION_GUARD:
        raise TooLargeError(
            f"{size} candidate allocations exceed the enumeration guard of {ENUMERATION_GUARD}"
        )
    return size


def _assignment_block(inst: Instance, start: int, count: int) -> np.ndarray:
    """Assignments with linear indices [start, start+count), one row each.

    Index order is mixed-radix over the accessible lists: student 0 is the
    most significant digit and digits step through each list ascending.
    """
    n = inst.num_students
    sizes = np.array(
        [int(inst.acc_indptr[j + 1] - inst.acc_indptr[j]) for j in range(n)], dtype=np.int64
    )
    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    ids = np.arange(start, start + count, dtype=np.int64)
    out = np.empty((count, n), dtype=np.int64)
    for j in range(n):
        digits = (ids // strides[j]) % sizes[j]
        out[:, j] = inst.accessible_of(j)[digits]
    return out


def _block_group_counts(block: np.ndarray, members: np.ndarray, m: int) -> np.ndarray:
    rows = block.shape[0]
    if len(members) == 0:
        return np.zeros((rows, m), dtype=np.int64)
    sub = block[:, members] + (np.arange(rows, dtype=np.int64) * m)[:, None]
    return np.bincount(sub.ravel(), minlength=rows * m).reshape(rows, m)


def _assignment_at(inst: Instance, index: int) -> np.ndarray:
    return _assignment_block(inst, index, 1)[0]


def brute_force_check(inst: Instance, x: Allocation) -> EnvyReport:
    """Same report as :func:`check_1ref`, by enumerating every allocation.

    Independent oracle: conditions are evaluated directly from the counts of
    each candidate, with no flow machinery involved.  Guarded to at most
    ``ENUMERATION_GUARD`` candidates.
    """
    size = _guard(inst)
    n, m = inst.num_students, inst.num_schools
    d = deviation(inst, x)
    values = inst.value_of

    best: dict[int, tuple[int, int]] = {}  # i1 -> (best utility, first index)
    applicable = [
        i1 for i1 in (1, 2) if inst.group_size(3 - i1) >= inst.group_size(i1)
    ]
    for start in range(0, size, _BLOCK):
        count = min(_BLOCK, size - start)
        block = _assignment_block(inst, start, count)
        cnt = {
            i: _block_group_counts(block, inst.members(i), m) for i in (1, 2)
        }
        totals = cnt[1] + cnt[2]
        budget_ok = (np.abs(totals - inst.capacity) <= n * d).all(axis=1)
        for i1 in applicable:
            i2 = 3 - i1
            fits = (cnt[i1] <= x.counts[:, i2 - 1]).all(axis=1)
            sat = budget_ok & fits
            if not sat.any():
                continue
            u = cnt[i1] @ values
            u_sat = np.where(sat, u, -1)
            top = int(u_sat.max())
            if i1 not in best or top > best[i1][0]:
                best[i1] = (top, start + int(np.argmax(u_sat)))

    pairs = {}
    for i1 in (1, 2):
        i2 = 3 - i1
        if i1 not in applicable:
            pairs[(i1, i2)] = PairVerdict(PairStatus.NOT_APPLICABLE)
            continue
        if i1 not in best or best[i1][0] <= utility(inst, x, i1):
            pairs[(i1, i2)] = PairVerdict(PairStatus.NO_ENVY)
            continue
        top, index = best[i1]
        witness = Allocation.for_instance(inst, _assignment_at(inst, index))
        _recheck_witness(inst, x, d, i1, witness)
        pairs[(i1, i2)] = PairVerdict(PairStatus.ENVY, witness, top)
    is_1ref = d <= 1 and all(v.status is not PairStatus.ENVY for v in pairs.values())
    return EnvyReport(d, d <= 1, pairs, is_1ref)


def brute_force_solve(inst: Instance) -> list[Allocation]:
    """Every allocation that is 1-relaxed envy-free, in enumeration order.

    Quadratic in the number of candidate allocations; intended for tiny
    instances (the existence theorem for two groups guarantees a non-empty
    result).
    """
    size = _guard(inst)
    n, m = inst.num_students, inst.num_schools
    values = inst.value_of

    assigns = _assignment_block(inst, 0, size)
    cnt = {i: _block_group_counts(assigns, inst.members(i), m) for i in (1, 2)}
    totals = cnt[1] + cnt[2]
    maxdev = np.abs(totals - inst.capacity).max(axis=1) if m else np.zeros(size, np.int64)
    u = {i: cnt[i] @ values for i in (1, 2)}

    out: list[Allocation] = []
    for ix in range(size):
        d = int(maxdev[ix])
        if d > 1:
            continue
        envied = False
        for i1 in (1, 2):
            i2 = 3 - i1
            if inst.group_size(i2) < inst.group_size(i1):
                continue
            sat = (np.abs(totals - inst.capacity) <= n * d).all(axis=1) & (
                cnt[i1] <= cnt[i2][ix]
            ).all(axis=1)
            if sat.any() and int(u[i1][sat].max()) > int(u[i1][ix]):
                envied = True
                break
        if not envied:
            out.append(Allocation.for_instance(inst, assigns[ix]))
    return out

"""Domain model: problem instances, allocations, and the shared count/utility
arithmetic every other module builds on.

Students and schools use dense 0-based ids.  Group labels are 1 and 2; one
group may be empty.  School values are non-negative integers no larger than
``MAX_VALUE`` so that all utility and flow arithmetic stays exact in 64 bits
(real-valued inputs must be pre-scaled by the caller).

Instances and allocations are immutable after validation and safe to share
across threads; every operation here is a pure function.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    InaccessibleInitialError,
    InvalidGroupCountError,
    OverflowGuardError,
    ValidationError,
)

__all__ = [
    "MAX_VALUE",
    "Instance",
    "Allocation",
    "validate_instance",
    "utility",
    "deviation",
    "is_amount_preserving",
]

MAX_VALUE = 10**6
_I64_MAX = 2**63 - 1


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class Instance:
    """A validated redistricting problem.

    Capacities are always derived from the initial assignment (school k's
    capacity is the number of students initially there), never supplied, so
    the instance is feasible by construction.
    """

    __slots__ = (
        "num_students",
        "num_schools",
        "group_of",
        "value_of",
        "initial",
        "capacity",
        "acc_indptr",
        "acc_indices",
        "acc_mask",
        "_members",
    )

    def __init__(self, group_of, value_of, initial, capacity, acc_indptr, acc_indices, acc_mask=None):
        self.num_students = len(group_of)
        self.num_schools = len(value_of)
        self.group_of = _frozen(group_of)
        self.value_of = _frozen(value_of)
        self.initial = _frozen(initial)
        self.capacity = _frozen(capacity)
        self.acc_indptr = _frozen(acc_indptr)
        self.acc_indices = _frozen(acc_indices)
        if acc_mask is None:
            acc_mask = np.zeros((self.num_students, self.num_schools), dtype=bool)
            for j in range(self.num_students):
                acc_mask[j, acc_indices[acc_indptr[j] : acc_indptr[j + 1]]] = True
        self.acc_mask = _frozen(acc_mask)
        self._members = (
            _frozen(np.flatnonzero(self.group_of == 1)),
            _frozen(np.flatnonzero(self.group_of == 2)),
        )

    @property
    def accessible(self) -> tuple[tuple[int, ...], ...]:
        """Per-student accessible school ids, ascending."""
        return tuple(
            tuple(int(k) for k in self.acc_indices[self.acc_indptr[j] : self.acc_indptr[j + 1]])
            for j in range(self.num_students)
        )

    def accessible_of(self, student: int) -> np.ndarray:
        return self.acc_indices[self.acc_indptr[student] : self.acc_indptr[student + 1]]

    def members(self, group: int) -> np.ndarray:
        """Student ids in the given group (1 or 2), ascending."""
        return self._members[group - 1]

    def group_size(self, group: int) -> int:
        return len(self._members[group - 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            np.array_equal(self.group_of, other.group_of)
            and np.array_equal(self.value_of, other.value_of)
            and np.array_equal(self.initial, other.initial)
            and np.array_equal(self.acc_indptr, other.acc_indptr)
            and np.array_equal(self.acc_indices, other.acc_indices)
        )

    def __repr__(self) -> str:
        return (
            f"Instance(n={self.num_students}, m={self.num_schools}, "
            f"sizes=({self.group_size(1)}, {self.group_size(2)}))"
        )


class Allocation:
    """A total assignment of students to accessible schools, with cached
    per-school-per-group counts kept consistent with the assignment."""

    __slots__ = ("assign", "counts")

    def __init__(self, assign: np.ndarray, counts: np.ndarray):
        self.assign = _frozen(assign)
        self.counts = _frozen(counts)

    @classmethod
    def for_instance(cls, inst: Instance, assign) -> "Allocation":
        assign = np.asarray(assign, dtype=np.int64)
        if assign.shape != (inst.num_students,):
            raise ValidationError(
                f"assignment length {assign.shape} does not match {inst.num_students} students"
            )
        if inst.num_students:
            if assign.min() < 0 or assign.max() >= inst.num_schools:
                raise ValidationError("assignment contains an unknown school id")
            ok = inst.acc_mask[np.arange(inst.num_students), assign]
            if not ok.all():
                j = int(np.flatnonzero(~ok)[0])
                raise ValidationError(
                    f"student {j} assigned to inaccessible school {int(assign[j])}"
                )
        counts = np.stack(
            [
                np.bincount(assign[inst.members(1)], minlength=inst.num_schools),
                np.bincount(assign[inst.members(2)], minlength=inst.num_schools),
            ],
            axis=1,
        ).astype(np.int64)
        return cls(assign.copy(), counts)

    def school_counts(self) -> np.ndarray:
        """Total students per school."""
        return self.counts.sum(axis=1)

    def count(self, school: int, group: int) -> int:
        return int(self.counts[school, group - 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Allocation):
            return NotImplemented
        return np.array_equal(self.assign, other.assign)

    def __repr__(self) -> str:
        return f"Allocation({self.assign.tolist()})"


def validate_instance(values, groups, accessible, initial) -> Instance:
    """Validate a raw instance description and derive school capacities.

    Arguments are per-school values, per-student group labels, per-student
    accessible school id collections, and the per-student initial school.
    """
    value_of = np.asarray(list(values), dtype=np.int64)
    group_of = np.asarray(list(groups), dtype=np.int64)
    initial_arr = np.asarray(list(initial), dtype=np.int64)
    n = len(group_of)
    m = len(value_of)
    if len(initial_arr) != n or len(accessible) != n:
        raise ValidationError("groups, accessible and initial must have one entry per student")

    bad = (group_of != 1) & (group_of != 2)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise InvalidGroupCountError(
            f"student {j} has group label {int(group_of[j])}; labels must be 1 or 2"
        )
    if m and (value_of.min() < 0 or value_of.max() > MAX_VALUE):
        raise ValidationError(f"school values must be integers in [0, {MAX_VALUE}]")
    max_v = int(value_of.max()) if m else 0
    if n * max(1, max_v) > _I64_MAX:
        raise OverflowGuardError("total utility may exceed signed 64-bit range")

    indptr = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    for j, acc in enumerate(accessible):
        ids = sorted(int(k) for k in acc)
        if not ids:
            raise ValidationError(f"student {j} has an empty accessible set")
        if ids[0] < 0 or ids[-1] >= m:
            raise ValidationError(f"student {j} lists an unknown school id")
        if any(a == b for a, b in zip(ids, ids[1:])):
            raise ValidationError(f"student {j} lists a duplicate school id")
        chunks.append(np.asarray(ids, dtype=np.int64))
        indptr[j + 1] = indptr[j] + len(ids)
    acc_indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)

    for j in range(n):
        k = int(initial_arr[j])
        if k < 0 or k >= m:
            raise ValidationError(f"student {j} has unknown initial school {k}")
        row = acc_indices[indptr[j] : indptr[j + 1]]
        if k not in row:
            raise InaccessibleInitialError(
                f"student {j} starts at school {k} but cannot commute there"
            )

    capacity = (
        np.bincount(initial_arr, minlength=m).astype(np.int64)
        if n
        else np.zeros(m, dtype=np.int64)
    )
    return Instance(group_of, value_of, initial_arr, capacity, indptr, acc_indices)


def initial_allocation(inst: Instance) -> Allocation:
    """The instance's initial assignment as an Allocation."""
    return Allocation.for_instance(inst, inst.initial)


def utility(inst: Instance, alloc: Allocation, group: int) -> int:
    """Sum of school values over the group's members (0 for an empty group)."""
    return int(inst.value_of[alloc.assign[inst.members(group)]].sum())


def deviation(inst: Instance, alloc: Allocation) -> int:
    """Largest per-school absolute headcount deviation from capacity."""
    if inst.num_schools == 0:
        return 0
    return int(np.abs(alloc.school_counts() - inst.capacity).max())


def is_amount_preserving(inst: Instance, alloc: Allocation) -> bool:
    """True iff every school holds exactly its capacity."""
    return deviation(inst, alloc) == 0

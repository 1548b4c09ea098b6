"""Strict JSON serialization for instances and allocations.

Instance files carry schools (id, value) and students (id, group,
accessible, initial).  Capacities are never serialized; they are always
re-derived from the initial assignment on read, which makes an inconsistent
file impossible to express.  Ids must be dense and ascending, and unknown
fields are rejected.

Allocation files carry the assignment plus a redundant ``meta`` block
(utilities, deviation, optionally which solver branch produced it) that is
ignored on read beyond schema checking.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Allocation, Instance, deviation, utility, validate_instance
from .errors import ParseError

__all__ = ["read_instance", "write_instance", "read_allocation", "write_allocation"]


def _fail(where: str, message: str):
    raise ParseError(f"{where}: {message}")


def _expect_keys(obj, required, optional, where):
    if not isinstance(obj, dict):
        _fail(where, f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        _fail(where, f"unknown field(s) {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        _fail(where, f"missing field(s) {sorted(missing)}")


def _expect_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"expected an integer, got {value!r}")
    return value


def _load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def read_instance(path) -> Instance:
    """Parse and fully validate an instance file."""
    doc = _load_json(path)
    _expect_keys(doc, ("schools", "students"), (), str(path))
    schools = doc["schools"]
    students = doc["students"]
    if not isinstance(schools, list) or not isinstance(students, list):
        _fail(str(path), "schools and students must be arrays")

    values = []
    for i, school in enumerate(schools):
        where = f"{path}: schools[{i}]"
        _expect_keys(school, ("id", "value"), (), where)
        if _expect_int(school["id"], where) != i:
            _fail(where, f"ids must be dense and ascending (expected {i})")
        values.append(_expect_int(school["value"], where))

    groups, accessible, initial = [], [], []
    for j, student in enumerate(students):
        where = f"{path}: students[{j}]"
        _expect_keys(student, ("id", "group", "accessible", "initial"), (), where)
        if _expect_int(student["id"], where) != j:
            _fail(where, f"ids must be dense and ascending (expected {j})")
        groups.append(_expect_int(student["group"], where))
        acc = student["accessible"]
        if not isinstance(acc, list) or not acc:
            _fail(where, "accessible must be a non-empty array of school ids")
        accessible.append([_expect_int(k, f"{where}.accessible") for k in acc])
        initial.append(_expect_int(student["initial"], where))

    return validate_instance(values, groups, accessible, initial)


def _instance_doc(inst: Instance) -> dict:
    return {
        "schools": [
            {"id": k, "value": int(inst.value_of[k])} for k in range(inst.num_schools)
        ],
        "students": [
            {
                "id": j,
                "group": int(inst.group_of[j]),
                "accessible": [int(k) for k in inst.accessible_of(j)],
                "initial": int(inst.initial[j]),
            }
            for j in range(inst.num_students)
        ],
    }


def write_instance(path, inst: Instance) -> None:
    Path(path).write_text(json.dumps(_instance_doc(inst), indent=2) + "\n", encoding="utf-8")


def read_allocation(path, inst: Instance) -> Allocation:
    """Parse an allocation file and validate it against the instance."""
    doc = _load_json(path)
    _expect_keys(doc, ("assignment",), ("meta",), str(path))
    assignment = doc["assignment"]
    if not isinstance(assignment, list):
        _fail(str(path), "assignment must be an array of school ids")
    if len(assignment) != inst.num_students:
        _fail(str(path), f"assignment lists {len(assignment)} students, instance has {inst.num_students}")
    assign = [_expect_int(k, f"{path}: assignment") for k in assignment]
    if "meta" in doc:
        _expect_keys(doc["meta"], (), ("path_taken", "utilities", "deviation"), f"{path}: meta")
    return Allocation.for_instance(inst, assign)


def write_allocation(path, inst: Instance, alloc: Allocation, path_taken: str | None = None) -> None:
    meta = {
        "utilities": {"group1": utility(inst, alloc, 1), "group2": utility(inst, alloc, 2)},
        "deviation": deviation(inst, alloc),
    }
    if path_taken is not None:
        meta["path_taken"] = path_taken
    doc = {"assignment": [int(k) for k in alloc.assign], "meta": meta}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

"""Acceptance suite: one test per criterion, printing a PASS line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines and timing.  All assertions are exact (integer arithmetic, tolerance
zero); the only non-assertion figure is the wall-clock of the theorem sweep,
which is printed for reference.
"""

import itertools
import json
import time

import numpy as np
import pytest

import oracles
from redistrict import (
    GenConfig,
    SolvePath,
    brute_force_check,
    check_1ref,
    generate_instance,
    initial_allocation,
    max_utility_amount_preserving,
    solve,
    utility,
    validate_instance,
)
from redistrict.cli import main
from redistrict.flow import FlowNetwork, feasible_circulation, max_flow, min_cost_circulation
from redistrict.generate import splitmix64
from redistrict.io import read_allocation, read_instance, write_allocation, write_instance
from redistrict.verifier import PairStatus

SEEDS_PER_CONFIG = 1000
GRID_N = (10, 40, 80)
GRID_M = (3, 8, 15)
GRID_P = (0.0, 0.3, 1.0)


def _configs():
    for n, m, p in itertools.product(GRID_N, GRID_M, GRID_P):
        for split in ("equal", f"exact:{n // 2 - 1}"):
            yield n, m, p, split


def _ok(criterion, text):
    print(f"[criterion {criterion}] {text}: PASS", flush=True)


@pytest.fixture(scope="module")
def theorem_sweep():
    """Solve and certify every instance of the criterion-1 grid, collecting
    the per-stage evidence criteria 4-6 need."""
    stats = {
        "total": 0,
        "certified": 0,
        "paths": {},
        "balanced_checked": 0,
        "balanced_bad": 0,
        "adjust_checked": 0,
        "adjust_bad": [],
        "max_iters_by_m": {},
    }
    t0 = time.perf_counter()
    for n, m, p, split in _configs():
        for seed in range(SEEDS_PER_CONFIG):
            inst = generate_instance(
                GenConfig(seed=seed, num_students=n, num_schools=m,
                          extra_edge_prob=p, group_split=split)
            )
            result = solve(inst)  # any NoPathError here fails the fixture
            stats["total"] += 1
            stats["certified"] += check_1ref(inst, result.allocation).is_1ref
            path = result.path_taken
            stats["paths"][path.value] = stats["paths"].get(path.value, 0) + 1

            if result.balanced is not None:
                stats["balanced_checked"] += 1
                counts = result.balanced.counts
                good = (
                    np.array_equal(counts.sum(axis=1), inst.capacity)
                    and np.array_equal(counts.min(axis=1), inst.capacity // 2)
                    and np.array_equal(counts.max(axis=1), (inst.capacity + 1) // 2)
                )
                stats["balanced_bad"] += not good

            if path is SolvePath.ADJUSTED:
                stats["adjust_checked"] += 1
                bal = result.balanced
                phi = int(np.abs(bal.counts[:, 0] - bal.counts[:, 1]).sum())
                final = result.allocation
                members2 = inst.members(2)
                problems = []
                if result.adjust_iterations > m // 2:
                    problems.append("iteration bound")
                # the loop asserts a drop of exactly 2 per step, so the
                # iteration count must consume the whole initial imbalance
                if phi % 2 or result.adjust_iterations != phi // 2:
                    problems.append("imbalance accounting")
                if not np.array_equal(final.assign[members2], bal.assign[members2]):
                    problems.append("group-2 moved")
                if not np.array_equal(final.counts[:, 0], final.counts[:, 1]):
                    problems.append("final counts unequal")
                if utility(inst, final, 1) != utility(inst, final, 2):
                    problems.append("utilities unequal")
                if problems:
                    stats["adjust_bad"].append((n, m, p, split, seed, problems))
                cur = stats["max_iters_by_m"].get(m, 0)
                stats["max_iters_by_m"][m] = max(cur, result.adjust_iterations)
    stats["seconds"] = time.perf_counter() - t0
    return stats


def test_criterion_1_theorem_conformance(theorem_sweep):
    s = theorem_sweep
    assert s["total"] == 54 * SEEDS_PER_CONFIG
    assert s["certified"] == s["total"], f"{s['total'] - s['certified']} uncertified"
    _ok(1, f"solve certified on {s['total']}/{s['total']} instances "
           f"({s['seconds']:.1f}s, paths {s['paths']})")


def test_criterion_4_balancing_lemma(theorem_sweep):
    s = theorem_sweep
    assert s["balanced_checked"] > 0
    assert s["balanced_bad"] == 0
    _ok(4, f"floor/ceil seat split held on all {s['balanced_checked']} balanced allocations")


def test_criterion_5_adjustment_bounds(theorem_sweep):
    s = theorem_sweep
    assert s["adjust_checked"] > 0
    assert s["adjust_bad"] == [], s["adjust_bad"][:3]
    for m, worst in sorted(s["max_iters_by_m"].items()):
        assert worst <= m // 2
    _ok(5, f"adjustment bounds held on {s['adjust_checked']} runs "
           f"(max iterations by schools: {s['max_iters_by_m']})")


def test_criterion_6_reachability_never_fails(theorem_sweep):
    # solve() raises NoPathError if any BFS strands an excess school; the
    # sweep finishing is the evidence, provided the adjust path actually ran
    assert theorem_sweep["adjust_checked"] > 0
    _ok(6, f"no reachability failure in {theorem_sweep['adjust_checked']} adjustment runs")


# --- criterion 2: verifier oracle equivalence --------------------------------

def _exhaustive_tiny_instances():
    """Every instance with n <= 5, m <= 3, values in {0,1,2}, complete
    accessibility, and every group split (students inside a group are
    interchangeable under complete accessibility, so enumerating label-sorted
    splits covers all labelings up to renaming)."""
    for n in range(1, 6):
        for m in range(1, 4):
            access = [list(range(m))] * n
            for n1 in range(n + 1):
                groups = [1] * n1 + [2] * (n - n1)
                for values in itertools.product((0, 1, 2), repeat=m):
                    for initial in itertools.product(range(m), repeat=n):
                        yield validate_instance(values, groups, access, initial)


def _reports_agree(inst, x):
    fast = check_1ref(inst, x)
    slow = brute_force_check(inst, x)
    if fast.is_1ref != slow.is_1ref or fast.deviation != slow.deviation:
        return False
    for pair in ((1, 2), (2, 1)):
        a, b = fast.pairs[pair], slow.pairs[pair]
        if a.status is not b.status:
            return False
        if a.status is PairStatus.ENVY and a.witness_utility != b.witness_utility:
            return False
    return True


def test_criterion_2_verifier_oracle_equivalence():
    checked = 0
    for inst in _exhaustive_tiny_instances():
        b = initial_allocation(inst)
        xs = [b]
        mutated = oracles.mutate_first_student(inst, b)
        if mutated is not None:
            xs.append(mutated)
        for x in xs:
            assert _reports_agree(inst, x), (inst, x.assign)
            checked += 1

    random_checked = 0
    for seed in range(500):
        inst = generate_instance(
            GenConfig(seed=seed, num_students=2 + seed % 5, num_schools=2 + seed % 2,
                      extra_edge_prob=(0.0, 0.3, 1.0)[seed % 3], max_value=5,
                      group_split=("equal", "ratio:0.5", "exact:1")[seed % 3])
        )
        b = initial_allocation(inst)
        xs = [b, solve(inst).allocation]
        mutated = oracles.mutate_first_student(inst, b)
        if mutated is not None:
            xs.append(mutated)
            twice = oracles.mutate_first_student(inst, mutated)
            if twice is not None and twice != b:
                xs.append(twice)
        for x in xs:
            assert _reports_agree(inst, x), (seed, x.assign)
            random_checked += 1
    _ok(2, f"flow certifier matched enumeration on {checked} exhaustive "
           f"and {random_checked} random checks")


# --- criterion 3: solver oracle equivalence (unequal case) -------------------

def test_criterion_3_smaller_group_optimum():
    checked = 0
    for inst in _exhaustive_tiny_instances():
        n1, n2 = inst.group_size(1), inst.group_size(2)
        if n1 == n2:
            continue
        smaller = 1 if n1 < n2 else 2
        alloc = max_utility_amount_preserving(inst, smaller)
        best = oracles.max_ap_utility(inst, smaller)
        assert best is not None
        assert utility(inst, alloc, smaller) == best
        checked += 1
    for seed in range(300):
        inst = generate_instance(
            GenConfig(seed=seed, num_students=3 + seed % 4, num_schools=2 + seed % 2,
                      extra_edge_prob=(0.0, 0.4, 1.0)[seed % 3], max_value=6,
                      group_split=f"exact:{seed % 2}")
        )
        if inst.group_size(1) == inst.group_size(2):
            continue
        smaller = 1 if inst.group_size(1) < inst.group_size(2) else 2
        alloc = max_utility_amount_preserving(inst, smaller)
        assert utility(inst, alloc, smaller) == oracles.max_ap_utility(inst, smaller)
        checked += 1
    _ok(3, f"seat-preserving optimum matched enumeration on {checked} unequal instances")


# --- criterion 7: flow kernels vs enumeration --------------------------------

def _edge_space(max_bound, costs):
    for tail, head in ((0, 1), (1, 0), (0, 0), (1, 1)):
        for up in range(max_bound + 1):
            for lo in range(up + 1):
                for cost in costs:
                    yield (tail, head, up, lo, cost)


def _kernels_match_oracle(num_nodes, edges):
    tails = [e[0] for e in edges]
    heads = [e[1] for e in edges]
    uppers = [e[2] for e in edges]
    lowers = [e[3] for e in edges]
    costs = [e[4] for e in edges]
    net = FlowNetwork.from_arrays(num_nodes, tails, heads, uppers, lowers, costs)
    expect = oracles.enum_min_cost_circulation(num_nodes, tails, heads, lowers, uppers, costs)
    got = min_cost_circulation(net)
    feas = feasible_circulation(net)
    if expect is None:
        assert got is None and feas is None, edges
    else:
        assert got is not None and got[0] == expect, edges
        oracles.check_circulation(net, got[1])
        assert feas is not None
        oracles.check_circulation(net, feas)

    # the same topology with lower bounds and costs stripped, as a max flow
    relaxed = FlowNetwork.from_arrays(num_nodes, tails, heads, uppers)
    value, flows = max_flow(relaxed, 0, num_nodes - 1)
    oracles.check_st_flow(relaxed, flows, 0, num_nodes - 1, value)
    assert value == oracles.enum_max_flow(num_nodes, tails, heads, uppers, 0, num_nodes - 1)


def test_criterion_7_flow_kernels_vs_enumeration():
    # exhaustive: every single-edge two-node network in the reduced space
    singles = list(_edge_space(3, (-5, -1, 0, 2)))
    for e in singles:
        _kernels_match_oracle(2, [e])

    # exhaustive over a strided slice of edge pairs (full cross product of
    # the two-node space; stride keeps the count around 4k)
    pair_space = list(_edge_space(2, (-5, 0, 2)))
    pairs = 0
    for i in range(0, len(pair_space), 2):
        for j in range(i % 5, len(pair_space), 5):
            _kernels_match_oracle(2, [pair_space[i], pair_space[j]])
            pairs += 1

    # seeded systematic batch across the full stated ranges
    batch = 0
    for seed in range(400):
        draws = [splitmix64(seed, i) for i in range(40)]
        num_nodes = 2 + draws[0] % 3
        num_edges = 1 + draws[1] % 6
        edges = []
        for e in range(num_edges):
            base = 2 + 5 * e
            tail = draws[base] % num_nodes
            head = draws[base + 1] % num_nodes
            up = draws[base + 2] % 4
            lo = draws[base + 3] % (up + 1)
            cost = draws[base + 4] % 11 - 5
            edges.append((tail, head, up, lo, cost))
        _kernels_match_oracle(num_nodes, edges)
        batch += 1
    _ok(7, f"kernels matched enumeration on {len(singles)} single-edge, "
           f"{pairs} paired, {batch} batch networks")


# --- criterion 8: golden traces ----------------------------------------------

def test_criterion_8_golden_traces(t1, t2, t3):
    r1 = solve(t1)
    assert r1.path_taken is SolvePath.ADJUSTED
    assert r1.allocation.assign.tolist() == [1, 1]
    assert utility(t1, r1.allocation, 1) == 3 == utility(t1, r1.allocation, 2)
    assert r1.adjust_iterations == 1
    assert r1.initial_swapped.assign.tolist() == [1, 0]
    assert r1.balanced.assign.tolist() == [0, 1]

    r2 = solve(t2)
    assert r2.path_taken is SolvePath.UNEQUAL_SIZES
    assert utility(t2, r2.allocation, 1) == 5

    r3 = solve(t3)
    assert r3.path_taken is SolvePath.INITIAL_IS_EF
    assert r3.allocation == initial_allocation(t3)
    _ok(8, "fixtures reproduce their documented traces")


# --- criterion 9: CLI contract -------------------------------------------------

def test_criterion_9_cli_contract(t1, tmp_path, capsys):
    # lossless round trips: the three fixtures plus 100 random instances
    fixtures = [t1]
    for seed in range(100):
        fixtures.append(generate_instance(
            GenConfig(seed=seed, num_students=4 + seed % 12, num_schools=2 + seed % 4,
                      extra_edge_prob=(0.0, 0.25, 0.6, 1.0)[seed % 4],
                      max_value=40, group_split=("equal", "ratio:0.4", "exact:2")[seed % 3])
        ))
    for i, inst in enumerate(fixtures):
        path = tmp_path / f"i{i}.json"
        write_instance(path, inst)
        assert read_instance(path) == inst
        alloc = solve(inst).allocation
        apath = tmp_path / f"a{i}.json"
        write_allocation(apath, inst, alloc)
        assert read_allocation(apath, inst) == alloc

    # verify exit codes gate on certification
    inst_path, good_path, bad_path = (tmp_path / x for x in ("t1.json", "good.json", "bad.json"))
    write_instance(inst_path, t1)
    assert main(["solve", "-i", str(inst_path), "-o", str(good_path)]) == 0
    assert main(["verify", "-i", str(inst_path), "-a", str(good_path)]) == 0
    write_allocation(bad_path, t1, initial_allocation(t1))
    assert main(["verify", "-i", str(inst_path), "-a", str(bad_path)]) == 1
    assert json.loads(good_path.read_text())["meta"]["path_taken"] == "adjusted"

    # bench over 1000 seeds must certify everything
    code = main(["bench", "--seeds", "0..999", "--students", "40", "--schools", "8",
                 "--edge-prob", "0.3", "--split", "equal"])
    out = capsys.readouterr().out
    assert code == 0
    assert "verifier pass rate: 100.00%" in out
    max_line = next(line for line in out.splitlines() if "max adjust iterations" in line)
    reported = int(max_line.split(":")[1].split("(")[0].strip())
    assert reported <= 4
    with capsys.disabled():
        _ok(9, "round trips lossless, verify exit codes correct, bench certified 1000/1000")

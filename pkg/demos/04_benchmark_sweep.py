"""Batch behavior across seeds: construction branches, iteration bounds,
and certification rate (the library-level equivalent of `redistrict bench`).
"""

import time

from redistrict import GenConfig, check_1ref, generate_instance, solve

N, M, SEEDS = 40, 8, 300

for edge_prob in (0.0, 0.3, 1.0):
    paths = {}
    max_iters = 0
    certified = 0
    t0 = time.perf_counter()
    for seed in range(SEEDS):
        inst = generate_instance(GenConfig(seed=seed, num_students=N, num_schools=M,
                                           extra_edge_prob=edge_prob, group_split="equal"))
        result = solve(inst)
        paths[result.path_taken.value] = paths.get(result.path_taken.value, 0) + 1
        max_iters = max(max_iters, result.adjust_iterations)
        certified += check_1ref(inst, result.allocation).is_1ref
    dt = time.perf_counter() - t0
    print(f"edge_prob={edge_prob}: {SEEDS} seeds in {dt:.2f}s")
    for path, count in sorted(paths.items()):
        print(f"  {path:<16}{count:>6}  ({count / SEEDS:.0%})")
    print(f"  max adjustment iterations: {max_iters} (bound {M // 2})")
    print(f"  certified: {certified}/{SEEDS}")
    assert certified == SEEDS

"""Walk through the full pipeline on a hand-built district.

Six students in two groups share three schools of very different value.
We inspect why the initial assignment is unfair, then run each stage of the
construction and certify the result.
"""

from redistrict import (
    balanced_allocation,
    check_1ref,
    find_perfectly_swapped,
    adjust,
    initial_allocation,
    solve,
    utility,
    validate_instance,
)

# Schools: 0 is the magnet school (value 90), 1 is average (50), 2 is weak (10).
# Group 1 currently hogs the magnet school; everyone can commute anywhere.
inst = validate_instance(
    values=[90, 50, 10],
    groups=[1, 1, 1, 2, 2, 2],
    accessible=[[0, 1, 2]] * 6,
    initial=[0, 0, 1, 1, 2, 2],
)
print(inst)
print("capacities:", inst.capacity.tolist())

b = initial_allocation(inst)
print("\ninitial assignment:", b.assign.tolist())
print("  group utilities:", utility(inst, b, 1), "vs", utility(inst, b, 2))

report = check_1ref(inst, b)
print("\ncertifying the initial assignment:")
print(report.summary())

# Stage 1: a perfectly swapped counterpart exists, so the initial assignment
# offers no guarantee; the groups could trade places seat for seat.
swapped = find_perfectly_swapped(inst, b)
print("\nperfectly swapped counterpart:", swapped.assign.tolist())

# Stage 2: balance every school to a floor/ceil split of its two groups.
balanced = balanced_allocation(inst, b, swapped)
print("balanced allocation:", balanced.assign.tolist())
print("  per-school (group1, group2) counts:", balanced.counts.tolist())

# Stage 3: pair off remaining excess/deficient schools by moving group-1
# students along swap-graph paths.
balanced_swapped = find_perfectly_swapped(inst, balanced)
final = adjust(inst, balanced, balanced_swapped)
print("adjusted allocation:", final.assign.tolist())
print("  group utilities:", utility(inst, final, 1), "vs", utility(inst, final, 2))

print("\ncertifying the result:")
print(check_1ref(inst, final).summary())

# The one-call version does all of the above with deterministic tie-breaking.
result = solve(inst)
print("\nsolve() path taken:", result.path_taken.value)
assert result.allocation == final

"""The three integer flow queries behind every solver and verifier stage.

All bounds, costs and flows are integers; edges are addressed by insertion
index, and parallel edges carry independent flow.
"""

from redistrict import FlowNetwork, feasible_circulation, max_flow, min_cost_circulation

# --- maximum flow -----------------------------------------------------------
# s=0 -> {a=1, b=2} -> t=3 with a bottleneck on the a-side
net = FlowNetwork(4)
net.add_edge(0, 1, 2)
net.add_edge(0, 2, 2)
net.add_edge(1, 3, 1)
net.add_edge(2, 3, 3)
value, flows = max_flow(net, 0, 3)
print("max flow value:", value)          # min cut = 3
print("per-edge flows:", flows.tolist())

# --- feasible circulation with lower bounds ---------------------------------
# a two-node cycle whose bound intervals force exactly 2 units around
net = FlowNetwork(2)
net.add_edge(0, 1, upper=3, lower=2)
net.add_edge(1, 0, upper=2, lower=1)
print("\nforced circulation:", feasible_circulation(net).tolist())

# tighten one edge and the intervals no longer intersect
net = FlowNetwork(2)
net.add_edge(0, 1, upper=3, lower=3)
net.add_edge(1, 0, upper=2, lower=1)
print("infeasible bounds detected:", feasible_circulation(net) is None)

# --- minimum-cost circulation ------------------------------------------------
# a profitable cycle (negative total cost) must be saturated by the optimum
net = FlowNetwork(3)
net.add_edge(0, 1, upper=2, cost=-4)
net.add_edge(1, 2, upper=2, cost=1)
net.add_edge(2, 0, upper=2, cost=0)
net.add_edge(1, 0, upper=1, cost=0)   # a cheaper way back for one unit
cost, flows = min_cost_circulation(net)
print("\nmin-cost circulation cost:", cost)
print("per-edge flows:", flows.tolist())

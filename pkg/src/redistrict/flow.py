"""Exact integer network-flow kernels.

One :class:`FlowNetwork` type serves all three queries: maximum s-t flow
(zero lower bounds), feasible circulation with lower bounds, and minimum-cost
circulation with lower bounds and arbitrary integer costs.  Edges are
addressed by insertion index; parallel edges and self-loops are permitted and
carry independent flow values.

All arithmetic is integer.  Inputs large enough to jeopardise 64-bit
exactness are rejected with :class:`~redistrict.errors.OverflowGuardError`.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import OverflowGuardError

__all__ = ["FlowNetwork", "max_flow", "feasible_circulation", "min_cost_circulation"]

_GUARD = 2**62


class FlowNetwork:
    """Directed multigraph with per-edge bounds ``[lower, upper]`` and costs.

    Build incrementally with :meth:`add_edge` (which returns the edge index)
    or in bulk with :meth:`from_arrays`.
    """

    __slots__ = ("num_nodes", "tails", "heads", "lowers", "uppers", "costs")

    def __init__(self, num_nodes: int):
        if num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        self.num_nodes = int(num_nodes)
        self.tails: list[int] = []
        self.heads: list[int] = []
        self.lowers: list[int] = []
        self.uppers: list[int] = []
        self.costs: list[int] = []

    @classmethod
    def from_arrays(cls, num_nodes, tails, heads, uppers, lowers=None, costs=None) -> "FlowNetwork":
        net = cls(num_nodes)
        net.tails = [int(t) for t in tails]
        net.heads = [int(h) for h in heads]
        net.uppers = [int(u) for u in uppers]
        net.lowers = [0] * len(net.tails) if lowers is None else [int(x) for x in lowers]
        net.costs = [0] * len(net.tails) if costs is None else [int(c) for c in costs]
        net._validate_bulk()
        return net

    @classmethod
    def _trusted(cls, num_nodes, tails, heads, lowers, uppers, costs) -> "FlowNetwork":
        """Internal bulk constructor for builders that guarantee validity."""
        net = cls(num_nodes)
        net.tails, net.heads = tails, heads
        net.lowers, net.uppers, net.costs = lowers, uppers, costs
        return net

    def add_edge(self, tail: int, head: int, upper: int, lower: int = 0, cost: int = 0) -> int:
        if not (0 <= tail < self.num_nodes and 0 <= head < self.num_nodes):
            raise ValueError(f"edge endpoints ({tail}, {head}) out of range")
        if not (0 <= lower <= upper):
            raise ValueError(f"need 0 <= lower <= upper, got [{lower}, {upper}]")
        self.tails.append(int(tail))
        self.heads.append(int(head))
        self.lowers.append(int(lower))
        self.uppers.append(int(upper))
        self.costs.append(int(cost))
        return len(self.tails) - 1

    @property
    def num_edges(self) -> int:
        return len(self.tails)

    def _validate_bulk(self) -> None:
        n = self.num_nodes
        for t, h, lo, up in zip(self.tails, self.heads, self.lowers, self.uppers):
            if not (0 <= t < n and 0 <= h < n):
                raise ValueError(f"edge endpoints ({t}, {h}) out of range")
            if not (0 <= lo <= up):
                raise ValueError(f"need 0 <= lower <= upper, got [{lo}, {up}]")

def _guard(uppers: np.ndarray, costs: np.ndarray | None) -> None:
    total_upper = int(uppers.sum())
    max_cost = int(np.abs(costs).max()) if costs is not None and len(costs) else 0
    if total_upper > _GUARD or total_upper * max(1, max_cost) > _GUARD:
        raise OverflowGuardError("network bounds/costs too large for exact 64-bit arithmetic")


def _as_i64(values) -> np.ndarray:
    return np.asarray(values, dtype=np.int64)


def max_flow(net: FlowNetwork, source: int, sink: int) -> tuple[int, np.ndarray]:
    """Maximum integral s-t flow of a network with all lower bounds zero.

    Returns ``(value, flows)`` where ``flows[i]`` is the flow on edge ``i``.
    Self-loops carry zero flow.  Costs are ignored.
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    if not (0 <= source < net.num_nodes and 0 <= sink < net.num_nodes):
        raise ValueError("source/sink out of range")
    if any(lo != 0 for lo in net.lowers):
        raise ValueError("max_flow requires all lower bounds to be zero")
    tails = _as_i64(net.tails)
    heads = _as_i64(net.heads)
    caps = _as_i64(net.uppers)
    _guard(caps, None)
    keep = tails != heads
    value, kflows = _kernels.dinic_max_flow(
        net.num_nodes, tails[keep], heads[keep], caps[keep], source, sink
    )
    flows = np.zeros(net.num_edges, dtype=np.int64)
    flows[keep] = kflows
    return int(value), flows


def feasible_circulation(net: FlowNetwork) -> np.ndarray | None:
    """An integral circulation respecting all bounds, or None if none exists.

    Standard reduction: force every lower bound, route the resulting node
    imbalances from a super source to a super sink with one maximum-flow
    computation, and accept iff all demand edges saturate.
    """
    tails = _as_i64(net.tails)
    heads = _as_i64(net.heads)
    lowers = _as_i64(net.lowers)
    uppers = _as_i64(net.uppers)
    _guard(uppers, None)

    loop = tails == heads
    real = ~loop
    excess = np.zeros(net.num_nodes + 2, dtype=np.int64)
    np.add.at(excess, heads[real], lowers[real])
    np.subtract.at(excess, tails[real], lowers[real])

    S = net.num_nodes
    T = net.num_nodes + 1
    pos = np.flatnonzero(excess > 0)
    neg = np.flatnonzero(excess < 0)
    ktails = np.concatenate([tails[real], np.full(len(pos), S, np.int64), neg])
    kheads = np.concatenate([heads[real], pos, np.full(len(neg), T, np.int64)])
    kcaps = np.concatenate([(uppers - lowers)[real], excess[pos], -excess[neg]])
    need = int(excess[pos].sum())
    value, kflows = _kernels.dinic_max_flow(net.num_nodes + 2, ktails, kheads, kcaps, S, T)
    if int(value) != need:
        return None
    flows = lowers.copy()
    flows[real] += kflows[: int(real.sum())]
    return flows


def min_cost_circulation(net: FlowNetwork) -> tuple[int, np.ndarray] | None:
    """Minimum-cost integral circulation, or None when infeasible.

    Negative-cost edges are handled by the reversal transformation (saturate
    the edge, route the correction backwards at cost ``-c``), after which all
    arc costs are non-negative and successive shortest paths apply.
    """
    tails = _as_i64(net.tails)
    heads = _as_i64(net.heads)
    lowers = _as_i64(net.lowers)
    uppers = _as_i64(net.uppers)
    costs = _as_i64(net.costs)
    _guard(uppers, costs)

    loop = tails == heads
    neg = (costs < 0) & ~loop
    fwd = (costs >= 0) & ~loop

    # base flow: lower bound on forward edges, full saturation on negative ones
    base = np.where(neg, uppers, lowers)
    base[loop] = np.where(costs[loop] < 0, uppers[loop], lowers[loop])
    excess = np.zeros(net.num_nodes, dtype=np.int64)
    real = ~loop
    np.add.at(excess, heads[real], base[real])
    np.subtract.at(excess, tails[real], base[real])

    resid = uppers - lowers
    ktails = np.concatenate([tails[fwd], heads[neg]])
    kheads = np.concatenate([heads[fwd], tails[neg]])
    kcaps = np.concatenate([resid[fwd], resid[neg]])
    kcosts = np.concatenate([costs[fwd], -costs[neg]])

    feasible, kflows = _kernels.mcf_route_supplies(
        net.num_nodes, ktails, kheads, kcaps, kcosts, excess
    )
    if not feasible:
        return None
    flows = base.copy()
    nf = int(fwd.sum())
    flows[fwd] += kflows[:nf]
    flows[neg] -= kflows[nf:]
    total = int(np.multiply(costs, flows).sum())
    return total, flows

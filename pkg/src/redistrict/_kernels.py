"""Compiled inner loops for the flow solvers.

Both kernels work on flat arc arrays (no lower bounds, no self-loops) and
return per-arc flows addressed by input position.  Callers in ``flow`` do the
lower-bound / negative-cost reductions and keep the public edge indexing.

Everything is int64; guards against overflow live in the callers.
"""

import numpy as np
from numba import njit

INF = np.int64(2) ** 62


@njit(cache=True)
def dinic_max_flow(num_nodes, tails, heads, caps, source, sink):
    """Maximum s-t flow via Dinic's algorithm.

    Deterministic: arcs are scanned in insertion order, so the returned flow
    (not just its value) is a pure function of the inputs.
    Returns (value, per-arc flow).
    """
    m = tails.shape[0]
    nr = 2 * m
    rto = np.empty(nr, np.int64)
    rcap = np.empty(nr, np.int64)
    for i in range(m):
        rto[2 * i] = heads[i]
        rcap[2 * i] = caps[i]
        rto[2 * i + 1] = tails[i]
        rcap[2 * i + 1] = 0
    # group residual arcs by tail; counting sort keeps insertion order stable
    indptr = np.zeros(num_nodes + 1, np.int64)
    for i in range(m):
        indptr[tails[i] + 1] += 1
        indptr[heads[i] + 1] += 1
    for v in range(num_nodes):
        indptr[v + 1] += indptr[v]
    adj = np.empty(nr, np.int64)
    fill = indptr[:num_nodes].copy()
    for j in range(nr):
        t = rto[j ^ 1]  # tail of arc j = head of its partner
        adj[fill[t]] = j
        fill[t] += 1

    level = np.empty(num_nodes, np.int64)
    queue = np.empty(num_nodes, np.int64)
    it = np.empty(num_nodes, np.int64)
    path = np.empty(num_nodes + 1, np.int64)
    total = np.int64(0)
    while True:
        for v in range(num_nodes):
            level[v] = -1
        level[source] = 0
        queue[0] = source
        qh, qt = 0, 1
        while qh < qt:
            v = queue[qh]
            qh += 1
            for p in range(indptr[v], indptr[v + 1]):
                j = adj[p]
                w = rto[j]
                if rcap[j] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    queue[qt] = w
                    qt += 1
        if level[sink] < 0:
            break
        for v in range(num_nodes):
            it[v] = indptr[v]
        while True:  # blocking flow: repeated DFS with current-arc pointers
            depth = 0
            v = source
            found = False
            while True:
                if v == sink:
                    found = True
                    break
                advanced = False
                while it[v] < indptr[v + 1]:
                    j = adj[it[v]]
                    w = rto[j]
                    if rcap[j] > 0 and level[w] == level[v] + 1:
                        path[depth] = j
                        depth += 1
                        v = w
                        advanced = True
                        break
                    it[v] += 1
                if advanced:
                    continue
                if depth == 0:
                    break
                level[v] = -1  # dead end: no admissible arc leaves v
                depth -= 1
                j = path[depth]
                v = rto[j ^ 1]
                it[v] += 1
            if not found:
                break
            aug = INF
            for d in range(depth):
                j = path[d]
                if rcap[j] < aug:
                    aug = rcap[j]
            for d in range(depth):
                j = path[d]
                rcap[j] -= aug
                rcap[j ^ 1] += aug
            total += aug
    flows = np.empty(m, np.int64)
    for i in range(m):
        flows[i] = rcap[2 * i + 1]
    return total, flows


@njit(cache=True)
def mcf_route_supplies(num_nodes, tails, heads, caps, costs, supply):
    """Min-cost routing of node supplies over arcs with non-negative costs.

    Successive shortest paths with Dijkstra and node potentials; a super
    source/sink pair absorbs the supply vector (which must sum to zero).
    Returns (feasible, per-arc flow); feasible is False when some supply
    cannot reach a deficit, in which case the flow is a maximal partial
    routing and must be discarded by the caller.

    Deterministic: Dijkstra breaks distance ties by node id and arcs are
    relaxed in insertion order.
    """
    m0 = tails.shape[0]
    S = num_nodes
    T = num_nodes + 1
    V = num_nodes + 2
    extra = 0
    need = np.int64(0)
    for v in range(num_nodes):
        if supply[v] != 0:
            extra += 1
        if supply[v] > 0:
            need += supply[v]
    m = m0 + extra
    atail = np.empty(m, np.int64)
    ahead = np.empty(m, np.int64)
    acap = np.empty(m, np.int64)
    acost = np.empty(m, np.int64)
    for i in range(m0):
        atail[i] = tails[i]
        ahead[i] = heads[i]
        acap[i] = caps[i]
        acost[i] = costs[i]
    k = m0
    for v in range(num_nodes):
        if supply[v] > 0:
            atail[k] = S
            ahead[k] = v
            acap[k] = supply[v]
            acost[k] = 0
            k += 1
        elif supply[v] < 0:
            atail[k] = v
            ahead[k] = T
            acap[k] = -supply[v]
            acost[k] = 0
            k += 1

    nr = 2 * m
    rto = np.empty(nr, np.int64)
    rcap = np.empty(nr, np.int64)
    rcost = np.empty(nr, np.int64)
    for i in range(m):
        rto[2 * i] = ahead[i]
        rcap[2 * i] = acap[i]
        rcost[2 * i] = acost[i]
        rto[2 * i + 1] = atail[i]
        rcap[2 * i + 1] = 0
        rcost[2 * i + 1] = -acost[i]
    indptr = np.zeros(V + 1, np.int64)
    for i in range(m):
        indptr[atail[i] + 1] += 1
        indptr[ahead[i] + 1] += 1
    for v in range(V):
        indptr[v + 1] += indptr[v]
    adj = np.empty(nr, np.int64)
    fill = indptr[:V].copy()
    for j in range(nr):
        t = rto[j ^ 1]
        adj[fill[t]] = j
        fill[t] += 1

    pot = np.zeros(V, np.int64)
    dist = np.empty(V, np.int64)
    pre_arc = np.empty(V, np.int64)
    visited = np.empty(V, np.bool_)
    stack = np.empty(V, np.int64)
    it = np.empty(V, np.int64)
    hd = np.empty(nr + 4, np.int64)  # binary heap keyed on (dist, node)
    hn = np.empty(nr + 4, np.int64)
    routed = np.int64(0)
    while routed < need:
        # Dijkstra with potentials establishes the next shortest-path cost
        for v in range(V):
            dist[v] = INF
        dist[S] = 0
        hd[0] = 0
        hn[0] = S
        hs = 1
        while hs > 0:
            d0 = hd[0]
            v = hn[0]
            hs -= 1
            hd[0] = hd[hs]
            hn[0] = hn[hs]
            i = 0
            while True:  # sift down
                l = 2 * i + 1
                if l >= hs:
                    break
                c = l
                r = l + 1
                if r < hs and (hd[r] < hd[l] or (hd[r] == hd[l] and hn[r] < hn[l])):
                    c = r
                if hd[c] < hd[i] or (hd[c] == hd[i] and hn[c] < hn[i]):
                    hd[i], hd[c] = hd[c], hd[i]
                    hn[i], hn[c] = hn[c], hn[i]
                    i = c
                else:
                    break
            if d0 > dist[v]:
                continue
            for p in range(indptr[v], indptr[v + 1]):
                j = adj[p]
                if rcap[j] <= 0:
                    continue
                w = rto[j]
                nd = d0 + rcost[j] + pot[v] - pot[w]
                if nd < dist[w]:
                    dist[w] = nd
                    hd[hs] = nd
                    hn[hs] = w
                    i = hs
                    hs += 1
                    while i > 0:  # sift up
                        par = (i - 1) // 2
                        if hd[i] < hd[par] or (hd[i] == hd[par] and hn[i] < hn[par]):
                            hd[i], hd[par] = hd[par], hd[i]
                            hn[i], hn[par] = hn[par], hn[i]
                            i = par
                        else:
                            break
        if dist[T] >= INF:
            break
        dT = dist[T]
        for v in range(V):
            if dist[v] < dT:
                pot[v] += dist[v]
            else:
                pot[v] += dT
        # phase: augment along zero-reduced-cost paths until none is left.
        # Augmenting only tight arcs keeps all reduced costs non-negative, so
        # the flow stays cheapest for its value; fresh DFS state per attempt
        # because augmentations may reopen arcs through their reverses.
        while routed < need:
            for v in range(V):
                visited[v] = False
                it[v] = indptr[v]
            visited[S] = True
            stack[0] = S
            sp = 1
            found = False
            while sp > 0 and not found:
                v = stack[sp - 1]
                advanced = False
                while it[v] < indptr[v + 1]:
                    j = adj[it[v]]
                    w = rto[j]
                    if rcap[j] > 0 and not visited[w] and rcost[j] + pot[v] - pot[w] == 0:
                        pre_arc[w] = j
                        visited[w] = True
                        if w == T:
                            found = True
                            break
                        stack[sp] = w
                        sp += 1
                        advanced = True
                        break
                    it[v] += 1
                if found or advanced:
                    continue
                sp -= 1
            if not found:
                break
            aug = INF
            v = T
            while v != S:
                j = pre_arc[v]
                if rcap[j] < aug:
                    aug = rcap[j]
                v = rto[j ^ 1]
            v = T
            while v != S:
                j = pre_arc[v]
                rcap[j] -= aug
                rcap[j ^ 1] += aug
                v = rto[j ^ 1]
            routed += aug

    flows = np.empty(m0, np.int64)
    for i in range(m0):
        flows[i] = rcap[2 * i + 1]
    return routed == need, flows

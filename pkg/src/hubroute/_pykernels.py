"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Arrays follow the CSR layout used by :class:`hubroute.graph.Graph`:
``indptr`` (int64, length N+1) and ``indices`` (int32, sorted per row).
Output and scratch buffers are caller-allocated int32 arrays.
"""

from collections import deque


def bfs_tree(indptr, indices, source, dist, parent):
    """Fill ``dist`` and ``parent`` from a BFS rooted at ``source``.

    The parent of a node is its lowest-id neighbour one level closer to the
    source. Unreached nodes keep ``-1`` in both arrays.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    n = len(ptr) - 1
    d = [-1] * n
    d[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = d[x] + 1
        for k in range(ptr[x], ptr[x + 1]):
            y = adj[k]
            if d[y] < 0:
                d[y] = dx
                queue.append(y)
    par = [-1] * n
    for u in range(n):
        du = d[u]
        if du <= 0:
            continue
        for k in range(ptr[u], ptr[u + 1]):
            v = adj[k]
            if d[v] == du - 1:
                par[u] = v
                break
    dist[:] = d
    parent[:] = par


def bfs_dist(indptr, indices, source, dist, queue):
    """BFS distances only; returns the number of reached nodes.

    ``dist`` must arrive filled with ``-1``. On return ``queue`` holds the
    reached nodes in visiting order.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    n = len(ptr) - 1
    d = [-1] * n
    d[source] = 0
    order = [source]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        dx = d[x] + 1
        for k in range(ptr[x], ptr[x + 1]):
            y = adj[k]
            if d[y] < 0:
                d[y] = dx
                order.append(y)
    dist[:] = d
    queue[:len(order)] = order
    return len(order)


def component_labels(indptr, indices, labels):
    """Label connected components; returns the component count.

    Components are numbered in order of their smallest node id.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    n = len(ptr) - 1
    lab = [-1] * n
    count = 0
    for root in range(n):
        if lab[root] >= 0:
            continue
        lab[root] = count
        stack = [root]
        while stack:
            x = stack.pop()
            for k in range(ptr[x], ptr[x + 1]):
                y = adj[k]
                if lab[y] < 0:
                    lab[y] = count
                    stack.append(y)
        count += 1
    labels[:] = lab
    return count


def distance_summary(indptr, indices, sources, dist, queue):
    """Sum, maximum and count of finite distances from each source.

    Returns ``(total, maximum, pairs)`` over ordered pairs (s, v), v != s.
    """
    total = 0
    maximum = 0
    pairs = 0
    for s in sources.tolist():
        dist[:] = -1
        bfs_dist(indptr, indices, s, dist, queue)
        row = [v for v in dist.tolist() if v > 0]
        total += sum(row)
        pairs += len(row)
        if row:
            maximum = max(maximum, max(row))
    return total, maximum, pairs


def route_to_target(indptr, indices, label_ptr, label_nodes, hub_slot, next_hop,
                    t, sources, hops_out, pos, nbr, max_hops):
    """Route a packet from every node in ``sources`` to ``t``; store hop counts.

    ``pos`` and ``nbr`` are int32 scratch arrays of length N that must arrive
    filled with ``-1`` and ``0``; they are restored before returning.
    Returns ``-1`` on success, otherwise the index into ``sources`` whose walk
    exceeded ``max_hops``.
    """
    a = label_ptr[t]
    b = label_ptr[t + 1]
    path = label_nodes[a:b].tolist()
    nbrs = indices[indptr[t]:indptr[t + 1]].tolist()
    position = {v: j for j, v in enumerate(path)}
    neighbours = set(nbrs)
    toward_hub = next_hop[hub_slot[t]].tolist()
    failed = -1
    for idx, s in enumerate(sources.tolist()):
        x = s
        hops = 0
        while x != t:
            if hops >= max_hops:
                failed = idx
                break
            if x in neighbours:
                x = t
            else:
                j = position.get(x)
                if j is not None:
                    x = path[j - 1]
                else:
                    x = toward_hub[x]
                    if x < 0:
                        failed = idx
                        break
            hops += 1
        if failed >= 0:
            break
        hops_out[idx] = hops
    return failed

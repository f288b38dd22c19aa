# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Signatures mirror ``hubroute._pykernels``."""

from libc.stdint cimport int32_t, int64_t


def bfs_tree(const int64_t[::1] indptr, const int32_t[::1] indices,
             Py_ssize_t source, int32_t[::1] dist, int32_t[::1] parent):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t head = 0, tail = 0, x, y, u, k
    cdef int32_t du
    # parent doubles as the BFS queue until the second pass
    for u in range(n):
        dist[u] = -1
    dist[source] = 0
    parent[tail] = <int32_t>source
    tail += 1
    while head < tail:
        x = parent[head]
        head += 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                parent[tail] = <int32_t>y
                tail += 1
    for u in range(n):
        parent[u] = -1
        du = dist[u]
        if du <= 0:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            if dist[indices[k]] == du - 1:
                parent[u] = indices[k]
                break


cdef Py_ssize_t _bfs_dist(const int64_t[::1] indptr, const int32_t[::1] indices,
                          Py_ssize_t source, int32_t[::1] dist,
                          int32_t[::1] queue) noexcept nogil:
    cdef Py_ssize_t head = 0, tail = 0, x, y, k
    cdef int32_t dx
    dist[source] = 0
    queue[tail] = <int32_t>source
    tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        dx = dist[x] + 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if dist[y] < 0:
                dist[y] = dx
                queue[tail] = <int32_t>y
                tail += 1
    return tail


def bfs_dist(const int64_t[::1] indptr, const int32_t[::1] indices,
             Py_ssize_t source, int32_t[::1] dist, int32_t[::1] queue):
    return _bfs_dist(indptr, indices, source, dist, queue)


def component_labels(const int64_t[::1] indptr, const int32_t[::1] indices,
                     int32_t[::1] labels):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t root, x, y, k, top
    cdef int32_t count = 0
    cdef int32_t[::1] stack
    if n == 0:
        return 0
    import numpy as np
    stack = np.empty(n, dtype=np.int32)
    for root in range(n):
        labels[root] = -1
    for root in range(n):
        if labels[root] >= 0:
            continue
        labels[root] = count
        top = 0
        stack[top] = <int32_t>root
        top += 1
        while top > 0:
            top -= 1
            x = stack[top]
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if labels[y] < 0:
                    labels[y] = count
                    stack[top] = <int32_t>y
                    top += 1
        count += 1
    return count


def distance_summary(const int64_t[::1] indptr, const int32_t[::1] indices,
                     const int64_t[::1] sources, int32_t[::1] dist,
                     int32_t[::1] queue):
    cdef Py_ssize_t i, j, reached, v
    cdef int64_t total = 0, pairs = 0
    cdef int32_t maximum = 0, dv
    cdef Py_ssize_t n = indptr.shape[0] - 1
    with nogil:
        for i in range(sources.shape[0]):
            for v in range(n):
                dist[v] = -1
            reached = _bfs_dist(indptr, indices, sources[i], dist, queue)
            for j in range(1, reached):
                dv = dist[queue[j]]
                total += dv
                if dv > maximum:
                    maximum = dv
            pairs += reached - 1
    return total, maximum, pairs


def route_to_target(const int64_t[::1] indptr, const int32_t[::1] indices,
                    const int64_t[::1] label_ptr, const int32_t[::1] label_nodes,
                    const int32_t[::1] hub_slot, const int32_t[:, ::1] next_hop,
                    Py_ssize_t t, const int64_t[::1] sources, int32_t[::1] hops_out,
                    int32_t[::1] pos, int32_t[::1] nbr, Py_ssize_t max_hops):
    cdef Py_ssize_t a = label_ptr[t], b = label_ptr[t + 1]
    cdef Py_ssize_t slot = hub_slot[t]
    cdef Py_ssize_t i, k, x, hops, failed = -1
    cdef int32_t j
    with nogil:
        for k in range(a, b):
            pos[label_nodes[k]] = <int32_t>(k - a)
        for k in range(indptr[t], indptr[t + 1]):
            nbr[indices[k]] = 1
        for i in range(sources.shape[0]):
            x = sources[i]
            hops = 0
            while x != t:
                if hops >= max_hops:
                    failed = i
                    break
                if nbr[x]:
                    x = t
                else:
                    j = pos[x]
                    if j >= 0:
                        x = label_nodes[a + j - 1]
                    else:
                        x = next_hop[slot, x]
                        if x < 0:
                            failed = i
                            break
                hops += 1
            if failed >= 0:
                break
            hops_out[i] = <int32_t>hops
        for k in range(a, b):
            pos[label_nodes[k]] = -1
        for k in range(indptr[t], indptr[t + 1]):
            nbr[indices[k]] = 0
    return failed

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tally of permutation tuples by the class of the closing element."""
import numpy as np
cimport numpy as cnp


def tally_products(int[:, ::1] table, int[::1] inverse, int[::1] class_of,
                   list members, int[:, ::1] perms, int nclasses, bint connected):
    cdef Py_ssize_t levels = len(members)
    cdef Py_ssize_t d = perms.shape[1]
    cdef Py_ssize_t l, i, a, b, ra, rb, root
    cdef int closing, cls, p
    counts = np.zeros(nclasses, dtype=np.int64)
    conn = np.zeros(nclasses, dtype=np.int64)
    cdef long long[::1] cv = counts
    cdef long long[::1] kv = conn
    if levels == 0:
        cv[class_of[0]] += 1
        kv[class_of[0]] += 1 if d <= 1 else 0
        return counts, conn

    sizes_np = np.array([len(m) for m in members], dtype=np.int64)
    offsets_np = np.zeros(levels + 1, dtype=np.int64)
    offsets_np[1:] = np.cumsum(sizes_np)
    flat_np = np.concatenate([np.asarray(m, dtype=np.int32) for m in members]).astype(np.int32)
    cdef long long[::1] sizes = sizes_np
    cdef long long[::1] offsets = offsets_np
    cdef int[::1] flat = flat_np
    for l in range(levels):
        if sizes[l] == 0:
            return counts, conn

    idx_np = np.zeros(levels, dtype=np.int64)
    prod_np = np.zeros(levels + 1, dtype=np.int32)
    parent_np = np.zeros(d, dtype=np.int64)
    cdef long long[::1] idx = idx_np
    cdef int[::1] prod = prod_np
    cdef long long[::1] parent = parent_np

    # prod[0] is the identity (rank 0); prod[l+1] = prod[l] * member
    prod[0] = 0
    for l in range(levels):
        prod[l + 1] = table[prod[l], flat[offsets[l]]]

    while True:
        closing = inverse[prod[levels]]
        cls = class_of[closing]
        cv[cls] += 1
        if connected:
            for i in range(d):
                parent[i] = i
            for l in range(levels):
                p = flat[offsets[l] + idx[l]]
                for i in range(d):
                    ra = i
                    while parent[ra] != ra:
                        ra = parent[ra]
                    rb = perms[p, i]
                    while parent[rb] != rb:
                        rb = parent[rb]
                    if ra != rb:
                        if ra < rb:
                            parent[rb] = ra
                        else:
                            parent[ra] = rb
            root = 1
            for i in range(d):
                a = i
                while parent[a] != a:
                    a = parent[a]
                if a != 0:
                    root = 0
                    break
            if root:
                kv[cls] += 1
        # odometer step
        l = levels - 1
        while l >= 0:
            idx[l] += 1
            if idx[l] < sizes[l]:
                break
            idx[l] = 0
            l -= 1
        if l < 0:
            break
        for b in range(l, levels):
            prod[b + 1] = table[prod[b], flat[offsets[b] + idx[b]]]
    return counts, conn

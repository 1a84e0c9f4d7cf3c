"""Pure-Python twin of the compiled tally kernel."""
from __future__ import annotations

from itertools import product


def tally_products(table, inverse, class_of, members, perms, nclasses, connected):
    counts = [0] * nclasses
    conn = [0] * nclasses
    d = len(perms[0])
    levels = len(members)
    if levels == 0:
        counts[class_of[0]] += 1
        conn[class_of[0]] += 1 if d <= 1 else 0
        return counts, conn
    for choice in product(*members):
        acc = 0
        for p in choice:
            acc = table[acc][p]
        cls = class_of[inverse[acc]]
        counts[cls] += 1
        if connected:
            parent = list(range(d))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for p in choice:
                row = perms[p]
                for i in range(d):
                    ra, rb = find(i), find(row[i])
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
            if all(find(i) == 0 for i in range(d)):
                conn[cls] += 1
    return counts, conn

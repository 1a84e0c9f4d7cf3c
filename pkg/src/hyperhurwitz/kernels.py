"""Selects the compiled tally kernel when it was built, else the Python one.

Set ``HYPERHURWITZ_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_compiled = None
if os.environ.get("HYPERHURWITZ_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _compiled = None


def tally_products(table, inverse, class_of, members, perms, nclasses, connected, backend=None):
    """Count tuples of permutations, one from each member list, by the class of
    the element closing their product to the identity.

    Returns ``(counts, connected_counts)`` indexed by class id.
    """
    use = backend or BACKEND
    if use == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        import numpy as np

        t, inv, cls, pm = _arrays(table, inverse, class_of, perms)
        c, k = _compiled.tally_products(
            t, inv, cls, [np.ascontiguousarray(m, dtype=np.int32) for m in members], pm,
            int(nclasses), bool(connected),
        )
        return [int(x) for x in c], [int(x) for x in k]
    return _pykernels.tally_products(table, inverse, class_of, [list(m) for m in members], perms,
                                     nclasses, connected)


_ARRAY_CACHE: dict = {}


def _arrays(table, inverse, class_of, perms):
    # group tables are built once per degree; keep their int32 copies alongside them
    key = id(table)
    hit = _ARRAY_CACHE.get(key)
    if hit is None or hit[0] is not table:
        import numpy as np

        conv = tuple(np.ascontiguousarray(a, dtype=np.int32) for a in (table, inverse, class_of, perms))
        hit = _ARRAY_CACHE[key] = (table, conv)
    return hit[1]

"""Combination kernel backends.

The hot loop of every combination rule enumerates tuples of focal elements
across all sources.  A compiled extension carries that loop when available;
a pure-Python fallback implements the identical contract.  Selection happens
once at import: ERMCDA_PURE_PYTHON=1 forces the fallback, otherwise the
compiled module is preferred when importable.
"""

from __future__ import annotations

import os

from . import _combine_py
from ._combine_py import CONJUNCTIVE, PCR6

if os.environ.get("ERMCDA_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from . import _combine_cy as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def available_backends() -> list[str]:
    """Backends importable in this process, preferred first."""
    return ["compiled", "python"] if _compiled is not None else ["python"]


def combine(rule, frame, indices, masses, backend=None):
    """Combine sources over a frame's intersection structure.

    indices/masses hold, per source, parallel lists of focal-element indices
    and their masses.  Returns (out, conflict): a per-element mass list and
    the accumulated empty-intersection mass (always 0 under PCR6).
    """
    name = backend or BACKEND
    if name == "python":
        return _combine_py.combine(
            rule,
            frame.intersection_rows(),
            indices,
            masses,
            frame.theta.index,
            len(frame.elements),
        )
    if name != "compiled":
        raise ValueError(f"unknown kernel backend {name!r}")
    if _compiled is None:
        raise ValueError("compiled kernel backend is not available")

    import numpy as np

    offsets = np.zeros(len(indices) + 1, dtype=np.intc)
    for t, ix in enumerate(indices):
        offsets[t + 1] = offsets[t] + len(ix)
    flat_idx = np.fromiter(
        (i for ix in indices for i in ix), dtype=np.intc, count=offsets[-1]
    )
    flat_mass = np.fromiter(
        (m for ms in masses for m in ms), dtype=np.float64, count=offsets[-1]
    )
    table = np.ascontiguousarray(frame.intersection_table(), dtype=np.intc)
    out, conflict = _compiled.combine(
        rule, table, flat_idx, flat_mass, offsets, frame.theta.index, len(frame.elements)
    )
    return out.tolist(), conflict

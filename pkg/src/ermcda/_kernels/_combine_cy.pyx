# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled n-tuple combination kernel.

Same contract as the pure-Python fallback, over flattened per-source
index/mass arrays: an odometer walk with prefix intersections and prefix
products, one table lookup and one multiply per step.
"""

import numpy as np


def combine(int rule, int[:, ::1] table, int[::1] flat_idx, double[::1] flat_mass,
            int[::1] offsets, int theta_index, int n_elements):
    """Combine sources given as slices of flat_idx/flat_mass.

    offsets has one entry per source plus a terminator; source t owns the
    half-open slice [offsets[t], offsets[t+1]).  rule 0 accumulates empty
    intersections as conflict; rule 1 (PCR6) redistributes each conflicting
    product proportionally to the slot masses of its tuple.
    Returns (out, conflict).
    """
    cdef int n = offsets.shape[0] - 1
    out_arr = np.zeros(n_elements, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int[::1] pos = np.zeros(n, dtype=np.intc)
    cdef int[::1] pref_inter = np.empty(n + 1, dtype=np.intc)
    cdef double[::1] pref_prod = np.empty(n + 1, dtype=np.float64)
    cdef double conflict = 0.0
    cdef int s = 0, t, e, prev, k
    cdef double prod, den

    pref_inter[0] = theta_index
    pref_prod[0] = 1.0
    while s >= 0:
        if s == n:
            prev = pref_inter[n]
            prod = pref_prod[n]
            if prev >= 0:
                out[prev] += prod
            elif rule == 0:
                conflict += prod
            else:
                den = 0.0
                for t in range(n):
                    den += flat_mass[offsets[t] + pos[t]]
                for t in range(n):
                    k = offsets[t] + pos[t]
                    out[flat_idx[k]] += prod * flat_mass[k] / den
            s -= 1
            while s >= 0:
                pos[s] += 1
                if pos[s] < offsets[s + 1] - offsets[s]:
                    break
                pos[s] = 0
                s -= 1
            if s < 0:
                break
        k = offsets[s] + pos[s]
        e = flat_idx[k]
        prev = pref_inter[s]
        pref_inter[s + 1] = table[prev, e] if prev >= 0 else -1
        pref_prod[s + 1] = pref_prod[s] * flat_mass[k]
        s += 1

    return out_arr, conflict

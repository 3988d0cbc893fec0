"""Pure-Python n-tuple combination kernel (fallback backend).

Enumerates every tuple of focal elements across the sources with an
odometer walk, keeping prefix intersections and prefix products so each
step costs one table lookup and one multiply.  Shared by the conjunctive
and PCR6 rules; the compiled backend implements the same contract.
"""

from __future__ import annotations

CONJUNCTIVE = 0
PCR6 = 1


def combine(rule, table, indices, masses, theta_index, n_elements):
    """Combine sources over an intersection table.

    rule: CONJUNCTIVE accumulates empty-intersection products as conflict;
        PCR6 redistributes each conflicting product to the elements of its
        tuple proportionally to their slot masses.
    table: (E, E) int array, table[i, j] = index of element_i ∩ element_j,
        -1 for the empty set; the theta row is the identity.
    indices/masses: per source, parallel sequences of focal-element indices
        and their masses.
    Returns (out, conflict): masses per element index and the ∅ mass.
    """
    n = len(indices)
    out = [0.0] * n_elements
    conflict = 0.0

    sizes = [len(ix) for ix in indices]
    pos = [0] * n
    # prefix state: pref_inter[s] / pref_prod[s] hold the intersection and
    # product of slots 0..s-1, so pref_inter[0] is theta with product 1.
    pref_inter = [theta_index] * (n + 1)
    pref_prod = [1.0] * (n + 1)

    s = 0
    while s >= 0:
        if s == n:
            inter = pref_inter[n]
            prod = pref_prod[n]
            if inter >= 0:
                out[inter] += prod
            elif rule == CONJUNCTIVE:
                conflict += prod
            else:
                den = 0.0
                for t in range(n):
                    den += masses[t][pos[t]]
                for t in range(n):
                    m = masses[t][pos[t]]
                    out[indices[t][pos[t]]] += prod * m / den
            s -= 1
            while s >= 0:
                pos[s] += 1
                if pos[s] < sizes[s]:
                    break
                pos[s] = 0
                s -= 1
            if s < 0:
                break
        e = indices[s][pos[s]]
        prev = pref_inter[s]
        pref_inter[s + 1] = table[prev][e] if prev >= 0 else -1
        pref_prod[s + 1] = pref_prod[s] * masses[s][pos[s]]
        s += 1

    return out, conflict

"""Pure-Python calendar-scan kernels.

Same contract as the compiled module `_kernels`; see `kernels` for how one
of the two is selected. Both operate on a flat float buffer of busy
intervals `[s0, e0, s1, e1, ...]`, sorted, pairwise disjoint, half-open.
The arithmetic must stay identical between the two implementations:
comparisons, one addition, and max only, so results are bit-equal.
"""


def earliest_gap(bounds, not_before, duration):
    """Earliest start >= not_before of a free slot of `duration` seconds."""
    t = not_before
    n = len(bounds) // 2
    for i in range(n):
        s = bounds[2 * i]
        e = bounds[2 * i + 1]
        if e <= t:
            continue
        if t + duration <= s:
            return t
        t = e
    return t


def earliest_start_over_pes(pe_bounds, not_before, duration):
    """Scan every PE's busy list; return (start, flat PE index).

    Ties go to the lowest index. Stops early once a PE can start at
    `not_before`, which no later PE can beat.
    """
    best = -1.0
    best_pe = -1
    for i, bounds in enumerate(pe_bounds):
        start = earliest_gap(bounds, not_before, duration)
        if best_pe < 0 or start < best:
            best = start
            best_pe = i
            if start == not_before:
                break
    return best, best_pe

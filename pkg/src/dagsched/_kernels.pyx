# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled calendar-scan kernels; mirrors `_kernels_py` exactly.

The gap scan is the hot inner loop of planning: it runs once per PE per
resource per ready task per iteration, so its cost dominates for long
calendars. Only comparisons, one addition and max are used, keeping the
float results bit-identical to the pure-Python fallback.
"""


cdef double _gap(const double[:] bounds, double not_before, double duration) nogil:
    cdef Py_ssize_t i, n = bounds.shape[0] // 2
    cdef double t = not_before
    cdef double s, e
    for i in range(n):
        s = bounds[2 * i]
        e = bounds[2 * i + 1]
        if e <= t:
            continue
        if t + duration <= s:
            return t
        t = e
    return t


def earliest_gap(const double[:] bounds, double not_before, double duration):
    """Earliest start >= not_before of a free slot of `duration` seconds."""
    return _gap(bounds, not_before, duration)


def earliest_start_over_pes(list pe_bounds, double not_before, double duration):
    """Scan every PE's busy list; return (start, flat PE index).

    Ties go to the lowest index. Stops early once a PE can start at
    `not_before`, which no later PE can beat.
    """
    cdef double best = -1.0
    cdef double start
    cdef Py_ssize_t best_pe = -1
    cdef Py_ssize_t i
    cdef const double[:] view
    for i in range(len(pe_bounds)):
        view = pe_bounds[i]
        start = _gap(view, not_before, duration)
        if best_pe < 0 or start < best:
            best = start
            best_pe = i
            if start == not_before:
                break
    return best, best_pe

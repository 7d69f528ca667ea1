# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fuzzy-matching kernels.

Hot inner loops for indel distance and best-substring similarity. The
pure-Python twin lives in ``_pure.py``; both must stay observationally
identical.
"""

from libc.stdlib cimport free, malloc

COMPILED = True


cdef Py_UCS4* _copy_codepoints(str text, Py_ssize_t n) except NULL:
    cdef Py_UCS4* buf = <Py_UCS4*> malloc(n * sizeof(Py_UCS4))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = text[i]
    return buf


cdef int _lcs_len_raw(Py_UCS4* s, Py_ssize_t m, Py_UCS4* t, Py_ssize_t n, int* row) nogil:
    cdef Py_ssize_t j, p
    cdef int prev_diag, tmp
    cdef Py_UCS4 c
    for p in range(m + 1):
        row[p] = 0
    for j in range(n):
        c = t[j]
        prev_diag = 0
        for p in range(1, m + 1):
            tmp = row[p]
            if s[p - 1] == c:
                row[p] = prev_diag + 1
            elif row[p - 1] > row[p]:
                row[p] = row[p - 1]
            prev_diag = tmp
    return row[m]


def lcs_len(str s, str t) -> int:
    """Length of the longest common subsequence of ``s`` and ``t``."""
    cdef Py_ssize_t m = len(s), n = len(t)
    if m == 0 or n == 0:
        return 0
    cdef Py_UCS4* sb = _copy_codepoints(s, m)
    cdef Py_UCS4* tb = NULL
    cdef int* row = NULL
    cdef int result
    try:
        tb = _copy_codepoints(t, n)
        row = <int*> malloc((m + 1) * sizeof(int))
        if row == NULL:
            raise MemoryError()
        result = _lcs_len_raw(sb, m, tb, n, row)
    finally:
        free(sb)
        if tb != NULL:
            free(tb)
        if row != NULL:
            free(row)
    return result


def indel_distance(str s, str t) -> int:
    """Edit distance with insertions and deletions only (no substitution)."""
    return len(s) + len(t) - 2 * lcs_len(s, t)


def best_substring_similarity(str s, str t) -> float:
    """Max over contiguous substrings ``w`` of ``t`` of the indel similarity
    ``100 * (1 - indel(s, w) / (|s| + |w|))``, equal to ``200*LCS/(|s|+|w|)``.

    Both inputs must be non-empty. One LCS row per window start; extension
    stops once even a full-LCS window would score below the current best.
    """
    cdef Py_ssize_t m = len(s), n = len(t)
    cdef Py_UCS4* sb = _copy_codepoints(s, m)
    cdef Py_UCS4* tb = NULL
    cdef int* row = NULL
    cdef double best = 0.0, cap = 200.0 * m, score
    cdef Py_ssize_t i, j, p, length
    cdef int prev_diag, tmp
    cdef Py_UCS4 c
    try:
        tb = _copy_codepoints(t, n)
        row = <int*> malloc((m + 1) * sizeof(int))
        if row == NULL:
            raise MemoryError()
        with nogil:
            for i in range(n):
                for p in range(m + 1):
                    row[p] = 0
                for j in range(i, n):
                    length = j - i + 1
                    if length > m and cap / (m + length) <= best:
                        break
                    c = tb[j]
                    prev_diag = 0
                    for p in range(1, m + 1):
                        tmp = row[p]
                        if sb[p - 1] == c:
                            row[p] = prev_diag + 1
                        elif row[p - 1] > row[p]:
                            row[p] = row[p - 1]
                        prev_diag = tmp
                    score = (200.0 * row[m]) / (m + length)
                    if score > best:
                        best = score
                if best >= 100.0:
                    break
    finally:
        free(sb)
        if tb != NULL:
            free(tb)
        if row != NULL:
            free(row)
    return best

"""Pure-Python fuzzy-matching kernels.

Fallback for :mod:`resume_tailor.fuzz` when the compiled extension is not
available. Semantics must match ``_kernels.pyx`` exactly; the test suite
runs both against the same oracle.
"""

from __future__ import annotations

COMPILED = False


def lcs_len(s: str, t: str) -> int:
    """Length of the longest common subsequence of ``s`` and ``t``."""
    m, n = len(s), len(t)
    if m == 0 or n == 0:
        return 0
    row = [0] * (m + 1)
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


def indel_distance(s: str, t: str) -> int:
    """Edit distance with insertions and deletions only (no substitution)."""
    return len(s) + len(t) - 2 * lcs_len(s, t)


def best_substring_similarity(s: str, t: str) -> float:
    """Max over contiguous substrings ``w`` of ``t`` of the indel similarity
    ``100 * (1 - indel(s, w) / (|s| + |w|))``, equal to ``200*LCS/(|s|+|w|)``.

    Both inputs must be non-empty. Runs one LCS row per window start,
    extending the window a character at a time; extension stops once even a
    full-LCS window would score below the current best.
    """
    m, n = len(s), len(t)
    best = 0.0
    cap = 200.0 * m
    for i in range(n):
        row = [0] * (m + 1)
        for j in range(i, n):
            length = j - i + 1
            # longer windows score at most 200m/(m+L); give up once beaten
            if length > m and cap / (m + length) <= best:
                break
            c = t[j]
            prev_diag = 0
            for p in range(1, m + 1):
                tmp = row[p]
                if s[p - 1] == c:
                    row[p] = prev_diag + 1
                elif row[p - 1] > row[p]:
                    row[p] = row[p - 1]
                prev_diag = tmp
            score = 200.0 * row[m] / (m + length)
            if score > best:
                best = score
        if best >= 100.0:
            break
    return best

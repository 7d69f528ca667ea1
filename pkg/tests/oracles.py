"""Independent reference implementations used to check the real ones.

Everything here is written for obviousness, not speed, and never imports
the modules under test. Expected values in the suites are frozen from
these oracles (or computed side by side at test time).
"""

from __future__ import annotations

import numpy as np


# --- fuzzy matching -------------------------------------------------------

def lcs_len_ref(s: str, t: str) -> int:
    """Textbook full-matrix longest-common-subsequence length."""
    m, n = len(s), len(t)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if s[i - 1] == t[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[m][n]


def indel_distance_ref(s: str, t: str) -> int:
    return len(s) + len(t) - 2 * lcs_len_ref(s, t)


def _best_over_substrings(s: str, t: str) -> float:
    """Max indel similarity of ``s`` against every contiguous substring of
    ``t``: the all-substrings reading of partial_ratio."""
    m = len(s)
    best = 0.0
    for i in range(len(t)):
        for j in range(i + 1, len(t) + 1):
            w = t[i:j]
            score = 200.0 * lcs_len_ref(s, w) / (m + len(w))
            if score > best:
                best = score
    return best


def partial_ratio_ref(a: str, b: str) -> float:
    """Brute-force partial ratio on already-folded strings.

    Empty-vs-empty is a perfect match; one empty side scores zero. The
    shorter string is slid over all substrings of the longer; equal-length
    pairs take the max over both orientations.
    """
    if not a and not b:
        return 100.0
    if not a or not b:
        return 0.0
    s, t = (a, b) if len(a) <= len(b) else (b, a)
    best = _best_over_substrings(s, t)
    if len(s) == len(t):
        best = max(best, _best_over_substrings(t, s))
    return best


class PartialRatioTable:
    """Batch oracle for an exhaustive sweep over a prefix-closed universe.

    For a universe of all strings up to some length over a small alphabet,
    every substring of a universe string is itself in the universe, so one
    LCS table over (string, string) pairs answers every partial-ratio query
    by maximizing over the longer side's substrings. The table is filled by
    extending each string from its parent prefix one character at a time —
    still the textbook recurrence, just sharing work between prefixes.
    """

    def __init__(self, alphabet: str, max_len: int):
        self.universe: list[str] = [""]
        frontier = [""]
        for _ in range(max_len):
            frontier = [w + c for w in frontier for c in alphabet]
            self.universe.extend(frontier)
        self.index = {w: i for i, w in enumerate(self.universe)}
        n = len(self.universe)
        self.lengths = np.array([len(w) for w in self.universe], dtype=np.int64)
        self.lcs = np.zeros((n, n), dtype=np.uint8)
        # distinct substrings of each universe string, as indices into it
        self.subs: list[np.ndarray] = [
            np.array(
                sorted({self.index[w[i:j]] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}),
                dtype=np.int64,
            )
            if w
            else np.zeros(0, dtype=np.int64)
            for w in self.universe
        ]
        for s_idx, s in enumerate(self.universe):
            self._fill_row(s_idx, s)

    def _fill_row(self, s_idx: int, s: str) -> None:
        m = len(s)
        out = self.lcs[s_idx]
        # rows[w] = LCS DP row of s against prefix w; parents precede children
        rows: dict[str, list[int]] = {"": [0] * (m + 1)}
        out[self.index[""]] = 0
        for w in self.universe[1:]:
            parent = rows[w[:-1]]
            c = w[-1]
            row = parent[:]
            prev_diag = 0
            for p in range(1, m + 1):
                tmp = row[p]
                if s[p - 1] == c:
                    row[p] = prev_diag + 1
                elif row[p - 1] > row[p]:
                    row[p] = row[p - 1]
                prev_diag = tmp
            rows[w] = row
            out[self.index[w]] = row[m]

    def partial_ratio(self, a: str, b: str) -> float:
        if not a and not b:
            return 100.0
        if not a or not b:
            return 0.0
        s, t = (a, b) if len(a) <= len(b) else (b, a)
        best = self._one_sided(s, t)
        if len(s) == len(t):
            best = max(best, self._one_sided(t, s))
        return best

    def _one_sided(self, s: str, t: str) -> float:
        m = len(s)
        sub_idx = self.subs[self.index[t]]
        lcs = self.lcs[self.index[s], sub_idx].astype(np.float64)
        scores = 200.0 * lcs / (m + self.lengths[sub_idx])
        return float(scores.max())


# --- vault retrieval ------------------------------------------------------

def knn_ref(records: list[tuple[str, np.ndarray]], query: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Full-scan k nearest neighbours by cosine, ties broken by id.

    ``records`` carry unit vectors. The query is brought to unit length in
    float32 here as well, independently of the store; one-ulp normalization
    differences mean cosines agree to ~1e-7, so callers compare ids exactly
    and cosines within a small epsilon.
    """
    q = np.asarray(query, dtype=np.float32).reshape(-1)
    q = q / np.float32(np.linalg.norm(q))
    ids = [chunk_id for chunk_id, _ in records]
    matrix = np.vstack([vec for _, vec in records]).astype(np.float32)
    cosines = matrix @ q
    ranked = sorted(zip(ids, cosines), key=lambda pair: (-float(pair[1]), pair[0]))
    return [(chunk_id, float(cosine)) for chunk_id, cosine in ranked[:k]]


# --- scoring --------------------------------------------------------------

PROFILE_WEIGHTS_REF = {
    "Skills-Heavy": (0.50, 0.30, 0.20),
    "Role-Aligned": (0.40, 0.40, 0.20),
    "Responsibilities-First": (0.30, 0.50, 0.20),
    "Qualifications-Heavy": (0.25, 0.25, 0.50),
    "Balanced": (0.33, 0.34, 0.33),
}


def profile_score_ref(coverage: dict[str, float], weights: tuple[float, float, float]) -> float:
    """Weighted coverage with absent categories' weight shared out
    proportionally among the present ones."""
    order = ("skill", "responsibility", "qualification")
    present = [(cat, w) for cat, w in zip(order, weights) if cat in coverage]
    total = sum(w for _, w in present)
    return sum(coverage[cat] * (w / total) for cat, w in present)


def report_ref(coverage: dict[str, float]) -> tuple[dict[str, float], float, float]:
    """(per-profile scores, overall = mean, best = max) for a coverage map."""
    scores = {
        name: profile_score_ref(coverage, weights)
        for name, weights in PROFILE_WEIGHTS_REF.items()
    }
    values = list(scores.values())
    return scores, sum(values) / len(values), max(values)

"""Fuzzy-matching kernels with a compiled core and a pure-Python fallback.

The compiled extension (``_kernels``, Cython) is preferred; set
``RESUME_TAILOR_PURE=1`` to force the pure-Python implementation, e.g. for
the benchmark in ``benchmarks/bench_fuzz.py`` or when no compiler is
available. ``KERNEL_BACKEND`` reports which one is active.
"""

from __future__ import annotations

import os

if os.environ.get("RESUME_TAILOR_PURE") == "1":
    from resume_tailor.fuzz._pure import (
        COMPILED,
        best_substring_similarity,
        indel_distance,
        lcs_len,
    )
else:
    try:
        from resume_tailor.fuzz._kernels import (  # type: ignore[no-redef]
            COMPILED,
            best_substring_similarity,
            indel_distance,
            lcs_len,
        )
    except ImportError:
        from resume_tailor.fuzz._pure import (  # type: ignore[no-redef]
            COMPILED,
            best_substring_similarity,
            indel_distance,
            lcs_len,
        )

KERNEL_BACKEND = "compiled" if COMPILED else "pure"

__all__ = [
    "COMPILED",
    "KERNEL_BACKEND",
    "best_substring_similarity",
    "indel_distance",
    "lcs_len",
]

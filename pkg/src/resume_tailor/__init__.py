"""Career-aware resume tailoring engine.

Retrieves evidence from a persistent career vault, scores it with a hybrid
semantic-lexical confidence function, drafts job-specific resume content with
strict provenance separation between retrieved and generated material, and
scores the result under five ATS-style weighting profiles.
"""

__version__ = "0.1.0"

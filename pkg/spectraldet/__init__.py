"""spectraldet — zeta-regularised determinants of the δ-damped string."""

__version__ = "1.0.0"

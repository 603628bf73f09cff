"""Spectral test for communities in degree-corrected stochastic block models.

The adjacency matrix is centered and rescaled entrywise with degree-based
probability estimates; the extreme eigenvalues of the result are compared
with the Tracy-Widom (beta = 1) law.
"""

from .hypothesis import TestOutcome, decide, run_test, statistic
from .model import (
    AdjacencyMatrix,
    DcsbmParams,
    canonicalize,
    edge_probability,
    generate_alternative_experiment,
    generate_null_experiment,
    sample_adjacency,
    validate_params,
)
from .spectra import (
    esd,
    extreme_eigenvalues,
    ks_distance_to_semicircle,
    semicircle_cdf,
    symmetric_eigenvalues,
)
from .tracy_widom import TwTable, tw1_cdf, tw1_pdf, tw1_quantile
from .transform import estimated_transform, oracle_transform, plug_in_probability, scale

__version__ = "0.1.0"

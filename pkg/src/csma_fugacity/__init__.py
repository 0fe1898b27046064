"""CSMA fugacities from region-based free-energy approximations."""

from .exact import ExactSummary, enumerate_independent_sets, exact_marginals, max_symmetric_rate
from .estimator import FugacityEstimator, GibbsMarginals
from .evaluation import ErrorRow, approx_error, random_average, sweep
from .exceptions import (
    CsmaFugacityError,
    DegenerateDenominator,
    DimacsParseError,
    InfeasibleRates,
    MissingRatio,
    NoConvergence,
    ParameterError,
    TooLarge,
)
from .fugacity import bethe_raf, clique_raf, combine_raf, cycle4_raf, raf, region_entropy
from .graph import (
    ConflictGraph,
    chordless_4cycles,
    generate,
    is_chordal,
    load_dimacs,
    maximal_cliques,
    write_dimacs,
)
from .regions import RegionCollection, build_collection, validate
from .sampler import simulate

__version__ = "0.1.0"

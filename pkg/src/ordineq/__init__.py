"""Bayesian inference for level and inequality of ordinal categorical distributions."""

__version__ = "0.1.0"

from .comparison import (  # noqa: E402
    DensityEstimate,
    DominanceReport,
    IndexPosterior,
    ProbabilityCurve,
    Summary,
    fsd_probabilities,
    gld_probabilities,
    index_posterior,
    kde,
    probability_curve_fsd,
    probability_curve_gld,
    restricted_fsd_probabilities,
    summarize,
)
from .errors import (  # noqa: E402
    ConfigError,
    DegenerateSampleError,
    DimensionError,
    DomainError,
    InsufficientDrawsError,
    OrdineqError,
    ParseError,
    ValidationError,
)
from .measures import (  # noqa: E402
    Dominance,
    GLCurve,
    ProbabilityVector,
    cdf,
    cf_index,
    default_grid,
    fsd_compare,
    gl_curve,
    gl_eval,
    gld_compare,
    headcount,
    j_index,
    restricted_fsd_compare,
)
from .posterior import (  # noqa: E402
    CountData,
    PosteriorDraws,
    WeightedMicrodata,
    conjugate_draws,
    dirichlet_sample,
    weighted_bootstrap_draws,
)

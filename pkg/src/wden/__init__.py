"""Wavelet block thresholding estimation of weighted densities ``g = w(F) f``."""

from .errors import (
    ConfigurationError,
    DataError,
    SampleTooSmallError,
    ShapeError,
    SingularWeightError,
    WdenError,
)
from .estimator import (
    DensityEstimate,
    EstimatorConfig,
    block_threshold,
    empirical_fine_coefficients,
    estimate_density,
    grid_integral,
    make_grid,
    scale_parameters,
    universal_kappa,
)
from .kernel import BandwidthSelection, h_rot, kde_eval, lscv_score, plug_in_kernel, select_h_lscv
from .risk import ExperimentConfig, RiskReport, h_mise_scan, kappa_sweep, lp_risk, mise_study, mise_table, p_sweep
from .testbed import (
    MixtureModel,
    NSpec,
    make_model,
    model_cdf,
    model_pdf,
    replication_stream,
    sample_max_of_N,
    sample_model,
    true_g,
)
from .wavelets import CoefficientPyramid, WaveletFilter, dwt_periodized, idwt_periodized, make_filter
from .weights import EmpiricalCdf, Pgf, WeightSpec, ecdf_eval, parse_weight, pileup_weight, plug_in, weight_eval

__version__ = "0.1.0"

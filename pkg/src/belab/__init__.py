"""Exact and Monte Carlo Kolmogorov distances for martingales and linear processes."""
from .dist import (KolmogorovResult, dkw_band, enumerate_model_distance,
                   exact_rademacher_distance, kolmogorov_distance, std_normal_cdf)
from .enlarge import EnlargedSequence, enlarge_to_unit_variance
from .linproc import (CoefficientSeq, PartialSumWeights, classify_memory, farima_coefficients,
                      finite_coefficients, partial_sum_weights, power_law_coefficients,
                      simulate_normalized_sum)
from .model import ConditionReport, MartingalePath, MdsModel, condition_report, sample_path
from .rates import RateFit, bound_curve, fit_loglog, theorem2_functionals

__version__ = "0.1.0"

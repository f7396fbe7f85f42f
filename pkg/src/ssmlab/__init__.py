from .autocorr import (
    build_autocov,
    lambda_max,
    power_iteration,
    sample_autocorrelation,
    sample_gp,
    spectrum_sweep,
    whiten,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    HypothesisError,
    KernelOverflowError,
    ShapeMismatchError,
    SingularGramError,
    SsmLabError,
    ValidationError,
)
from .gram import (
    approximation_error,
    approximation_matrix,
    basel_sum,
    condition_sweep,
    cosine_integral,
    gershgorin_bounds,
    gram_complex,
    gram_numeric,
    gram_real,
    positive_definite_check,
    separation_distance,
    target_energy,
    tradeoff_sweep,
    worst_case_matrix,
)
from .initialization import (
    init_readout,
    make_bank,
    make_model,
    make_state_vector,
    resolve_timescale,
    sample_timescales,
    timescale_from_data,
)
from .kernel import (
    bank_kernels,
    continuous_kernel,
    forward,
    forward_batch,
    forward_pooled,
    forward_sequence,
    kernel_jacobians,
    safe_ez_ratio,
    vandermonde_factor,
    zoh_kernel,
)
from .models.autocov_spec import AutocovSpec
from .models.discrete_kernel import DiscreteKernel
from .models.experiment_config import ExperimentConfig
from .models.gradients import Gradients
from .models.gram_matrix import GramMatrix
from .models.init_spec import InitSpec
from .models.recovery_problem import RecoveryProblem
from .models.spectrum_bounds import SpectrumBounds
from .models.spectrum_report import SpectrumReport
from .models.ssm_bank import SsmBank
from .models.ssm_model import SsmModel
from .models.stability_report import StabilityReport
from .models.state_vector import StateVector
from .models.target_memory import TargetMemory
from .models.task import Task
from .models.timescale_rule import TimescaleRule
from .models.tradeoff_target import TradeoffTarget
from .models.train_config import TrainConfig
from .models.train_report import TrainReport
from .optim import Adam
from .recovery import (
    convolution_design,
    dominant_frequencies,
    expected_mse,
    greedy_select_nodes,
    recover_memory,
    scale_for_plot,
)
from .stability import (
    delta_for_alpha,
    empirical_magnitude,
    expected_magnitude,
    magnitude_sweep,
    magnitude_bound,
)
from .trainer import gradients, loss, make_task_data, train

__all__ = [
    "StateVector",
    "SsmModel",
    "SsmBank",
    "DiscreteKernel",
    "InitSpec",
    "TimescaleRule",
    "AutocovSpec",
    "SpectrumReport",
    "StabilityReport",
    "GramMatrix",
    "TradeoffTarget",
    "SpectrumBounds",
    "TargetMemory",
    "RecoveryProblem",
    "Task",
    "TrainConfig",
    "TrainReport",
    "Gradients",
    "ExperimentConfig",
    "Adam",
    "zoh_kernel",
    "bank_kernels",
    "forward",
    "forward_batch",
    "forward_sequence",
    "forward_pooled",
    "continuous_kernel",
    "vandermonde_factor",
    "kernel_jacobians",
    "safe_ez_ratio",
    "make_state_vector",
    "init_readout",
    "make_model",
    "make_bank",
    "timescale_from_data",
    "sample_timescales",
    "resolve_timescale",
    "build_autocov",
    "sample_gp",
    "lambda_max",
    "power_iteration",
    "whiten",
    "sample_autocorrelation",
    "spectrum_sweep",
    "magnitude_bound",
    "empirical_magnitude",
    "expected_magnitude",
    "delta_for_alpha",
    "magnitude_sweep",
    "cosine_integral",
    "gram_complex",
    "gram_real",
    "gram_numeric",
    "gershgorin_bounds",
    "basel_sum",
    "worst_case_matrix",
    "approximation_matrix",
    "approximation_error",
    "target_energy",
    "tradeoff_sweep",
    "condition_sweep",
    "positive_definite_check",
    "separation_distance",
    "convolution_design",
    "recover_memory",
    "dominant_frequencies",
    "greedy_select_nodes",
    "expected_mse",
    "scale_for_plot",
    "make_task_data",
    "loss",
    "gradients",
    "train",
    "SsmLabError",
    "ValidationError",
    "ShapeMismatchError",
    "HypothesisError",
    "KernelOverflowError",
    "ConvergenceError",
    "DivergenceError",
    "SingularGramError",
]

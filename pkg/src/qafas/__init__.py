"""Quantization-aware greedy antenna selection for low-resolution ADC receivers."""
from .capacity import SubchannelView, capacity, capacity_covariance_form, capacity_penalty_form
from .channel import (
    CellConfig,
    ChannelMatrix,
    assemble_channel,
    generate_channel,
    generate_large_scale,
    generate_small_scale,
)
from .exceptions import (
    ConfigError,
    EmptyTableError,
    InvalidDimensionError,
    InvalidQuantizerError,
    InvalidRequestError,
    InvalidResolutionError,
    QafasError,
    SearchTooLargeError,
)
from .harness import ExperimentConfig, ExperimentRecord, run_experiment, summarize
from .quantization import INFINITE, QuantizerModel, beta_of_bits, penalty_d, quantization_covariance
from .selection import (
    GreedyState,
    SelectionResult,
    greedy_objective,
    select_exhaustive,
    select_fas,
    select_qafas,
    select_random,
)

__version__ = "0.1.0"

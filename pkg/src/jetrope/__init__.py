"""Rotary position features with nilpotent frequency-jet channels.

The library implements exact one-parameter relative-position operators
built from complex Jordan blocks, the contragredient query/key
factorization that turns them into pure lag scores, fixed feature banks
with ridge readouts for basis-level probing, teacher-kernel labeled
sequence generation, and a CLI harness that writes CSV/markdown/figure
reports (see ``jetrope.cli``).
"""

from .operators import (
    BlockMatrix,
    JordanGenerator,
    LagGrid,
    OVERFLOW_CAP,
    bounded_coordinate,
    frequency_jet_check,
    generator_matrix,
    group_law_defect,
    jet_coefficients,
    jet_features,
    realify,
    relative_operator,
    signed_bounded_coordinate,
    stabilized_operator,
)
from .transforms import (
    AttentionTensors,
    HeadLayout,
    PositionwiseTransform,
    apply,
    build_transform,
    max_scalar_factor,
    norm_profile,
    relative_score_check,
    scalar_factors,
    sigma_obstruction,
    window_center,
)
from .features import (
    BankConfig,
    FeatureBank,
    FitResult,
    ProbeTarget,
    build_bank,
    evaluate_targets,
    fit_readout,
    parse_method,
)
from .synthetic import (
    QuerySequence,
    TeacherKernel,
    generate,
    oracle_label,
    read_dataset,
    write_dataset,
)
from .config import ConfigError, SuiteConfig, config_dumps, config_load, config_loads
from .suites import SuiteResult, run

__version__ = "0.1.0"

__all__ = [
    "AttentionTensors", "BankConfig", "BlockMatrix", "ConfigError",
    "FeatureBank", "FitResult", "HeadLayout", "JordanGenerator", "LagGrid",
    "OVERFLOW_CAP", "PositionwiseTransform", "ProbeTarget", "QuerySequence",
    "SuiteConfig", "SuiteResult", "TeacherKernel", "apply",
    "bounded_coordinate", "build_bank", "build_transform", "config_dumps",
    "config_load", "config_loads", "evaluate_targets", "fit_readout",
    "frequency_jet_check", "generate", "generator_matrix", "group_law_defect",
    "jet_coefficients", "jet_features", "max_scalar_factor", "norm_profile",
    "oracle_label", "parse_method", "read_dataset", "realify",
    "relative_operator", "relative_score_check", "run", "scalar_factors",
    "sigma_obstruction", "signed_bounded_coordinate", "stabilized_operator",
    "window_center", "write_dataset",
]

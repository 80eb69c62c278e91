"""Python bindings for the triharm numerical laboratory."""

from ._triharm import (  # noqa: F401
    DomainError,
    GridSpec,
    ThresholdError,
    UsageError,
    apply_multiplier,
    classify,
    default_config,
    forward_transform,
    inverse_transform,
    ls2_norm,
    lp_norm,
    make_atom,
    moment_experiment,
    plan,
    ratio_experiment,
    required_regularity,
)

__all__ = [
    "DomainError",
    "GridSpec",
    "ThresholdError",
    "UsageError",
    "apply_multiplier",
    "classify",
    "default_config",
    "forward_transform",
    "inverse_transform",
    "ls2_norm",
    "lp_norm",
    "make_atom",
    "moment_experiment",
    "plan",
    "ratio_experiment",
    "required_regularity",
]

"""Matrix coefficients of p-adic newvectors and quaternion lattice counts."""

from ._core import (
    ConfigError,
    PhiEvaluator,
    QuaternionAlgebra,
    ReprSpec,
    conductor_counts,
    depth_exponent,
    filtration_schedule,
    hilbert_symbol,
    in_support,
    make_spec,
    run_task,
    supnorm_exponent,
    verify_decay,
    verify_maximal_order,
    verify_support,
)

__all__ = [
    "ConfigError",
    "PhiEvaluator",
    "QuaternionAlgebra",
    "ReprSpec",
    "conductor_counts",
    "depth_exponent",
    "filtration_schedule",
    "hilbert_symbol",
    "in_support",
    "make_spec",
    "run_task",
    "supnorm_exponent",
    "verify_decay",
    "verify_maximal_order",
    "verify_support",
]

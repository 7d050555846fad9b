"""QoS-aware base-station selection for distributed MIMO downlinks.

Thin python surface over the C++ core: linear-algebra and effective-capacity
primitives, the selection/allocation solvers, and the experiment harness
(`run_experiment`, `sweep`) driven by scenario text in the same key = value
format the `sim` CLI reads.
"""

from ._core import (
    bd_precoders,
    constraint_residual,
    effective_capacity,
    mimo_capacity,
    qos_exponent,
    rate_derivative,
    rate_envelope,
    run_experiment,
    scenario_listing,
    scheme_names,
    semi_random_select,
    simulate_queue,
    svd,
    sweep,
    tdma_time_alloc,
    theorem1_usage,
    usage_to_alpha,
    water_fill,
)

__all__ = [
    "bd_precoders",
    "constraint_residual",
    "effective_capacity",
    "mimo_capacity",
    "qos_exponent",
    "rate_derivative",
    "rate_envelope",
    "run_experiment",
    "scenario_listing",
    "scheme_names",
    "semi_random_select",
    "simulate_queue",
    "svd",
    "sweep",
    "tdma_time_alloc",
    "theorem1_usage",
    "usage_to_alpha",
    "water_fill",
]

"""Stable-law numerics with an empirical inequality-verification harness.

The package splits into a distribution layer (parameters, characteristic
function, sampling, tails, fractional moments), an estimation layer for
weighted sums of independent draws, a complexity harness comparing sign
averages against stable averages over finite function classes, and exact
arithmetic for the coordinate family where the naive comparison diverges.
All sampling runs on a counter-based stream: a (seed, index range) pair
names its draws, so any partition of the work reproduces the same numbers.
"""

from .complexity_harness import (
    EXACT_ENUM_MAX,
    FunctionClassTable,
    PiecewiseLinear,
    TableFormatError,
    check_lipschitz,
    gen_instance,
    gen_offset,
    rademacher_complexity_exact,
    rademacher_complexity_mc,
    stable_complexity_mc,
    table_from_json,
    table_to_json,
    verify_corollary_p2,
    verify_lemma_instance,
    verify_scalar_contraction,
    verify_vector_contraction,
)
from .counterexample import (
    CounterexampleRow,
    counterexample_exact,
    counterexample_mc,
    divergence_table,
    sphere_family_case,
)
from .empirical_sums import (
    CoefVector,
    c_pr_estimate,
    contraction_constant,
    equivalent_single,
    kolmogorov_sf,
    ks_two_sample,
    lr_truncation_convergence,
    p_norm,
    verify_stability_law,
)
from .results import KS_PASS_LEVEL, StatResult, VerificationReport
from .rng import CounterStream, derive_seed
from .stable_core import (
    DomainError,
    PStableSpec,
    SampleBatch,
    StableParams,
    abs_moment,
    add,
    cf,
    lanczos_gamma,
    make_p_stable,
    sample,
    sample_range,
    scale_shift,
    tail_asymptote,
    tail_constant,
)

__version__ = "0.1.0"

__all__ = [
    "CoefVector",
    "CounterStream",
    "CounterexampleRow",
    "DomainError",
    "EXACT_ENUM_MAX",
    "FunctionClassTable",
    "KS_PASS_LEVEL",
    "PStableSpec",
    "PiecewiseLinear",
    "SampleBatch",
    "StableParams",
    "StatResult",
    "TableFormatError",
    "VerificationReport",
    "abs_moment",
    "add",
    "c_pr_estimate",
    "cf",
    "check_lipschitz",
    "contraction_constant",
    "counterexample_exact",
    "counterexample_mc",
    "derive_seed",
    "divergence_table",
    "equivalent_single",
    "gen_instance",
    "gen_offset",
    "kolmogorov_sf",
    "ks_two_sample",
    "lanczos_gamma",
    "lr_truncation_convergence",
    "make_p_stable",
    "p_norm",
    "rademacher_complexity_exact",
    "rademacher_complexity_mc",
    "sample",
    "sample_range",
    "scale_shift",
    "sphere_family_case",
    "stable_complexity_mc",
    "table_from_json",
    "table_to_json",
    "tail_asymptote",
    "tail_constant",
    "verify_corollary_p2",
    "verify_lemma_instance",
    "verify_scalar_contraction",
    "verify_stability_law",
    "verify_vector_contraction",
]

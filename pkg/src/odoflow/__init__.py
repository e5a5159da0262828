"""Exact-arithmetic engine for the binary odometer, Bernoulli cylinder
states, the unit-ceiling suspension flow, and root-of-unity eigenfunction
checks.  Every core quantity is a `fractions.Fraction` or a certified
rational interval."""

from .words import (
    BlockIndex,
    CarryResult,
    block_of,
    first_zero_index,
    index_to_word,
    odometer_pow,
    odometer_step,
    word_from_string,
    word_to_string,
)
from .measures import (
    BernoulliParam,
    CylinderState,
    SignedFunctional,
    TVInterval,
    brute_force_tv_pow2,
    cylinder_mass,
    extend_state,
    rn_derivative_on_Kn,
    rn_integral_check,
    tv_pushforward_pow2,
    tv_same_tail,
    tv_sigma_vs_identity,
)
from .suspension import (
    SuspensionPoint,
    SuspensionState,
    flow_limit_table,
    integer_time_factorization_check,
    point_flow,
    project_height,
    suspension_tv_pow2,
)
from .characters import (
    DyadicAngle,
    RootOfUnityFunction,
    StepFunction,
    dyadic_membership,
    eigen_unitary,
    l2_contraction_check,
    l2_norm_sq,
    l2_pow2_convergence,
    orbit_distance_profile,
    suspension_eigen_check,
    verify_sigma_eigen,
)

__version__ = "0.1.0"

"""Discrete Green energy of charges on circles in rotation domains.

Computes Green and Riesz interaction energies of discrete charges placed
where circles around the rotation axis meet half-planes, verifies that the
equally spaced half-planes are energy-extremal, and validates the
small-plate condenser modulus expansion against independent capacity
oracles.
"""

from .capacity import (
    GeneralizedCondenser,
    ModulusReport,
    asymptotic_modulus,
    fdm_capacity,
    fdm_modulus,
    modulus_sweep,
    point_charge_capacity,
    point_charge_modulus,
    sweep_errors_decrease,
)
from .domains import Ball, Domain, FreeSpace, HalfSpace, green_is_harmonic_check
from .energy import (
    Charge,
    alternating_by_half_plane,
    energy_gradient_angles,
    green_energy,
    green_energy_at_angles,
    per_circle_equal,
    riesz_energy,
    signed_riesz_energy,
)
from .extremal import (
    ExtremalProblem,
    OptimizationResult,
    RieszCheckSummary,
    VerificationReport,
    gauge_fix,
    optimize_angles,
    random_trial_angles,
    riesz_extremal_check,
    run_random_trials,
    verify_energy_maximum,
    verify_energy_minimum,
)
from .geometry import (
    AngleSet,
    CartPoint,
    Circle,
    Configuration,
    CylPoint,
    Dimension,
    build_configuration,
    cart_to_cyl,
    cyl_to_cart,
    symmetric_angles,
)

__version__ = "0.1.0"

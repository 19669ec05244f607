"""Python bindings for the mosqdyn C++ core."""

from ._mosqdyn import (  # noqa: F401
    InstabilityError,
    Parameters,
    VerificationError,
    apply_T,
    apply_U,
    apply_W,
    apply_W0,
    check_T_range,
    classify_origin,
    compute_r0,
    continuous_rhs,
    eigenvalues,
    find_fixed_points_w0,
    integrate_ode,
    iterate_orbit,
    jacobian_at_origin,
    positive_equilibrium,
    scan_periodic_points,
    two_periodic_certificate,
    validate_parameters,
)

__version__ = "0.1.0"

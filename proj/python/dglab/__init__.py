"""Quantum Borel kinematics and Doebner-Goldin nonlinear Schroedinger dynamics.

The heavy lifting lives in the compiled extension; this package re-exports its
surface.  See the project README for the physics conventions (hbar = m = 1 by
default, periodic boxes, cell-volume quadrature).
"""

from ._core import (  # noqa: F401
    apply_momentum,
    apply_position,
    catalog_list,
    catalog_lookup,
    continuity_residual,
    derive_dg_coefficients,
    dg_rhs,
    DGParams,
    diffusion_from_operator_gamma,
    diffusion_from_polar_gamma,
    dynamics_commutator_residual,
    evolve,
    from_values,
    gauge_apply,
    gauge_compose,
    gauge_covariance_residual,
    gauge_inverse,
    GaugeParams,
    Generator,
    generator_from_momentum,
    generator_hamiltonian,
    Grid,
    homomorphism_residual,
    hydro_fields,
    imaginary_term,
    inner_product,
    InstabilityError,
    lie_bracket,
    LinearOperator,
    momentum_operator,
    NodeError,
    norm,
    ObsRow,
    operator_gamma_from_polar,
    params,
    polar_gamma_from_operator,
    r_functional,
    read_wf,
    sample_gaussian,
    sample_plane_wave,
    spectral_derivative,
    step,
    tangent_map_numeric,
    Trajectory,
    transformed_momentum,
    vector_field,
    VectorField,
    WaveFunction,
    write_wf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

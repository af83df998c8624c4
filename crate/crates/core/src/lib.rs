//! Static Cosserat rod model of a pneumatically actuated soft continuum
//! robot whose stiffness varies with the length of a jammed growing spine.
//!
//! The crate is `no_std` (with `alloc`). Everything is a pure function of
//! immutable inputs:
//!
//! - [`rod`]: material, cross-section stiffness, constitutive law, equilibrium ODEs.
//! - [`actuation`]: chamber layout, pneumatic tip loads, free-end boundary condition.
//! - [`spine`]: cantilever modulus identification, spine modulus table,
//!   combined modulus, effective chamber area, piecewise stiffness profile.
//! - [`solver`]: Euler march, residual, damped Newton shooting, sweeps.
//! - [`study`]: grid convergence and uniform elongation studies.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod actuation;
pub mod error;
pub mod math;
pub mod rod;
pub mod scenario;
pub mod solver;
pub mod spine;
pub mod study;

pub use actuation::{
    default_layout, pneumatic_load, tip_boundary, ChamberLayout, ExternalLoad, PressureCommand,
    CHAMBER_COUNT, GROUP_COUNT, MAX_PRESSURE,
};
pub use error::{Error, Result};
pub use math::{hat, Mat3, Vec3};
pub use rod::{
    constitutive_strains, ode_rhs, section_properties, LoadModel, MaterialParams, RodState,
    SectionProperties,
};
pub use scenario::{GravityConfig, PressureSpec, Scenario, SolverConfig};
pub use solver::{
    integrate_rod, pressure_sweep, residual, shoot, solve, straight_guess, IntegrationConfig,
    Residual, ShootGuess, SolveResult, SweepCell,
};
pub use spine::{
    a_effect, beam_deflection, combined_modulus, modulus_from_tip_deflection, spine_modulus,
    AEffectSchedule, Interpolation, SpineConfig, StiffnessProfile,
};
pub use study::{convergence_study, elongation_study, ConvergenceStudy, ElongationRow};

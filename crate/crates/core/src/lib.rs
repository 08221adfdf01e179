//! Particle creation in a three-dimensional ideal cavity whose movable
//! mirror oscillates while a plane gravitational wave modulates the mode
//! spectrum.
//!
//! The crate has two faces that validate each other:
//!
//! * [`resonance`] — closed-form growth rates `chi` for the five parametric
//!   resonance conditions, with `N(T) = sinh^2(chi T)`, cavity tuning, and
//!   validity checks;
//! * [`bogoliubov`] — direct evolution of the Bogoliubov coefficients over a
//!   truncated mode basis, perturbatively or by full ODE integration.
//!
//! [`cavity`] defines the geometry, mirror drive, and wave inputs;
//! [`coupling`] the intermode coefficients together with a volume-integral
//! oracle for the closed-form coupling.

pub mod bogoliubov;
pub mod cavity;
pub mod coupling;
pub mod ode;
pub mod quad;
pub mod resonance;

pub use bogoliubov::{
    evolve, integrate_first_order, integrate_full, integrate_full_sampled,
    integrate_second_order, near_degeneracy_warnings, BogoliubovState, DynamicsError,
    IntegrationSpec, Method, OdeReport,
};
pub use cavity::{CavityConfig, CavityError, GravWave, MirrorDrive, ModeFrequencies, ModeIndex};
pub use coupling::{
    coupling_g, coupling_g_oracle, g_factor, hamiltonian_coefficients, mode_overlap_oracle,
    mu_coefficient, CouplingError, CouplingTable, ModeBasis,
};
pub use resonance::{
    analyze, chi_rate, particle_number_analytic, rwa_hamiltonian, sideband_quality_factor,
    source_amplitude, squeeze_evolve, tune_cavity_length_cubic, validity_flags,
    AmplificationResult, ChiRate, ResonanceCondition, ResonanceError, RwaCoupling, Sign,
    SqueezeAmplitudes, SqueezeStructure, ValidityFlags, DEFAULT_LONG_WAVELENGTH_THRESHOLD,
};

//! Parametric-resonance analysis: the five resonance conditions, their
//! closed-form growth rates, rotating-wave squeezing evolution, cavity-length
//! tuning, and validity/detectability checks.
//!
//! Rate conventions. For every condition the analytic occupation is
//! `N(T) = sinh^2(chi T)`. The rotating-wave coupling magnitude `|g|` relates
//! to `chi` as `chi = |g|` for single-mode squeezing and `chi = |g|/2` for
//! two-mode squeezing. Numerical growth rates are compared against `chi` as a
//! reported ratio and never folded back into the tables.

use num_complex::Complex64 as C64;

use crate::cavity::{CavityConfig, ModeIndex, WEAK_DRIVE_LIMIT};

/// Relative tolerance within which the resonance equation must hold.
pub const RESONANCE_MATCH_TOL: f64 = 1e-9;

/// Relative tolerance used to detect overlapping resonance conditions.
pub const DEGENERACY_SCAN_TOL: f64 = 1e-6;

/// Default ceiling on `L_z * Omega_g` for the long-wavelength approximation.
pub const DEFAULT_LONG_WAVELENGTH_THRESHOLD: f64 = 1e-3;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ResonanceError {
    #[error("configuration is off resonance for {condition}: lhs {lhs:.12e} vs target {rhs:.12e}")]
    NotOnResonance {
        condition: String,
        lhs: f64,
        rhs: f64,
    },
    #[error("resonance conditions overlap: {0}")]
    DegenerateResonance(String),
    #[error("no cavity length satisfies the resonance equation: {0}")]
    NoSolution(String),
    #[error("invalid resonance condition: {0}")]
    InvalidCondition(String),
    #[error("frequency must be positive: {0}")]
    ZeroFrequency(String),
}

/// Sign selector for the two-branch conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(&self, a: f64, b: f64) -> f64 {
        match self {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// One of the five parametric resonance conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResonanceCondition {
    /// `2 omega_k = Omega_g`: static cavity, purely gravitational squeezing.
    GwOnly { mode: ModeIndex },
    /// `2 omega_k = |Omega_c ± Omega_g|`: single-mode sideband of the drive.
    SidebandSingle { mode: ModeIndex, sign: Sign },
    /// `omega_k + omega_j = Omega_g ± Omega_c`: two-mode pair creation.
    SumPlus {
        mode_k: ModeIndex,
        mode_j: ModeIndex,
        sign: Sign,
    },
    /// `omega_k + omega_j = Omega_c - Omega_g`: two-mode pair creation.
    SumMinus { mode_k: ModeIndex, mode_j: ModeIndex },
    /// `2 omega_k = Omega_c`: the purely mechanical resonance.
    Mechanical { mode: ModeIndex },
}

impl ResonanceCondition {
    pub fn primary_mode(&self) -> ModeIndex {
        match self {
            Self::GwOnly { mode }
            | Self::SidebandSingle { mode, .. }
            | Self::Mechanical { mode } => *mode,
            Self::SumPlus { mode_k, .. } | Self::SumMinus { mode_k, .. } => *mode_k,
        }
    }

    pub fn partner_mode(&self) -> Option<ModeIndex> {
        match self {
            Self::SumPlus { mode_j, .. } | Self::SumMinus { mode_j, .. } => Some(*mode_j),
            _ => None,
        }
    }

    pub fn is_two_mode(&self) -> bool {
        self.partner_mode().is_some()
    }

    /// Conditions of gravitational origin vanish when `k_x^2 = k_y^2`.
    pub fn is_gravitational(&self) -> bool {
        !matches!(self, Self::Mechanical { .. })
    }

    pub fn validate(&self) -> Result<(), ResonanceError> {
        if let Some(j) = self.partner_mode() {
            let k = self.primary_mode();
            if !k.shares_transverse(&j) {
                return Err(ResonanceError::InvalidCondition(format!(
                    "pair conditions require shared transverse indices, got {k} and {j}"
                )));
            }
            if k == j {
                return Err(ResonanceError::InvalidCondition(format!(
                    "pair conditions require two distinct modes, got {k} twice"
                )));
            }
        }
        Ok(())
    }

    /// Right-hand side of the resonance equation. May be non-positive, in
    /// which case the condition has no solution.
    pub fn target_frequency(&self, omega_c: f64, omega_g: f64) -> f64 {
        match self {
            Self::GwOnly { .. } => omega_g,
            Self::SidebandSingle { sign, .. } => sign.apply(omega_c, omega_g).abs(),
            Self::SumPlus { sign, .. } => sign.apply(omega_g, omega_c),
            Self::SumMinus { .. } => omega_c - omega_g,
            Self::Mechanical { .. } => omega_c,
        }
    }

    /// Left-hand side of the resonance equation for the given cavity.
    pub fn mode_frequency_sum(&self, cfg: &CavityConfig) -> f64 {
        let wk = cfg.mode_frequencies(self.primary_mode()).omega0;
        match self.partner_mode() {
            Some(j) => wk + cfg.mode_frequencies(j).omega0,
            None => 2.0 * wk,
        }
    }
}

impl std::fmt::Display for ResonanceCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::GwOnly { mode } => write!(f, "gw-only {mode}"),
            Self::SidebandSingle { mode, sign } => write!(f, "sideband({sign}) {mode}"),
            Self::SumPlus {
                mode_k,
                mode_j,
                sign,
            } => write!(f, "sum-gw({sign}) {mode_k}+{mode_j}"),
            Self::SumMinus { mode_k, mode_j } => write!(f, "sum-mech(-) {mode_k}+{mode_j}"),
            Self::Mechanical { mode } => write!(f, "mechanical {mode}"),
        }
    }
}

/// Growth rate with the degenerate-mode diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiRate {
    pub chi: f64,
    /// True when a gravitational-origin condition has `k_x^2 = k_y^2`, which
    /// forces `chi = 0` by the plus-polarization selection rule.
    pub degenerate_mode: bool,
}

/// Evaluates the growth-rate formula without any resonance or overlap check.
/// Returns zero whenever the driving product for the condition vanishes.
fn chi_formula(cond: &ResonanceCondition, cfg: &CavityConfig) -> f64 {
    let eps = cfg.drive().epsilon;
    let h = cfg.wave().h_plus;
    let wc = cfg.drive().omega_c;
    let wg = cfg.wave().omega_g;
    let mk = cfg.mode_frequencies(cond.primary_mode());
    let w0 = mk.omega0;
    let aniso = mk.k_x * mk.k_x - mk.k_y * mk.k_y;

    match cond {
        ResonanceCondition::GwOnly { .. } => {
            if h == 0.0 || wg == 0.0 {
                return 0.0;
            }
            (h * wg * aniso / (8.0 * w0 * w0)).abs()
        }
        ResonanceCondition::SidebandSingle { .. } => {
            if eps * h == 0.0 || wc * wg == 0.0 {
                return 0.0;
            }
            (eps * h * aniso * mk.k_z0 * mk.k_z0 * (wc * wc + wg * wg)
                / (8.0 * w0.powi(3) * wc * wg))
                .abs()
        }
        // The bracket combo is Omega_g ± Omega_c for the gravitational-sum
        // branches and Omega_g - Omega_c (negative on resonance) for the
        // mechanical-sum branch, i.e. 1 - (Wg/2)(Wc - Wg)/(w_k w_j).
        ResonanceCondition::SumPlus { mode_j, sign, .. } => {
            sum_chi(cfg, mk, *mode_j, sign.apply(wg, wc), eps, h, wc, wg)
        }
        ResonanceCondition::SumMinus { mode_j, .. } => {
            sum_chi(cfg, mk, *mode_j, wg - wc, eps, h, wc, wg)
        }
        ResonanceCondition::Mechanical { .. } => {
            if eps == 0.0 || wc == 0.0 {
                return 0.0;
            }
            (mk.k_z0 * mk.k_z0 * wc * eps / (4.0 * w0 * w0)).abs()
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn sum_chi(
    cfg: &CavityConfig,
    mk: crate::cavity::ModeFrequencies,
    mode_j: ModeIndex,
    bracket_combo: f64,
    eps: f64,
    h: f64,
    wc: f64,
    wg: f64,
) -> f64 {
    if eps * h == 0.0 || wc * wg == 0.0 {
        return 0.0;
    }
    let mj = cfg.mode_frequencies(mode_j);
    let aniso = mk.k_x * mk.k_x - mk.k_y * mk.k_y;
    let wk0 = mk.omega0;
    let wj0 = mj.omega0;
    let prefactor = h * eps / (16.0 * wk0 * wj0) * (wc / wg) * aniso * mk.k_z0 * mj.k_z0
        / (wk0 * wj0).sqrt();
    let bracket = 1.0 + 0.5 * wg * bracket_combo / (wk0 * wj0);
    (prefactor * bracket).abs()
}

/// Checks the resonance equation and scans for overlapping conditions, then
/// evaluates the matching growth-rate formula.
pub fn chi_rate(cond: &ResonanceCondition, cfg: &CavityConfig) -> Result<ChiRate, ResonanceError> {
    cond.validate()?;
    let wc = cfg.drive().omega_c;
    let wg = cfg.wave().omega_g;
    let lhs = cond.mode_frequency_sum(cfg);
    let rhs = cond.target_frequency(wc, wg);
    if rhs <= 0.0 || ((lhs - rhs) / rhs).abs() > RESONANCE_MATCH_TOL {
        return Err(ResonanceError::NotOnResonance {
            condition: cond.to_string(),
            lhs,
            rhs,
        });
    }
    check_overlap(cond, cfg)?;

    let mk = cfg.mode_frequencies(cond.primary_mode());
    let degenerate_mode = cond.is_gravitational() && mk.k_x * mk.k_x == mk.k_y * mk.k_y;
    Ok(ChiRate {
        chi: chi_formula(cond, cfg),
        degenerate_mode,
    })
}

/// Rejects configurations where a second condition with nonvanishing coupling
/// is simultaneously resonant; the analytic rates assume isolated resonances.
fn check_overlap(cond: &ResonanceCondition, cfg: &CavityConfig) -> Result<(), ResonanceError> {
    let wc = cfg.drive().omega_c;
    let wg = cfg.wave().omega_g;

    let mut candidates: Vec<ResonanceCondition> = Vec::new();
    let single = |mode: ModeIndex| {
        vec![
            ResonanceCondition::GwOnly { mode },
            ResonanceCondition::SidebandSingle {
                mode,
                sign: Sign::Plus,
            },
            ResonanceCondition::SidebandSingle {
                mode,
                sign: Sign::Minus,
            },
            ResonanceCondition::Mechanical { mode },
        ]
    };
    candidates.extend(single(cond.primary_mode()));
    if let Some(j) = cond.partner_mode() {
        candidates.extend(single(j));
        let k = cond.primary_mode();
        candidates.extend([
            ResonanceCondition::SumPlus {
                mode_k: k,
                mode_j: j,
                sign: Sign::Plus,
            },
            ResonanceCondition::SumPlus {
                mode_k: k,
                mode_j: j,
                sign: Sign::Minus,
            },
            ResonanceCondition::SumMinus {
                mode_k: k,
                mode_j: j,
            },
        ]);
    }

    for other in candidates {
        if other == *cond {
            continue;
        }
        let lhs = other.mode_frequency_sum(cfg);
        let rhs = other.target_frequency(wc, wg);
        if rhs <= 0.0 {
            continue;
        }
        if ((lhs - rhs) / rhs).abs() <= DEGENERACY_SCAN_TOL && chi_formula(&other, cfg) > 0.0 {
            return Err(ResonanceError::DegenerateResonance(format!(
                "{cond} coincides with {other} at Omega_c = {wc:.6e}, Omega_g = {wg:.6e}"
            )));
        }
    }
    Ok(())
}

/// `N(T) = sinh^2(chi T)`.
pub fn particle_number_analytic(chi: f64, t: f64) -> f64 {
    assert!(t >= 0.0, "horizon must be non-negative");
    (chi * t).sinh().powi(2)
}

/// Squeezing structure of a rotating-wave Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeStructure {
    /// Pair creation into one mode (`a_k^dag a_k^dag`).
    SingleMode,
    /// Pair creation into two distinct modes (`a_k^dag a_j^dag`).
    TwoMode,
}

/// Time-averaged rotating-wave coupling for a resonance condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaCoupling {
    pub magnitude: f64,
    pub structure: SqueezeStructure,
}

/// Coupling magnitude `|g|` and squeezing structure of the rotating-wave
/// Hamiltonian at the given condition (`chi = |g|` single-mode,
/// `chi = |g|/2` two-mode).
pub fn rwa_hamiltonian(
    cond: &ResonanceCondition,
    cfg: &CavityConfig,
) -> Result<RwaCoupling, ResonanceError> {
    let rate = chi_rate(cond, cfg)?;
    Ok(match cond {
        ResonanceCondition::SumPlus { .. } | ResonanceCondition::SumMinus { .. } => RwaCoupling {
            magnitude: 2.0 * rate.chi,
            structure: SqueezeStructure::TwoMode,
        },
        _ => RwaCoupling {
            magnitude: rate.chi,
            structure: SqueezeStructure::SingleMode,
        },
    })
}

/// Closed-form squeezing amplitudes after time `t` under a constant
/// rotating-wave coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeAmplitudes {
    pub cosh_amp: f64,
    pub sinh_amp: f64,
    pub phase: f64,
}

/// Evolution under `H = (i/2)(g a^dag a^dag - h.c.)`: the annihilation
/// operator picks up `cosh(|g|t)` and `sinh(|g|t) e^{i delta}` amplitudes for
/// same-mode squeezing, with `|g|t/2` arguments for a distinct-mode pair.
pub fn squeeze_evolve(g: C64, same_mode: bool, t: f64) -> SqueezeAmplitudes {
    let arg = if same_mode {
        g.norm() * t
    } else {
        0.5 * g.norm() * t
    };
    SqueezeAmplitudes {
        cosh_amp: arg.cosh(),
        sinh_amp: arg.sinh(),
        phase: g.arg(),
    }
}

/// Solves the resonance equation of `cond` for the side length of a cubic
/// cavity, given the two drive frequencies.
pub fn tune_cavity_length_cubic(
    cond: &ResonanceCondition,
    omega_c: f64,
    omega_g: f64,
) -> Result<f64, ResonanceError> {
    cond.validate()?;
    let target = cond.target_frequency(omega_c, omega_g);
    if target <= 0.0 {
        return Err(ResonanceError::NoSolution(format!(
            "{cond}: target frequency {target:.6e} is not positive \
             (Omega_c = {omega_c:.6e}, Omega_g = {omega_g:.6e})"
        )));
    }
    let norm = |m: ModeIndex| {
        let (nx, ny, nz) = (m.n_x as f64, m.n_y as f64, m.n_z as f64);
        (nx * nx + ny * ny + nz * nz).sqrt()
    };
    let pi = std::f64::consts::PI;
    let l = match cond.partner_mode() {
        // omega_k + omega_j = target with omega = pi sqrt(n.n)/L.
        Some(j) => pi * (norm(cond.primary_mode()) + norm(j)) / target,
        // 2 omega_k = target.
        None => 2.0 * pi * norm(cond.primary_mode()) / target,
    };
    Ok(l)
}

/// Approximation-validity summary for a tuned configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityFlags {
    /// `L * Omega_g` below the long-wavelength threshold.
    pub long_wavelength_ok: bool,
    /// Drive and strain amplitudes inside the perturbative window.
    pub weak_drive_ok: bool,
}

pub fn validity_flags(cfg: &CavityConfig, l: f64, threshold: f64) -> ValidityFlags {
    ValidityFlags {
        long_wavelength_ok: l * cfg.wave().omega_g < threshold,
        weak_drive_ok: cfg.drive().epsilon < WEAK_DRIVE_LIMIT
            && cfg.wave().h_plus < WEAK_DRIVE_LIMIT,
    }
}

/// Minimum cavity quality factor that resolves the gravitational sidebands:
/// linewidth `Omega_c / Q` below the gap `Omega_g / 2`.
pub fn sideband_quality_factor(omega_c: f64, omega_g: f64) -> Result<f64, ResonanceError> {
    if omega_g <= 0.0 {
        return Err(ResonanceError::ZeroFrequency(
            "sideband gap requires Omega_g > 0".into(),
        ));
    }
    Ok(2.0 * omega_c / omega_g)
}

/// Strain amplitude of an oscillating-binary-like source, `h = kappa Omega_g^2`.
pub fn source_amplitude(kappa: f64, omega_g: f64) -> f64 {
    assert!(kappa >= 0.0, "proportionality constant must be non-negative");
    kappa * omega_g * omega_g
}

/// Bundle of the analytic prediction for one tuned configuration.
#[derive(Debug, Clone)]
pub struct AmplificationResult {
    pub condition: ResonanceCondition,
    pub chi: f64,
    pub degenerate_mode: bool,
    pub flags: ValidityFlags,
}

impl AmplificationResult {
    pub fn n_at(&self, t: f64) -> f64 {
        particle_number_analytic(self.chi, t)
    }
}

/// Full analytic evaluation at a configuration already tuned to resonance.
pub fn analyze(
    cond: &ResonanceCondition,
    cfg: &CavityConfig,
    long_wavelength_threshold: f64,
) -> Result<AmplificationResult, ResonanceError> {
    let rate = chi_rate(cond, cfg)?;
    Ok(AmplificationResult {
        condition: *cond,
        chi: rate.chi,
        degenerate_mode: rate.degenerate_mode,
        flags: validity_flags(cfg, cfg.l_z0(), long_wavelength_threshold),
    })
}

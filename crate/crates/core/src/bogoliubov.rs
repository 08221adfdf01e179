//! Evolution of the Bogoliubov coefficient matrices over a truncated mode
//! basis: iterative first- and second-order solutions built from time
//! quadratures of the Hamiltonian coefficients, and full numerical
//! integration of the coupled complex ODE system.
//!
//! Conventions. The transformation reads
//! `a_k(T) = sum_j [ alpha_jk(T) a_j(0) + beta*_jk(T) a_j^dag(0) ]`,
//! so columns label the evolved mode. The coefficient system is
//! `d alpha_mk/dt = sum_j [ A_kj alpha_mj + B*_kj beta_mj ]`,
//! `d beta_mk/dt  = sum_j [ B_kj alpha_mj + A*_kj beta_mj ]`,
//! the unique index placement whose first-order limit is
//! `alpha_jk = delta_jk + ∫A_kj`, `beta_jk = ∫B_kj`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::cavity::{CavityConfig, FrequencyExpansion, ModeIndex};
use crate::coupling::{g_factor, CouplingError, ModeBasis};
use crate::ode;
use crate::quad;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid integration spec: {0}")]
    InvalidSpec(String),
    #[error("coefficient quadrature failed: {0}")]
    QuadratureFailure(#[from] quad::QuadError),
    #[error("ODE integration failed: {0}")]
    Ode(#[from] ode::OdeError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// Integration strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// First-order iterate: time quadrature of the coefficients.
    Perturbative1,
    /// Adds the symmetrized second-order products of first-order integrals.
    Perturbative2,
    /// Full adaptive Runge–Kutta integration of the coupled system.
    FullOde,
}

/// What to integrate, over which basis, how accurately, and for how long.
#[derive(Debug, Clone)]
pub struct IntegrationSpec {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: Option<f64>,
    pub basis: ModeBasis,
    pub t_final: f64,
}

impl IntegrationSpec {
    pub fn new(method: Method, basis: ModeBasis, t_final: f64) -> Result<Self, DynamicsError> {
        let spec = Self {
            method,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
            basis,
            t_final,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Result<Self, DynamicsError> {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(DynamicsError::InvalidSpec(
                "final time must be positive and finite".into(),
            ));
        }
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-2) {
                return Err(DynamicsError::InvalidSpec(format!(
                    "{name} must lie in (0, 1e-2], got {tol:e}"
                )));
            }
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(DynamicsError::InvalidSpec(
                    "max_step must be positive and finite".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Bogoliubov coefficient matrices at time `t`; starts at `(identity, 0)`.
#[derive(Debug, Clone)]
pub struct BogoliubovState {
    pub basis: ModeBasis,
    pub alpha: Array2<C64>,
    pub beta: Array2<C64>,
    pub t: f64,
}

impl BogoliubovState {
    /// Vacuum-preserving initial state.
    pub fn initial(basis: ModeBasis) -> Self {
        let n = basis.len();
        Self {
            basis,
            alpha: Array2::eye(n),
            beta: Array2::zeros((n, n)),
            t: 0.0,
        }
    }

    /// Occupation of `mode` created from the initial vacuum:
    /// `N_k = sum_j |beta_jk|^2` (first index summed).
    pub fn particle_number(&self, mode: &ModeIndex) -> Option<f64> {
        let col = self.basis.position(mode)?;
        Some(self.particle_number_at(col))
    }

    /// Same as [`Self::particle_number`] keyed by basis column.
    pub fn particle_number_at(&self, col: usize) -> f64 {
        (0..self.basis.len())
            .map(|m| self.beta[(m, col)].norm_sqr())
            .sum()
    }

    /// Per-column deviation from `sum_j (|alpha_jk|^2 - |beta_jk|^2) = 1`.
    pub fn unitarity_defect(&self) -> Vec<f64> {
        let n = self.basis.len();
        (0..n)
            .map(|k| {
                let s: f64 = (0..n)
                    .map(|m| self.alpha[(m, k)].norm_sqr() - self.beta[(m, k)].norm_sqr())
                    .sum();
                (s - 1.0).abs()
            })
            .collect()
    }
}

/// Step and conservation diagnostics from a full integration.
#[derive(Debug, Clone)]
pub struct OdeReport {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evals: usize,
    /// Final unitarity defect per basis column.
    pub unitarity_defect: Vec<f64>,
}

/// Precomputed per-mode data for fast coefficient evaluation.
struct CoefficientEngine {
    cfg: CavityConfig,
    expansions: Vec<FrequencyExpansion>,
    gfac: Vec<f64>,
    n: usize,
}

impl CoefficientEngine {
    fn new(cfg: &CavityConfig, basis: &ModeBasis) -> Self {
        let modes = basis.modes();
        let n = modes.len();
        let expansions = modes.iter().map(|&m| cfg.expansion(m)).collect();
        let mut gfac = vec![0.0; n * n];
        for (r, &mk) in modes.iter().enumerate() {
            for (c, &mj) in modes.iter().enumerate() {
                gfac[r * n + c] = g_factor(mk, mj);
            }
        }
        Self {
            cfg: cfg.clone(),
            expansions,
            gfac,
            n,
        }
    }

    fn omega(&self, i: usize, t: f64) -> f64 {
        self.expansions[i].omega(&self.cfg, t)
    }

    fn theta_closed(&self, i: usize, t: f64) -> f64 {
        self.expansions[i].theta(&self.cfg, t)
    }

    fn mu(&self, i: usize, j: usize, t: f64, omega: &[f64]) -> f64 {
        if i == j {
            -0.5 * self.expansions[i].omega_dot(&self.cfg, t) / omega[i]
        } else {
            let g = self.gfac[i * self.n + j];
            if g == 0.0 {
                0.0
            } else {
                g * self.cfg.mirror_velocity(t) / self.cfg.mirror_position(t)
                    * (omega[i] / omega[j]).sqrt()
            }
        }
    }

    /// A_kj and B_kj at time `t` for the supplied per-mode phases.
    fn fill_ab(&self, t: f64, theta: &[f64], a: &mut [C64], b: &mut [C64]) {
        let n = self.n;
        let mut omega = vec![0.0; n];
        let mut phase = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            omega[i] = self.omega(i, t);
            phase[i] = C64::from_polar(1.0, -theta[i]);
        }
        let mut mu = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                mu[r * n + c] = self.mu(r, c, t, &omega);
            }
        }
        for r in 0..n {
            for c in 0..n {
                let half_diff = 0.5 * (mu[r * n + c] - mu[c * n + r]);
                let half_sum = 0.5 * (mu[r * n + c] + mu[c * n + r]);
                a[r * n + c] = half_diff * phase[r] * phase[c].conj();
                b[r * n + c] = half_sum * phase[r] * phase[c];
            }
        }
    }

    /// Fastest angular frequency appearing in the coefficient phases.
    fn fastest_frequency(&self) -> f64 {
        let w_max = self
            .expansions
            .iter()
            .map(|e| e.omega0)
            .fold(0.0_f64, f64::max);
        2.0 * w_max + self.cfg.drive().omega_c + self.cfg.wave().omega_g
    }
}

fn first_order_parts(
    spec: &IntegrationSpec,
    cfg: &CavityConfig,
) -> Result<(Array2<C64>, Array2<C64>), DynamicsError> {
    let engine = CoefficientEngine::new(cfg, &spec.basis);
    let n = spec.basis.len();
    let t_final = spec.t_final;
    let n_init = ((t_final * engine.fastest_frequency() / std::f64::consts::PI).ceil() as usize)
        .clamp(1, 1 << 22);
    let budget = n_init + 200_000;

    let entry = |k: usize, j: usize, which_b: bool| -> Result<C64, DynamicsError> {
        let f = |t: f64| -> C64 {
            let wk = engine.omega(k, t);
            let wj = engine.omega(j, t);
            let omega_pair = {
                // mu only reads the entries it is asked about.
                let mut w = vec![0.0; engine.n];
                w[k] = wk;
                w[j] = wj;
                w
            };
            let mu_kj = engine.mu(k, j, t, &omega_pair);
            let mu_jk = engine.mu(j, k, t, &omega_pair);
            let th_k = engine.theta_closed(k, t);
            let th_j = engine.theta_closed(j, t);
            if which_b {
                0.5 * (mu_kj + mu_jk) * C64::from_polar(1.0, -(th_k + th_j))
            } else {
                0.5 * (mu_kj - mu_jk) * C64::from_polar(1.0, -(th_k - th_j))
            }
        };
        Ok(quad::integrate(
            f,
            0.0,
            t_final,
            spec.abs_tol,
            spec.rel_tol,
            n_init,
            budget,
        )?)
    };

    let mut alpha1 = Array2::<C64>::zeros((n, n));
    let mut beta1 = Array2::<C64>::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            // alpha_jk integrates A_kj, beta_jk integrates B_kj.
            alpha1[(j, k)] = entry(k, j, false)?;
            beta1[(j, k)] = entry(k, j, true)?;
        }
    }
    Ok((alpha1, beta1))
}

/// First-order iterate: `alpha = I + ∫A`, `beta = ∫B`, entrywise adaptive
/// quadrature at the spec tolerances.
pub fn integrate_first_order(
    spec: &IntegrationSpec,
    cfg: &CavityConfig,
) -> Result<BogoliubovState, DynamicsError> {
    let (alpha1, beta1) = first_order_parts(spec, cfg)?;
    let n = spec.basis.len();
    Ok(BogoliubovState {
        basis: spec.basis.clone(),
        alpha: Array2::eye(n) + alpha1,
        beta: beta1,
        t: spec.t_final,
    })
}

/// Second-order iterate: the first-order state plus the symmetrized products
/// `alpha2 = (alpha1 alpha1 + beta1 beta1*)/2`,
/// `beta2 = (alpha1 beta1 + beta1 alpha1*)/2`.
pub fn integrate_second_order(
    spec: &IntegrationSpec,
    cfg: &CavityConfig,
) -> Result<BogoliubovState, DynamicsError> {
    let (alpha1, beta1) = first_order_parts(spec, cfg)?;
    let n = spec.basis.len();
    let conj = |m: &Array2<C64>| m.mapv(|z| z.conj());
    let half = C64::new(0.5, 0.0);
    let alpha2 = (alpha1.dot(&alpha1) + beta1.dot(&conj(&beta1))).mapv(|z| z * half);
    let beta2 = (alpha1.dot(&beta1) + beta1.dot(&conj(&alpha1))).mapv(|z| z * half);
    Ok(BogoliubovState {
        basis: spec.basis.clone(),
        alpha: Array2::eye(n) + alpha1 + alpha2,
        beta: beta1 + beta2,
        t: spec.t_final,
    })
}

/// Full adaptive integration of the coupled coefficient system; the mode
/// phases advance through the auxiliary equations `dTheta_k/dt = omega_k(t)`.
pub fn integrate_full(
    spec: &IntegrationSpec,
    cfg: &CavityConfig,
) -> Result<(BogoliubovState, OdeReport), DynamicsError> {
    let (mut states, report) = integrate_full_sampled(spec, cfg, &[spec.t_final])?;
    Ok((states.pop().expect("one sample requested"), report))
}

/// As [`integrate_full`], additionally recording the state at each time in
/// `sample_times` (strictly increasing, within `(0, t_final]`).
pub fn integrate_full_sampled(
    spec: &IntegrationSpec,
    cfg: &CavityConfig,
    sample_times: &[f64],
) -> Result<(Vec<BogoliubovState>, OdeReport), DynamicsError> {
    if sample_times.is_empty() {
        return Err(DynamicsError::InvalidSpec(
            "at least one sample time is required".into(),
        ));
    }
    let mut prev = 0.0;
    for &s in sample_times {
        if !(s > prev && s <= spec.t_final) {
            return Err(DynamicsError::InvalidSpec(format!(
                "sample times must be strictly increasing within (0, t_final]; got {s}"
            )));
        }
        prev = s;
    }

    let engine = CoefficientEngine::new(cfg, &spec.basis);
    let n = spec.basis.len();
    let dim = 4 * n * n + n;

    // Layout: interleaved re/im for alpha (2n^2), then beta (2n^2), then theta (n).
    let a_off = 0;
    let b_off = 2 * n * n;
    let th_off = 4 * n * n;
    let mut y0 = vec![0.0; dim];
    for m in 0..n {
        y0[a_off + 2 * (m * n + m)] = 1.0;
    }

    let mut a = vec![C64::new(0.0, 0.0); n * n];
    let mut b = vec![C64::new(0.0, 0.0); n * n];
    let mut rhs_calls = 0usize;
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        rhs_calls += 1;
        let theta = &y[th_off..th_off + n];
        engine.fill_ab(t, theta, &mut a, &mut b);
        for m in 0..n {
            for k in 0..n {
                let mut da = C64::new(0.0, 0.0);
                let mut db = C64::new(0.0, 0.0);
                for j in 0..n {
                    let akj = a[k * n + j];
                    let bkj = b[k * n + j];
                    let ia = a_off + 2 * (m * n + j);
                    let ib = b_off + 2 * (m * n + j);
                    let alpha_mj = C64::new(y[ia], y[ia + 1]);
                    let beta_mj = C64::new(y[ib], y[ib + 1]);
                    da += akj * alpha_mj + bkj.conj() * beta_mj;
                    db += bkj * alpha_mj + akj.conj() * beta_mj;
                }
                let ia = a_off + 2 * (m * n + k);
                let ib = b_off + 2 * (m * n + k);
                dy[ia] = da.re;
                dy[ia + 1] = da.im;
                dy[ib] = db.re;
                dy[ib + 1] = db.im;
            }
        }
        for k in 0..n {
            dy[th_off + k] = engine.omega(k, t);
        }
    };

    let fastest = engine.fastest_frequency().max(1.0 / spec.t_final);
    let default_h = std::f64::consts::TAU / fastest / 6.0;
    let opts = ode::Options {
        rel_tol: spec.rel_tol,
        abs_tol: spec.abs_tol,
        max_step: spec.max_step.unwrap_or(default_h),
        max_steps: 100_000_000,
    };

    let unpack = |t: f64, y: &[f64]| -> BogoliubovState {
        let mut alpha = Array2::<C64>::zeros((n, n));
        let mut beta = Array2::<C64>::zeros((n, n));
        for m in 0..n {
            for k in 0..n {
                let ia = a_off + 2 * (m * n + k);
                let ib = b_off + 2 * (m * n + k);
                alpha[(m, k)] = C64::new(y[ia], y[ia + 1]);
                beta[(m, k)] = C64::new(y[ib], y[ib + 1]);
            }
        }
        BogoliubovState {
            basis: spec.basis.clone(),
            alpha,
            beta,
            t,
        }
    };

    let mut states: Vec<BogoliubovState> = Vec::with_capacity(sample_times.len());
    let (y_end, stats) = ode::integrate(
        rhs,
        0.0,
        spec.t_final,
        &y0,
        &opts,
        sample_times,
        |t, y| states.push(unpack(t, y)),
    )?;

    let final_state = unpack(spec.t_final, &y_end);
    let report = OdeReport {
        steps_accepted: stats.accepted,
        steps_rejected: stats.rejected,
        rhs_evals: rhs_calls,
        unitarity_defect: final_state.unitarity_defect(),
    };
    Ok((states, report))
}

/// Dispatch on `spec.method`.
pub fn evolve(spec: &IntegrationSpec, cfg: &CavityConfig) -> Result<BogoliubovState, DynamicsError> {
    match spec.method {
        Method::Perturbative1 => integrate_first_order(spec, cfg),
        Method::Perturbative2 => integrate_second_order(spec, cfg),
        Method::FullOde => integrate_full(spec, cfg).map(|(s, _)| s),
    }
}

/// Relative tolerance for the near-degeneracy scan below.
pub const NEAR_DEGENERACY_TOL: f64 = 1e-3;

/// Flags chains of simultaneously resonant channels inside a basis.
///
/// The isolated-resonance analysis assumes at most one channel is resonant;
/// equidistant-like spectra violate that by cascading pair creation and
/// scattering through several modes. Returns one message per resonant channel
/// whenever more than one is found.
pub fn near_degeneracy_warnings(basis: &ModeBasis, cfg: &CavityConfig) -> Vec<String> {
    let wc = cfg.drive().omega_c;
    let wg = cfg.wave().omega_g;
    let omegas: Vec<f64> = basis
        .modes()
        .iter()
        .map(|&m| cfg.mode_frequencies(m).omega0)
        .collect();
    // Distinct drive frequencies only; the combinations collapse when one
    // drive is off.
    let mut drives: Vec<(&str, f64)> = Vec::new();
    for cand in [("Wc", wc), ("Wg", wg), ("Wc+Wg", wc + wg), ("|Wc-Wg|", (wc - wg).abs())] {
        if cand.1 > 0.0 && !drives.iter().any(|d| ((d.1 - cand.1) / cand.1).abs() < 1e-9) {
            drives.push(cand);
        }
    }
    let near = |lhs: f64, rhs: f64| rhs > 0.0 && ((lhs - rhs) / rhs).abs() < NEAR_DEGENERACY_TOL;

    let mut hits = Vec::new();
    let modes = basis.modes();
    for (i, &mi) in modes.iter().enumerate() {
        for &(name, f) in &drives {
            if near(2.0 * omegas[i], f) {
                hits.push(format!("pair creation in {mi}: 2*omega = {name}"));
            }
        }
        for (j, &mj) in modes.iter().enumerate().skip(i + 1) {
            for &(name, f) in &drives {
                if near(omegas[i] + omegas[j], f) {
                    hits.push(format!("pair creation in {mi}+{mj}: omega sum = {name}"));
                }
                if near((omegas[i] - omegas[j]).abs(), f) {
                    hits.push(format!("scattering {mi}<->{mj}: omega gap = {name}"));
                }
            }
        }
    }
    if hits.len() > 1 {
        hits
    } else {
        Vec::new()
    }
}

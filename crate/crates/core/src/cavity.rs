//! Cavity geometry, mirror drive, and gravitational-wave inputs, plus the
//! time-dependent mode wavenumbers, frequencies, and integrated phases they
//! generate.
//!
//! Units are natural (c = 1): lengths and times share one unit, frequencies
//! its inverse. Strains and the drive amplitude are dimensionless.

use crate::quad;

/// Ceiling on both strain amplitudes and the mirror drive amplitude; beyond
/// this the perturbative treatment is meaningless.
pub const WEAK_DRIVE_LIMIT: f64 = 0.1;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CavityError {
    #[error("invalid cavity configuration: {0}")]
    InvalidConfig(String),
    #[error("mode index components must be >= 1, got ({0}, {1}, {2})")]
    InvalidMode(u32, u32, u32),
    #[error("perturbation drives omega^2 non-positive ({value:.3e}) at t = {t:.6e}")]
    NonPositiveFrequency { value: f64, t: f64 },
    #[error("phase quadrature failed: {0}")]
    QuadratureFailure(#[from] quad::QuadError),
}

/// Harmonic mirror drive: the movable wall sits at
/// `L_z(t) = L_z0 (1 + epsilon sin(Omega_c t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorDrive {
    pub epsilon: f64,
    pub omega_c: f64,
}

impl MirrorDrive {
    pub fn off() -> Self {
        Self {
            epsilon: 0.0,
            omega_c: 0.0,
        }
    }
}

/// Monochromatic plane gravitational wave travelling along z, evaluated in
/// the long-wavelength limit (strain uniform over the cavity, z = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravWave {
    pub h_plus: f64,
    pub h_cross: f64,
    pub omega_g: f64,
    pub delta_g: f64,
}

impl GravWave {
    pub fn off() -> Self {
        Self {
            h_plus: 0.0,
            h_cross: 0.0,
            omega_g: 0.0,
            delta_g: 0.0,
        }
    }

    /// Plus-polarized wave with no cross component and zero phase offset.
    pub fn plus(h_plus: f64, omega_g: f64) -> Self {
        Self {
            h_plus,
            h_cross: 0.0,
            omega_g,
            delta_g: 0.0,
        }
    }

    /// Metric perturbation components `(h_11, h_12)` at time `t`;
    /// `h_22 = -h_11` and all others vanish.
    pub fn strain(&self, t: f64) -> (f64, f64) {
        (
            self.h_plus * (self.omega_g * t).cos(),
            self.h_cross * (self.omega_g * t + self.delta_g).cos(),
        )
    }
}

/// Rectangular ideal cavity with one harmonically driven wall, immersed in a
/// plane gravitational wave.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    l_x: f64,
    l_y: f64,
    l_z0: f64,
    drive: MirrorDrive,
    wave: GravWave,
}

impl CavityConfig {
    pub fn new(
        l_x: f64,
        l_y: f64,
        l_z0: f64,
        drive: MirrorDrive,
        wave: GravWave,
    ) -> Result<Self, CavityError> {
        let bad = |msg: &str| Err(CavityError::InvalidConfig(msg.to_string()));
        if !(l_x > 0.0 && l_x.is_finite())
            || !(l_y > 0.0 && l_y.is_finite())
            || !(l_z0 > 0.0 && l_z0.is_finite())
        {
            return bad("cavity side lengths must be positive and finite");
        }
        if !(0.0..1.0).contains(&drive.epsilon) {
            return bad("drive amplitude epsilon must satisfy 0 <= epsilon < 1");
        }
        if !(drive.omega_c >= 0.0 && drive.omega_c.is_finite()) {
            return bad("drive frequency must be finite and non-negative");
        }
        if !(0.0..WEAK_DRIVE_LIMIT).contains(&wave.h_plus)
            || !(0.0..WEAK_DRIVE_LIMIT).contains(&wave.h_cross)
        {
            return bad("strain amplitudes must satisfy 0 <= h < 0.1");
        }
        if !(wave.omega_g >= 0.0 && wave.omega_g.is_finite()) {
            return bad("gravitational-wave frequency must be finite and non-negative");
        }
        if !wave.delta_g.is_finite() {
            return bad("polarization phase must be finite");
        }
        Ok(Self {
            l_x,
            l_y,
            l_z0,
            drive,
            wave,
        })
    }

    /// Cubic cavity of side `l`.
    pub fn cubic(l: f64, drive: MirrorDrive, wave: GravWave) -> Result<Self, CavityError> {
        Self::new(l, l, l, drive, wave)
    }

    pub fn l_x(&self) -> f64 {
        self.l_x
    }
    pub fn l_y(&self) -> f64 {
        self.l_y
    }
    pub fn l_z0(&self) -> f64 {
        self.l_z0
    }
    pub fn drive(&self) -> MirrorDrive {
        self.drive
    }
    pub fn wave(&self) -> GravWave {
        self.wave
    }

    /// Same cavity with a different drive amplitude.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, CavityError> {
        Self::new(
            self.l_x,
            self.l_y,
            self.l_z0,
            MirrorDrive {
                epsilon,
                omega_c: self.drive.omega_c,
            },
            self.wave,
        )
    }

    /// Position of the movable wall, `L_z0 (1 + epsilon sin(Omega_c t))`.
    pub fn mirror_position(&self, t: f64) -> f64 {
        self.l_z0 * (1.0 + self.drive.epsilon * (self.drive.omega_c * t).sin())
    }

    /// Velocity of the movable wall.
    pub fn mirror_velocity(&self, t: f64) -> f64 {
        self.l_z0 * self.drive.epsilon * self.drive.omega_c * (self.drive.omega_c * t).cos()
    }

    /// Instantaneous wavenumbers `(k_x, k_y, k_z(t))` of a mode.
    pub fn wavenumbers(&self, mode: ModeIndex, t: f64) -> (f64, f64, f64) {
        let pi = std::f64::consts::PI;
        (
            mode.n_x as f64 * pi / self.l_x,
            mode.n_y as f64 * pi / self.l_y,
            mode.n_z as f64 * pi / self.mirror_position(t),
        )
    }

    /// Instantaneous squared eigenfrequency, including the plus-polarization
    /// spectral shift `h_+ (k_x^2 - k_y^2) cos(Omega_g t + delta_g)`.
    pub fn omega_squared_instant(&self, mode: ModeIndex, t: f64) -> Result<f64, CavityError> {
        let (kx, ky, kz) = self.wavenumbers(mode, t);
        let shift = self.wave.h_plus
            * (kx * kx - ky * ky)
            * (self.wave.omega_g * t + self.wave.delta_g).cos();
        let w2 = kx * kx + ky * ky + kz * kz + shift;
        if w2 <= 0.0 {
            return Err(CavityError::NonPositiveFrequency { value: w2, t });
        }
        Ok(w2)
    }

    /// Unperturbed frequencies and wavenumbers of a mode (t = 0 geometry).
    pub fn mode_frequencies(&self, mode: ModeIndex) -> ModeFrequencies {
        let pi = std::f64::consts::PI;
        let k_x = mode.n_x as f64 * pi / self.l_x;
        let k_y = mode.n_y as f64 * pi / self.l_y;
        let k_z0 = mode.n_z as f64 * pi / self.l_z0;
        ModeFrequencies {
            omega0: (k_x * k_x + k_y * k_y + k_z0 * k_z0).sqrt(),
            k_x,
            k_y,
            k_z0,
        }
    }

    /// Second-order expansion of the time-dependent frequency in the drive
    /// and strain amplitudes (polarization phase fixed to zero).
    pub fn omega_expanded(&self, mode: ModeIndex, t: f64) -> f64 {
        self.expansion(mode).omega(self, t)
    }

    /// Analytic time derivative of [`Self::omega_expanded`].
    pub fn omega_expanded_dot(&self, mode: ModeIndex, t: f64) -> f64 {
        self.expansion(mode).omega_dot(self, t)
    }

    /// Integrated phase `Theta_k(t) = ∫_0^t omega_k(t') dt'`, evaluated by
    /// adaptive quadrature of the expanded frequency to an absolute tolerance
    /// of `1e-10 * omega0 * t`.
    pub fn theta_integrated(&self, mode: ModeIndex, t: f64) -> Result<f64, CavityError> {
        assert!(t >= 0.0, "phase integral runs forward from t = 0");
        if t == 0.0 {
            return Ok(0.0);
        }
        let exp = self.expansion(mode);
        let abs_tol = 1e-10 * exp.omega0 * t;
        let fast = self.drive.omega_c.max(self.wave.omega_g);
        let n_init = ((t * fast / std::f64::consts::PI).ceil() as usize).clamp(1, 1 << 20);
        let v = quad::integrate(
            |u| exp.omega(self, u),
            0.0,
            t,
            abs_tol,
            1e-12,
            n_init,
            n_init + 100_000,
        )?;
        Ok(v)
    }

    /// Closed-form antiderivative of the expanded frequency. Agrees with
    /// [`Self::theta_integrated`] to quadrature accuracy and is cheap enough
    /// to sit inside coefficient evaluations.
    pub fn theta_expanded_closed(&self, mode: ModeIndex, t: f64) -> f64 {
        self.expansion(mode).theta(self, t)
    }

    /// Strain components `(h_11, h_12)` at time `t`.
    pub fn gw_strain(&self, t: f64) -> (f64, f64) {
        self.wave.strain(t)
    }

    pub(crate) fn expansion(&self, mode: ModeIndex) -> FrequencyExpansion {
        let mf = self.mode_frequencies(mode);
        let w0sq = mf.omega0 * mf.omega0;
        FrequencyExpansion {
            omega0: mf.omega0,
            mech_ratio: mf.k_z0 * mf.k_z0 / w0sq,
            gw_ratio: (mf.k_x * mf.k_x - mf.k_y * mf.k_y) / w0sq,
        }
    }
}

/// Triple of positive integers labelling a Dirichlet mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub n_x: u32,
    pub n_y: u32,
    pub n_z: u32,
}

impl ModeIndex {
    pub fn new(n_x: u32, n_y: u32, n_z: u32) -> Result<Self, CavityError> {
        if n_x == 0 || n_y == 0 || n_z == 0 {
            return Err(CavityError::InvalidMode(n_x, n_y, n_z));
        }
        Ok(Self { n_x, n_y, n_z })
    }

    /// Same transverse indices, different longitudinal index.
    pub fn with_n_z(&self, n_z: u32) -> Self {
        Self { n_z, ..*self }
    }

    pub fn shares_transverse(&self, other: &ModeIndex) -> bool {
        self.n_x == other.n_x && self.n_y == other.n_y
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n_x, self.n_y, self.n_z)
    }
}

impl std::str::FromStr for ModeIndex {
    type Err = CavityError;

    /// Parses `"2,1,2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<u32>()).collect();
        match parts.as_slice() {
            [Ok(a), Ok(b), Ok(c)] => ModeIndex::new(*a, *b, *c),
            _ => Err(CavityError::InvalidConfig(format!(
                "cannot parse mode index from {s:?}; expected \"n_x,n_y,n_z\""
            ))),
        }
    }
}

/// Static frequency data of a mode: `omega0^2 = k_x^2 + k_y^2 + k_z0^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    pub omega0: f64,
    pub k_x: f64,
    pub k_y: f64,
    pub k_z0: f64,
}

/// Coefficients of the expanded frequency
/// `omega(t) = omega0 [1 - K eps sin(Wc t) + (h/2) D cos(Wg t)
///             + (eps h / 2) K D sin(Wc t) cos(Wg t)]`
/// with `K = k_z0^2/omega0^2` and `D = (k_x^2 - k_y^2)/omega0^2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FrequencyExpansion {
    pub omega0: f64,
    pub mech_ratio: f64,
    pub gw_ratio: f64,
}

impl FrequencyExpansion {
    fn coeffs(&self, cfg: &CavityConfig) -> (f64, f64, f64) {
        let a = -cfg.drive.epsilon * self.mech_ratio;
        let b = 0.5 * cfg.wave.h_plus * self.gw_ratio;
        let c = 0.5 * cfg.drive.epsilon * cfg.wave.h_plus * self.mech_ratio * self.gw_ratio;
        (a, b, c)
    }

    pub fn omega(&self, cfg: &CavityConfig, t: f64) -> f64 {
        let (a, b, c) = self.coeffs(cfg);
        let sc = (cfg.drive.omega_c * t).sin();
        let cg = (cfg.wave.omega_g * t).cos();
        self.omega0 * (1.0 + a * sc + b * cg + c * sc * cg)
    }

    pub fn omega_dot(&self, cfg: &CavityConfig, t: f64) -> f64 {
        let (a, b, c) = self.coeffs(cfg);
        let wc = cfg.drive.omega_c;
        let wg = cfg.wave.omega_g;
        let (sc, cc) = (wc * t).sin_cos();
        let (sg, cg) = (wg * t).sin_cos();
        self.omega0 * (a * wc * cc - b * wg * sg + c * (wc * cc * cg - wg * sc * sg))
    }

    pub fn theta(&self, cfg: &CavityConfig, t: f64) -> f64 {
        let (a, b, c) = self.coeffs(cfg);
        let wc = cfg.drive.omega_c;
        let wg = cfg.wave.omega_g;
        // ∫ sin(w u) du = (1 - cos(w t))/w, written as 2 sin^2(w t / 2)/w.
        let int_sin = |w: f64| {
            if w == 0.0 {
                0.0
            } else {
                2.0 * (0.5 * w * t).sin().powi(2) / w
            }
        };
        let int_cos_g = if wg == 0.0 { t } else { (wg * t).sin() / wg };
        let int_cross = if wc == 0.0 {
            0.0
        } else {
            0.5 * (int_sin(wc + wg) + int_sin(wc - wg))
        };
        self.omega0 * (t + a * int_sin(wc) + b * int_cos_g + c * int_cross)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = std::f64::consts::TAU;

    fn mode(nx: u32, ny: u32, nz: u32) -> ModeIndex {
        ModeIndex::new(nx, ny, nz).unwrap()
    }

    fn cubic(l: f64, drive: MirrorDrive, wave: GravWave) -> CavityConfig {
        CavityConfig::cubic(l, drive, wave).unwrap()
    }

    #[test]
    fn mirror_position_examples() {
        let quiet = cubic(2.0, MirrorDrive::off(), GravWave::off());
        assert_eq!(quiet.mirror_position(0.7), 2.0);

        let driven = cubic(
            1.0,
            MirrorDrive {
                epsilon: 0.1,
                omega_c: TAU,
            },
            GravWave::off(),
        );
        assert!((driven.mirror_position(0.25) - 1.1).abs() < 1e-15);
        assert_eq!(driven.mirror_position(0.0), 1.0);
    }

    #[test]
    fn wavenumbers_examples() {
        let pi = std::f64::consts::PI;
        let cfg = cubic(pi, MirrorDrive::off(), GravWave::off());
        let (kx, ky, kz) = cfg.wavenumbers(mode(2, 1, 2), 0.3);
        assert!((kx - 2.0).abs() < 1e-15);
        assert!((ky - 1.0).abs() < 1e-15);
        assert!((kz - 2.0).abs() < 1e-15);

        let unit = cubic(1.0, MirrorDrive::off(), GravWave::off());
        let (kx, ky, kz) = unit.wavenumbers(mode(1, 1, 1), 0.0);
        assert!((kx - pi).abs() < 1e-15);
        assert!((ky - pi).abs() < 1e-15);
        assert!((kz - pi).abs() < 1e-15);
    }

    #[test]
    fn omega_squared_examples() {
        let pi = std::f64::consts::PI;
        let quiet = cubic(pi, MirrorDrive::off(), GravWave::off());
        let w2 = quiet.omega_squared_instant(mode(2, 1, 2), 12.34).unwrap();
        assert!((w2 - 9.0).abs() < 1e-12);

        // Symmetric transverse indices kill the plus coupling for all t.
        let wavy = cubic(pi, MirrorDrive::off(), GravWave::plus(1e-3, 2.0));
        for i in 0..20 {
            let t = 0.37 * i as f64;
            let w2 = wavy.omega_squared_instant(mode(1, 1, 1), t).unwrap();
            assert!((w2 - 3.0).abs() < 1e-15);
        }

        let w2 = wavy.omega_squared_instant(mode(2, 1, 2), 0.0).unwrap();
        assert!((w2 - 9.003).abs() < 1e-12);
    }

    #[test]
    fn omega_expanded_reduces_to_static_value() {
        let pi = std::f64::consts::PI;
        let cfg = cubic(pi, MirrorDrive::off(), GravWave::off());
        assert!((cfg.omega_expanded(mode(2, 1, 2), 5.0) - 3.0).abs() < 1e-15);
        // n_x = n_y leaves only the drive term.
        let wavy = cubic(
            pi,
            MirrorDrive {
                epsilon: 1e-3,
                omega_c: 3.0,
            },
            GravWave::plus(1e-2, 2.0),
        );
        let m = mode(1, 1, 2);
        let mf = wavy.mode_frequencies(m);
        for i in 0..10 {
            let t = 0.21 * i as f64;
            let expect = mf.omega0
                * (1.0 - (mf.k_z0 * mf.k_z0 / (mf.omega0 * mf.omega0)) * 1e-3 * (3.0 * t).sin());
            assert!((wavy.omega_expanded(m, t) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn omega_expanded_tracks_exact_frequency() {
        let pi = std::f64::consts::PI;
        let eps = 1e-3;
        let h = 1e-3;
        let cfg = cubic(
            pi,
            MirrorDrive {
                epsilon: eps,
                omega_c: 2.0,
            },
            GravWave::plus(h, 0.7),
        );
        let m = mode(2, 1, 2);
        let period = TAU / 2.0;
        let mut max_rel = 0.0_f64;
        for i in 0..=200 {
            let t = period * i as f64 / 200.0;
            let exact = cfg.omega_squared_instant(m, t).unwrap().sqrt();
            let approx = cfg.omega_expanded(m, t);
            max_rel = max_rel.max(((exact - approx) / exact).abs());
        }
        assert!(max_rel < 1e-2 * (eps + h), "max rel diff {max_rel:.3e}");
    }

    #[test]
    fn omega_dot_matches_finite_difference() {
        let cfg = cubic(
            1.7,
            MirrorDrive {
                epsilon: 3e-2,
                omega_c: 2.9,
            },
            GravWave::plus(4e-2, 1.3),
        );
        let m = mode(3, 1, 2);
        let dt = 1e-6;
        for i in 0..12 {
            let t = 0.4 * i as f64 + 0.05;
            let fd = (cfg.omega_expanded(m, t + dt) - cfg.omega_expanded(m, t - dt)) / (2.0 * dt);
            let an = cfg.omega_expanded_dot(m, t);
            assert!(
                ((an - fd) / an.abs().max(1e-12)).abs() < 1e-6,
                "t={t}: analytic {an:.6e} vs fd {fd:.6e}"
            );
        }
    }

    #[test]
    fn theta_constant_integrand_is_exact() {
        let cfg = cubic(1.0, MirrorDrive::off(), GravWave::off());
        let m = mode(1, 1, 1);
        let w0 = cfg.mode_frequencies(m).omega0;
        let t = 17.5;
        let theta = cfg.theta_integrated(m, t).unwrap();
        assert!(((theta - w0 * t) / (w0 * t)).abs() < 1e-12);
        assert_eq!(cfg.theta_integrated(m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn theta_drive_correction_vanishes_over_full_period() {
        // The eps-term integrates to -(k_z^2/w0) (eps/Wc)(1 - cos Wc t),
        // which is zero at a full drive period.
        let omega_c = 2.0;
        let cfg = cubic(
            1.0,
            MirrorDrive {
                epsilon: 1e-3,
                omega_c,
            },
            GravWave::off(),
        );
        let m = mode(1, 1, 1);
        let w0 = cfg.mode_frequencies(m).omega0;
        let t_c = TAU / omega_c;
        let theta = cfg.theta_integrated(m, t_c).unwrap();
        assert!(
            (theta - w0 * t_c).abs() < 1e-10 * w0 * t_c,
            "theta = {theta}, w0 T = {}",
            w0 * t_c
        );
        // Away from a full period the closed-form correction is nonzero.
        let t_half = 0.5 * t_c;
        let mf = cfg.mode_frequencies(m);
        let correction = -(mf.k_z0 * mf.k_z0 / w0) * (1e-3 / omega_c)
            * (1.0 - (omega_c * t_half).cos());
        let theta_half = cfg.theta_integrated(m, t_half).unwrap();
        assert!(
            (theta_half - (w0 * t_half + correction)).abs() < 1e-9,
            "got {theta_half}, expected {}",
            w0 * t_half + correction
        );
    }

    #[test]
    fn theta_closed_form_matches_quadrature() {
        let cfg = cubic(
            1.3,
            MirrorDrive {
                epsilon: 2e-2,
                omega_c: 3.1,
            },
            GravWave::plus(1e-2, 0.9),
        );
        let m = mode(2, 1, 3);
        for t in [0.1, 1.0, 7.7, 31.4] {
            let q = cfg.theta_integrated(m, t).unwrap();
            let c = cfg.theta_expanded_closed(m, t);
            assert!((q - c).abs() < 1e-9 * q.abs().max(1.0), "t={t}: {q} vs {c}");
        }
    }

    #[test]
    fn strain_examples() {
        let quiet = cubic(1.0, MirrorDrive::off(), GravWave::off());
        assert_eq!(quiet.gw_strain(3.0), (0.0, 0.0));

        let wave = GravWave {
            h_plus: 2e-3,
            h_cross: 1e-3,
            omega_g: 4.0,
            delta_g: 0.0,
        };
        let cfg = cubic(1.0, MirrorDrive::off(), wave);
        let (h11, h12) = cfg.gw_strain(0.0);
        assert_eq!((h11, h12), (2e-3, 1e-3));
        let quarter = std::f64::consts::FRAC_PI_2 / 4.0;
        let (h11, h12) = cfg.gw_strain(quarter);
        assert!(h11.abs() < 1e-15 * 2e-3 + 1e-18);
        assert!(h12.abs() < 1e-15 * 1e-3 + 1e-18);
    }

    #[test]
    fn delta_g_enters_instant_frequency_but_not_expansion() {
        let pi = std::f64::consts::PI;
        let wave = GravWave {
            h_plus: 1e-3,
            h_cross: 0.0,
            omega_g: 2.0,
            delta_g: 0.8,
        };
        let cfg = cubic(pi, MirrorDrive::off(), wave);
        let m = mode(2, 1, 2);
        let w2 = cfg.omega_squared_instant(m, 0.0).unwrap();
        assert!((w2 - (9.0 + 1e-3 * 3.0 * 0.8_f64.cos())).abs() < 1e-12);
        // Expansion ignores the phase offset.
        let no_phase = cubic(pi, MirrorDrive::off(), GravWave::plus(1e-3, 2.0));
        assert_eq!(cfg.omega_expanded(m, 0.4), no_phase.omega_expanded(m, 0.4));
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        assert!(CavityConfig::cubic(0.0, MirrorDrive::off(), GravWave::off()).is_err());
        assert!(CavityConfig::cubic(
            1.0,
            MirrorDrive {
                epsilon: 1.0,
                omega_c: 1.0
            },
            GravWave::off()
        )
        .is_err());
        assert!(CavityConfig::cubic(1.0, MirrorDrive::off(), GravWave::plus(0.1, 1.0)).is_err());
        assert!(CavityConfig::cubic(1.0, MirrorDrive::off(), GravWave::plus(-1e-3, 1.0)).is_err());
        assert!(ModeIndex::new(0, 1, 1).is_err());
        assert!("2,1".parse::<ModeIndex>().is_err());
        assert_eq!("2,1,2".parse::<ModeIndex>().unwrap(), mode(2, 1, 2));
    }

    #[test]
    fn mode_frequencies_satisfy_dispersion() {
        let cfg = CavityConfig::new(1.1, 0.9, 1.7, MirrorDrive::off(), GravWave::off()).unwrap();
        let mf = cfg.mode_frequencies(mode(3, 2, 5));
        let lhs = mf.omega0 * mf.omega0;
        let rhs = mf.k_x * mf.k_x + mf.k_y * mf.k_y + mf.k_z0 * mf.k_z0;
        assert!(((lhs - rhs) / rhs).abs() < 1e-12);
    }
}

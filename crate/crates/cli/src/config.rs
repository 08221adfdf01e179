//! Sweep configuration: a TOML document mapping onto one resonance condition,
//! an `Omega_c` grid, and a list of `Omega_g` values.

use gwcavity::{ModeIndex, ResonanceCondition, Sign, DEFAULT_LONG_WAVELENGTH_THRESHOLD};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum ConfigError {
    Parse(String),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid config: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// `Omega_c` grid description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        }
    }
}

/// Numerical-integration overrides for `validate`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Zero means "choose automatically".
    pub max_step: f64,
    /// Longitudinal truncation for single-mode conditions.
    pub basis_n_z_max: u32,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: 0.0,
            basis_n_z_max: 3,
        }
    }
}

/// One sweep: a condition, fixed drive amplitudes, an `Omega_c` grid, and a
/// set of `Omega_g` values. Exactly one of `time_horizon` (fixed `T`) or
/// `chi_t_target` (fixed `chi*T`, `T` derived per point) must be given.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema: u32,
    pub condition: String,
    pub mode_k: [u32; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_j: Option<[u32; 3]>,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub omega_g: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_t_target: Option<f64>,
    #[serde(default = "default_threshold")]
    pub validity_threshold: f64,
    pub omega_c_grid: GridSpec,
    #[serde(default)]
    pub integration: IntegrationOptions,
}

fn default_threshold() -> f64 {
    DEFAULT_LONG_WAVELENGTH_THRESHOLD
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: SweepConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.schema != 1 {
            return bad(format!("unsupported schema {}", self.schema));
        }
        self.condition()?;
        if self.omega_c_grid.count < 2 {
            return bad("omega_c grid needs at least 2 points".into());
        }
        if !(self.omega_c_grid.min > 0.0 && self.omega_c_grid.max > self.omega_c_grid.min) {
            return bad("omega_c grid requires 0 < min < max".into());
        }
        if self.omega_g.is_empty() {
            return bad("at least one omega_g value is required".into());
        }
        if self.omega_g.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return bad("omega_g values must be finite and non-negative".into());
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return bad("epsilon must satisfy 0 <= epsilon < 1".into());
        }
        if self.h_plus.is_some() && self.kappa.is_some() {
            return bad("give at most one of h_plus and kappa".into());
        }
        if let Some(h) = self.h_plus {
            if !(0.0..0.1).contains(&h) {
                return bad("h_plus must satisfy 0 <= h_plus < 0.1".into());
            }
        }
        if let Some(k) = self.kappa {
            if !(k >= 0.0 && k.is_finite()) {
                return bad("kappa must be finite and non-negative".into());
            }
        }
        match (self.time_horizon, self.chi_t_target) {
            (Some(t), None) if t > 0.0 => {}
            (None, Some(x)) if x > 0.0 => {}
            _ => {
                return bad(
                    "exactly one of time_horizon or chi_t_target must be set, positive".into(),
                )
            }
        }
        if !(self.validity_threshold > 0.0) {
            return bad("validity_threshold must be positive".into());
        }
        Ok(())
    }

    /// Strain amplitude at a given wave frequency: `kappa * Omega_g^2` when a
    /// source constant is configured, else the fixed `h_plus`, else zero.
    pub fn strain_at(&self, omega_g: f64) -> f64 {
        match (self.kappa, self.h_plus) {
            (Some(k), _) => gwcavity::source_amplitude(k, omega_g),
            (None, Some(h)) => h,
            (None, None) => 0.0,
        }
    }

    pub fn condition(&self) -> Result<ResonanceCondition, ConfigError> {
        parse_condition(&self.condition, self.mode_k, self.mode_j)
    }
}

pub fn parse_mode(triple: [u32; 3]) -> Result<ModeIndex, ConfigError> {
    ModeIndex::new(triple[0], triple[1], triple[2])
        .map_err(|e| ConfigError::Invalid(e.to_string()))
}

/// Maps a condition name plus mode triple(s) onto a `ResonanceCondition`.
///
/// Names: `mechanical`, `gw-only`, `sideband-plus`, `sideband-minus`
/// (single-mode, `2 omega = |Omega_c ± Omega_g|`), `sum-plus`
/// (`omega_k + omega_j = Omega_g + Omega_c`), `sum-gw-minus`
/// (`= Omega_g - Omega_c`), and `sum-mech-minus` (`= Omega_c - Omega_g`).
pub fn parse_condition(
    name: &str,
    mode_k: [u32; 3],
    mode_j: Option<[u32; 3]>,
) -> Result<ResonanceCondition, ConfigError> {
    let mode = parse_mode(mode_k)?;
    let pair = |mode_j: Option<[u32; 3]>| -> Result<(ModeIndex, ModeIndex), ConfigError> {
        let j = mode_j.ok_or_else(|| {
            ConfigError::Invalid(format!("condition {name:?} requires mode_j"))
        })?;
        Ok((mode, parse_mode(j)?))
    };
    let cond = match name {
        "mechanical" => ResonanceCondition::Mechanical { mode },
        "gw-only" => ResonanceCondition::GwOnly { mode },
        "sideband-plus" => ResonanceCondition::SidebandSingle {
            mode,
            sign: Sign::Plus,
        },
        "sideband-minus" => ResonanceCondition::SidebandSingle {
            mode,
            sign: Sign::Minus,
        },
        "sum-plus" => {
            let (k, j) = pair(mode_j)?;
            ResonanceCondition::SumPlus {
                mode_k: k,
                mode_j: j,
                sign: Sign::Plus,
            }
        }
        "sum-gw-minus" => {
            let (k, j) = pair(mode_j)?;
            ResonanceCondition::SumPlus {
                mode_k: k,
                mode_j: j,
                sign: Sign::Minus,
            }
        }
        "sum-mech-minus" => {
            let (k, j) = pair(mode_j)?;
            ResonanceCondition::SumMinus {
                mode_k: k,
                mode_j: j,
            }
        }
        other => {
            return Err(ConfigError::Invalid(format!(
                "unknown condition {other:?}; expected one of mechanical, gw-only, \
                 sideband-plus, sideband-minus, sum-plus, sum-gw-minus, sum-mech-minus"
            )))
        }
    };
    if !matches!(
        cond,
        ResonanceCondition::SumPlus { .. } | ResonanceCondition::SumMinus { .. }
    ) && mode_j.is_some()
    {
        return Err(ConfigError::Invalid(format!(
            "condition {name:?} takes a single mode; drop mode_j"
        )));
    }
    cond.validate()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(cond)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
schema = 1
condition = "sideband-plus"
mode_k = [2, 1, 2]
epsilon = 1e-4
kappa = 1e-9
omega_g = [1.0, 2.0]
chi_t_target = 1.0

[omega_c_grid]
min = 50000.0
max = 200000.0
count = 5
spacing = "log"
"#;

    #[test]
    fn sample_round_trips() {
        let cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.omega_c_grid.count, 5);
        let text = cfg.to_toml();
        let again = SweepConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, again);
        // Serialization is a fixed point.
        assert_eq!(text, again.to_toml());
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        cfg.omega_c_grid.count = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        cfg.time_horizon = Some(10.0);
        assert!(cfg.validate().is_err(), "both horizon modes set");

        let mut cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        cfg.h_plus = Some(0.5);
        assert!(cfg.validate().is_err(), "h_plus and kappa together");

        assert!(SweepConfig::from_toml("schema = 2").is_err());
        assert!(SweepConfig::from_toml("not toml at all [").is_err());
    }

    #[test]
    fn condition_parsing() {
        assert!(parse_condition("mechanical", [2, 1, 2], None).is_ok());
        assert!(parse_condition("sum-mech-minus", [2, 1, 2], Some([2, 1, 1])).is_ok());
        // pair conditions need mode_j and shared transverse indices
        assert!(parse_condition("sum-plus", [2, 1, 2], None).is_err());
        assert!(parse_condition("sum-plus", [2, 1, 2], Some([1, 1, 1])).is_err());
        // single-mode conditions must not carry a partner
        assert!(parse_condition("gw-only", [2, 1, 2], Some([2, 1, 1])).is_err());
        assert!(parse_condition("nonsense", [2, 1, 2], None).is_err());
    }

    #[test]
    fn grids_and_strain() {
        let cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        let pts = cfg.omega_c_grid.points();
        assert_eq!(pts.len(), 5);
        assert!((pts[0] - 5e4).abs() < 1e-9);
        assert!((pts[4] - 2e5).abs() / 2e5 < 1e-12);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        // kappa scaling of the strain
        assert!((cfg.strain_at(2.0) - 4e-9).abs() < 1e-20);
    }
}

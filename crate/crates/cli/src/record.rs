//! Per-point run records and their CSV/JSON renderings.
//!
//! CSV output is deterministic: fields are formatted with Rust's shortest
//! round-trip float representation and rows are emitted in grid order, so
//! re-running an identical configuration reproduces the bytes exactly.
//! Wall-clock time appears only in JSON records.

use serde::Serialize;

/// Everything measured or derived at one sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema: u32,
    pub condition: String,
    pub mode_k: [u32; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_j: Option<[u32; 3]>,
    pub omega_c: f64,
    pub omega_g: f64,
    pub epsilon: f64,
    pub h_plus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_tuned: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_k0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_j0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_deviation: Option<f64>,
    /// Endpoint growth-rate ratio `arcsinh(sqrt(N)) / (chi T)`; near 1 for
    /// single-mode conditions and near 2 for two-mode pair creation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub long_wavelength_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_drive_ok: Option<bool>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

pub fn fmt_mode(m: [u32; 3]) -> String {
    format!("{}-{}-{}", m[0], m[1], m[2])
}

fn fmt_opt_mode(m: Option<[u32; 3]>) -> String {
    m.map(fmt_mode).unwrap_or_default()
}

pub const RATES_HEADER: &str = "condition,mode_k,mode_j,omega_c,omega_g,epsilon,h_plus,\
l_tuned,omega_k0,omega_j0,chi,time_horizon,n_analytic,long_wavelength_ok,weak_drive_ok,status";

pub fn rates_row(r: &RunRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.condition,
        fmt_mode(r.mode_k),
        fmt_opt_mode(r.mode_j),
        fmt_f64(r.omega_c),
        fmt_f64(r.omega_g),
        fmt_f64(r.epsilon),
        fmt_f64(r.h_plus),
        fmt_opt_f64(r.l_tuned),
        fmt_opt_f64(r.omega_k0),
        fmt_opt_f64(r.omega_j0),
        fmt_opt_f64(r.chi),
        fmt_opt_f64(r.time_horizon),
        fmt_opt_f64(r.n_analytic),
        fmt_opt_bool(r.long_wavelength_ok),
        fmt_opt_bool(r.weak_drive_ok),
        r.status,
    )
}

pub const VALIDATE_HEADER: &str = "condition,mode_k,mode_j,omega_c,omega_g,epsilon,h_plus,\
l_tuned,chi,time_horizon,n_analytic,n_numeric,rel_deviation,rate_ratio,unitarity_defect,\
long_wavelength_ok,weak_drive_ok,status";

pub fn validate_row(r: &RunRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.condition,
        fmt_mode(r.mode_k),
        fmt_opt_mode(r.mode_j),
        fmt_f64(r.omega_c),
        fmt_f64(r.omega_g),
        fmt_f64(r.epsilon),
        fmt_f64(r.h_plus),
        fmt_opt_f64(r.l_tuned),
        fmt_opt_f64(r.chi),
        fmt_opt_f64(r.time_horizon),
        fmt_opt_f64(r.n_analytic),
        fmt_opt_f64(r.n_numeric),
        fmt_opt_f64(r.rel_deviation),
        fmt_opt_f64(r.rate_ratio),
        fmt_opt_f64(r.unitarity_defect),
        fmt_opt_bool(r.long_wavelength_ok),
        fmt_opt_bool(r.weak_drive_ok),
        r.status,
    )
}

pub const FIGURE_HEADER: &str = "omega_c,l_tuned,chi_over_eps_kappa,valid";

pub const FIGURE_SUMMARY_HEADER: &str =
    "condition,omega_g_low,omega_g_high,points_compared,higher_dominates,skipped_rows";

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunRecord {
        RunRecord {
            schema: 1,
            condition: "mechanical".into(),
            mode_k: [2, 1, 2],
            mode_j: None,
            omega_c: 6.0,
            omega_g: 0.0,
            epsilon: 1e-3,
            h_plus: 0.0,
            kappa: None,
            l_tuned: Some(std::f64::consts::PI),
            omega_k0: Some(3.0),
            omega_j0: None,
            chi: Some(6.666666666666666e-4),
            time_horizon: Some(1500.0),
            n_analytic: Some(1.3810978455418157),
            n_numeric: None,
            rel_deviation: None,
            rate_ratio: None,
            unitarity_defect: None,
            q_min: None,
            long_wavelength_ok: Some(true),
            weak_drive_ok: Some(true),
            status: "ok".into(),
            wall_time_s: Some(0.25),
        }
    }

    #[test]
    fn csv_row_is_deterministic_and_wall_time_free() {
        let r = sample();
        let row = rates_row(&r);
        assert_eq!(row, rates_row(&r));
        assert!(!row.contains("0.25"));
        assert_eq!(
            row.split(',').count(),
            RATES_HEADER.split(',').count(),
            "row and header column counts agree"
        );
        // empty cells for absent values
        assert!(row.contains(",,"));
    }

    #[test]
    fn json_record_carries_schema_and_wall_time() {
        let r = sample();
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["wall_time_s"], 0.25);
        assert!(v.get("mode_j").is_none());
    }
}

//! Command implementations shared by the CLI front end: grid evaluation for
//! `rates`, full numeric cross-validation for `validate`, amplification-curve
//! export for `figure`, and single-point tuning for `tune`.

use std::time::Instant;

use gwcavity::{
    analyze, integrate_full, near_degeneracy_warnings, sideband_quality_factor,
    tune_cavity_length_cubic, CavityConfig, GravWave, IntegrationSpec, Method,
    MirrorDrive, ModeBasis, ModeIndex, ResonanceCondition, ResonanceError,
};
use rayon::prelude::*;

use crate::config::{IntegrationOptions, SweepConfig};
use crate::record::{fmt_f64, RunRecord, FIGURE_HEADER, FIGURE_SUMMARY_HEADER};

pub struct Point {
    pub omega_c: f64,
    pub omega_g: f64,
    pub h_plus: f64,
}

/// Grid points in deterministic order: outer loop over `omega_g` as listed,
/// inner loop over the `omega_c` grid.
pub fn grid_points(config: &SweepConfig) -> Vec<Point> {
    let mut points = Vec::new();
    for &omega_g in &config.omega_g {
        for omega_c in config.omega_c_grid.points() {
            points.push(Point {
                omega_c,
                omega_g,
                h_plus: config.strain_at(omega_g),
            });
        }
    }
    points
}

fn blank_record(config: &SweepConfig, p: &Point) -> RunRecord {
    RunRecord {
        schema: 1,
        condition: config.condition.clone(),
        mode_k: config.mode_k,
        mode_j: config.mode_j,
        omega_c: p.omega_c,
        omega_g: p.omega_g,
        epsilon: config.epsilon,
        h_plus: p.h_plus,
        kappa: config.kappa,
        l_tuned: None,
        omega_k0: None,
        omega_j0: None,
        chi: None,
        time_horizon: None,
        n_analytic: None,
        n_numeric: None,
        rel_deviation: None,
        rate_ratio: None,
        unitarity_defect: None,
        q_min: None,
        long_wavelength_ok: None,
        weak_drive_ok: None,
        status: "ok".into(),
        wall_time_s: None,
    }
}

/// Tunes the cubic cavity for one grid point and fills the analytic part of
/// the record. On a per-point failure the status field carries the reason and
/// the numeric fields stay empty.
fn analytic_point(
    config: &SweepConfig,
    cond: &ResonanceCondition,
    p: &Point,
    threshold: f64,
) -> (RunRecord, Option<CavityConfig>) {
    let started = Instant::now();
    let mut rec = blank_record(config, p);

    let l = match tune_cavity_length_cubic(cond, p.omega_c, p.omega_g) {
        Ok(l) => l,
        Err(ResonanceError::NoSolution(m)) => {
            rec.status = format!("no-solution: {m}");
            return (rec, None);
        }
        Err(e) => {
            rec.status = format!("error: {e}");
            return (rec, None);
        }
    };
    rec.l_tuned = Some(l);

    let cfg = match CavityConfig::cubic(
        l,
        MirrorDrive {
            epsilon: config.epsilon,
            omega_c: p.omega_c,
        },
        GravWave::plus(p.h_plus, p.omega_g),
    ) {
        Ok(cfg) => cfg,
        Err(e) => {
            rec.status = format!("invalid-cavity: {e}");
            return (rec, None);
        }
    };

    rec.omega_k0 = Some(cfg.mode_frequencies(cond.primary_mode()).omega0);
    rec.omega_j0 = cond.partner_mode().map(|j| cfg.mode_frequencies(j).omega0);

    let amp = match analyze(cond, &cfg, threshold) {
        Ok(a) => a,
        Err(e) => {
            rec.status = format!("error: {e}");
            return (rec, None);
        }
    };
    rec.chi = Some(amp.chi);
    rec.long_wavelength_ok = Some(amp.flags.long_wavelength_ok);
    rec.weak_drive_ok = Some(amp.flags.weak_drive_ok);
    if p.omega_g > 0.0 {
        rec.q_min = sideband_quality_factor(p.omega_c, p.omega_g).ok();
    }

    let horizon = match (config.time_horizon, config.chi_t_target) {
        (Some(t), _) => Some(t),
        (None, Some(target)) => {
            if amp.chi > 0.0 {
                Some(target / amp.chi)
            } else {
                rec.status = "zero-rate: chi vanishes, cannot reach chi_t_target".into();
                None
            }
        }
        (None, None) => None,
    };
    if let Some(t) = horizon {
        rec.time_horizon = Some(t);
        rec.n_analytic = Some(amp.n_at(t));
    }
    rec.wall_time_s = Some(started.elapsed().as_secs_f64());
    if rec.status == "ok" {
        (rec, Some(cfg))
    } else {
        (rec, None)
    }
}

pub fn run_rates(config: &SweepConfig, threshold: f64) -> Vec<RunRecord> {
    let cond = config.condition().expect("validated config");
    grid_points(config)
        .par_iter()
        .map(|p| analytic_point(config, &cond, p, threshold).0)
        .collect()
}

fn basis_for(cond: &ResonanceCondition, opts: &IntegrationOptions) -> ModeBasis {
    match cond.partner_mode() {
        Some(j) => ModeBasis::new(vec![cond.primary_mode(), j]).expect("distinct pair"),
        None => ModeBasis::family(cond.primary_mode(), opts.basis_n_z_max),
    }
}

/// Full numeric run at one grid point on top of the analytic record.
fn numeric_point(
    config: &SweepConfig,
    cond: &ResonanceCondition,
    p: &Point,
    threshold: f64,
    opts: &IntegrationOptions,
) -> (RunRecord, Vec<String>) {
    let started = Instant::now();
    let (mut rec, cfg) = analytic_point(config, cond, p, threshold);
    let (Some(cfg), Some(t_final), Some(chi)) = (cfg, rec.time_horizon, rec.chi) else {
        return (rec, Vec::new());
    };

    let basis = basis_for(cond, opts);
    let warnings = near_degeneracy_warnings(&basis, &cfg);

    let spec = match IntegrationSpec::new(Method::FullOde, basis, t_final).and_then(|s| {
        let mut s = s.with_tolerances(opts.rel_tol, opts.abs_tol)?;
        if opts.max_step > 0.0 {
            s.max_step = Some(opts.max_step);
        }
        Ok(s)
    }) {
        Ok(s) => s,
        Err(e) => {
            rec.status = format!("integration-failed: {e}");
            return (rec, warnings);
        }
    };

    match integrate_full(&spec, &cfg) {
        Ok((state, report)) => {
            let mode = cond.primary_mode();
            let n_num = state.particle_number(&mode).expect("mode is in basis");
            rec.n_numeric = Some(n_num);
            if let Some(n_ana) = rec.n_analytic {
                if n_ana > 0.0 {
                    rec.rel_deviation = Some((n_num - n_ana) / n_ana);
                }
            }
            if chi > 0.0 && t_final > 0.0 {
                rec.rate_ratio = Some(n_num.sqrt().asinh() / (chi * t_final));
            }
            rec.unitarity_defect = Some(
                report
                    .unitarity_defect
                    .iter()
                    .fold(0.0_f64, |a, d| a.max(*d)),
            );
        }
        Err(e) => {
            rec.status = format!("integration-failed: {e}");
        }
    }
    rec.wall_time_s = Some(started.elapsed().as_secs_f64());
    (rec, warnings)
}

pub fn run_validate(
    config: &SweepConfig,
    threshold: f64,
    opts: &IntegrationOptions,
) -> Vec<(RunRecord, Vec<String>)> {
    let cond = config.condition().expect("validated config");
    grid_points(config)
        .par_iter()
        .map(|p| numeric_point(config, &cond, p, threshold, opts))
        .collect()
}

pub struct FigureCurve {
    pub omega_g: f64,
    /// `(omega_c, l_tuned, chi_over_eps_kappa, valid)` in grid order.
    pub rows: Vec<(f64, f64, f64, bool)>,
    pub skipped: usize,
}

pub struct FigureOutput {
    pub curves: Vec<FigureCurve>,
    pub summary: Vec<String>,
}

/// Conditions the amplification-curve export accepts: those whose rate scales
/// as `eps * h`, so `chi / (eps kappa)` depends only on the frequencies.
pub fn figure_condition_ok(name: &str) -> bool {
    matches!(
        name,
        "sideband-plus" | "sideband-minus" | "sum-plus" | "sum-gw-minus" | "sum-mech-minus"
    )
}

pub fn run_figure(config: &SweepConfig, threshold: f64) -> Result<FigureOutput, String> {
    if !figure_condition_ok(&config.condition) {
        return Err(format!(
            "figure requires a sideband or sum condition, got {:?}",
            config.condition
        ));
    }
    let kappa = config
        .kappa
        .filter(|k| *k > 0.0)
        .ok_or("figure requires a positive kappa (h = kappa * Omega_g^2)")?;
    if config.epsilon <= 0.0 {
        return Err("figure requires a positive epsilon".into());
    }
    let cond = config.condition().map_err(|e| e.to_string())?;

    let curves: Vec<FigureCurve> = config
        .omega_g
        .par_iter()
        .map(|&omega_g| {
            let h = config.strain_at(omega_g);
            let mut rows = Vec::new();
            let mut skipped = 0usize;
            for omega_c in config.omega_c_grid.points() {
                let p = Point {
                    omega_c,
                    omega_g,
                    h_plus: h,
                };
                let (rec, _) = analytic_point(config, &cond, &p, threshold);
                match (rec.l_tuned, rec.chi, rec.long_wavelength_ok, &*rec.status) {
                    (Some(l), Some(chi), Some(valid), "ok") => {
                        rows.push((omega_c, l, chi / (config.epsilon * kappa), valid));
                    }
                    _ => skipped += 1,
                }
            }
            FigureCurve {
                omega_g,
                rows,
                skipped,
            }
        })
        .collect();

    // Dominance summary over adjacent curves, compared where both are valid.
    let mut order: Vec<usize> = (0..curves.len()).collect();
    order.sort_by(|&a, &b| curves[a].omega_g.total_cmp(&curves[b].omega_g));
    let mut summary = vec![FIGURE_SUMMARY_HEADER.to_string()];
    for pair in order.windows(2) {
        let (lo, hi) = (&curves[pair[0]], &curves[pair[1]]);
        let mut compared = 0usize;
        let mut dominated = true;
        for (rl, rh) in lo.rows.iter().zip(&hi.rows) {
            if rl.3 && rh.3 {
                compared += 1;
                if rh.2 <= rl.2 {
                    dominated = false;
                }
            }
        }
        summary.push(format!(
            "{},{},{},{},{},{}",
            config.condition,
            fmt_f64(lo.omega_g),
            fmt_f64(hi.omega_g),
            compared,
            dominated,
            lo.skipped + hi.skipped,
        ));
    }
    Ok(FigureOutput { curves, summary })
}

pub fn figure_curve_csv(curve: &FigureCurve) -> String {
    let mut out = String::from(FIGURE_HEADER);
    out.push('\n');
    for (wc, l, chi, valid) in &curve.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(*wc),
            fmt_f64(*l),
            fmt_f64(*chi),
            valid
        ));
    }
    out
}

pub struct TuneArgs {
    pub cond: ResonanceCondition,
    pub condition_name: String,
    pub mode_k: [u32; 3],
    pub mode_j: Option<[u32; 3]>,
    pub omega_c: f64,
    pub omega_g: f64,
    pub epsilon: f64,
    pub h_plus: Option<f64>,
    pub kappa: Option<f64>,
    pub threshold: f64,
}

/// Tunes a single configuration; `Err` carries the no-solution diagnostic.
pub fn run_tune(args: &TuneArgs) -> Result<RunRecord, ResonanceError> {
    let started = Instant::now();
    let h_plus = match (args.kappa, args.h_plus) {
        (Some(k), _) => gwcavity::source_amplitude(k, args.omega_g),
        (None, Some(h)) => h,
        (None, None) => 0.0,
    };
    let l = tune_cavity_length_cubic(&args.cond, args.omega_c, args.omega_g)?;
    let cfg = CavityConfig::cubic(
        l,
        MirrorDrive {
            epsilon: args.epsilon,
            omega_c: args.omega_c,
        },
        GravWave::plus(h_plus, args.omega_g),
    )
    .map_err(|e| ResonanceError::InvalidCondition(e.to_string()))?;
    let amp = analyze(&args.cond, &cfg, args.threshold)?;

    let mut rec = RunRecord {
        schema: 1,
        condition: args.condition_name.clone(),
        mode_k: args.mode_k,
        mode_j: args.mode_j,
        omega_c: args.omega_c,
        omega_g: args.omega_g,
        epsilon: args.epsilon,
        h_plus,
        kappa: args.kappa,
        l_tuned: Some(l),
        omega_k0: Some(cfg.mode_frequencies(args.cond.primary_mode()).omega0),
        omega_j0: args
            .cond
            .partner_mode()
            .map(|j| cfg.mode_frequencies(j).omega0),
        chi: Some(amp.chi),
        time_horizon: None,
        n_analytic: None,
        n_numeric: None,
        rel_deviation: None,
        rate_ratio: None,
        unitarity_defect: None,
        q_min: None,
        long_wavelength_ok: Some(amp.flags.long_wavelength_ok),
        weak_drive_ok: Some(amp.flags.weak_drive_ok),
        status: if amp.degenerate_mode {
            "ok (degenerate mode: gravitational rate vanishes)".into()
        } else {
            "ok".into()
        },
        wall_time_s: None,
    };
    if args.omega_g > 0.0 {
        rec.q_min = sideband_quality_factor(args.omega_c, args.omega_g).ok();
    }
    rec.wall_time_s = Some(started.elapsed().as_secs_f64());
    Ok(rec)
}

/// Parses a CLI mode triple like "2,1,2".
pub fn parse_mode_arg(s: &str) -> Result<(ModeIndex, [u32; 3]), String> {
    let mode: ModeIndex = s.parse().map_err(|e| format!("{e}"))?;
    Ok((mode, [mode.n_x, mode.n_y, mode.n_z]))
}

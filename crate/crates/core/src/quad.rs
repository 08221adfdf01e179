//! Quadrature kernels: an adaptive Gauss–Kronrod integrator for smooth
//! (possibly highly oscillatory) 1-D integrands and Gauss–Legendre node
//! generation for tensor-product volume integrals.

use num_complex::Complex64 as C64;

/// 15-point Kronrod abscissae on [-1, 1] (positive half; the rule is symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights; the Gauss nodes are `XGK[1]`, `XGK[3]`, `XGK[5]`, `XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Quadrature failure diagnostics.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not meet tolerance: estimated error {error:.3e} after {intervals} intervals (budget {budget})")]
    ToleranceNotMet {
        error: f64,
        intervals: usize,
        budget: usize,
    },
}

/// Values an adaptive quadrature can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

/// One Gauss–Kronrod 15(7) evaluation on [a, b]; returns the K15 value and
/// an error estimate from the K15/G7 difference.
fn gk15<V, F>(f: &mut F, a: f64, b: f64) -> (V, f64)
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut kronrod = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(mid - dx).add(f(mid + dx));
        kronrod = kronrod.add(pair.scale(WGK[i]));
        if i % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[i / 2]));
        }
    }
    let kronrod = kronrod.scale(half);
    let gauss = gauss.scale(half);
    let err = kronrod.add(gauss.scale(-1.0)).norm();
    (kronrod, err)
}

/// Adaptively integrates `f` over [a, b] to the requested absolute and
/// relative tolerances.
///
/// The range is first split into `n_initial` panels (use roughly one panel
/// per oscillation period for oscillatory integrands), then each panel is
/// bisected until its Gauss–Kronrod error estimate is below its share of
/// the tolerance. `max_intervals` bounds the total work.
pub fn integrate<V, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    n_initial: usize,
    max_intervals: usize,
) -> Result<V, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if a == b {
        return Ok(V::zero());
    }
    let n0 = n_initial.max(1);

    // Worklist of panels with their error estimates.
    let mut panels: Vec<(f64, f64, V, f64)> = Vec::with_capacity(2 * n0);
    let width = (b - a) / n0 as f64;
    let mut total = V::zero();
    let mut total_err = 0.0;
    for i in 0..n0 {
        let x0 = a + i as f64 * width;
        let x1 = if i + 1 == n0 { b } else { x0 + width };
        let (v, e) = gk15(&mut f, x0, x1);
        total = total.add(v);
        total_err += e;
        panels.push((x0, x1, v, e));
    }

    let tol_for = |value_norm: f64| abs_tol.max(rel_tol * value_norm);
    let mut intervals = n0;
    while total_err > tol_for(total.norm()) {
        if intervals >= max_intervals {
            return Err(QuadError::ToleranceNotMet {
                error: total_err,
                intervals,
                budget: max_intervals,
            });
        }
        // Split the panel with the largest error estimate.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.3.total_cmp(&q.3))
            .expect("panel list is nonempty");
        let (x0, x1, v, e) = panels.swap_remove(idx);
        let xm = 0.5 * (x0 + x1);
        if xm <= x0 || xm >= x1 {
            return Err(QuadError::ToleranceNotMet {
                error: total_err,
                intervals,
                budget: max_intervals,
            });
        }
        let (vl, el) = gk15(&mut f, x0, xm);
        let (vr, er) = gk15(&mut f, xm, x1);
        total = total.add(vl).add(vr).add(v.scale(-1.0));
        total_err += el + er - e;
        panels.push((x0, xm, vl, el));
        panels.push((xm, x1, vr, er));
        intervals += 1;
    }
    Ok(total)
}

/// Gauss–Legendre nodes and weights on [a, b].
///
/// Nodes are found by Newton iteration on the Legendre polynomial using the
/// Chebyshev asymptotic initial guess; accurate to machine precision for the
/// orders used here.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

//! The `p+q+r` critical points of `g|_{X_t}` and the rank test that recognises them.

use super::functions::{ft_wirtinger, g_eval, g_jacobian, omega, real_jacobian};
use super::sampling::{relative_residual, solve_coordinate};
use super::{C3Point, FibrationParams, NumError, NumericalConfig};
use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// `(a^{−1/n} e^{iθ/n} u_n^j)` on each axis, in the order x, y, z.
pub(crate) fn closed_form_points(params: &FibrationParams) -> Vec<C3Point> {
    let n = params.exponents();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();
    for axis in 0..3 {
        let e = n[axis] as f64;
        for j in 0..n[axis] {
            let u = Complex64::from_polar(params.a.powf(-1.0 / e), (params.theta + TAU * j as f64) / e);
            let mut c = [zero; 3];
            c[axis] = u;
            out.push(C3Point::from_coords(c));
        }
    }
    out
}

/// `a^{−2/p}`, `a^{−2/q} e^{2πi/3}`, `a^{−2/r} e^{4πi/3}`.
pub fn critical_values(params: &FibrationParams) -> [Complex64; 3] {
    let n = params.exponents();
    [0, 1, 2].map(|k| omega(k) * params.a.powf(-2.0 / n[k] as f64))
}

fn singular_values<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> Vec<f64> {
    let dynamic = DMatrix::from_fn(R, C, |i, j| m[(i, j)]);
    let mut s: Vec<f64> = dynamic.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis (as columns) of the kernel of a real `rows×6` Jacobian,
/// taking the `6 − rank` right singular vectors of smallest singular value.
pub(crate) fn kernel_basis<const R: usize>(j: &SMatrix<f64, R, 6>, dim: usize) -> Vec<SVector<f64, 6>> {
    // row scaling leaves the kernel unchanged and keeps tiny rows from drowning
    let mut padded = SMatrix::<f64, 6, 6>::zeros();
    for i in 0..R {
        let row = j.row(i);
        let n = row.norm();
        padded.row_mut(i).copy_from(&if n > 0.0 { row / n } else { row.into_owned() });
    }
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    order[..dim].iter().map(|&i| vt.row(i).transpose()).collect()
}

/// `σ_min(J_g·K) / σ_max(J_g)` with `K` an orthonormal basis of `T X_t`.
///
/// Normalising by `J_g` alone keeps the ratio defined at the critical points,
/// where `J_g·K` vanishes outright.
pub fn rank_ratio(params: &FibrationParams, pt: &C3Point) -> Result<f64, NumError> {
    let jf = real_jacobian(&ft_wirtinger(params, pt)?);
    let k = kernel_basis(&jf, 4);
    let jg = g_jacobian(pt);
    let mut reduced = SMatrix::<f64, 2, 4>::zeros();
    for (c, v) in k.iter().enumerate() {
        reduced.set_column(c, &(jg * v));
    }
    let top = singular_values(&jg)[0];
    if top == 0.0 {
        return Ok(0.0);
    }
    Ok(singular_values(&reduced)[1] / top)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalCheck {
    pub point: C3Point,
    pub residual: f64,
    pub rank_ratio: f64,
    pub accepted: bool,
}

/// Accepts a point lying on `X_t` at which `dg|_{X_t}` drops rank.
pub fn verify_critical_point(params: &FibrationParams, config: &NumericalConfig, pt: &C3Point) -> CriticalCheck {
    let residual = relative_residual(params, pt).unwrap_or(f64::NAN);
    let ratio = rank_ratio(params, pt).unwrap_or(f64::NAN);
    CriticalCheck {
        point: *pt,
        residual,
        rank_ratio: ratio,
        accepted: residual < config.residual_tol && ratio < config.rank_tol,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub axis: usize,
    pub index: u32,
    pub point: C3Point,
    pub check: CriticalCheck,
    pub g_value: Complex64,
    pub expected_value: Complex64,
    pub value_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalReport {
    pub expected_count: usize,
    pub accepted_count: usize,
    pub max_residual: f64,
    pub max_rank_ratio: f64,
    pub max_value_error: f64,
    pub points: Vec<CriticalPoint>,
}

impl CriticalReport {
    pub fn passed(&self) -> bool {
        self.accepted_count == self.expected_count && self.max_value_error < 1e-12
    }
}

/// The closed-form critical points, each verified independently.
pub fn critical_points(params: &FibrationParams, config: &NumericalConfig) -> Result<CriticalReport, NumError> {
    let n = params.exponents();
    let values = critical_values(params);
    let mut points = Vec::new();
    for pt in closed_form_points(params) {
        let axis = pt.axis().expect("on an axis");
        let index = (points.iter().filter(|c: &&CriticalPoint| c.axis == axis).count()) as u32;
        let check = verify_critical_point(params, config, &pt);
        let g_value = g_eval(&pt);
        points.push(CriticalPoint {
            axis,
            index,
            point: pt,
            check,
            g_value,
            expected_value: values[axis],
            value_error: (g_value - values[axis]).norm(),
        });
    }
    debug_assert_eq!(points.len(), n.iter().sum::<u32>() as usize);
    let fold = |f: fn(&CriticalPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
    Ok(CriticalReport {
        expected_count: n.iter().map(|&v| v as usize).sum(),
        accepted_count: points.iter().filter(|c| c.check.accepted).count(),
        max_residual: fold(|c| c.check.residual),
        max_rank_ratio: fold(|c| c.check.rank_ratio),
        max_value_error: fold(|c| c.value_error),
        points,
    })
}

/// One decoy per critical point: both off-axis coordinates displaced by `10⁻³`
/// of the point's norm, the axis coordinate re-solved so the decoy lies on `X_t`.
pub fn decoys(params: &FibrationParams, config: &NumericalConfig) -> Result<Vec<C3Point>, NumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xdec0);
    closed_form_points(params)
        .into_iter()
        .map(|pt| {
            let axis = pt.axis().expect("on an axis");
            let scale = 1e-3 * pt.norm();
            let mut c = pt.coords();
            for (k, v) in c.iter_mut().enumerate() {
                if k != axis {
                    *v = scale * Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
                }
            }
            solve_coordinate(params, config, &C3Point::from_coords(c), axis)
        })
        .collect()
}

//! Second-order model of `g|_{X₁}` at its critical points.

use super::functions::omega;
use super::sampling::relative_residual;
use super::{C3Point, FibrationParams, NumError, NumericalConfig};
use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type Grid = [[f64; 4]; 4];

fn grid(m: &Matrix4<f64>) -> Grid {
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    g
}

fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `λ = (2/n) a^{(2n−3)/n}` for a critical point on an axis with exponent `n`.
pub fn lambda(n: u32, a: f64) -> f64 {
    let n = n as f64;
    (2.0 / n) * a.powf((2.0 * n - 3.0) / n)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HessianModel {
    pub lambda: f64,
    pub a: Grid,
    pub b: Grid,
    pub p: Grid,
    pub pap: Grid,
    pub pbp: Grid,
    pub max_error: f64,
    pub ok: bool,
}

/// Builds `A`, `B`, `P`, conjugates, and compares `ᵗPAP`, `ᵗPBP` with their
/// diagonal and block-antidiagonal forms.
pub fn hessian_model(p: u32, a: f64) -> Result<HessianModel, NumError> {
    if p < 2 || !(a.is_finite() && a > 0.0) {
        return Err(NumError::Precondition(format!("need p ≥ 2 and a > 0, got p={p}, a={a}")));
    }
    let l = lambda(p, a);
    if l <= 1.0 {
        return Err(NumError::Precondition(format!("λ = {l} must exceed 1")));
    }
    #[rustfmt::skip]
    let am = Matrix4::new(
        -1.0, 0.0, -l, 0.0,
        0.0, -1.0, 0.0, l,
        -l, 0.0, -1.0, 0.0,
        0.0, l, 0.0, -1.0,
    );
    let s3 = 3f64.sqrt();
    let bm = Matrix4::from_diagonal(&nalgebra::Vector4::new(s3, s3, -s3, -s3));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let pm = Matrix4::new(
        h, h, 0.0, 0.0,
        0.0, 0.0, h, h,
        -h, h, 0.0, 0.0,
        0.0, 0.0, h, -h,
    );
    let pap = pm.transpose() * am * pm;
    let pbp = pm.transpose() * bm * pm;
    let pap_expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(l - 1.0, -l - 1.0, l - 1.0, -l - 1.0));
    #[rustfmt::skip]
    let pbp_expected = s3 * Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    );
    // relative to the entry scale λ
    let max_error = max_abs(&(pap - pap_expected)).max(max_abs(&(pbp - pbp_expected))) / l.max(1.0);
    Ok(HessianModel {
        lambda: l,
        a: grid(&am),
        b: grid(&bm),
        p: grid(&pm),
        pap: grid(&pap),
        pbp: grid(&pbp),
        max_error,
        ok: max_error < 1e-12,
    })
}

// Real Hessians of v, w ↦ −ω^k λ Re(vw) + ω^{k+1}|v|² + ω^{k+2}|w|².
fn model_matrices(axis: usize, lam: f64) -> (Matrix4<f64>, Matrix4<f64>) {
    #[rustfmt::skip]
    let cross = Matrix4::new(
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
    );
    let dv = Matrix4::from_diagonal(&nalgebra::Vector4::new(2.0, 2.0, 0.0, 0.0));
    let dw = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.0, 0.0, 2.0, 2.0));
    let (w0, w1, w2) = (omega(axis), omega(axis + 1), omega(axis + 2));
    let re = -w0.re * lam * cross + w1.re * dv + w2.re * dw;
    let im = -w0.im * lam * cross + w1.im * dv + w2.im * dw;
    (re, im)
}

/// Model Hessians (real part, imaginary part) for a critical point on `axis`;
/// on the x-axis these are `A` and `B`.
pub fn model_for_axis(axis: usize, n: u32, a: f64) -> (Grid, Grid) {
    let (re, im) = model_matrices(axis, lambda(n, a));
    (grid(&re), grid(&im))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HessianFdReport {
    pub point: C3Point,
    pub axis: usize,
    pub lambda: f64,
    pub step: f64,
    pub fd_real: Grid,
    pub fd_imag: Grid,
    pub model_real: Grid,
    pub model_imag: Grid,
    pub relative_error: f64,
    pub level_residual: f64,
    pub on_level: bool,
    pub matches: bool,
}

// Chart (v, w) ↦ point of the level set through `centre`, with
// coord_{k+1} = v, coord_{k+2} = w/c and coord_k = u₀ + s solved by Newton.
struct Chart {
    axis: usize,
    n: u32,
    a: f64,
    u0: Complex64,
    c: Complex64,
}

impl Chart {
    fn new(params: &FibrationParams, centre: &C3Point, axis: usize) -> Self {
        let n = params.exponents()[axis];
        let u0 = centre.coords()[axis];
        let k = params.a * u0.conj() / (n as f64 * u0.powi(n as i32 - 2));
        Chart { axis, n, a: params.a, u0, c: k / k.norm() }
    }

    // Σ_{j≥1} C(n,j) u₀^{n−j} s^j + a(u₀+s)·v·z = 0, free of cancellation against u₀^n.
    fn solve_s(&self, vz: Complex64) -> Complex64 {
        let n = self.n as i32;
        let mut s = Complex64::new(0.0, 0.0);
        for _ in 0..60 {
            let mut val = self.a * (self.u0 + s) * vz;
            let mut der = self.a * vz;
            let mut binom = 1.0;
            for j in 1..=n {
                binom = binom * (n - j + 1) as f64 / j as f64;
                val += binom * self.u0.powi(n - j) * s.powi(j);
                der += binom * j as f64 * self.u0.powi(n - j) * s.powi(j - 1);
            }
            let delta = val / der;
            s -= delta;
            if delta.norm() <= 1e-17 * s.norm().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        s
    }

    // g(chart(u)) − g(centre), expanded to avoid cancellation.
    fn g_offset(&self, u: &[f64; 4]) -> Complex64 {
        let v = Complex64::new(u[0], u[1]);
        let w = Complex64::new(u[2], u[3]);
        let z = w / self.c;
        let s = self.solve_s(v * z);
        let k = self.axis;
        omega(k) * (2.0 * (self.u0.conj() * s).re + s.norm_sqr()) + omega(k + 1) * v.norm_sqr() + omega(k + 2) * w.norm_sqr()
    }
}

/// Central-difference Hessians of `Re g` and `Im g` in the `(v, w)` chart at a
/// critical point of `g|_{X₁}`, compared with the model for its axis.
pub fn hessian_fd_check(params: &FibrationParams, config: &NumericalConfig, pt: &C3Point) -> Result<HessianFdReport, NumError> {
    if params.t != 1.0 {
        return Err(NumError::Precondition("the 2-jet model concerns X₁ (t = 1)".into()));
    }
    let axis = pt.axis().ok_or(NumError::NotOnAxis)?;
    let chart = Chart::new(params, pt, axis);
    let n = chart.n;
    let u0n = chart.u0.norm();
    // quadratic regime: |s/u₀| ≈ a h² / (n |u₀|^{n−1}) ≈ 1e−8
    let step = (1e-8 * n as f64 * u0n.powi(n as i32 - 1) / params.a).sqrt();
    let eval = |u: [f64; 4]| chart.g_offset(&u);
    let mut re = Matrix4::zeros();
    let mut im = Matrix4::zeros();
    let shift = |i: usize, d: f64, mut u: [f64; 4]| {
        u[i] += d;
        u
    };
    let origin = [0.0; 4];
    let f0 = eval(origin);
    for i in 0..4 {
        let d2 = (eval(shift(i, step, origin)) - 2.0 * f0 + eval(shift(i, -step, origin))) / (step * step);
        re[(i, i)] = d2.re;
        im[(i, i)] = d2.im;
        for j in (i + 1)..4 {
            let pp = eval(shift(j, step, shift(i, step, origin)));
            let pm = eval(shift(j, -step, shift(i, step, origin)));
            let mp = eval(shift(j, step, shift(i, -step, origin)));
            let mm = eval(shift(j, -step, shift(i, -step, origin)));
            let d2 = (pp - pm - mp + mm) / (4.0 * step * step);
            re[(i, j)] = d2.re;
            re[(j, i)] = d2.re;
            im[(i, j)] = d2.im;
            im[(j, i)] = d2.im;
        }
    }
    let lam = lambda(n, params.a);
    let (model_re, model_im) = model_matrices(axis, lam);
    let scale = max_abs(&model_re).max(max_abs(&model_im));
    let relative_error = max_abs(&(re - model_re)).max(max_abs(&(im - model_im))) / scale;
    let level_residual = relative_residual(params, pt)?;
    let on_level = level_residual < config.residual_tol;
    Ok(HessianFdReport {
        point: *pt,
        axis,
        lambda: lam,
        step,
        fd_real: grid(&re),
        fd_imag: grid(&im),
        model_real: grid(&model_re),
        model_imag: grid(&model_im),
        relative_error,
        level_residual,
        on_level,
        matches: on_level && relative_error < config.hessian_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcheck::critical_points;

    #[test]
    fn model_conjugation() {
        for (p, a) in [(2, 9_393_301.0), (3, 1e6), (7, 5e7)] {
            let m = hessian_model(p, a).unwrap();
            assert!(m.ok, "p={p}: error {}", m.max_error);
            let l = m.lambda;
            assert!((m.pap[0][0] - (l - 1.0)).abs() < 1e-9 * l);
            assert!((m.pap[1][1] + l + 1.0).abs() < 1e-9 * l);
            assert!((m.pbp[0][1] - 3f64.sqrt()).abs() < 1e-12);
            // A has two positive and two negative eigenvalues
            let a_m = Matrix4::from_fn(|i, j| m.a[i][j]);
            let eig = a_m.symmetric_eigenvalues();
            assert_eq!(eig.iter().filter(|v| **v > 0.0).count(), 2);
            assert_eq!(eig.iter().filter(|v| **v < 0.0).count(), 2);
        }
        assert!(hessian_model(2, 0.5).is_err());
        assert_eq!(lambda(2, 9.0), 3.0);
    }

    #[test]
    fn x_axis_model_is_a_and_b() {
        let m = hessian_model(2, 1e6).unwrap();
        let (re, im) = model_for_axis(0, 2, 1e6);
        for i in 0..4 {
            for j in 0..4 {
                assert!((re[i][j] - m.a[i][j]).abs() < 1e-9);
                assert!((im[i][j] - m.b[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn finite_differences_match_model() {
        let p = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let cfg = NumericalConfig::default();
        let rep = critical_points(&p, &cfg).unwrap();
        let mut errors = Vec::new();
        for c in &rep.points {
            let h = hessian_fd_check(&p, &cfg, &c.point).unwrap();
            assert!(h.matches, "axis {} error {}", h.axis, h.relative_error);
            errors.push(h.relative_error);
            if h.axis == 0 {
                assert!((h.lambda - p.a.sqrt()).abs() < 1e-9 * h.lambda);
            }
        }
        // both x-axis roots agree
        assert!((errors[0] - errors[1]).abs() < 1e-3);
    }

    #[test]
    fn perturbed_point_breaks_match() {
        let p = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let cfg = NumericalConfig::default();
        let x0 = p.a.powf(-0.5) * (1.0 + 1e-3);
        let z = Complex64::new(0.0, 0.0);
        let h = hessian_fd_check(&p, &cfg, &C3Point::new(Complex64::new(x0, 0.0), z, z)).unwrap();
        assert!(!h.on_level && !h.matches);
    }

    #[test]
    fn rejects_t_below_one_and_off_axis() {
        let p = FibrationParams::minimal(2, 3, 7, 0.5).unwrap();
        let cfg = NumericalConfig::default();
        let o = Complex64::new(1e-3, 0.0);
        assert!(hessian_fd_check(&p, &cfg, &C3Point::new(o, o, o)).is_err());
        let p1 = p.with_t(1.0).unwrap();
        assert_eq!(hessian_fd_check(&p1, &cfg, &C3Point::new(o, o, o)).unwrap_err(), NumError::NotOnAxis);
    }
}

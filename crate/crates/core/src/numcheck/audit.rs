//! Sampled audits of the symplectic, Lagrangian and domain-`Y` conditions.

use super::critical::{critical_values, kernel_basis};
use super::functions::{ft_wirtinger, g_eval, g_jacobian, omega, phi_grad, real_jacobian};
use super::sampling::{boundary_z_samples, sample_fibre};
use super::{C3Point, FibrationParams, NumError, NumericalConfig};
use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticViolation {
    pub point: C3Point,
    pub grad_norm: f64,
    pub antigrad_norm: f64,
    pub max_modulus: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub t: f64,
    pub precondition_ok: bool,
    pub requested: usize,
    pub samples: usize,
    /// Samples where some `φ_j` has nonzero gradient, so `∇̄f_t ≠ 0` is possible.
    pub in_transition_shell: usize,
    pub min_margin: f64,
    pub max_antigrad_ratio: f64,
    /// `max{|x|,|y|,|z|} > m/a` on every sample.
    pub ball_bound_ok: bool,
    pub violations: Vec<SymplecticViolation>,
}

impl SymplecticReport {
    pub fn passed(&self) -> bool {
        self.precondition_ok && self.samples == self.requested && self.ball_bound_ok && self.violations.is_empty()
    }
}

/// `‖∇f_t‖ > ‖∇̄f_t‖` on `config.samples` points of `X_t`. Parameters below
/// the tube bound are flagged without sampling.
pub fn symplectic_inequality_audit(params: &FibrationParams, config: &NumericalConfig) -> Result<SymplecticReport, NumError> {
    let mut report = SymplecticReport {
        t: params.t,
        precondition_ok: params.satisfies_tube_bound(),
        requested: config.samples,
        samples: 0,
        in_transition_shell: 0,
        min_margin: f64::INFINITY,
        max_antigrad_ratio: 0.0,
        ball_bound_ok: true,
        violations: Vec::new(),
    };
    if !report.precondition_ok {
        return Ok(report);
    }
    let points = sample_fibre(params, config, config.samples, config.seed)?;
    let ball = params.small_m() / params.a;
    for pt in &points {
        let w = ft_wirtinger(params, pt)?;
        let (g, ag) = (norm3(&w.holo), norm3(&w.anti));
        let shell = (0..3).any(|j| phi_grad(pt, j).map(|d| norm3(&d) > 0.0).unwrap_or(false));
        report.in_transition_shell += usize::from(shell);
        report.min_margin = report.min_margin.min(g - ag);
        report.max_antigrad_ratio = report.max_antigrad_ratio.max(ag / g);
        let max_modulus = pt.max_modulus();
        if max_modulus <= ball {
            report.ball_bound_ok = false;
        }
        if g <= ag || max_modulus <= ball {
            report.violations.push(SymplecticViolation { point: *pt, grad_norm: g, antigrad_norm: ag, max_modulus });
        }
    }
    report.samples = points.len();
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LagrangianReport {
    pub t: f64,
    pub samples: usize,
    pub max_defect: f64,
    pub mean_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn omega0(u: &SVector<f64, 6>, v: &SVector<f64, 6>) -> f64 {
    (0..3).map(|k| u[2 * k] * v[2 * k + 1] - u[2 * k + 1] * v[2 * k]).sum()
}

/// `|ω₀(e₁, e₂)|` for an orthonormal basis of the tangent plane of the `g`-fibre
/// through `pt`, i.e. of `ker [df_t; dg]`.
pub fn fibre_defect(params: &FibrationParams, pt: &C3Point) -> Result<f64, NumError> {
    let jf = real_jacobian(&ft_wirtinger(params, pt)?);
    let jg = g_jacobian(pt);
    let mut stacked = SMatrix::<f64, 4, 6>::zeros();
    stacked.rows_mut(0, 2).copy_from(&jf);
    stacked.rows_mut(2, 2).copy_from(&jg);
    let k = kernel_basis(&stacked, 2);
    Ok(omega0(&k[0], &k[1]).abs())
}

/// Maximum Lagrangian defect of the `g`-fibres over the given points of `X_t`.
pub fn lagrangian_defect(params: &FibrationParams, config: &NumericalConfig, samples: &[C3Point]) -> Result<LagrangianReport, NumError> {
    if samples.iter().any(|pt| pt.coords().iter().any(|c| c.norm() == 0.0)) {
        return Err(NumError::Precondition("samples must avoid the coordinate planes".into()));
    }
    if samples.is_empty() {
        return Err(NumError::Precondition("no samples".into()));
    }
    let defects: Vec<f64> = samples.iter().map(|pt| fibre_defect(params, pt)).collect::<Result<_, _>>()?;
    let max_defect = defects.iter().copied().fold(0.0, f64::max);
    Ok(LagrangianReport {
        t: params.t,
        samples: defects.len(),
        max_defect,
        mean_defect: defects.iter().sum::<f64>() / defects.len() as f64,
        tolerance: config.lagrangian_tol,
        passed: max_defect < config.lagrangian_tol,
    })
}

/// Distance from `w` to the boundary of the triangle with vertices `r, rω, rω²`,
/// through barycentric weights; negative when `w` lies outside.
pub fn triangle_boundary_distance(w: Complex64, r: f64) -> f64 {
    let height = 1.5 * r;
    let weights = [0, 1, 2].map(|k| (1.0 + 2.0 * (w * omega(k).conj()).re / r) / 3.0);
    height * weights.iter().copied().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainYReport {
    pub precondition_ok: bool,
    pub max_critical_value: f64,
    /// `a^{−2/M}`, which must stay below `1/9`.
    pub critical_bound: f64,
    pub critical_ok: bool,
    pub boundary_samples: usize,
    /// `min{|x|³,|y|³,|z|³} ≤ |xyz| < 1/a < (1/90)³` on every sample.
    pub xyz_chain_ok: bool,
    pub max_xyz: f64,
    /// Largest distance from `g(∂Z)` to `∂Δ(1/4)`.
    pub max_width: f64,
    pub width_ok: bool,
    /// `g` lands on `∂Δ(1/4)` at points of `∂D⁶_{1/2}` with `xyz = 0`, and off it otherwise.
    pub axis_spot_check_ok: bool,
}

impl DomainYReport {
    pub fn passed(&self) -> bool {
        self.precondition_ok && self.critical_ok && self.xyz_chain_ok && self.width_ok && self.axis_spot_check_ok
    }
}

const WIDTH: f64 = 1.0 / 4050.0;

fn spot_check() -> bool {
    let c = |m: f64, arg: f64| Complex64::from_polar(m, arg);
    let zero = Complex64::new(0.0, 0.0);
    let on_planes = [
        C3Point::new(c(0.3, 0.4), c(0.4, 1.0), zero),
        C3Point::new(zero, c(0.1, 2.0), c(0.24f64.sqrt(), -1.0)),
        C3Point::new(c(0.5, 0.0), zero, zero),
    ];
    let off_planes = C3Point::new(c(0.3, 0.1), c(0.3, 0.2), c(0.07f64.sqrt(), 0.3));
    let on = on_planes.iter().all(|pt| triangle_boundary_distance(g_eval(pt), 0.25).abs() < 1e-15);
    on && triangle_boundary_distance(g_eval(&off_planes), 0.25) > 1e-3
}

/// Critical values inside `D²_{1/9}` and the `|xyz|` chain on sampled points of `∂Z`.
pub fn domain_y_audit(params: &FibrationParams, config: &NumericalConfig) -> Result<DomainYReport, NumError> {
    let precondition_ok = params.satisfies_domain_bound();
    let max_critical_value = critical_values(params).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let critical_bound = params.a.powf(-2.0 / params.big_m() as f64);
    let p1 = params.with_t(1.0)?;
    let samples = if precondition_ok {
        boundary_z_samples(&p1, config, config.samples.min(200), config.seed ^ 0xb0)?
    } else {
        Vec::new()
    };
    let mut max_xyz: f64 = 0.0;
    let mut max_width: f64 = 0.0;
    let mut chain = true;
    for pt in &samples {
        let m = pt.coords().map(|c| c.norm());
        let xyz = m[0] * m[1] * m[2];
        let min_cube = m.iter().map(|v| v.powi(3)).fold(f64::INFINITY, f64::min);
        chain &= min_cube <= xyz && xyz < 1.0 / params.a && 1.0 / params.a < (1.0f64 / 90.0).powi(3);
        max_xyz = max_xyz.max(xyz);
        max_width = max_width.max(triangle_boundary_distance(g_eval(pt), 0.25).abs());
    }
    Ok(DomainYReport {
        precondition_ok,
        max_critical_value,
        critical_bound,
        critical_ok: max_critical_value <= critical_bound * (1.0 + 1e-12) && critical_bound < 1.0 / 9.0,
        boundary_samples: samples.len(),
        xyz_chain_ok: chain && !samples.is_empty(),
        max_xyz,
        max_width,
        width_ok: max_width < WIDTH,
        axis_spot_check_ok: spot_check(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcheck::{near_axis_samples, torus_samples};

    #[test]
    fn trivial_at_t_zero() {
        let p = FibrationParams::minimal(2, 3, 7, 0.0).unwrap();
        let cfg = NumericalConfig { samples: 200, ..Default::default() };
        let rep = symplectic_inequality_audit(&p, &cfg).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_antigrad_ratio, 0.0);
    }

    #[test]
    fn passes_at_t_one() {
        let p = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let cfg = NumericalConfig { samples: 300, ..Default::default() };
        let rep = symplectic_inequality_audit(&p, &cfg).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.in_transition_shell > 0 && rep.max_antigrad_ratio > 0.0);
    }

    #[test]
    fn small_a_flagged_without_sampling() {
        let p = FibrationParams::new(2, 3, 7, 1.0, 0.0, 1.0).unwrap();
        let rep = symplectic_inequality_audit(&p, &NumericalConfig::default()).unwrap();
        assert!(!rep.precondition_ok && rep.samples == 0 && !rep.passed());
    }

    #[test]
    fn lagrangian_at_one_not_at_zero() {
        let cfg = NumericalConfig::default();
        let p1 = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let s1 = torus_samples(&p1, &cfg, 100, 11).unwrap();
        let rep = lagrangian_defect(&p1, &cfg, &s1).unwrap();
        assert!(rep.passed, "defect {}", rep.max_defect);
        // near the axes the t = 0 fibres visibly fail, the t = 1 fibres do not
        let near1 = near_axis_samples(&p1, &cfg, 200, 5).unwrap();
        let rep = lagrangian_defect(&p1, &cfg, &near1).unwrap();
        assert!(rep.passed, "defect {}", rep.max_defect);
        let p0 = p1.with_t(0.0).unwrap();
        let near0 = near_axis_samples(&p0, &cfg, 200, 5).unwrap();
        let rep = lagrangian_defect(&p0, &cfg, &near0).unwrap();
        assert!(!rep.passed, "defect {}", rep.max_defect);
    }

    #[test]
    fn axis_samples_rejected() {
        let p = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let pt = C3Point::new(Complex64::new(p.a.powf(-0.5), 0.0), z, z);
        assert!(lagrangian_defect(&p, &NumericalConfig::default(), &[pt]).is_err());
    }

    #[test]
    fn domain_y_for_237() {
        let p = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
        let rep = domain_y_audit(&p, &NumericalConfig::default()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.critical_bound < 1.0 / 9.0);
    }

    #[test]
    fn triangle_distance() {
        assert!(triangle_boundary_distance(Complex64::new(0.0, 0.0), 1.0) - 0.5 < 1e-15);
        assert!(triangle_boundary_distance(Complex64::new(1.0, 0.0), 1.0).abs() < 1e-15);
        assert!(triangle_boundary_distance(Complex64::new(2.0, 0.0), 1.0) < 0.0);
    }
}

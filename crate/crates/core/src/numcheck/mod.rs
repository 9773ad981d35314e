//! Double-precision verification of the Lagrangian Lefschetz fibration on the
//! deformed Milnor fibre `X_t = f_t⁻¹(e^{iθ}/a) ∩ D⁶₁`.
//!
//! Every check is reproducible from `(params, config)`: sampling uses a seeded
//! ChaCha stream and runs serially.

mod audit;
mod critical;
mod functions;
mod hessian;
mod sampling;

pub use audit::{
    domain_y_audit, fibre_defect, lagrangian_defect, symplectic_inequality_audit,
    triangle_boundary_distance, DomainYReport, LagrangianReport, SymplecticReport, SymplecticViolation,
};
pub use critical::{
    critical_points, critical_values, decoys, rank_ratio, verify_critical_point, CriticalCheck,
    CriticalPoint, CriticalReport,
};
pub use functions::{
    bump, bump_derivative, f_antigrad, f_eval, f_grad, ft_antigrad, ft_eval, ft_grad, ft_wirtinger, g_eval,
    g_jacobian, h_eval, phi, phi_grad, real_jacobian, Wirtinger, BUMP_DERIVATIVE_BOUND,
};
pub use hessian::{hessian_fd_check, hessian_model, lambda, model_for_axis, HessianFdReport, HessianModel};
pub use sampling::{
    boundary_z_samples, near_axis_samples, project_to_level, relative_residual, sample_fibre,
    solve_coordinate, torus_samples,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "CUSPFIB_CONFIG";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the bump functions are undefined at the origin")]
    Origin,
    #[error("Newton projection did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point is not on a coordinate axis")]
    NotOnAxis,
    #[error("configuration error: {0}")]
    Config(String),
}

/// A point of `C³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C3Point {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl C3Point {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        C3Point { x, y, z }
    }

    pub fn from_coords(c: [Complex64; 3]) -> Self {
        C3Point { x: c[0], y: c[1], z: c[2] }
    }

    pub fn coords(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    /// `(Re x, Im x, Re y, Im y, Re z, Im z)`.
    pub fn to_real(&self) -> [f64; 6] {
        [self.x.re, self.x.im, self.y.re, self.y.im, self.z.re, self.z.im]
    }

    pub fn from_real(r: &[f64]) -> Self {
        C3Point {
            x: Complex64::new(r[0], r[1]),
            y: Complex64::new(r[2], r[3]),
            z: Complex64::new(r[4], r[5]),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()).sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.x.norm().max(self.y.norm()).max(self.z.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.to_real().iter().all(|v| v.is_finite())
    }

    pub fn is_origin(&self) -> bool {
        self.coords().iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Index of the single nonzero coordinate, if the point lies on an axis.
    pub fn axis(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..3).filter(|&k| self.coords()[k].norm() != 0.0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

/// Parameters of the deformation. `ε = 1` and `δ = 1/a` are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FibrationParams {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub a: f64,
    pub theta: f64,
    pub t: f64,
}

impl FibrationParams {
    pub fn new(p: u32, q: u32, r: u32, a: f64, theta: f64, t: f64) -> Result<Self, NumError> {
        if p < 2 || q < 2 || r < 2 {
            return Err(NumError::InvalidParams(format!("exponents must be at least 2, got ({p},{q},{r})")));
        }
        let (pp, qq, rr) = (p as u64, q as u64, r as u64);
        if qq * rr + rr * pp + pp * qq > pp * qq * rr {
            return Err(NumError::InvalidParams(format!("1/p+1/q+1/r > 1 for ({p},{q},{r})")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(NumError::InvalidParams(format!("a must be positive, got {a}")));
        }
        if !theta.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(NumError::InvalidParams(format!("need finite θ and t in [0,1], got θ={theta}, t={t}")));
        }
        Ok(FibrationParams { p, q, r, a, theta, t })
    }

    /// The smallest admissible integer `a` for all checks, with `θ = 0`.
    pub fn minimal(p: u32, q: u32, r: u32, t: f64) -> Result<Self, NumError> {
        let probe = FibrationParams::new(p, q, r, f64::MAX, 0.0, t)?;
        FibrationParams::new(p, q, r, probe.minimal_a(), 0.0, t)
    }

    pub fn with_t(self, t: f64) -> Result<Self, NumError> {
        FibrationParams::new(self.p, self.q, self.r, self.a, self.theta, t)
    }

    pub fn exponents(&self) -> [u32; 3] {
        [self.p, self.q, self.r]
    }

    pub fn big_m(&self) -> u32 {
        self.p.max(self.q).max(self.r)
    }

    /// `m = 30M`.
    pub fn small_m(&self) -> f64 {
        30.0 * self.big_m() as f64
    }

    /// `max{12M, m²(m+3)}`, the Milnor-tube bound.
    pub fn tube_bound(&self) -> f64 {
        let m = self.small_m();
        (12.0 * self.big_m() as f64).max(m * m * (m + 3.0))
    }

    /// `max{3^M, m²(m+3)}`, the bound for the domain `Y`.
    pub fn domain_bound(&self) -> f64 {
        let m = self.small_m();
        3f64.powi(self.big_m() as i32).max(m * m * (m + 3.0))
    }

    pub fn minimal_a(&self) -> f64 {
        self.tube_bound().max(self.domain_bound()).floor() + 1.0
    }

    pub fn satisfies_tube_bound(&self) -> bool {
        self.a > self.tube_bound()
    }

    pub fn satisfies_domain_bound(&self) -> bool {
        self.a > self.domain_bound()
    }

    /// Large `M` pushes `a` past the range where doubles are comfortable.
    pub fn needs_precision_review(&self) -> bool {
        self.big_m() > 9
    }

    /// The level `e^{iθ}/a`.
    pub fn target(&self) -> Complex64 {
        Complex64::from_polar(1.0 / self.a, self.theta)
    }
}

/// Tolerances and sampling controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericalConfig {
    /// Relative residual for `|f_t − target|`.
    pub residual_tol: f64,
    /// Singular-value ratio below which `dg|_{X_t}` counts as degenerate.
    pub rank_tol: f64,
    /// Finite-difference step, scaled by the point norm.
    pub fd_step: f64,
    pub hessian_tol: f64,
    pub lagrangian_tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NumericalConfig {
    fn default() -> Self {
        NumericalConfig {
            residual_tol: 1e-9,
            rank_tol: 1e-6,
            fd_step: 1e-6,
            hessian_tol: 1e-3,
            lagrangian_tol: 1e-6,
            samples: 1000,
            seed: 42,
        }
    }
}

impl NumericalConfig {
    pub fn validate(&self) -> Result<(), NumError> {
        let reals = [
            ("residual_tol", self.residual_tol),
            ("rank_tol", self.rank_tol),
            ("fd_step", self.fd_step),
            ("hessian_tol", self.hessian_tol),
            ("lagrangian_tol", self.lagrangian_tol),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(NumError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples == 0 {
            return Err(NumError::Config("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, NumError> {
        let cfg: NumericalConfig = toml::from_str(text).map_err(|e| NumError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, NumError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| NumError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Reads the file named by `CUSPFIB_CONFIG`, or the defaults when unset.
    pub fn from_env() -> Result<Self, NumError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(Self::default()),
        }
    }
}

/// Everything the fibration verifier checks for one parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FibrationReport {
    pub params: FibrationParams,
    pub precision_review: bool,
    pub critical: CriticalReport,
    pub decoys_rejected: usize,
    pub decoys_total: usize,
    pub hessian: Vec<HessianFdReport>,
    pub symplectic: SymplecticReport,
    pub lagrangian: Option<LagrangianReport>,
    pub domain_y: Option<DomainYReport>,
}

impl FibrationReport {
    pub fn passed(&self) -> bool {
        self.critical.passed()
            && self.decoys_rejected == self.decoys_total
            && self.hessian.iter().all(|h| h.matches)
            && self.symplectic.passed()
            && self.lagrangian.as_ref().is_none_or(|l| l.passed)
            && self.domain_y.as_ref().is_none_or(|d| d.passed())
    }
}

/// Runs every check. The Hessian, Lagrangian and domain-`Y` checks concern
/// `X₁` and are skipped for `t < 1`.
pub fn verify_fibration(params: &FibrationParams, config: &NumericalConfig) -> Result<FibrationReport, NumError> {
    config.validate()?;
    let critical = critical_points(params, config)?;
    let decoy_points = decoys(params, config)?;
    let decoys_rejected = decoy_points
        .iter()
        .filter(|d| !verify_critical_point(params, config, d).accepted)
        .count();
    let at_one = params.t == 1.0;
    let hessian = if at_one {
        critical
            .points
            .iter()
            .map(|c| hessian_fd_check(params, config, &c.point))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let symplectic = symplectic_inequality_audit(params, config)?;
    let (lagrangian, domain_y) = if at_one {
        let samples = torus_samples(params, config, config.samples.min(100), config.seed)?;
        (Some(lagrangian_defect(params, config, &samples)?), Some(domain_y_audit(params, config)?))
    } else {
        (None, None)
    };
    Ok(FibrationReport {
        params: *params,
        precision_review: params.needs_precision_review(),
        critical,
        decoys_rejected,
        decoys_total: decoy_points.len(),
        hessian,
        symplectic,
        lagrangian,
        domain_y,
    })
}

//! Newton projection onto `X_t` and the seeded sample generators.

use super::critical::closed_form_points;
use super::functions::{ft_eval, ft_wirtinger, real_jacobian};
use super::{C3Point, FibrationParams, NumError, NumericalConfig};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const MAX_ITERATIONS: usize = 50;

/// `|f_t − target|` relative to the largest of `|target|` and the summed term moduli.
pub fn relative_residual(params: &FibrationParams, pt: &C3Point) -> Result<f64, NumError> {
    let value = ft_eval(params, pt)?;
    let target = params.target();
    let n = params.exponents();
    let c = pt.coords();
    let terms: f64 = (0..3).map(|k| c[k].norm().powi(n[k] as i32)).sum::<f64>()
        + params.a * c[0].norm() * c[1].norm() * c[2].norm();
    Ok((value - target).norm() / target.norm().max(terms))
}

// Residual vector: Re/Im of f_t − target, then ‖pt‖² − radius² when constrained.
fn residual(params: &FibrationParams, pt: &C3Point, sphere: Option<f64>) -> Result<DVector<f64>, NumError> {
    let d = ft_eval(params, pt)? - params.target();
    let mut r = vec![d.re, d.im];
    if let Some(rad) = sphere {
        r.push(pt.norm().powi(2) - rad * rad);
    }
    Ok(DVector::from_vec(r))
}

fn jacobian(params: &FibrationParams, pt: &C3Point, sphere: Option<f64>) -> Result<DMatrix<f64>, NumError> {
    let jf = real_jacobian(&ft_wirtinger(params, pt)?);
    let rows = if sphere.is_some() { 3 } else { 2 };
    let real = pt.to_real();
    Ok(DMatrix::from_fn(rows, 6, |i, j| if i < 2 { jf[(i, j)] } else { 2.0 * real[j] }))
}

fn converged(params: &FibrationParams, config: &NumericalConfig, pt: &C3Point, sphere: Option<f64>) -> Result<bool, NumError> {
    let on_level = relative_residual(params, pt)? < config.residual_tol;
    let on_sphere = sphere.is_none_or(|rad| (pt.norm() - rad).abs() < config.residual_tol * rad);
    Ok(on_level && on_sphere)
}

// Minimum-norm Gauss–Newton with step halving.
fn project(
    params: &FibrationParams,
    config: &NumericalConfig,
    seed: &C3Point,
    sphere: Option<f64>,
) -> Result<C3Point, NumError> {
    if seed.is_origin() && params.t > 0.0 {
        return Err(NumError::Origin);
    }
    let mut pt = *seed;
    if converged(params, config, &pt, sphere)? {
        return Ok(pt);
    }
    let mut r = residual(params, &pt, sphere)?;
    for _ in 0..MAX_ITERATIONS {
        let j = jacobian(params, &pt, sphere)?;
        let jjt = &j * j.transpose();
        let Some(solve) = jjt.clone().cholesky() else {
            break;
        };
        let step = j.transpose() * solve.solve(&r);
        let mut scale = 1.0;
        let base = pt.to_real();
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = (0..6).map(|i| base[i] - scale * step[i]).collect();
            let cand = C3Point::from_real(&trial);
            if !cand.is_origin() {
                let rc = residual(params, &cand, sphere)?;
                if rc.norm() < r.norm() {
                    accepted = Some((cand, rc));
                    break;
                }
            }
            scale /= 2.0;
        }
        let Some((cand, rc)) = accepted else {
            break;
        };
        pt = cand;
        r = rc;
        if converged(params, config, &pt, sphere)? {
            return Ok(pt);
        }
    }
    Err(NumError::NoConvergence { iterations: MAX_ITERATIONS, residual: relative_residual(params, &pt)? })
}

/// Moves `seed` onto `f_t⁻¹(e^{iθ}/a)`; a seed already on the level set is returned unchanged.
pub fn project_to_level(params: &FibrationParams, config: &NumericalConfig, seed: &C3Point) -> Result<C3Point, NumError> {
    project(params, config, seed, None)
}

/// Newton in the single coordinate `k`, holding the other two fixed. Meant
/// for points near the `k`-th axis, where `f_t` is holomorphic in that coordinate.
pub fn solve_coordinate(params: &FibrationParams, config: &NumericalConfig, seed: &C3Point, k: usize) -> Result<C3Point, NumError> {
    let mut c = seed.coords();
    for _ in 0..MAX_ITERATIONS {
        let pt = C3Point::from_coords(c);
        if relative_residual(params, &pt)? < config.residual_tol {
            return Ok(pt);
        }
        let w = ft_wirtinger(params, &pt)?;
        let d = ft_eval(params, &pt)? - params.target();
        c[k] -= d / w.holo[k];
    }
    Err(NumError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: relative_residual(params, &C3Point::from_coords(c))?,
    })
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn in_ball(pt: &C3Point) -> bool {
    pt.norm() <= 1.0
}

/// Points near the central torus `|x| = |y| = |z| = a^{−2/3}`, away from the axes.
pub fn torus_samples(params: &FibrationParams, config: &NumericalConfig, n: usize, seed: u64) -> Result<Vec<C3Point>, NumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = params.a.powf(-2.0 / 3.0);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 20 * n {
        attempts += 1;
        // radii with fixed product, phases summing to θ
        let s1: f64 = rng.gen_range(-0.3..0.3);
        let s2: f64 = rng.gen_range(-0.3..0.3);
        let radii = [rho * s1.exp(), rho * s2.exp(), rho * (-s1 - s2).exp()];
        let a1 = rng.gen_range(0.0..TAU);
        let a2 = rng.gen_range(0.0..TAU);
        let phases = [a1, a2, params.theta - a1 - a2];
        let seed_pt = C3Point::from_coords([0, 1, 2].map(|k| Complex64::from_polar(radii[k], phases[k])));
        if let Ok(pt) = project_to_level(params, config, &seed_pt) {
            if pt.coords().iter().all(|c| c.norm() > 0.0) {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

// A point whose dominant coordinate `k` has one neighbour at a fixed ratio,
// the other solved from the defining equation.
fn transition_seed(params: &FibrationParams, rng: &mut ChaCha8Rng) -> Result<C3Point, NumError> {
    let k = rng.gen_range(0..3);
    let lo = 2.0 * params.small_m() / params.a;
    let modulus = log_uniform(rng, lo.min(0.5), 0.95);
    let ratio = rng.gen_range(0.1..0.6);
    let (fixed, solved) = if rng.gen_bool(0.5) { ((k + 1) % 3, (k + 2) % 3) } else { ((k + 2) % 3, (k + 1) % 3) };
    let mut c = [Complex64::new(0.0, 0.0); 3];
    c[k] = modulus * unit(rng);
    c[fixed] = ratio * modulus * unit(rng);
    let base = C3Point::from_coords(c);
    let rest = params.target() - ft_eval(params, &base)?;
    c[solved] = rest / (params.a * c[k] * c[fixed]);
    Ok(C3Point::from_coords(c))
}

fn near_critical_seed(params: &FibrationParams, rng: &mut ChaCha8Rng) -> C3Point {
    let points = closed_form_points(params);
    let centre = points[rng.gen_range(0..points.len())];
    let k = centre.axis().expect("closed-form points lie on axes");
    let scale = centre.coords()[k].norm();
    let mut c = centre.coords();
    for (i, slot) in c.iter_mut().enumerate() {
        if i != k {
            *slot = scale * log_uniform(rng, 1e-3, 0.3) * unit(rng);
        }
    }
    C3Point::from_coords(c)
}

/// `n` points of `X_t`, drawn evenly from three seed families: the central
/// torus, the transition shells of the bump functions, and neighbourhoods of
/// the critical points.
pub fn sample_fibre(params: &FibrationParams, config: &NumericalConfig, n: usize, seed: u64) -> Result<Vec<C3Point>, NumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_torus = n / 3;
    let mut out = torus_samples(params, config, n_torus, rng.gen())?;
    let mut attempts = 0;
    while out.len() < n && attempts < 50 * n {
        attempts += 1;
        let seed_pt = if out.len() % 2 == 0 {
            transition_seed(params, &mut rng)?
        } else {
            near_critical_seed(params, &mut rng)
        };
        if !seed_pt.is_finite() {
            continue;
        }
        if let Ok(pt) = project_to_level(params, config, &seed_pt) {
            if in_ball(&pt) && !pt.is_origin() {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Points of `X_t` close to the critical points, the off-axis coordinates of
/// absolute size `10⁻¹⁰..3·10⁻⁹`; `f_t` is holomorphic there for every `t`.
/// Smaller sizes lose the fibre tangent plane to rounding.
pub fn near_axis_samples(params: &FibrationParams, config: &NumericalConfig, n: usize, seed: u64) -> Result<Vec<C3Point>, NumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = closed_form_points(params);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 20 * n {
        attempts += 1;
        let centre = points[rng.gen_range(0..points.len())];
        let k = centre.axis().expect("closed-form points lie on axes");
        let mut c = centre.coords();
        for (i, slot) in c.iter_mut().enumerate() {
            if i != k {
                *slot = log_uniform(&mut rng, 1e-10, 3e-9) * unit(&mut rng);
            }
        }
        if let Ok(pt) = solve_coordinate(params, config, &C3Point::from_coords(c), k) {
            out.push(pt);
        }
    }
    Ok(out)
}

/// Points of `X_t ∩ ∂D⁶_{1/2}`.
pub fn boundary_z_samples(params: &FibrationParams, config: &NumericalConfig, n: usize, seed: u64) -> Result<Vec<C3Point>, NumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 50 * n {
        attempts += 1;
        let k = rng.gen_range(0..3);
        let v_mod = log_uniform(&mut rng, 1e-4, 0.05);
        let mut c = [Complex64::new(0.0, 0.0); 3];
        c[(k + 1) % 3] = v_mod * unit(&mut rng);
        c[k] = (0.25 - v_mod * v_mod).sqrt() * unit(&mut rng);
        let base = C3Point::from_coords(c);
        let rest = params.target() - ft_eval(params, &base)?;
        c[(k + 2) % 3] = rest / (params.a * c[k] * c[(k + 1) % 3]);
        let seed_pt = C3Point::from_coords(c);
        if !seed_pt.is_finite() || seed_pt.norm() > 1.0 {
            continue;
        }
        if let Ok(pt) = project(params, config, &seed_pt, Some(0.5)) {
            out.push(pt);
        }
    }
    Ok(out)
}

//! The defining functions, the bump functions and their Wirtinger derivatives.

use super::{C3Point, FibrationParams, NumError};
use nalgebra::SMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

// Width of each cubic ramp in the derivative profile, in units of the transition interval.
const RAMP: f64 = 0.2;

/// `sup |φ′| = 3/(1 − RAMP)`.
pub const BUMP_DERIVATIVE_BOUND: f64 = 3.0 / (1.0 - RAMP);

// Φ′ on [0,1]: cubic ramp up, plateau, cubic ramp down; ∫Φ′ = 1.
fn profile_derivative(u: f64) -> f64 {
    let k = 1.0 / (1.0 - RAMP);
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else if u < RAMP {
        let v = u / RAMP;
        k * v * v * (3.0 - 2.0 * v)
    } else if u <= 1.0 - RAMP {
        k
    } else {
        profile_derivative(1.0 - u)
    }
}

fn profile(u: f64) -> f64 {
    let k = 1.0 / (1.0 - RAMP);
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else if u < RAMP {
        let v = u / RAMP;
        k * RAMP * (v.powi(3) - v.powi(4) / 2.0)
    } else if u <= 1.0 - RAMP {
        k * (RAMP / 2.0 + (u - RAMP))
    } else {
        1.0 - profile(1.0 - u)
    }
}

/// C² bump: `1` on `[0, 1/6]`, `0` on `[1/2, ∞]`, `−3.75 ≤ φ′ ≤ 0`.
pub fn bump(s: f64) -> f64 {
    if s.is_infinite() {
        return 0.0;
    }
    1.0 - profile(3.0 * (s - 1.0 / 6.0))
}

pub fn bump_derivative(s: f64) -> f64 {
    if s.is_infinite() {
        return 0.0;
    }
    -3.0 * profile_derivative(3.0 * (s - 1.0 / 6.0))
}

fn others(j: usize) -> (usize, usize) {
    ((j + 1) % 3, (j + 2) % 3)
}

// (own modulus, √(sum of the other two squared moduli))
fn ratio_parts(pt: &C3Point, j: usize) -> (f64, f64) {
    let c = pt.coords();
    let (k1, k2) = others(j);
    (c[j].norm(), (c[k1].norm_sqr() + c[k2].norm_sqr()).sqrt())
}

/// `φ_j` for `j ∈ {0,1,2}`, written `φ₁, φ₂, φ₃` with one-based indices.
pub fn phi(pt: &C3Point, j: usize) -> Result<f64, NumError> {
    if pt.is_origin() {
        return Err(NumError::Origin);
    }
    let (own, rest) = ratio_parts(pt, j);
    Ok(if own == 0.0 { 0.0 } else { bump(rest / own) })
}

/// Holomorphic Wirtinger gradient `∇φ_j`; the antiholomorphic one is its conjugate.
pub fn phi_grad(pt: &C3Point, j: usize) -> Result<[Complex64; 3], NumError> {
    if pt.is_origin() {
        return Err(NumError::Origin);
    }
    let (own, rest) = ratio_parts(pt, j);
    let mut out = [ZERO; 3];
    if own == 0.0 {
        return Ok(out);
    }
    let d = bump_derivative(rest / own);
    if d == 0.0 {
        return Ok(out);
    }
    // d ≠ 0 forces rest > own/6 > 0
    let c = pt.coords();
    let (k1, k2) = others(j);
    out[j] = -rest / (2.0 * own * c[j]) * d;
    out[k1] = c[k1].conj() / (2.0 * own * rest) * d;
    out[k2] = c[k2].conj() / (2.0 * own * rest) * d;
    Ok(out)
}

fn powers(params: &FibrationParams, pt: &C3Point) -> [Complex64; 3] {
    let c = pt.coords();
    let n = params.exponents();
    [c[0].powu(n[0]), c[1].powu(n[1]), c[2].powu(n[2])]
}

/// `x^p + y^q + z^r + axyz`.
pub fn f_eval(params: &FibrationParams, pt: &C3Point) -> Complex64 {
    let [xp, yq, zr] = powers(params, pt);
    xp + yq + zr + params.a * pt.x * pt.y * pt.z
}

/// `(px^{p−1} + ayz, qy^{q−1} + azx, rz^{r−1} + axy)`.
pub fn f_grad(params: &FibrationParams, pt: &C3Point) -> [Complex64; 3] {
    let c = pt.coords();
    let n = params.exponents();
    let a = params.a;
    [
        n[0] as f64 * c[0].powu(n[0] - 1) + a * c[1] * c[2],
        n[1] as f64 * c[1].powu(n[1] - 1) + a * c[2] * c[0],
        n[2] as f64 * c[2].powu(n[2] - 1) + a * c[0] * c[1],
    ]
}

/// `f` is holomorphic.
pub fn f_antigrad(_params: &FibrationParams, _pt: &C3Point) -> [Complex64; 3] {
    [ZERO; 3]
}

/// `φ₁x^p + φ₂y^q + φ₃z^r + axyz`.
pub fn h_eval(params: &FibrationParams, pt: &C3Point) -> Result<Complex64, NumError> {
    let pw = powers(params, pt);
    let mut v = params.a * pt.x * pt.y * pt.z;
    for (j, term) in pw.iter().enumerate() {
        v += phi(pt, j)? * term;
    }
    Ok(v)
}

/// Both Wirtinger gradients of a function `C³ → C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wirtinger {
    pub holo: [Complex64; 3],
    pub anti: [Complex64; 3],
}

fn h_wirtinger(params: &FibrationParams, pt: &C3Point) -> Result<Wirtinger, NumError> {
    let c = pt.coords();
    let n = params.exponents();
    let pw = powers(params, pt);
    let a = params.a;
    let mut holo = [a * c[1] * c[2], a * c[2] * c[0], a * c[0] * c[1]];
    let mut anti = [ZERO; 3];
    for j in 0..3 {
        let ph = phi(pt, j)?;
        if ph != 0.0 {
            holo[j] += ph * n[j] as f64 * c[j].powu(n[j] - 1);
        }
        let dg = phi_grad(pt, j)?;
        for k in 0..3 {
            holo[k] += pw[j] * dg[k];
            anti[k] += pw[j] * dg[k].conj();
        }
    }
    Ok(Wirtinger { holo, anti })
}

/// `f_t = (1 − t)f + th`; the origin is rejected once `t > 0`.
pub fn ft_eval(params: &FibrationParams, pt: &C3Point) -> Result<Complex64, NumError> {
    let t = params.t;
    if t == 0.0 {
        return Ok(f_eval(params, pt));
    }
    Ok((1.0 - t) * f_eval(params, pt) + t * h_eval(params, pt)?)
}

pub fn ft_wirtinger(params: &FibrationParams, pt: &C3Point) -> Result<Wirtinger, NumError> {
    let t = params.t;
    let fg = f_grad(params, pt);
    if t == 0.0 {
        return Ok(Wirtinger { holo: fg, anti: [ZERO; 3] });
    }
    let hw = h_wirtinger(params, pt)?;
    let mut holo = [ZERO; 3];
    let mut anti = [ZERO; 3];
    for k in 0..3 {
        holo[k] = (1.0 - t) * fg[k] + t * hw.holo[k];
        anti[k] = t * hw.anti[k];
    }
    Ok(Wirtinger { holo, anti })
}

pub fn ft_grad(params: &FibrationParams, pt: &C3Point) -> Result<[Complex64; 3], NumError> {
    Ok(ft_wirtinger(params, pt)?.holo)
}

pub fn ft_antigrad(params: &FibrationParams, pt: &C3Point) -> Result<[Complex64; 3], NumError> {
    Ok(ft_wirtinger(params, pt)?.anti)
}

/// Real 2×6 Jacobian of `(Re F, Im F)` in `(Re x, Im x, Re y, Im y, Re z, Im z)`.
pub fn real_jacobian(w: &Wirtinger) -> SMatrix<f64, 2, 6> {
    let mut j = SMatrix::<f64, 2, 6>::zeros();
    for k in 0..3 {
        let d_re = w.holo[k] + w.anti[k];
        let d_im = Complex64::i() * (w.holo[k] - w.anti[k]);
        j[(0, 2 * k)] = d_re.re;
        j[(1, 2 * k)] = d_re.im;
        j[(0, 2 * k + 1)] = d_im.re;
        j[(1, 2 * k + 1)] = d_im.im;
    }
    j
}

/// Cube roots of unity weighting the moment map.
pub(crate) fn omega(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0)
}

/// `|x|² + e^{2πi/3}|y|² + e^{4πi/3}|z|²`.
pub fn g_eval(pt: &C3Point) -> Complex64 {
    pt.coords()
        .iter()
        .enumerate()
        .map(|(k, c)| omega(k) * c.norm_sqr())
        .sum()
}

pub fn g_jacobian(pt: &C3Point) -> SMatrix<f64, 2, 6> {
    let r = pt.to_real();
    let mut j = SMatrix::<f64, 2, 6>::zeros();
    for k in 0..3 {
        let w = omega(k);
        for s in 0..2 {
            j[(0, 2 * k + s)] = 2.0 * w.re * r[2 * k + s];
            j[(1, 2 * k + s)] = 2.0 * w.im * r[2 * k + s];
        }
    }
    j
}

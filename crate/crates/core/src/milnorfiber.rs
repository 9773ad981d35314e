//! The sphere system of the Milnor fiber `X_{p,q,r}`, its monodromy on `H_2`
//! and the section class.
//!
//! Basis order (both generators): `Σ_{1,1..p−1}`, `Σ_{2,1..q−1}`,
//! `Σ_{3,1..r−1}`, `Σ₊`, then `Σ₋` (generator `S`) or `T²` (generator `S'`).
//! The removed spheres satisfy `Σ_{m,0} = T² − Σ_{j≥1} Σ_{m,j}`.

use crate::matrix::IntMatrix;
use crate::quadlattice::{t_tilde_lattice, triple_defect, Generator, GramLattice, LatticeError};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilnorError {
    #[error("({0}, {1}, {2}) is neither a cusp nor a simple elliptic triple")]
    InvalidTriple(i64, i64, i64),
    #[error("arm index {0} out of range")]
    BadArm(usize),
}

impl From<LatticeError> for MilnorError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::InvalidTriple(p, q, r) => MilnorError::InvalidTriple(p, q, r),
            other => unreachable!("diagram lattice construction failed: {other}"),
        }
    }
}

fn check(p: i64, q: i64, r: i64) -> Result<(), MilnorError> {
    if p < 2 || q < 2 || r < 2 || triple_defect(p, q, r).is_positive() {
        return Err(MilnorError::InvalidTriple(p, q, r));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSystem {
    pub triple: (i64, i64, i64),
    pub generator: Generator,
    pub lattice: GramLattice,
}

impl SurfaceSystem {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    fn arm_lengths(&self) -> [usize; 3] {
        let (p, q, r) = self.triple;
        [(p - 1) as usize, (q - 1) as usize, (r - 1) as usize]
    }

    /// Index of `Σ_{m,j}` for `m ∈ {1,2,3}` and `j ≥ 1`.
    pub fn sphere_index(&self, m: usize, j: usize) -> Option<usize> {
        let lens = self.arm_lengths();
        if !(1..=3).contains(&m) || j == 0 || j > lens[m - 1] {
            return None;
        }
        Some(lens[..m - 1].iter().sum::<usize>() + j - 1)
    }

    pub fn sigma_plus_index(&self) -> usize {
        self.rank() - 2
    }

    /// `[T²]` in the basis: the last vector for `S'`, `Σ₊ − Σ₋` for `S`.
    pub fn fibre_class(&self) -> Vec<BigInt> {
        let n = self.rank();
        let mut v = vec![BigInt::zero(); n];
        match self.generator {
            Generator::SPrime => v[n - 1] = BigInt::one(),
            Generator::S => {
                v[n - 2] = BigInt::one();
                v[n - 1] = -BigInt::one();
            }
        }
        v
    }

    /// `[Σ_{m,0}] = [T²] − Σ_{j≥1} [Σ_{m,j}]`.
    pub fn removed_sphere(&self, m: usize) -> Result<Vec<BigInt>, MilnorError> {
        if !(1..=3).contains(&m) {
            return Err(MilnorError::BadArm(m));
        }
        let mut v = self.fibre_class();
        for j in 1..=self.arm_lengths()[m - 1] {
            let i = self.sphere_index(m, j).expect("in range");
            v[i] -= 1;
        }
        Ok(v)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        v
    }

    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        self.lattice.pair(u, v)
    }
}

pub fn surface_system(p: i64, q: i64, r: i64, generator: Generator) -> Result<SurfaceSystem, MilnorError> {
    check(p, q, r)?;
    Ok(SurfaceSystem {
        triple: (p, q, r),
        generator,
        lattice: t_tilde_lattice(p, q, r, generator)?,
    })
}

/// Basis order `S''` for `(2,3,7)`:
/// `Σ_{2,2}, Σ_{2,1}, Σ₊, Σ_{3,1..6}, Σ_{1,1}, T²`, as indices into `S'`.
pub fn e10_order() -> Vec<usize> {
    // S' indices: Σ_{1,1}=0, Σ_{2,1..2}=1..2, Σ_{3,1..6}=3..8, Σ₊=9, T²=10
    let mut order = vec![2, 1, 9];
    order.extend(3..=8);
    order.extend([0, 10]);
    order
}

/// The monodromy `μ*` on `H_2` in the `S'` basis; column `i` is the image of
/// basis vector `i`.
pub fn monodromy_action(p: i64, q: i64, r: i64) -> Result<IntMatrix, MilnorError> {
    let sys = surface_system(p, q, r, Generator::SPrime)?;
    let n = sys.rank();
    let t2 = n - 1;
    let plus = sys.sigma_plus_index();
    let mut mu = IntMatrix::zeros(n, n);
    let set_column = |mu: &mut IntMatrix, col: usize, image: &[BigInt]| {
        for (row, v) in image.iter().enumerate() {
            mu[(row, col)] = v.clone();
        }
    };
    for m in 1..=3 {
        let len = sys.arm_lengths()[m - 1];
        for j in 1..len {
            let src = sys.sphere_index(m, j).expect("in range");
            let dst = sys.sphere_index(m, j + 1).expect("in range");
            set_column(&mut mu, src, &sys.basis_vector(dst));
        }
        // the last sphere of the arm wraps around to the removed one
        let last = sys.sphere_index(m, len).expect("in range");
        set_column(&mut mu, last, &sys.removed_sphere(m)?);
    }
    set_column(&mut mu, t2, &sys.basis_vector(t2));
    let mut plus_image = sys.basis_vector(plus);
    for m in 1..=3 {
        plus_image[sys.sphere_index(m, 1).expect("arms are non-empty")] += 1;
    }
    plus_image[t2] -= 1;
    set_column(&mut mu, plus, &plus_image);
    Ok(mu)
}

/// Pairing of the section class with each `S'` basis vector: zero on the
/// spheres and `Σ₊`, one on `T²`.
pub fn section_vector(p: i64, q: i64, r: i64) -> Result<Vec<BigInt>, MilnorError> {
    check(p, q, r)?;
    let n = (p + q + r - 1) as usize;
    let mut v = vec![BigInt::zero(); n];
    v[n - 1] = BigInt::one();
    Ok(v)
}

/// Linear extension of the section pairing to any class in the `S'` basis.
pub fn section_pairing(section: &[BigInt], class: &[BigInt]) -> BigInt {
    section.iter().zip(class).map(|(a, b)| a * b).sum()
}

/// Torus-knot types `(p,p−1), (q,q−1), (r,r−1)` attached to the triple.
pub fn torus_knot_types(p: i64, q: i64, r: i64) -> [(i64, i64); 3] {
    [(p, p - 1), (q, q - 1), (r, r - 1)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub triple: (i64, i64, i64),
    pub labels: Vec<String>,
    pub gram: IntMatrix,
    pub mu: IntMatrix,
    /// Characteristic polynomial of `μ*`, constant term first.
    #[serde(with = "crate::intjson::vec")]
    pub charpoly: Vec<BigInt>,
    pub is_isometry: bool,
    pub fixes_fibre: bool,
}

pub fn monodromy_report(p: i64, q: i64, r: i64) -> Result<MonodromyReport, MilnorError> {
    let sys = surface_system(p, q, r, Generator::SPrime)?;
    let mu = monodromy_action(p, q, r)?;
    let g = sys.lattice.gram();
    let is_isometry = &(&mu.transpose() * g) * &mu == *g;
    let fibre = sys.fibre_class();
    let fixes_fibre = mu.apply(&fibre) == fibre;
    Ok(MonodromyReport {
        triple: (p, q, r),
        labels: sys.lattice.labels().to_vec(),
        gram: g.clone(),
        charpoly: mu.charpoly(),
        mu,
        is_isometry,
        fixes_fibre,
    })
}

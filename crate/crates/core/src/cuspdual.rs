//! Resolution cycles of cusp singularities and the strange-duality engine.
//!
//! A cycle `(c_1, …, c_k)` lists the negated self-intersections of a cyclic
//! chain of rational curves; for `k = 1` the single nodal curve `C_1` is
//! recorded as `c_1 = −C_1² + 2`. Cycles are compared up to rotation.

use crate::quadlattice::triple_defect;
use crate::quadratic::QuadIrrational;
use crate::sl2z::{self, ConjugacyCertificate, Sl2Matrix};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CuspError {
    #[error("({0}, {1}, {2}) is not a cusp triple (need p, q, r >= 2 and 1/p + 1/q + 1/r < 1)")]
    NotCusp(i64, i64, i64),
    #[error("invalid cycle {0:?}: entries must be >= 2 with at least one >= 3")]
    InvalidCycle(Vec<i64>),
    #[error("dual cycle {0} has length {1} > 3, so it is not the cycle of a T_(p,q,r)")]
    DualCycleTooLong(CycleData, usize),
    #[error("multiplication by alpha does not preserve Z + Z*omega")]
    ModuleNotPreserved,
    #[error("alpha has norm {0}, so its action is not in SL(2,Z)")]
    NormNotOne(Box<QuadIrrational>),
}

// ---------------------------------------------------------------------------
// Triples
// ---------------------------------------------------------------------------

/// A cusp triple; the sorted copy drives all computations.
#[derive(Debug, Clone, Copy)]
pub struct Triple {
    input: [i64; 3],
    sorted: [i64; 3],
}

impl Triple {
    pub fn new(p: i64, q: i64, r: i64) -> Result<Self, CuspError> {
        if p < 2 || q < 2 || r < 2 || !triple_defect(p, q, r).is_negative() {
            return Err(CuspError::NotCusp(p, q, r));
        }
        let mut sorted = [p, q, r];
        sorted.sort_unstable();
        Ok(Triple {
            input: [p, q, r],
            sorted,
        })
    }

    pub fn sorted(&self) -> [i64; 3] {
        self.sorted
    }

    pub fn input(&self) -> [i64; 3] {
        self.input
    }

    pub fn sum(&self) -> i64 {
        self.sorted.iter().sum()
    }

    pub fn monodromy(&self) -> Sl2Matrix {
        let [p, q, r] = self.sorted;
        sl2z::monodromy_matrix(p, q, r).expect("cusp triples have entries >= 2")
    }
}

impl PartialEq for Triple {
    fn eq(&self, other: &Self) -> bool {
        self.sorted == other.sorted
    }
}

impl Eq for Triple {}

impl Hash for Triple {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.sorted.hash(h)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let [p, q, r] = self.sorted;
        write!(f, "({p},{q},{r})")
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.sorted.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let [p, q, r] = <[i64; 3]>::deserialize(de)?;
        Triple::new(p, q, r).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Cycles
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct CycleData {
    entries: Vec<i64>,
}

impl CycleData {
    pub fn new(entries: Vec<i64>) -> Result<Self, CuspError> {
        if entries.is_empty() || entries.iter().any(|&c| c < 2) || entries.iter().all(|&c| c == 2) {
            return Err(CuspError::InvalidCycle(entries));
        }
        Ok(CycleData { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A single nodal curve, whose entry follows the `−C² + 2` convention.
    pub fn is_nodal(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn rotated(&self, k: usize) -> CycleData {
        let n = self.entries.len();
        CycleData {
            entries: (0..n).map(|i| self.entries[(i + k) % n]).collect(),
        }
    }

    pub fn rotations(&self) -> impl Iterator<Item = CycleData> + '_ {
        (0..self.entries.len()).map(|k| self.rotated(k))
    }

    /// Lexicographically least rotation among those starting with an entry `≥ 3`.
    pub fn canonical(&self) -> CycleData {
        self.rotations()
            .filter(|c| c.entries[0] >= 3)
            .min_by(|a, b| a.entries.cmp(&b.entries))
            .expect("valid cycles contain an entry >= 3")
    }
}

impl PartialEq for CycleData {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len() && self.canonical().entries == other.canonical().entries
    }
}

impl Eq for CycleData {}

impl Hash for CycleData {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.canonical().entries.hash(h)
    }
}

impl fmt::Display for CycleData {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for CycleData {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "CycleData{self}")
    }
}

impl Serialize for CycleData {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CycleData {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        CycleData::new(Vec::<i64>::deserialize(de)?).map_err(D::Error::custom)
    }
}

/// Contracts `(−1)`-curves of a cycle given by self-intersections until none
/// is left or a single curve remains.
fn blow_down(mut selfint: Vec<i64>) -> Vec<i64> {
    while selfint.len() > 1 {
        let Some(i) = selfint.iter().position(|&s| s == -1) else {
            break;
        };
        let n = selfint.len();
        if n == 2 {
            // the neighbour meets the contracted curve twice and becomes nodal
            let other = selfint[1 - i];
            selfint = vec![other + 4];
        } else {
            selfint[(i + n - 1) % n] += 1;
            selfint[(i + 1) % n] += 1;
            selfint.remove(i);
        }
    }
    selfint
}

fn cycle_from_selfint(selfint: &[i64]) -> Vec<i64> {
    if selfint.len() == 1 {
        vec![2 - selfint[0]]
    } else {
        selfint.iter().map(|s| -s).collect()
    }
}

/// The resolution cycle attached to `(p,q,r)`: start from the triangle of
/// curves with self-intersections `(1−q, 1−r, 1−p)` and blow down.
pub fn triple_to_cycle(p: i64, q: i64, r: i64) -> Result<CycleData, CuspError> {
    let t = Triple::new(p, q, r)?;
    let [p, q, r] = t.sorted();
    let reduced = blow_down(vec![1 - q, 1 - r, 1 - p]);
    CycleData::new(cycle_from_selfint(&reduced))
}

/// Inverse of [`triple_to_cycle`] for cycles of length at most three.
pub fn cycle_to_triple(d: &CycleData) -> Option<Triple> {
    let e = d.entries();
    let t = match *e {
        [c1] => Triple::new(2, 3, c1 + 4),
        [d1, d2] => Triple::new(2, d1 + 2, d2 + 2),
        [d1, d2, d3] => Triple::new(d3 + 1, d1 + 1, d2 + 1),
        _ => return None,
    };
    t.ok()
}

/// The dual cycle. Writing the cycle (rotated to start at an entry `≥ 3`) as
/// `γ₁, 2^{s₁}, γ₂, 2^{s₂}, …, γ_n, 2^{s_n}` with `γᵢ ≥ 3`, the dual is the
/// reversal of `2^{γ₁−3}, s₁+3, 2^{γ₂−3}, s₂+3, …`.
pub fn dual_cycle(c: &CycleData) -> CycleData {
    let start = c
        .entries()
        .iter()
        .position(|&x| x >= 3)
        .expect("valid cycles contain an entry >= 3");
    let rot = c.rotated(start);
    let mut blocks: Vec<(i64, i64)> = Vec::new();
    for &x in rot.entries() {
        if x >= 3 {
            blocks.push((x, 0));
        } else {
            blocks.last_mut().expect("starts with an entry >= 3").1 += 1;
        }
    }
    let mut out = Vec::new();
    for (gamma, s) in blocks {
        out.extend(std::iter::repeat_n(2, (gamma - 3) as usize));
        out.push(s + 3);
    }
    out.reverse();
    CycleData::new(out).expect("dual of a valid cycle is valid")
}

pub fn dual_triple(p: i64, q: i64, r: i64) -> Result<Triple, CuspError> {
    let d = dual_cycle(&triple_to_cycle(p, q, r)?);
    let len = d.len();
    cycle_to_triple(&d).ok_or(CuspError::DualCycleTooLong(d, len))
}

// ---------------------------------------------------------------------------
// Continued fractions and units
// ---------------------------------------------------------------------------

/// `M_C = F(c₁)⋯F(c_k)` with `F(c) = (c,−1;1,0)`, the Möbius map `x ↦ c − 1/x`.
pub fn mobius_matrix(c: &CycleData) -> Sl2Matrix {
    c.entries().iter().fold(Sl2Matrix::identity(), |acc, &cj| {
        let f = Sl2Matrix::from_i64(cj, -1, 1, 0).expect("det 1");
        &acc * &f
    })
}

/// Applies a Möbius matrix to a field element.
pub fn mobius_apply(m: &Sl2Matrix, x: &QuadIrrational) -> Option<QuadIrrational> {
    let [a, b, c, d] = m.entries().map(|e| QuadIrrational::from_int(e.clone()));
    let num = &(&a * x) + &b;
    let den = &(&c * x) + &d;
    num.checked_div(&den)
}

/// The purely periodic value `[[c₁ … c_k]] = c₁ − 1/(c₂ − 1/(⋯))`, the fixed
/// point `> 1` of `M_C`.
pub fn cf_value(c: &CycleData) -> QuadIrrational {
    let m = mobius_matrix(c);
    let [alpha, beta, gamma, delta] = m.entries();
    // γx² + (δ − α)x − β = 0
    let qa = gamma.clone();
    let qb = delta - alpha;
    let qc = -beta;
    let one = QuadIrrational::from_int(1);
    let roots: Vec<QuadIrrational> = [true, false]
        .into_iter()
        .filter_map(|plus| QuadIrrational::quadratic_root(&qa, &qb, &qc, plus))
        .collect();
    assert!(roots.len() == 2, "fixed points of M_C must be real");
    let (big, small): (Vec<_>, Vec<_>) = roots.into_iter().partition(|x| *x > one);
    assert!(
        big.len() == 1 && small.len() == 1,
        "expected exactly one fixed point above 1"
    );
    let x = big.into_iter().next().expect("checked");
    debug_assert!(!x.is_rational());
    x
}

/// `α_V = ∏_j ω_{C^{(j)}}` over all cyclic rotations.
pub fn alpha_v(c: &CycleData) -> QuadIrrational {
    c.rotations()
        .map(|r| cf_value(&r))
        .fold(QuadIrrational::from_int(1), |acc, w| &acc * &w)
}

/// Coordinates `(x, y)` of `z = x + y·ω`, if both are integers.
fn module_coords(z: &QuadIrrational, omega: &QuadIrrational) -> Option<(BigInt, BigInt)> {
    let y = (z - &z.conj()).checked_div(&(omega - &omega.conj()))?;
    let x = z - &(&y * omega);
    Some((x.as_integer()?, y.as_integer()?))
}

/// Matrix `M` of multiplication by `α_V` on `Z ⊕ Z·ω_C`, acting on the basis
/// column: `α_V·(1, ω_C)ᵀ = M·(1, ω_C)ᵀ`. With this convention `M` is
/// conjugate to the monodromy of the triple whose cusp cycle is `C`.
pub fn module_action_matrix(c: &CycleData) -> Result<Sl2Matrix, CuspError> {
    let omega = cf_value(c);
    let alpha = alpha_v(c);
    let norm = alpha.norm();
    if norm != QuadIrrational::from_int(1) {
        return Err(CuspError::NormNotOne(Box::new(norm)));
    }
    let (x1, y1) = module_coords(&alpha, &omega).ok_or(CuspError::ModuleNotPreserved)?;
    let (x2, y2) = module_coords(&(&alpha * &omega), &omega).ok_or(CuspError::ModuleNotPreserved)?;
    Sl2Matrix::new(x1, y1, x2, y2).map_err(|_| CuspError::ModuleNotPreserved)
}

// ---------------------------------------------------------------------------
// Duality report
// ---------------------------------------------------------------------------

/// Conjugacy of `M` to `N` if possible, else to `N⁻¹`.
pub fn conjugate_or_inverse(m: &Sl2Matrix, n: &Sl2Matrix) -> Option<ConjugacyCertificate> {
    sl2z::is_conjugate(m, n).or_else(|| sl2z::is_conjugate_to_inverse(m, n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualitySide {
    pub triple: Triple,
    /// The cusp cycle whose module action realizes this triple's monodromy.
    pub cycle: CycleData,
    pub omega: QuadIrrational,
    pub alpha_v: QuadIrrational,
    pub monodromy: Sl2Matrix,
    pub module_action: Sl2Matrix,
    /// `A_{p,q,r}` against the module action (direct if possible, else inverse).
    pub module_certificate: Option<ConjugacyCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub triple: Triple,
    pub dual: Triple,
    pub self_dual: bool,
    pub own: DualitySide,
    pub other: DualitySide,
    pub alpha_equal: bool,
    /// `A_{p,q,r}` conjugate to `A_{p′,q′,r′}⁻¹`.
    pub inverse_certificate: Option<ConjugacyCertificate>,
    /// The two module actions are conjugate to each other's inverse.
    pub module_inverse_certificate: Option<ConjugacyCertificate>,
    /// The two module actions are directly conjugate.
    pub module_direct_conjugate: bool,
}

impl DualityReport {
    /// Every required certificate is present and re-verifies, and the units agree.
    pub fn passed(&self) -> bool {
        let ok = |c: &Option<ConjugacyCertificate>| c.as_ref().is_some_and(ConjugacyCertificate::verify);
        self.alpha_equal
            && ok(&self.inverse_certificate)
            && ok(&self.module_inverse_certificate)
            && ok(&self.own.module_certificate)
            && ok(&self.other.module_certificate)
            && (self.self_dual || !self.module_direct_conjugate)
    }
}

fn side(triple: Triple, cycle: CycleData) -> Result<DualitySide, CuspError> {
    let omega = cf_value(&cycle);
    let alpha = alpha_v(&cycle);
    let monodromy = triple.monodromy();
    let module_action = module_action_matrix(&cycle)?;
    let module_certificate = conjugate_or_inverse(&monodromy, &module_action);
    Ok(DualitySide {
        triple,
        cycle,
        omega,
        alpha_v: alpha,
        monodromy,
        module_action,
        module_certificate,
    })
}

/// Full duality check for `(p,q,r)` and its dual.
///
/// `triple_to_cycle(p,q,r)` is the cycle `D` of the dual side; the triple's
/// own cusp cycle is `C = dual_cycle(D)`.
pub fn verify_duality(p: i64, q: i64, r: i64) -> Result<DualityReport, CuspError> {
    let triple = Triple::new(p, q, r)?;
    let d = triple_to_cycle(p, q, r)?;
    let c = dual_cycle(&d);
    let dual = cycle_to_triple(&c).ok_or_else(|| CuspError::DualCycleTooLong(c.clone(), c.len()))?;
    let own = side(triple, c)?;
    let other = side(dual, d)?;
    let inverse_certificate = sl2z::is_conjugate_to_inverse(&own.monodromy, &other.monodromy);
    let module_inverse_certificate = sl2z::is_conjugate_to_inverse(&own.module_action, &other.module_action);
    let module_direct_conjugate = sl2z::is_conjugate(&own.module_action, &other.module_action).is_some();
    Ok(DualityReport {
        triple,
        dual,
        self_dual: triple == dual,
        alpha_equal: own.alpha_v == other.alpha_v,
        own,
        other,
        inverse_certificate,
        module_inverse_certificate,
        module_direct_conjugate,
    })
}

/// Orders cycles by their canonical form; used for deterministic listings.
pub fn cycle_order(a: &CycleData, b: &CycleData) -> Ordering {
    (a.len(), a.canonical().entries).cmp(&(b.len(), b.canonical().entries))
}

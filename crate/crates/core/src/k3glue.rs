//! The strange-duality table, K3 lattice gluing and the Inose fibration.

use crate::cuspdual::{self, Triple};
use crate::milnorfiber;
use crate::quadlattice::{
    direct_sum_all, discriminant, e_lattice, hyperbolic_plane, parity, signature, t_lattice,
    unimodular_indefinite_isomorphic, GramLattice, Parity, Signature,
};
use crate::sl2z::{self, ConjugacyCertificate, HomologyClass, Sl2Matrix, TwistWord};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum K3Error {
    #[error("{0} and {1} do not form a pair of the strange-duality table")]
    NotAPair(String, String),
    #[error("triple {0} is not in the strange-duality table")]
    NotInTable(String),
    #[error("quadrant counts must each be 0, 1 or 2, got {0:?}")]
    InvalidCase([i64; 4]),
}

/// One row pair of the table: Gabrielov triples of a singularity and of its dual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPair {
    pub first: Triple,
    pub second: Triple,
    pub labels: (String, String),
    pub self_dual: bool,
}

type RawPair = ((i64, i64, i64), &'static str, (i64, i64, i64), &'static str);

const TABLE: [RawPair; 10] = [
    ((2, 3, 7), "E12", (2, 3, 7), "E12"),
    ((2, 4, 5), "Z11", (2, 3, 8), "E13"),
    ((3, 3, 4), "Q10", (2, 3, 9), "E14"),
    ((2, 4, 6), "Z12", (2, 4, 6), "Z12"),
    ((3, 3, 5), "Q11", (2, 4, 7), "Z13"),
    ((3, 3, 6), "Q12", (3, 3, 6), "Q12"),
    ((2, 5, 5), "W12", (2, 5, 5), "W12"),
    ((3, 4, 4), "S11", (2, 5, 6), "W13"),
    ((3, 4, 5), "S12", (3, 4, 5), "S12"),
    ((4, 4, 4), "U12", (4, 4, 4), "U12"),
];

fn triple(t: (i64, i64, i64)) -> Triple {
    Triple::new(t.0, t.1, t.2).expect("table triples are cusps")
}

/// The ten dual pairs: six self-dual, four exchanging two singularities.
pub fn strange_duality_table() -> Vec<DualPair> {
    TABLE
        .iter()
        .map(|&(a, la, b, lb)| DualPair {
            first: triple(a),
            second: triple(b),
            labels: (la.to_string(), lb.to_string()),
            self_dual: a == b,
        })
        .collect()
}

/// The fourteen distinct Gabrielov triples in table order.
pub fn table_triples() -> Vec<Triple> {
    let mut out: Vec<Triple> = Vec::new();
    for row in strange_duality_table() {
        for t in [row.first, row.second] {
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

pub fn find_pair(a: &Triple, b: &Triple) -> Result<DualPair, K3Error> {
    strange_duality_table()
        .into_iter()
        .find(|row| (row.first == *a && row.second == *b) || (row.first == *b && row.second == *a))
        .ok_or_else(|| K3Error::NotAPair(a.to_string(), b.to_string()))
}

/// The pair containing `t`.
pub fn pair_of(t: &Triple) -> Result<DualPair, K3Error> {
    strange_duality_table()
        .into_iter()
        .find(|row| row.first == *t || row.second == *t)
        .ok_or_else(|| K3Error::NotInTable(t.to_string()))
}

/// Number of critical points of the glued fibration, `(p+q+r) + (p′+q′+r′)`.
pub fn critical_count(a: &Triple, b: &Triple) -> Result<i64, K3Error> {
    let pair = find_pair(a, b)?;
    Ok(pair.first.sum() + pair.second.sum())
}

/// Euler number of the Inose fibration: eight `I₁` fibres and two `IV*` fibres.
pub const INOSE_EULER_COUNT: i64 = 8 + 2 * 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueReport {
    pub pair: DualPair,
    pub lattice: GramLattice,
    pub critical_count: i64,
    pub rank: usize,
    pub signature: Signature,
    #[serde(with = "crate::intjson")]
    pub det: BigInt,
    pub parity: Parity,
    pub unimodular: bool,
    /// Set only for unimodular results: isomorphic to `2E₈ ⊕ 3H`.
    pub k3_isomorphic: Option<bool>,
    /// `A_{p,q,r}` conjugate to `A_{p′,q′,r′}⁻¹`, so the two boundaries glue.
    pub boundary_certificate: Option<ConjugacyCertificate>,
}

/// `2E₈ ⊕ 3H`.
pub fn k3_lattice() -> GramLattice {
    let e8 = e_lattice(8).expect("E8 is supported");
    let h = hyperbolic_plane();
    direct_sum_all([&e8, &e8, &h, &h, &h])
}

/// `T(p,q,r) ⊕ T(p′,q′,r′) ⊕ H`, the `H` spanned by the fibre and section.
pub fn glued_lattice(a: &Triple, b: &Triple) -> Result<GlueReport, K3Error> {
    let pair = find_pair(a, b)?;
    let [p, q, r] = pair.first.sorted();
    let [p2, q2, r2] = pair.second.sorted();
    let t1 = t_lattice(p, q, r).expect("cusp triple");
    let t2 = t_lattice(p2, q2, r2).expect("cusp triple");
    // fibre·section from the Milnor fibre; both classes are isotropic there
    let section = milnorfiber::section_vector(p, q, r).expect("cusp triple");
    let fibre_section = section.last().cloned().expect("non-empty");
    debug_assert!(fibre_section.is_one());
    let h = GramLattice::new(
        vec!["fibre".into(), "section".into()],
        hyperbolic_plane().gram().clone(),
    )
    .expect("symmetric");
    let lattice = direct_sum_all([&t1, &t2, &h]);
    let det = discriminant(&lattice);
    let unimodular = det.abs().is_one();
    let k3_isomorphic = unimodular
        .then(|| unimodular_indefinite_isomorphic(&lattice, &k3_lattice()).ok())
        .flatten();
    let boundary_certificate = sl2z::is_conjugate_to_inverse(&pair.first.monodromy(), &pair.second.monodromy());
    Ok(GlueReport {
        critical_count: pair.first.sum() + pair.second.sum(),
        rank: lattice.rank(),
        signature: signature(&lattice),
        parity: parity(&lattice),
        det,
        unimodular,
        k3_isomorphic,
        boundary_certificate,
        lattice,
        pair,
    })
}

// ---------------------------------------------------------------------------
// Inose fibration
// ---------------------------------------------------------------------------

/// Numbers `(c₁,c₂,c₃,c₄)` of the roots of `P⁸ = −4` enclosed in each quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct InoseCase([u8; 4]);

impl TryFrom<[i64; 4]> for InoseCase {
    type Error = K3Error;
    fn try_from(c: [i64; 4]) -> Result<Self, K3Error> {
        InoseCase::new(c)
    }
}

impl From<InoseCase> for [i64; 4] {
    fn from(c: InoseCase) -> [i64; 4] {
        c.0.map(i64::from)
    }
}

impl InoseCase {
    pub fn new(c: [i64; 4]) -> Result<Self, K3Error> {
        if c.iter().any(|&x| !(0..=2).contains(&x)) {
            return Err(K3Error::InvalidCase(c));
        }
        Ok(InoseCase(c.map(|x| x as u8)))
    }

    pub fn counts(&self) -> [i64; 4] {
        (*self).into()
    }
}

/// `(τ_α τ_β)⁴ τ_α^{c₄} τ_β^{c₃} τ_γ^{c₂} τ_α^{c₁}` with a chosen third curve.
pub fn inose_word(case: InoseCase, gamma: HomologyClass) -> TwistWord {
    let [c1, c2, c3, c4] = case.counts();
    let rotation = TwistWord::new()
        .push(HomologyClass::ALPHA, 1)
        .push(HomologyClass::BETA, 1)
        .repeat(4);
    rotation.concat(
        &TwistWord::new()
            .push(HomologyClass::ALPHA, c4)
            .push(HomologyClass::BETA, c3)
            .push(gamma, c2)
            .push(HomologyClass::ALPHA, c1),
    )
}

pub fn inose_monodromy_with_gamma(case: InoseCase, gamma: HomologyClass) -> Sl2Matrix {
    sl2z::evaluate_word(&inose_word(case, gamma))
}

/// Boundary monodromy under the fixed convention `γ = (1,−1)`.
pub fn inose_monodromy(case: InoseCase) -> Sl2Matrix {
    inose_monodromy_with_gamma(case, HomologyClass::GAMMA)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InoseClassification {
    pub case: InoseCase,
    pub monodromy: Sl2Matrix,
    #[serde(with = "crate::intjson")]
    pub trace: BigInt,
    pub triple: Option<Triple>,
    /// `X_{p,q,r}` for the matched triple.
    pub boundary: Option<String>,
    /// The worked-out answer, for the four reference cases.
    pub expected: Option<Triple>,
    /// Present when `triple` is set; `to_inverse` records which side matched.
    pub certificate: Option<ConjugacyCertificate>,
}

/// Matches a monodromy against the table triples. The boundary of the
/// neighbourhood carries the orientation opposite to the cusp link, so all
/// conjugacies to an inverse are tried before any direct conjugacy.
pub fn classify_monodromy(m: &Sl2Matrix) -> Option<(Triple, ConjugacyCertificate)> {
    let triples = table_triples();
    triples
        .iter()
        .find_map(|t| sl2z::is_conjugate_to_inverse(m, &t.monodromy()).map(|c| (*t, c)))
        .or_else(|| {
            triples
                .iter()
                .find_map(|t| sl2z::is_conjugate(m, &t.monodromy()).map(|c| (*t, c)))
        })
}

pub fn classify_inose_boundary(case: InoseCase) -> InoseClassification {
    classify_inose_boundary_with_gamma(case, HomologyClass::GAMMA)
}

pub fn classify_inose_boundary_with_gamma(case: InoseCase, gamma: HomologyClass) -> InoseClassification {
    let monodromy = inose_monodromy_with_gamma(case, gamma);
    let found = classify_monodromy(&monodromy);
    InoseClassification {
        case,
        trace: monodromy.trace(),
        triple: found.as_ref().map(|f| f.0),
        boundary: found.as_ref().map(|f| {
            let [p, q, r] = f.0.sorted();
            format!("X_{{{p},{q},{r}}}")
        }),
        certificate: found.map(|f| f.1),
        expected: inose_expected(case),
        monodromy,
    }
}

impl InoseClassification {
    /// A verified match that agrees with the reference answer when there is one.
    pub fn passed(&self) -> bool {
        self.certificate.as_ref().is_some_and(ConjugacyCertificate::verify)
            && self.expected.is_none_or(|e| self.triple == Some(e))
    }
}

pub fn inose_expected(case: InoseCase) -> Option<Triple> {
    inose_reference_cases()
        .into_iter()
        .find(|(c, _)| *c == case.counts())
        .map(|(_, (p, q, r))| triple((p, q, r)))
}

/// The four cases worked out for the Inose fibration with their boundaries.
pub fn inose_reference_cases() -> [([i64; 4], (i64, i64, i64)); 4] {
    [
        ([0, 0, 2, 2], (2, 3, 7)),
        ([0, 2, 0, 2], (2, 5, 5)),
        ([0, 1, 0, 2], (2, 4, 5)),
        ([0, 2, 1, 2], (2, 3, 8)),
    ]
}

/// `T(2,3,7) ≅ E₈ ⊕ H`, so the self-dual gluing is `2E₈ ⊕ 3H` summand by summand.
pub fn e10_matches_e8_plus_h() -> bool {
    let e8 = e_lattice(8).expect("supported");
    let t = t_lattice(2, 3, 7).expect("cusp");
    let rhs = direct_sum_all([&e8, &hyperbolic_plane()]);
    unimodular_indefinite_isomorphic(&t, &rhs).unwrap_or(false)
}

impl GlueReport {
    /// The boundaries glue, the count is 24, and a unimodular result is the K3 lattice.
    pub fn passed(&self) -> bool {
        self.critical_count == 24
            && self.boundary_certificate.as_ref().is_some_and(ConjugacyCertificate::verify)
            && self.k3_isomorphic != Some(false)
    }
}

/// One pair of the table with everything recomputed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub pair: DualPair,
    pub computed_dual: Option<Triple>,
    pub duality: cuspdual::DualityReport,
    pub critical_count: i64,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.computed_dual == Some(self.pair.second) && self.duality.passed() && self.critical_count == 24
    }
}

pub fn table_report() -> Result<Vec<TableRow>, cuspdual::CuspError> {
    strange_duality_table()
        .into_iter()
        .map(|pair| {
            let [p, q, r] = pair.first.sorted();
            Ok(TableRow {
                computed_dual: computed_dual(&pair.first),
                duality: cuspdual::verify_duality(p, q, r)?,
                critical_count: pair.first.sum() + pair.second.sum(),
                pair,
            })
        })
        .collect()
}

/// Dual triple lookup through the cycle engine, for cross-checking the table.
pub fn computed_dual(t: &Triple) -> Option<Triple> {
    let [p, q, r] = t.sorted();
    cuspdual::dual_triple(p, q, r).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: i64, q: i64, r: i64) -> Triple {
        Triple::new(p, q, r).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Sl2Matrix {
        Sl2Matrix::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn table_shape() {
        let table = strange_duality_table();
        assert_eq!(table.len(), 10);
        assert_eq!(table.iter().filter(|p| p.self_dual).count(), 6);
        assert!(table.iter().any(|p| p.first == t(2, 4, 5) && p.second == t(2, 3, 8)));
        assert_eq!(table_triples().len(), 14);
        for row in &table {
            assert_eq!(computed_dual(&row.first), Some(row.second));
            assert_eq!(computed_dual(&row.second), Some(row.first));
        }
    }

    #[test]
    fn critical_counts() {
        for row in strange_duality_table() {
            assert_eq!(critical_count(&row.first, &row.second).unwrap(), 24);
        }
        assert!(matches!(
            critical_count(&t(2, 3, 7), &t(2, 3, 8)),
            Err(K3Error::NotAPair(..))
        ));
        assert_eq!(INOSE_EULER_COUNT, 24);
    }

    #[test]
    fn gluing() {
        let rep = glued_lattice(&t(2, 3, 7), &t(2, 3, 7)).unwrap();
        assert_eq!(rep.rank, 22);
        assert_eq!(rep.signature, Signature { positive: 3, zero: 0, negative: 19 });
        assert!(rep.unimodular && rep.k3_isomorphic == Some(true));
        assert_eq!(rep.parity, Parity::Even);
        let rep = glued_lattice(&t(2, 4, 5), &t(2, 3, 8)).unwrap();
        assert_eq!(rep.det.abs(), BigInt::from(4));
        for row in strange_duality_table() {
            let rep = glued_lattice(&row.first, &row.second).unwrap();
            assert_eq!(rep.unimodular, row.first == t(2, 3, 7));
            assert!(rep.boundary_certificate.unwrap().verify());
        }
        assert!(e10_matches_e8_plus_h());
    }

    #[test]
    fn inose_matrices() {
        let c = |v| InoseCase::new(v).unwrap();
        assert_eq!(inose_monodromy(c([0, 0, 2, 2])), m(2, 1, 1, 1));
        assert_eq!(inose_monodromy(c([0, 2, 0, 2])), m(2, 3, 3, 5));
        assert_eq!(inose_monodromy(c([0, 0, 0, 0])), m(0, 1, -1, -1));
        assert_eq!(inose_monodromy(c([0, 1, 0, 2])), m(1, 2, 1, 3));
        assert_eq!(inose_monodromy(c([0, 2, 1, 2])), m(1, 1, 2, 3));
        assert!(InoseCase::new([0, 3, 0, 0]).is_err());
        assert!(InoseCase::new([0, -1, 0, 0]).is_err());
    }

    #[test]
    fn inose_classification() {
        for (case, expected) in inose_reference_cases() {
            let cls = classify_inose_boundary(InoseCase::new(case).unwrap());
            assert_eq!(cls.triple, Some(t(expected.0, expected.1, expected.2)), "{case:?}");
            assert!(cls.certificate.unwrap().verify());
        }
        // the trivial case is elliptic and matches nothing
        assert!(classify_inose_boundary(InoseCase::new([0, 0, 0, 0]).unwrap()).triple.is_none());
    }

    #[test]
    fn alternative_gamma_breaks_case_two() {
        let gamma = HomologyClass::new(1, 1).unwrap();
        let case2 = InoseCase::new([0, 2, 0, 2]).unwrap();
        assert_ne!(inose_monodromy_with_gamma(case2, gamma).trace(), BigInt::from(7));
    }
}

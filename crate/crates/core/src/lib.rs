//! Exact and numerical machinery for the `T_{p,q,r}` family of hypersurface
//! singularities `x^p + y^q + z^r + axyz`.
//!
//! The crate is split by subject:
//!
//! - [`sl2z`]: exact `SL(2,Z)` arithmetic, link monodromies `A_{p,q,r}`,
//!   conjugacy decisions with certificates and Dehn-twist words on the torus.
//! - [`quadlattice`]: integral Gram lattices (the `T(p,q,r)` diagrams, `E_k`,
//!   `H`), discriminants, signatures, Smith normal form and radicals.
//! - [`milnorfiber`]: the surface system of the Milnor fiber, its intersection
//!   form, the Milnor monodromy on `H_2` and the section pairing.
//! - [`cuspdual`]: resolution cycles, the dual-cycle rule, periodic modified
//!   continued fractions and the unit `α_V` acting on `Z ⊕ Zω`.
//! - [`k3glue`]: the strange-duality table, K3 lattice gluing and the Inose
//!   fibration monodromy classification.
//! - [`numcheck`]: a floating-point verifier for the Lagrangian torus
//!   fibration `g|_{X_t}` (critical points, Hessians, symplectic inequalities).
//!
//! Everything except [`numcheck`] is exact: integers are arbitrary precision
//! and no floating point is involved.

pub mod cuspdual;
pub mod intjson;
pub mod k3glue;
pub mod matrix;
pub mod milnorfiber;
pub mod numcheck;
pub mod quadlattice;
pub mod quadratic;
pub mod sl2z;

pub use cuspdual::{CycleData, Triple};
pub use matrix::IntMatrix;
pub use quadlattice::GramLattice;
pub use quadratic::QuadIrrational;
pub use sl2z::{ConjugacyCertificate, HomologyClass, Sl2Matrix, TwistWord};

//! Euclidean Jordan algebra toolkit for copositive cones over symmetric cones.
//!
//! The crate covers, bottom-up:
//!
//! * [`algebra`]: concrete Euclidean Jordan algebras (orthant, PSD and Lorentz
//!   factors and their direct sums), spectral decompositions and cone
//!   membership.
//! * [`peirce`]: Peirce decompositions relative to an idempotent and to a
//!   Jordan frame, and frame completion.
//! * [`operators`]: self-adjoint operators on the algebra, tensors, Peirce
//!   blocks, quadratic-form expansion and zero padding.
//! * [`cones`]: copositivity oracles and completely positive elements.
//! * [`caselaw`]: the eleven-case classification of block quadruples and the
//!   perturbation curves used to show that padded copositive cones are faces.
//! * [`facial`]: faces of the copositive cone, the non-exposed extreme ray
//!   witness and its certificate.
//! * [`suites`]: invariant suites shared by the CLI and the acceptance tests.

pub mod algebra;
pub mod caselaw;
pub mod cones;
pub mod error;
pub mod facial;
pub mod linalg;
pub mod operators;
pub mod peirce;
pub mod suites;

pub use algebra::{
    identity, in_symmetric_cone, inner, is_idempotent, is_primitive, jordan_product,
    random_cone_element, random_element, spectral, Algebra, AlgebraRef, AlgebraSpec, Element,
    Factor, SpectralDecomposition, DEFAULT_TOL,
};
pub use caselaw::{CaseTag, Quadruple};
pub use cones::{in_cop, make_cp, Budget, CopMethod, CopReport, CopStatus, CpElement};
pub use error::{Error, Result};
pub use facial::{build_witness, WitnessCertificate};
pub use operators::{CornerOp, LinearOp, Operator, SelfAdjointOp};
pub use peirce::{complete_frame, fine_peirce, peirce_halves, IdempotentSplit, JordanFrame, Pair, PeirceSystem};

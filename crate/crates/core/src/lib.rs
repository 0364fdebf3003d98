//! Exact computation of the Cartier operator, its rank and the a-number of
//! cyclic covers `y^n = f(x)` of the projective line over finite fields.
//!
//! The main path ([`cartier`]) builds the operator block by block on the
//! eigenspaces of the deck transformation. [`oracle`] recomputes the same
//! quantities by unrelated routes, and [`harness`] runs randomized scans and
//! campaigns that compare the two and check the rank bounds.

pub mod cartier;
pub mod curve;
pub mod error;
pub mod fields;
pub mod harness;
pub mod matrix;
pub mod oracle;
pub mod poly;

pub use cartier::{
    analyze, cartier_block, check_bounds, decomp, full_matrix, h_rank, rank_semilinear,
    AnalysisReport, BlockSummary, BoundCheck, CartierBlock, Verification,
};
pub use curve::{
    canonicalize_type, normalize_infinity, sigma_eps, BranchPoint, CurveInstance, CurveSpec,
    EigenData, RamificationType,
};
pub use error::{
    CurveError, FieldError, HarnessError, OracleError, ParseError, PolyError, Violation,
};
pub use fields::{make_field, Embedding, FieldCtx, FieldElem, MAX_FIELD_ORDER};
pub use matrix::Matrix;
pub use poly::{gcd_all, gcd_monic, Poly};

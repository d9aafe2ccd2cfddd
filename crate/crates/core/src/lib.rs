//! Exact-arithmetic engine for spectral / tiling questions about finite
//! unions of rational intervals: spectral-pair verification, tiling
//! decisions, the two- and three-interval case classifiers, generalized
//! Vandermonde determinants with their Schur quotients, root-of-unity
//! solution sets on the 3-torus, and the exhaustive small-denominator
//! search driver.
//!
//! Everything is computed in exact rational or cyclotomic arithmetic;
//! floating point never decides anything.

pub mod classify;
pub mod embedding;
pub mod exactnum;
pub mod geometry;
pub mod rational;
pub mod vandermonde;

pub use classify::{
    classify_three_intervals, classify_two_intervals, circle_relation, tiles_decision,
    verify_completeness, verify_orthogonality, Branch, BranchReport, CircleRelation,
    ClassifyError, Completeness, Conclusion, PeriodicSpectrum, TilesOutcome, TilingCertificate,
};
pub use embedding::{
    detect_period, membership_test, null_form, phi, span_rank, EmbeddingError, PhiVector,
    SpanBasis,
};
pub use exactnum::{
    cyclo_invert, cyclotomic_poly, root_sum, CycloPoly, CyclotomicNumber, ExactError,
};
pub use geometry::{
    cell_decomposition, ft_is_zero, CellDecomposition, GeometryError, IntervalUnion,
};
pub use rational::Rational;
pub use vandermonde::{
    exceptional_search, gv_det, schur_and_t, torus_solutions, GVExponents, GVPolynomial,
    SearchOptions, SearchReport, TorusSolutionSet, VandermondeError,
};

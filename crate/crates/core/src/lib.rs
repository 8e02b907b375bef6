//! Fusion algebras of compact quantum groups and their asymptotic invariants.
//!
//! The crate builds fusion algebras — the rank-one deformation families
//! SU_q(2) and SO_q(3), the free unitary word model, products, q-deformations
//! of the simple compact Lie groups, and user-supplied finite fragments — and
//! computes the quantities that measure their large-scale geometry:
//!
//! * weighted balls, spheres and boundaries over a generating set, with
//!   Folner-ratio scans ([`metric`]);
//! * exponential growth rates, including the free unitary closed form as the
//!   largest root of an explicit cubic ([`growth`]);
//! * Kazhdan constants for the regular representation, with truncated-operator
//!   validation ([`spectral`]);
//! * exact root-system data and quantum Weyl dimensions for all simple types
//!   ([`lie`]).
//!
//! Exact arithmetic lives in [`qarith`]: Laurent polynomials in `q^(1/2)` with
//! big-integer coefficients carry q-integers and quantum dimensions exactly.

pub mod error;
pub mod fusion;
pub mod growth;
pub mod lie;
pub mod metric;
pub mod models;
pub mod qarith;
pub mod spectral;

pub use error::{Error, Result};
pub use fusion::{
    load_custom, product_algebra, validate_axioms, AxiomReport, CustomModel, FormalSum,
    FusionModel, Label, ProductModel,
};
pub use growth::{
    gamma_lower_bound, growth_csv, growth_from_balls, product_growth_check, uf_rate,
    uf_sphere_sizes, uf_sphere_sizes_exact, CubicSpec, GrowthEstimate, GrowthMethod,
    ProductGrowthReport,
};
pub use lie::{
    build_root_system, classical_dim, dim_sandwich_check, gamma, growth_for_set, quantum_dim,
    quantum_dim_exact, uniform_growth, DominantWeight, LieType, RootSystem, SandwichReport,
    UniformGrowth,
};
pub use metric::{
    boundary, build_balls, c_x_constant, folner_scan, inner_boundary, set_size, BallTable,
    CxReport, FolnerScan, GeneratingSet, ScanRow, ScanStrategy,
};
pub use models::{
    q_from_f, q_from_trace, so_param_from_n, so_product, su_product, uf_dim, uf_dim_exact,
    uf_product, SoModel, SuModel, UfLetter, UfModel, UfWord,
};
pub use qarith::{laurent_eval, qint_exact, qnum, qnum_ln, HugeSum, LaurentPoly, QContext};
pub use spectral::{
    chebyshev_p, kazhdan_closed_form, kazhdan_generator_bound, truncated_kazhdan_estimate, Family,
    KazhdanResult, TruncatedRegularOp,
};

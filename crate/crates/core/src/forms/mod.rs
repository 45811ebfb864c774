//! Level-one cusp forms: exact q-expansions, Hecke matrices and numerical
//! eigenforms.

pub mod basis;
pub mod cache;
pub mod eigen;
pub mod hecke;
pub mod numeric;
pub mod qexp;

pub use basis::{cusp_dimension, cuspform_basis, CuspBasis, LevelOneRing};
pub use cache::{CacheKind, CoefficientCache};
pub use eigen::{eigenforms, eigenforms_from_basis, EigenformRecord};
pub use hecke::{hecke_matrix, hecke_matrix_on, trace_tn, trace_tn_star, HeckeMatrix};
pub use qexp::{delta, eisenstein, QExpansion};

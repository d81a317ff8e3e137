//! Exact tools for central hyperplane arrangements over GF(p^k) and Q:
//! intersection lattices, and constructive freeness certificates through
//! MAT-partitions, MAT*-partitions and inductive (addition-deletion) chains.
//!
//! ```
//! use matfree::prelude::*;
//!
//! let f2 = FieldSpec::gf(2).unwrap();
//! let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
//! let a = parse_defining_polynomial("x*y*z*(x+y)*(x+z)*(y+z)", &f2, &vars).unwrap();
//! assert!(find_mat_partition(&a, Variant::Mat).unwrap().is_refutation());
//! assert!(find_mat_partition(&a, Variant::MatStar).unwrap().is_certificate());
//! ```

pub mod arrangement;
pub mod error;
pub mod exactfield;
pub mod freeness;
pub mod guard;
pub mod lattice;
pub mod linalg;
pub mod parse;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::arrangement::{Arrangement, Hyperplane};
    pub use crate::error::{Error, Result};
    pub use crate::exactfield::{FieldSpec, Scalar};
    pub use crate::freeness::{
        check_inductively_free, covers_by_union, exponents_from_partition, find_mat_partition, mat_step_check,
        verify_inductive_certificate, verify_inductive_chain, verify_mat_partition, CoverMethod, Exponents,
        InductiveCertificate, MatCertificate, OrderedPartition, Refutation, SearchOutcome, Variant,
    };
    pub use crate::lattice::{build_lattice, lattice_isomorphic, IntersectionLattice};
    pub use crate::linalg::{Matrix, Subspace};
    pub use crate::parse::{parse_defining_polynomial, read_arrangement, ArrangementFile};
}

//! Exact construction of linear monads on `X = Pⁿ × Pⁿ × Pᵐ × Pᵐ`, together with
//! the cohomological and intersection-theoretic machinery used to certify that
//! the kernel bundle is stable and the cohomology bundle is simple.
//!
//! Module map:
//!
//! * [`mring`]: sparse multigraded polynomials over ℤ, polynomial matrices,
//!   prime-field evaluation and rank.
//! * [`monad`]: the Hankel/Toeplitz blocks, the assembled maps `f` and `g`, and
//!   the monad-condition checks.
//! * [`cohomology`]: Bott formula on a single factor, Künneth on `X`, sums and
//!   exterior powers of line bundles.
//! * [`chow`]: truncated Chow ring, first Chern classes, `deg_L`, slopes.
//! * [`stability`]: the vanishing scan establishing stability of `T = ker g`.
//! * [`les`]: interval propagation through long exact sequences and the
//!   simplicity certificate for `E = ker g / im f`.

pub mod chow;
pub mod cohomology;
pub mod error;
pub mod les;
pub mod monad;
pub mod mring;
pub mod stability;

pub use chow::{BundleInvariants, ChowClass, DegreeDiscrepancy};
pub use cohomology::{CohTable, LineBundleSum};
pub use error::{Error, Result};
pub use les::{CohProfile, Conclusion, Interval, ShortExactSeq, SimplicityCertificate};
pub use monad::{Block, FloystadInput, MonadSpec, RankReport, RankVerdict};
pub use mring::{FieldMatrix, Group, Monomial, MultiDegree, PolyMatrix, Polynomial, PrimeField, SpaceParams, Variable};
pub use stability::{ScanEntry, ScanVerdict, StabilityReport, StabilityScanConfig};

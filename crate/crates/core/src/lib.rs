//! Multidegrees, initial ideals and multigraded Hilbert polynomials of the
//! closure of the image of `P^r ⇢ P^{r-d_1} × ... × P^{r-d_n}`, the product of
//! linear projections away from subspaces `V_1, ..., V_n ⊂ K^{r+1}`.

pub mod arrangement;
pub mod degrees;
pub mod detideal;
pub mod exec;
pub mod field;
pub mod hilbert;
pub mod instance;
pub mod linalg;
pub mod monomial;
pub mod oracle;

pub use arrangement::{Arrangement, Mask, RankTable};
pub use exec::Exec;
pub use field::{FieldSpec, Scalar};
pub use instance::{Instance, InstanceFile};
pub use linalg::{Matrix, SampleConfig, Subspace};
pub use oracle::Verdict;

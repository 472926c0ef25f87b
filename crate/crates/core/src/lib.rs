//! Exact computations in the Schur category of finite multisets.
//!
//! Objects are finite multisets; the morphisms worth linearizing are
//! *multijections* (support maps whose fibre multiplicity sums reproduce the
//! target multiplicities).  Formal nonnegative-integer combinations of
//! *graphs* — margin-constrained integer matrices — form a rigoid whose
//! composition introduces multinomial coefficients.  Modules over that rigoid
//! are the same thing as strict polynomial functors, and everything here is
//! built so this equivalence can be checked by exact integer arithmetic:
//!
//! * [`multiset`], [`multijection`] — the underlying combinatorics,
//! * [`schurcat`] — graphs, formal sums, structure constants,
//! * [`gamma`] — divided-power functors on free modules, the realization
//!   functor used as the master oracle,
//! * [`exactlin`] — Smith normal form and finitely presented modules,
//! * [`plocal`] — p-power-multiplicity covers and split idempotents,
//! * [`sigma`] — symmetric-group modules and scalar extension,
//! * [`polyfun`] — module presentations, functor evaluation, the box product.
//!
//! No floating point is used anywhere.

pub mod arith;
pub mod error;
pub mod exactlin;
pub mod exec;
pub mod gamma;
pub mod json;
pub mod multijection;
pub mod multiset;
pub mod plocal;
pub mod polyfun;
pub mod ring;
pub mod schurcat;
pub mod sigma;
pub mod verify;

pub use error::{Error, Result};
pub use multiset::{Label, Multiset, PartitionShape};
pub use ring::{Coeff, Ring};

//! Stability of points under linear actions of complex tori and `GL(r)`.
//!
//! The crate works with a complex reductive group `G` (a torus `(ℂ*)^k`
//! embedded as diagonal matrices, or `GL(r, ℂ)`), a unitary representation
//! of its maximal compact subgroup on `ℂ^n`, and a central shift `τ` of the
//! moment map. On top of that it provides
//!
//! * [`lie`]: Hermitian-type elements, parabolic subalgebras, the unipotent
//!   equivalence on the cone of Hermitian-type elements and its retraction
//!   onto Hermitian matrices;
//! * [`momentum`]: moment map, maximal weights, energies and the
//!   Kempf–Ness integral in closed form;
//! * [`stability`]: analytic verdicts (exact linear programming for tori,
//!   frame sampling for `GL(r)`) with re-checkable certificates;
//! * [`flow`]: gradient descent of the Kempf–Ness function and the
//!   classifications derived from it.
//!
//! Only `alloc` is required.

#![no_std]

extern crate alloc;

pub mod error;
pub mod flow;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod lp;
pub mod momentum;
pub mod rep;
pub mod stability;
pub mod tol;

pub use error::{Error, Result};
pub use group::{AlgebraElement, GroupKind};
pub use linalg::{CMat, CVec, C64};
pub use momentum::{MaximalWeight, Symplectization};
pub use rep::Representation;
pub use stability::{Certificate, Confidence, Level, Verdict};


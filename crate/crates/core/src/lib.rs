//! Exact enumerative invariants of singular plane curves.
//!
//! The crate has three layers:
//!
//! * [`ring`] and [`spaces`]: graded quotient rings of the parameter spaces
//!   of planar curves in P3 (projective bundles over the dual P3) with exact
//!   rational arithmetic and top-degree integration.
//! * [`planar`]: integer recursions for nodal and cuspidal plane curves.
//! * [`conics`] and [`fbcubic`]: the degenerate line-plus-conic classes and
//!   the linear system whose solution yields the characteristic numbers of
//!   nodal planar cubics in P3.
//!
//! [`oracle`] holds independent cross-check implementations and [`verify`]
//! runs the full consistency suite.

pub mod conics;
pub mod error;
pub mod fbcubic;
pub mod oracle;
pub mod planar;
pub mod registry;
pub mod ring;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{format_rational, rat, Monomial, Rational, RingElement, RingSpec};

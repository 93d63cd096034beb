//! Combinatorics of fine compactified Jacobians of reducible curves.
//!
//! A reduced curve is described by its dual multigraph: one vertex per
//! irreducible component and `|C_i ∩ C_j|` edges between components. From
//! that data alone this crate decides
//!
//! * whether a polarization `q` is general,
//! * which multidegrees are `q`-stable (the irreducible components of the
//!   fine compactified Jacobian `J̄_X(q)`),
//! * the degree class group and the complexity `c(X)`,
//! * all fine compactified Jacobians of a fixed degree up to translation,
//! * which of them admit an Abel map, with an explicit twisting degree.
//!
//! ```
//! use jaccomb::{CurveGraph, Polarization, stable_multidegrees};
//!
//! let i3 = CurveGraph::cycle(3)?;
//! let q: Polarization = r#"["1/3", "1/3", "-2/3"]"#.parse()?;
//! assert_eq!(stable_multidegrees(&i3, &q)?.len(), 3);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod abel;
pub mod class_group;
pub mod classification;
pub mod cli;
pub mod curve;
mod error;
pub mod polarization;
mod search;
pub mod stability;

pub use abel::{abel_admissible, admissible_classes, is_twist_witness, polarization_for_twist, AbelVerdict};
pub use class_group::{build_class_group, same_class, spanning_tree_count, ClassGroup};
pub use classification::{classify, classify_auto, signature_of, JacobianClass, Signature};
pub use curve::{CurveGraph, Subcurve};
pub use error::{Error, Result};
pub use polarization::{induce_on_blocks, is_general, perturb_to_general, Polarization};
pub use stability::{is_semistable, is_stable, stable_multidegrees, Multidegree};

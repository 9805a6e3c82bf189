//! Numerical escape-time analysis for finitely generated semigroups of
//! entire functions.
//!
//! The crate classifies points of the complex plane by how their orbits
//! behave under every finite composition ("word") of a set of generator
//! functions:
//!
//! * **non-escaping** — some word's orbit stays bounded,
//! * **escaping** — every word's orbit diverges,
//! * **fast escaping at level L** — every word's orbit additionally keeps
//!   pace with the iterated maximum modulus of that word, up to an index
//!   shift of `L`.
//!
//! The pieces fit together as follows:
//!
//! * [`expr`] — a small expression language for entire functions
//!   (`exp`, `sin`, `cos`, `sinh`, `cosh`, polynomials, constant division),
//!   with a parser, canonical printer, and an evaluator that switches to a
//!   log-polar representation once values leave double range.
//! * [`maxmod`] — maximum modulus `M(r)` on circles by sampling plus
//!   golden-section refinement, threshold radii `R` with `M(r) > r`, and
//!   overflow-safe towers `M^n(R)`.
//! * [`semigroup`] — generator sets, word enumeration, and composite
//!   application of words to points.
//! * [`classify`] — the per-point classifier combining orbits and towers.
//! * [`grid`] — deterministic parallel classification of pixel grids,
//!   PPM rendering, and boundary-mask extraction.
//! * [`verify`] — an empirical harness that samples points and tests the
//!   structural properties the classifier is expected to satisfy.
//! * [`config`] — the line-based run-configuration format shared by the
//!   CLI tools.
//!
//! ```
//! use fastesc_core::expr::parse_function;
//! use fastesc_core::semigroup::Semigroup;
//! use fastesc_core::classify::{classify_point, ClassifierConfig, Verdict};
//! use fastesc_core::Complex;
//!
//! let f = parse_function("0.25*exp(z)").unwrap();
//! let s = Semigroup::new(vec![f]).unwrap();
//! let mut cfg = ClassifierConfig::default();
//! cfg.r_override = Some(5.0);
//! let c = classify_point(&s, Complex::new(5.0, 0.0), &cfg);
//! assert_eq!(c.verdict, Verdict::FastEscaping { level: 0 });
//! ```

pub mod classify;
pub mod config;
pub mod expr;
pub mod grid;
pub mod maxmod;
pub mod semigroup;
pub mod verify;

/// Points of the complex plane.
pub type Complex = num_complex::Complex<f64>;

/// Magnitude cap for rectangular evaluation. Values whose modulus leaves
/// `[1/CAP, CAP]` are carried in log-polar form instead.
pub const OVERFLOW_CAP: f64 = 1e300;

/// `ln(OVERFLOW_CAP)`.
pub const LOG_OVERFLOW_CAP: f64 = 690.7755278982137;

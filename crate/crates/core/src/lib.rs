//! Exact Bayesian inference for a loop-free discrete probabilistic language.
//!
//! Distributions over program variables are represented as probability
//! generating automata ([`Pga`]): weighted automata whose series `I·M*·F` is
//! the probability generating function of the distribution. Program
//! statements become automaton constructions (concatenation, weighted union,
//! guard products, label substitution) and posterior probabilities are read
//! off as power-series coefficients with exact rational arithmetic.
//!
//! ```
//! use pga_core::{lang, semantics, analysis, rational::rat, Valuation};
//!
//! let program = lang::parse(
//!     "P := bernoulli(1/2); if (P = 1) { R := 1 } else { R := bernoulli(1/2) }; observe(R = 1)",
//! ).unwrap();
//! let post = semantics::posterior(&program, &Default::default()).unwrap();
//! let p1 = analysis::coefficient(&post, &Valuation::from_pairs([("P", 1)])).unwrap();
//! assert_eq!(p1, rat(2, 3));
//! ```

pub mod analysis;
pub mod automata;
pub mod error;
pub mod guard;
pub mod lang;
pub mod oracle;
pub mod rational;
pub mod semantics;
#[cfg(feature = "testgen")]
pub mod testgen;

pub use analysis::{DistTable, RationalMatrix, RationalVector, Valuation};
pub use automata::{Label, Pga, Transition, VarId};
pub use error::{PgaError, Result};
pub use guard::{Cmp, Guard};
pub use rational::Rational;
pub use semantics::TransformerConfig;

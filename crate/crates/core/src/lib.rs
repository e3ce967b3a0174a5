//! Exact classification of statistical discrimination between worker
//! populations.
//!
//! A population is a finite-support distribution over posterior beliefs
//! about a worker's skill type. Two populations with the same skill
//! distribution are compared through the Blackwell (mean-preserving spread)
//! order, decided exactly by a rational linear-programming feasibility
//! check. When dominance fails, the Farkas certificate of the infeasible
//! coupling program is turned into an explicit firm that pays the dominated
//! side strictly less.
//!
//! The crate is organised around that pipeline:
//!
//! - [`model`]: skills, beliefs, populations, firms and the surplus formulas.
//! - [`lp`]: exact phase-one simplex returning a point or a Farkas certificate.
//! - [`blackwell`]: dominance, witness firms and the three-way classification.
//! - [`exante`]: the costly-interview model, exclusion and the zero-cost order.
//! - [`oracle`]: seeded generators and sampling-based refutation checks.
//! - [`scenario`] and [`report`]: the exact-rational file formats.
//! - [`cli`]: the `statdisc` command line.
//!
//! ```
//! use statdisc::{blackwell, model::{Belief, Population}, rational::q};
//!
//! let uninformed = Population::point_mass(Belief::new(vec![q(1, 2), q(1, 2)]).unwrap());
//! let informed = Population::from_raw(vec![
//!     (vec![q(1, 1), q(0, 1)], q(1, 2)),
//!     (vec![q(0, 1), q(1, 1)], q(1, 2)),
//! ])
//! .unwrap();
//!
//! let verdict = blackwell::classify(&uninformed, &informed).unwrap();
//! assert_eq!(verdict.tag(), blackwell::Tag::SystematicAgainstFirst);
//! ```

pub mod blackwell;
pub mod cli;
pub mod error;
pub mod exante;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod scenario;

pub use error::Error;
pub use rational::Rational;

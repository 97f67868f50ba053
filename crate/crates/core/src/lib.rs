//! Exact fairness measurements for allocating indivisible chores.
//!
//! Everything is computed in exact rational arithmetic. The crate covers:
//!
//! * the model: [`Instance`], [`CostFunction`] variants from additive up to
//!   subadditive oracles, and [`Allocation`];
//! * maximin shares ([`mms`]) with witness partitions;
//! * minimal approximation factors for EF, EF1, EFX, MMS and PMMS
//!   ([`criteria`]) and the implied guarantees between them ([`implied`]);
//! * allocation algorithms ([`allocators`]);
//! * a catalog of parametric worst-case instances ([`catalog`]);
//! * brute-force price-of-fairness search and verification sweeps
//!   ([`search`], [`verify`]).
//!
//! ```
//! use chorefair::{q, Allocation, CostFunction, Criterion, Instance};
//! use chorefair::criteria::min_alpha;
//!
//! let inst = Instance::new(
//!     3,
//!     vec![
//!         CostFunction::additive([q(1, 1), q(1, 1), q(2, 1)]),
//!         CostFunction::additive([q(2, 1), q(1, 1), q(1, 1)]),
//!     ],
//! )?;
//! let alloc = Allocation::from_assignment(&[0, 1, 0], 2)?;
//! assert_eq!(min_alpha(&inst, &alloc, Criterion::Ef)?, q(3, 1).into());
//! assert_eq!(min_alpha(&inst, &alloc, Criterion::Ef1)?, q(1, 1).into());
//! # Ok::<(), chorefair::Error>(())
//! ```

pub mod allocation;
pub mod allocators;
pub mod catalog;
pub mod chore_set;
pub mod cost;
pub mod criteria;
pub mod error;
pub mod implied;
pub mod instance;
pub mod mms;
pub mod rational;
pub mod search;
pub mod verify;

pub use allocation::Allocation;
pub use catalog::{make_family, FamilyBundle, FamilyId, FamilyParams};
pub use chore_set::ChoreSet;
pub use cost::CostFunction;
pub use criteria::{Criterion, Evaluator};
pub use error::{Error, Result};
pub use implied::{implied_guarantee, Guarantee, Setting};
pub use instance::Instance;
pub use rational::{q, ExtendedRational, Rational};

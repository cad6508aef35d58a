//! Exact apportionment methods, approval-based committee rules, and the
//! party-list embedding that turns every committee rule into an apportionment
//! method.
//!
//! All arithmetic is over arbitrary-precision rationals and every rule returns
//! its complete set of tied outcomes. The crate is `no_std` and needs only
//! `alloc`.
//!
//! ```
//! use apportion_core::{divisor_apportion, ApportionmentInstance, DivisorSequence};
//!
//! let inst = ApportionmentInstance::new(vec![6, 7, 39, 48], 10).unwrap();
//! let outcome = divisor_apportion(&inst, &DivisorSequence::dhondt()).unwrap();
//! assert_eq!(outcome.unique().unwrap().as_slice(), &[0, 0, 4, 6]);
//! ```
#![no_std]

extern crate alloc;

pub mod apportionment;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod multiwinner;
pub mod properties;
pub mod rational;
pub mod reduction;
pub mod sequence;

pub use apportionment::{
    compare_claims, divisor_apportion, divisor_apportion_with, largest_remainder,
    largest_remainder_with, move_seat,
};
pub use error::{Error, Result};
pub use model::{
    ApportionmentInstance, ApprovalProfile, Committee, Limits, OutcomeSet, SeatDistribution,
};
pub use multiwinner::{CommitteeSet, Election, Grouping, Options, Rule, Winners};
pub use rational::Rational;
pub use reduction::{embed, induced_apportionment, induced_apportionment_with, PartyListEmbedding, Route};
pub use sequence::{DivisorFamily, DivisorSequence, WeightSequence};

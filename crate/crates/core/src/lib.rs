//! Finite set systems and the machinery around sunflowers.
//!
//! The crate is `no_std` with `alloc`. Everything here is pure computation:
//! family representation and links, p-biased satisfaction probabilities,
//! sunflower and robust-sunflower search, spreadness certification, the
//! width-reduction experiment, the lower-bound constructions, and two
//! applications (Kneser packings and nowhere-zero vectors). File formats,
//! reports and the command-line driver live in `sunflower-cli`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod apps;
pub mod constructions;
mod error;
pub mod probability;
pub mod rational;
pub mod reduction;
pub mod rng;
pub mod set;
pub mod spread;
pub mod sunflower;

pub use error::{Error, Result};
pub use rational::{Bias, Rational};
pub use set::{GroundSet, MemberSet, SetFamily, SunflowerWitness};

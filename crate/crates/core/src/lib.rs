//! Identifying and predicting upsets in soccer matches from pre-game fan sentiment.
//!
//! The crate is `no_std` (it needs `alloc`) and carries every algorithmic piece of
//! the pipeline: odds-based upset scoring, hashtag attribution of tweets, sentiment
//! scoring, the Mann-Whitney U test, per-window feature vectors, a Gaussian naive
//! Bayes classifier with stratified cross-validation, betting backtests, in-game
//! signal summaries and a seeded synthetic corpus generator. File formats and the
//! command-line driver live in the `upset-cli` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod betting;
pub mod domain;
pub mod error;
pub mod features;
pub mod ingest;
pub mod learn;
pub mod odds;
pub mod rng;
pub mod sentiment;
pub mod signals;
pub mod stats;
pub mod synth;

pub use domain::{
    validate_game, ClassLabel, GameRecord, OddsTriple, OutcomeKind, Timestamp, TweetRecord,
};
pub use error::{Error, Result};

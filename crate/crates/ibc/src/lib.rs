//! File formats, nonce bookkeeping and the command-line front end for
//! `ibc-core`.

pub mod cli;
pub mod fixtures;
pub mod ledger;
pub mod nonce_log;
pub mod profile_file;
pub mod selftest;

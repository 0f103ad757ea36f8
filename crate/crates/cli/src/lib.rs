//! Study drivers and plotting behind the `zsnft` command-line tool.

pub mod plot;
pub mod study;

//! Duplication-with-transposition distances for q-ary strings.
//!
//! A duplication copies a block `b` of a string and inserts the copy a
//! number of symbols to its right; in the β-approximate variant the copy may
//! differ from `b` in at most `⌊β·|b|⌋` positions. Every string descends from
//! a root (a string with pairwise distinct symbols), and `f_β(v)` is the
//! length of a shortest such history.
//!
//! - [`word`]: strings, duplication and deduplication, roots, periods.
//! - [`repeat`]: exact and approximate repeat finders, greedy certificates.
//! - [`engine`]: exact `f_β(v)` by search, the exhaustive table of `f_β(n)`.
//! - [`debruijn`]: de Bruijn sequences and substring-count lower bounds.
//! - [`bounds`], [`codes`]: closed-form bounds and exact code sizes.
//! - [`codec`], [`certificate`]: replayable path certificates and their
//!   quadruple encoding.

pub mod beta;
pub mod bounds;
pub mod certificate;
pub mod codec;
pub mod codes;
pub mod debruijn;
pub mod engine;
mod error;
pub mod golden;
pub mod repeat;
pub mod word;

pub use beta::Beta;
pub use certificate::{verify_certificate, CertStep, PathCertificate};
pub use error::{Error, Result};
pub use word::{DupStep, QString};

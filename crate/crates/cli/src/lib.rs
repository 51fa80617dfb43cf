//! Library half of the `telescope` binary: artifact format, proving,
//! re-checking and the OEIS cross-check.

pub mod artifact;
pub mod check;
pub mod oeis;
pub mod prove;

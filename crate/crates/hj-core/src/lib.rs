//! Exact combinatorics and certified numerics behind the bound HJ(4,2) <= 10^11.
//!
//! Everything here is `no_std` + `alloc`: the heavy lifting is exact integer
//! and rational arithmetic, plus a small dyadic interval engine for the few
//! places where irrational quantities (square roots, pi, an exponential decay
//! factor) enter the final inequality. IO, parallel drivers, and file formats
//! live in the companion `hjlab` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bound;
pub mod chain;
pub mod density;
pub mod embedding;
pub mod gadget;
pub mod grid;
pub mod interval;
pub mod lower;
pub mod nums;
pub mod subcube;

/// A caller-supplied argument outside an operation's domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InputError(pub &'static str);

impl core::fmt::Display for InputError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.0)
    }
}

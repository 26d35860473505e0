//! Counting and enumerating Schur rings over cyclic groups of prime-power
//! order.
//!
//! The crate has two independent halves that are meant to be checked against
//! each other:
//!
//! * [`counting`], [`sequences`] and [`genfun`] produce the number of Schur
//!   rings over `Z_{p^n}` from layer recurrences, as polynomials in
//!   `x = d(p-1)` for odd `p` and as integers for `p = 2`.
//! * [`units`], [`schur`] and [`enumerate`] build the rings themselves,
//!   check the Wielandt axioms, and classify each ring by the subfield of
//!   `Q(zeta_{p^n})` it maps onto.

pub mod algebra;
pub mod cli;
pub mod counting;
pub mod enumerate;
pub mod fixtures;
pub mod genfun;
pub mod report;
pub mod schur;
pub mod sequences;
pub mod units;

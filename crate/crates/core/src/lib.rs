//! Character sums over finite fields.
//!
//! The library tabulates small finite fields GF(p^n), evaluates Gauss,
//! Jacobi and Katz hypergeometric sums together with the double character
//! sum g(chi, eta) along four algebraically equal routes, and verifies the
//! identities both numerically and exactly modulo witness primes.

pub mod arith;
pub mod characters;
pub mod error;
pub mod gf;
pub mod sums;
pub mod verify;

pub use characters::{enumerate_characters, AddCharacter, CharValue, MulCharacter};
pub use error::{Error, Result};
pub use gf::{Elem, FieldSpec, FieldTable, QuadExtension};
pub use sums::{
    g_direct, g_gauss_form, g_jacobi_triple, gauss_sum, hyper_mellin, hyper_naive, jacobi_sum,
    jacobi_via_gauss, s_sum, theorem_rhs, theorem_tuples, CharTuple, GForm, GaussTable, SumValue,
};
pub use verify::{
    check_theorem, find_witness_primes, scan_field, witness_check, PairResult, Report, ScanOptions,
    ScanReport, WitnessContext, WitnessPrime,
};

//! Exact-arithmetic construction and verification of the magic square of
//! Lie algebras.
//!
//! The library builds the real forms of the exceptional simple Lie algebras
//! (up to the 248-dimensional E8) from composition algebras and 3×3 hermitian
//! Jordan algebras, by three independent routes, and mechanically verifies
//! that the routes agree:
//!
//! * the Tits construction `Der K1 ∔ Der J ∔ K1′⊗J′`,
//! * the Vinberg construction `A3′(K1⊗K2) ∔ Der K1 ∔ Der K2`,
//! * the triality construction `Tri K1 ⊕ Tri K2 ∔ 3(K1⊗K2)`.
//!
//! Every number reported — dimensions, Killing-form signatures, generic
//! ranks, structure constants — is computed over the rationals with no
//! floating point anywhere.
//!
//! Modules, bottom-up:
//!
//! * [`exactla`] — arbitrary-precision rational scalars, dense/sparse
//!   matrices, exact kernels and symmetric-congruence signatures;
//! * [`cayley`] — composition algebras `R, C, H, O` and their split forms
//!   by iterated doubling;
//! * [`tensor`] — tensor products `K1 ⊗ K2` of composition algebras;
//! * [`trialg`] — triality algebras `Tri K ≅ Der K ∔ 2K′`;
//! * [`liealg`] — Lie algebras as exact structure-constant tensors, with
//!   Jacobi verification, Killing signatures, generic rank, and a
//!   derivation-algebra solver;
//! * [`jordan`] — hermitian matrix Jordan algebras `H_n(K)`, their
//!   derivation, structure, and conformal algebras;
//! * [`matmodels`] — matrix models `sa/sl/sp` of the magic-square rows;
//! * [`squares`] — the three magic-square constructions, matrix models,
//!   and the cross-construction isomorphism checks;
//! * [`splitforms`] — derivations of doubled algebras, gradings, Cartan
//!   decompositions and maximal-compact identification;
//! * [`apxid`] — randomized exact checks of the auxiliary matrix identities
//!   the constructions rely on;
//! * [`cli`] — the command-line front end and the JSON export format.

pub mod exactla;
pub mod cayley;
pub mod tensor;
pub mod liealg;
pub mod trialg;
pub mod jordan;
pub mod matmodels;
pub mod squares;
pub mod splitforms;
pub mod apxid;
pub mod cli;

pub use exactla::{QMatrix, Rational, SignatureTriple};

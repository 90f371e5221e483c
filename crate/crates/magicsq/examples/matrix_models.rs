//! Matrix models of the magic-square rows.
//!
//! The rows of the split-row magic square have concrete matrix
//! descriptions: antihermitian (`sa`), traceless (`sl`), and symplectic
//! (`sp`) matrices over a composition algebra, with a derivation-valued
//! correction term that makes the bracket close even over the octonions.
//! The example builds the octonion column — F4, E6(-26), E7(-25) — and the
//! 2×2 models `sl(2,O) ≅ so(9,1)` and `sp(4,O) ≅ so(10,2)`, and checks
//! `sa(n,C)`/`sa(n,H)` against `su(n)`/`sq(n)`.
//!
//! Run with: `cargo run --release --example matrix_models`

use magicsq::cayley::build_algebra;
use magicsq::cli::fmt_signature;
use magicsq::liealg::{compare, identify, so_pq, sq_n, su_n};
use magicsq::matmodels::{sa, sl, sp};

fn main() {
    let o = build_algebra("O").unwrap();
    println!("octonion matrix models:");
    for (name, l) in [
        ("sa(3,O)", sa(3, &o)),
        ("sl(3,O)", sl(3, &o)),
        ("sp(6,O)", sp(6, &o)),
    ] {
        let (dim, rank, sig) = l.invariants();
        let label = identify(dim, rank, sig.excess()).unwrap_or("?");
        println!(
            "  {name:<9} dim {dim:>3}  rank {rank}  signature {:<14} => {label}",
            fmt_signature(&sig)
        );
    }

    println!("\n2x2 octonion models are orthogonal algebras:");
    println!("  {}", compare(&sl(2, &o), &so_pq(9, 1)));
    println!("  {}", compare(&sp(4, &o), &so_pq(10, 2)));

    println!("\nassociative columns match the classical algebras:");
    let c = build_algebra("C").unwrap();
    let h = build_algebra("H").unwrap();
    for n in [2usize, 3] {
        println!("  {}", compare(&sa(n, &c), &su_n(n)));
        println!("  {}", compare(&sa(n, &h), &sq_n(n)));
    }
}

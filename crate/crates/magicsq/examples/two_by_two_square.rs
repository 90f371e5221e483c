//! The 2×2 magic square is a table of orthogonal algebras.
//!
//! Over 2×2 hermitian matrices the magic-square construction collapses to
//! `L2(K1, K2) ≅ so(Im K1 ⊕ R ⊕ K2)`: nothing exceptional appears. The
//! example builds the sixteen compact cells, compares each against the
//! orthogonal algebra of the predicted form, and shows a few split cells
//! landing on the indefinite orthogonal algebras.
//!
//! Run with: `cargo run --release --example two_by_two_square`

use magicsq::cayley::build_algebra;
use magicsq::liealg::{compare, so_pq};
use magicsq::squares::{l2, l2_form_signature};

fn main() {
    println!("compact 2x2 square: L2(K1,K2) vs so(1 + dim Im K1 + dim K2)");
    for k1 in ["R", "C", "H", "O"] {
        for k2 in ["R", "C", "H", "O"] {
            let a1 = build_algebra(k1).unwrap();
            let a2 = build_algebra(k2).unwrap();
            let l = l2(&a1, &a2);
            let (p, q) = l2_form_signature(&a1, &a2);
            let rep = compare(&l, &so_pq(p, q));
            println!(
                "  L2({k1:<2},{k2:<2}) dim {:>3}  vs so({p},{q}): {}",
                l.dim(),
                if rep.agree() { "agree" } else { "DIFFER" }
            );
        }
    }

    println!("\nsplit cells:");
    for (k1, k2) in [("O~", "O"), ("O~", "O~"), ("C~", "H")] {
        let a1 = build_algebra(k1).unwrap();
        let a2 = build_algebra(k2).unwrap();
        let l = l2(&a1, &a2);
        let (p, q) = l2_form_signature(&a1, &a2);
        let rep = compare(&l, &so_pq(p, q));
        println!(
            "  L2({k1},{k2}) dim {:>3}  vs so({p},{q}): {}",
            l.dim(),
            if rep.agree() { "agree" } else { "DIFFER" }
        );
    }
}

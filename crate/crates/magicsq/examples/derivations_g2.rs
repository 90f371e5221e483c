//! Derivation algebras of the composition algebras.
//!
//! `Der O` is the 14-dimensional exceptional Lie algebra G2: the example
//! solves for the derivation algebra of each composition algebra with the
//! exact Leibniz-kernel solver, verifies the Jacobi identity on the result,
//! and prints dimension, rank, and Killing signature. The triality algebras
//! `Tri K` are computed alongside (with `Tri O` matching `so(8)`).
//!
//! Run with: `cargo run --release --example derivations_g2`

use magicsq::cayley::build_algebra;
use magicsq::liealg::{compare, so_n, JacobiMode};
use magicsq::splitforms::canonical_der_basis;
use magicsq::trialg::TriAlgebra;

fn main() {
    println!("{:<6} {:>8} {:>9}", "K", "dim Der", "dim Tri");
    for name in ["R", "C", "H", "O", "O~"] {
        let a = build_algebra(name).unwrap();
        let der = canonical_der_basis(&a);
        let tri = TriAlgebra::new(&a);
        println!("{:<6} {:>8} {:>9}", name, der.dim(), tri.dim());
    }

    let o = build_algebra("O").unwrap();
    let g2 = canonical_der_basis(&o).lie();
    let (dim, rank, sig) = g2.invariants();
    let jac = g2.verify_jacobi(JacobiMode::Full);
    println!("\nDer O: dim {dim}, rank {rank}, Killing signature {sig}");
    println!("Jacobi identity on all basis triples: {}", if jac.passed() { "holds" } else { "FAILS" });

    let tri_o = TriAlgebra::new(&o).lie();
    let rep = compare(&tri_o, &so_n(8));
    println!("\nTri O vs so(8): {rep}");
}

//! Composition algebras by iterated doubling.
//!
//! Builds the four division algebras `R, C, H, O` and their split forms,
//! prints the norm-form signature of each, and shows the doubling process
//! breaking down at dimension 16: the composition law `|xy|² = |x|²|y|²`
//! holds through the octonions and fails for the 16-dimensional algebra.
//!
//! Run with: `cargo run --release --example octonion_arithmetic`

use magicsq::cayley::{build_algebra, all_names, Algebra, CompositionAlgebra, Element};

fn main() {
    println!("{:<6} {:>4} {:>10} {:>7} {:>12}", "name", "dim", "norm form", "split", "composition");
    for name in all_names() {
        let a = build_algebra(name).unwrap();
        let (p, q) = (0..a.dim()).fold((0, 0), |(p, q), i| {
            if a.form_sign(i) > 0 { (p + 1, q) } else { (p, q + 1) }
        });
        println!(
            "{:<6} {:>4} {:>10} {:>7} {:>12}",
            name,
            a.dim(),
            format!("({p},{q})"),
            a.is_split(),
            if a.check_composition() { "holds" } else { "FAILS" }
        );
    }

    // One more doubling step: the 16-dimensional algebra is not a
    // composition algebra (and not alternative).
    let s = CompositionAlgebra::from_chain("S", &[-1, -1, -1, -1]);
    println!(
        "{:<6} {:>4} {:>10} {:>7} {:>12}",
        "S", s.dim(), "(16,0)", s.is_split(),
        if s.check_composition() { "holds" } else { "FAILS" }
    );

    // Octonion multiplication is not associative: a nonzero associator.
    let o = build_algebra("O").unwrap();
    let e1 = Element::basis(&(o.clone() as magicsq::cayley::AlgRef), 1);
    let e2 = Element::basis(&(o.clone() as magicsq::cayley::AlgRef), 2);
    let e4 = Element::basis(&(o.clone() as magicsq::cayley::AlgRef), 4);
    let assoc = Element::associator(&e1, &e2, &e4);
    println!("\n[e1, e2, e4] over O is nonzero: {}", !assoc.is_zero());
}

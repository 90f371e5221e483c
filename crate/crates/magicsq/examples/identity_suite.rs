//! Randomized exact checks of the matrix identities behind the brackets.
//!
//! Every construction in the library leans on a family of identities
//! relating matrix commutators, associators, and the derivation-valued
//! correction maps D, S, E, F. This example runs the whole suite over the
//! quaternions, octonions, and split octonions with seeded trials — every
//! check is exact rational arithmetic, so a single defect would be a
//! genuine counterexample, not round-off.
//!
//! Run with: `cargo run --release --example identity_suite`

use magicsq::apxid::full_suite;
use magicsq::cayley::{build_algebra, AlgRef};

fn main() {
    let mut total = 0usize;
    let mut defects = 0usize;
    for name in ["H", "O", "O~"] {
        let alg: AlgRef = build_algebra(name).unwrap();
        println!("coordinate algebra {name}:");
        for rep in full_suite(&alg, 7, 50) {
            println!("  {rep}");
            total += 1;
            defects += rep.defects.len();
        }
    }
    println!("\n{total} identity checks, {defects} defects");
}

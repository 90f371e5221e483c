//! What the verifier rejects: four deliberate failures.
//!
//! Mechanical verification is only convincing if it can fail. This example
//! feeds the machinery four near-misses and shows each one caught:
//!
//! 1. the 3×3 bracket recipe applied over 2×2 hermitian matrices violates
//!    the Jacobi identity (the 2×2 Jordan algebra is not cubic);
//! 2. the cubic-identity check itself rejects `H2(O)`;
//! 3. doubling the octonions once more breaks the composition law;
//! 4. corrupting a single structure constant of `so(3,1)` is detected by
//!    the exhaustive Jacobi check.
//!
//! Run with: `cargo run --release --example negative_controls`

use rand::SeedableRng;

use magicsq::cayley::{build_algebra, AlgRef, CompositionAlgebra};
use magicsq::exactla::rat;
use magicsq::jordan::{der_h2, JordanAlgebra, SConvention};
use magicsq::liealg::{materialize_antisymmetric, so_pq, JacobiMode, SparseVec};
use magicsq::splitforms::canonical_der_basis;
use magicsq::squares::tits_with;

fn main() {
    // 1. The 3x3 recipe over H2(O).
    let o = build_algebra("O").unwrap();
    let derk1 = canonical_der_basis(&o);
    let jder = der_h2(&o, SConvention::TransposedPairs).unwrap();
    let bad = tits_with(&o, &derk1, &jder, "T(O,H2(O))");
    let rep = bad.verify_jacobi(JacobiMode::Auto);
    println!(
        "T(O, H2(O)): dim {}, Jacobi failures {} / {} triples (expected: nonzero)",
        bad.dim(),
        rep.failures,
        rep.triples_checked
    );

    // 2. H2(O) is not cubic.
    let aref: AlgRef = o.clone();
    let j2 = JordanAlgebra::new(&aref, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    println!("cubic identity holds in H2(O): {} (expected: false)", j2.cubic_check(8, &mut rng));

    // 3. Sedenion-level doubling.
    let s = CompositionAlgebra::from_chain("S", &[-1, -1, -1, -1]);
    println!(
        "dim-16 doubled algebra satisfies |xy|^2 = |x|^2 |y|^2: {} (expected: false)",
        s.check_composition()
    );

    // 4. One corrupted structure constant.
    let good = so_pq(3, 1);
    let mut table: std::collections::HashMap<(usize, usize), SparseVec> = Default::default();
    for (i, j, k, c) in good.structure_constants() {
        table.entry((i, j)).or_default().push((k, c));
    }
    table.values_mut().next().unwrap()[0].1 += rat(1);
    let corrupted =
        materialize_antisymmetric("corrupted so(3,1)", good.labels().to_vec(), table).unwrap();
    let rep = corrupted.verify_jacobi(JacobiMode::Full);
    println!(
        "corrupted so(3,1): Jacobi failures {} / {} triples (expected: nonzero)",
        rep.failures, rep.triples_checked
    );
    println!(
        "clean so(3,1) passes: {}",
        good.verify_jacobi(JacobiMode::Full).passed()
    );
}

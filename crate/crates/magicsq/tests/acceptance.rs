//! Acceptance gate: every headline claim the library makes, verified in one
//! place. Each criterion prints exactly one `PASS`/`FAIL` line; the test
//! fails if any criterion does.

use std::sync::Arc;

use magicsq::cayley::{build_algebra, CompositionAlgebra};
use magicsq::jordan::{der_h2, JordanAlgebra, SConvention};
use magicsq::liealg::{
    compare, so_pq, sq_n, su_n, JacobiMode, LieAlgebra, SparseVec,
};
use magicsq::splitforms::{
    canonical_der_basis, cartan_decompose, doubly_split_maxcompact_check,
    maxcompact_theorem_check,
};
use magicsq::trialg::TriAlgebra;
use magicsq::{apxid, matmodels, squares};

const COMPACT: [&str; 4] = ["R", "C", "H", "O"];
const COMPACT_DIMS: [[usize; 4]; 4] = [
    [3, 8, 21, 52],
    [8, 16, 35, 78],
    [21, 35, 66, 133],
    [52, 78, 133, 248],
];

fn alg(name: &str) -> Arc<CompositionAlgebra> {
    build_algebra(name).unwrap()
}

fn expect(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// -- criterion 1 ------------------------------------------------------------

fn criterion_1(tits: &[Vec<LieAlgebra>]) -> Result<(), String> {
    for (i, row) in tits.iter().enumerate() {
        for (j, l) in row.iter().enumerate() {
            expect(
                l.dim() == COMPACT_DIMS[i][j],
                format!("{}: dim {} != {}", l.name(), l.dim(), COMPACT_DIMS[i][j]),
            )?;
            let sig = l.killing_signature();
            expect(
                sig.pos == 0 && sig.zero == 0 && sig.neg == l.dim(),
                format!("{}: Killing form not negative definite ({sig})", l.name()),
            )?;
            let rep = l.verify_jacobi(JacobiMode::Auto);
            expect(
                rep.passed(),
                format!("{}: {} Jacobi failures", l.name(), rep.failures),
            )?;
            if l.dim() == 248 {
                expect(
                    !rep.exhaustive && rep.triples_checked == magicsq::liealg::JACOBI_SAMPLES,
                    "largest cell should use the seeded 10^5-triple sample".to_string(),
                )?;
            }
        }
    }
    Ok(())
}

// -- criterion 2 ------------------------------------------------------------

fn criterion_2(tits: &[Vec<LieAlgebra>]) -> Result<(), String> {
    for (i, k1) in COMPACT.iter().enumerate() {
        for (j, k2) in COMPACT.iter().enumerate() {
            let v = squares::vinberg_by_names(k1, k2);
            let t3 = squares::triality_by_names(k1, k2);
            let rv = compare(&tits[i][j], &v);
            expect(rv.agree(), format!("{rv}"))?;
            let rt = compare(&tits[i][j], &t3);
            expect(rt.agree(), format!("{rt}"))?;
            let (src, dst, cols) = squares::tits_vinberg_map(&alg(k1), &alg(k2));
            squares::check_lie_isomorphism(&src, &dst, &cols)
                .map_err(|e| format!("tits->vinberg map on ({k1},{k2}): {e}"))?;
        }
    }
    Ok(())
}

// -- criterion 3 ------------------------------------------------------------

fn criterion_3() -> Result<(), String> {
    for k2 in COMPACT {
        let (src, dst, cols) = squares::str_row_map(&alg(k2));
        squares::check_lie_isomorphism(&src, &dst, &cols)
            .map_err(|e| format!("theta on column {k2}: {e}"))?;
        let (src, dst, cols) = squares::con_row_map(&alg(k2));
        squares::check_lie_isomorphism(&src, &dst, &cols)
            .map_err(|e| format!("phi on column {k2}: {e}"))?;
    }
    Ok(())
}

// -- criterion 4 ------------------------------------------------------------

fn criterion_4() -> Result<(), String> {
    for (name, der, tri) in [("R", 0, 0), ("C", 0, 2), ("H", 3, 9), ("O", 14, 28)] {
        let a = alg(name);
        let d = canonical_der_basis(&a).dim();
        expect(d == der, format!("dim Der {name} = {d}, expected {der}"))?;
        let t = TriAlgebra::new(&a).dim();
        expect(t == tri, format!("dim Tri {name} = {t}, expected {tri}"))?;
    }
    let dsplit = canonical_der_basis(&alg("O~")).dim();
    expect(dsplit == 14, format!("dim Der O~ = {dsplit}, expected 14"))?;
    let rep = compare(&TriAlgebra::new(&alg("O")).lie(), &magicsq::liealg::so_n(8));
    expect(rep.agree(), format!("Tri O vs so(8): {rep}"))
}

// -- criterion 5 ------------------------------------------------------------

fn criterion_5() -> Result<(), String> {
    let last_col = [("R", -52i64), ("C~", -26), ("H~", -25), ("O~", -24)];
    for (k1, exc) in last_col {
        let l = squares::tits_by_names(k1, "O");
        let got = l.killing_signature().excess();
        expect(got == exc, format!("({k1}, O): signature {got}, expected {exc}"))?;
    }
    let last_row = [("R", 4i64), ("C", 2), ("H", -5), ("O", -24)];
    for (k2, exc) in last_row {
        let l = squares::tits_by_names("O~", k2);
        let got = l.killing_signature().excess();
        expect(got == exc, format!("(O~, {k2}): signature {got}, expected {exc}"))?;
    }
    // Cartan decompositions (grading, cross-block Killing, definiteness are
    // all checked inside cartan_decompose) and the maximal-compact theorem
    // n = L3(F1, K2) + F1' on the split rows.
    let cells = [
        ("C~", "R", 3usize),
        ("C~", "C", 8),
        ("H~", "C", 17),
        ("C~", "O", 52),
        ("H~", "O", 79),
        ("O~", "R", 24),
        ("O~", "O", 136),
    ];
    for (k1, k2, ndim) in cells {
        let cd = cartan_decompose(&alg(k1), &alg(k2)).map_err(|e| format!("({k1},{k2}): {e}"))?;
        expect(
            cd.n_part.len() == ndim,
            format!("({k1},{k2}): dim n = {}, expected {ndim}", cd.n_part.len()),
        )?;
        let n = maxcompact_theorem_check(&alg(k1), &alg(k2))
            .map_err(|e| format!("theorem on ({k1},{k2}): {e}"))?;
        expect(n.dim() == ndim, format!("({k1},{k2}): theorem n dim {}", n.dim()))?;
    }
    Ok(())
}

// -- criterion 6 ------------------------------------------------------------

fn criterion_6() -> Result<(), String> {
    // Genuinely doubly-split cells: generic rank equals |signature|.
    for k1 in ["C~", "H~", "O~"] {
        for k2 in ["C~", "H~", "O~"] {
            let l = squares::vinberg_by_names(k1, k2);
            let exc = l.killing_signature().excess().unsigned_abs() as usize;
            let rank = l.rank();
            expect(rank == exc, format!("({k1},{k2}): rank {rank} != |signature| {exc}"))?;
        }
    }
    let last_row = [("R", 4usize), ("C~", 6), ("H~", 7), ("O~", 8)];
    for (k2, r) in last_row {
        let l = squares::vinberg_by_names("O~", k2);
        expect(l.rank() == r, format!("(O~,{k2}): rank {}, expected {r}", l.rank()))?;
    }
    // Maximal compacts match the 4x4 construction over the halved algebras.
    for (k1, k2, ndim) in [("C~", "C~", 6usize), ("H~", "O~", 63), ("O~", "O~", 120)] {
        let n = doubly_split_maxcompact_check(&alg(k1), &alg(k2))
            .map_err(|e| format!("({k1},{k2}): {e}"))?;
        expect(n.dim() == ndim, format!("({k1},{k2}): dim n = {}, expected {ndim}", n.dim()))?;
    }
    Ok(())
}

// -- criterion 7 ------------------------------------------------------------

fn criterion_7() -> Result<(), String> {
    for k1 in COMPACT {
        for k2 in COMPACT {
            let l = squares::l2_by_names(k1, k2);
            let (p, q) = squares::l2_form_signature(&alg(k1), &alg(k2));
            let rep = compare(&l, &so_pq(p, q));
            expect(rep.agree(), format!("L2({k1},{k2}) vs so({p},{q}): {rep}"))?;
        }
    }
    expect(squares::l2_by_names("O", "O").dim() == 120, "L2(O,O) should be so(16) = 120")?;
    // Split and matrix-model entries of the 2x2 table.
    let rep = compare(&squares::l2_by_names("O~", "O"), &so_pq(12, 4));
    expect(rep.agree(), format!("L2(O~,O) vs so(12,4): {rep}"))?;
    let rep = compare(&matmodels::sl(2, &alg("O")), &so_pq(9, 1));
    expect(rep.agree(), format!("sl(2,O) vs so(9,1): {rep}"))?;
    let rep = compare(&matmodels::sp(4, &alg("O")), &so_pq(10, 2));
    expect(rep.agree(), format!("sp(4,O) vs so(10,2): {rep}"))
}

// -- criterion 8 ------------------------------------------------------------

fn criterion_8() -> Result<(), String> {
    let o = alg("O");
    let sa3 = matmodels::sa(3, &o);
    expect(sa3.dim() == 52, format!("sa(3,O) dim {}", sa3.dim()))?;
    expect(
        sa3.killing_signature().excess() == -52,
        "sa(3,O) should be compact".to_string(),
    )?;
    let sl3 = matmodels::sl(3, &o);
    expect(sl3.dim() == 78, format!("sl(3,O) dim {}", sl3.dim()))?;
    expect(sl3.killing_signature().excess() == -26, "sl(3,O) signature".to_string())?;
    let sp6 = matmodels::sp(6, &o);
    expect(sp6.dim() == 133, format!("sp(6,O) dim {}", sp6.dim()))?;
    expect(sp6.killing_signature().excess() == -25, "sp(6,O) signature".to_string())?;
    for l in [&sa3, &sp6] {
        let rep = l.verify_jacobi(JacobiMode::Auto);
        expect(rep.passed(), format!("{}: {} Jacobi failures", l.name(), rep.failures))?;
    }
    for n in [2usize, 3] {
        let rep = compare(&matmodels::sa(n, &alg("C")), &su_n(n));
        expect(rep.agree(), format!("sa({n},C) vs su({n}): {rep}"))?;
        let rep = compare(&matmodels::sa(n, &alg("H")), &sq_n(n));
        expect(rep.agree(), format!("sa({n},H) vs sq({n}): {rep}"))?;
    }
    Ok(())
}

// -- criterion 9 ------------------------------------------------------------

fn criterion_9() -> Result<(), String> {
    use rand::SeedableRng;

    // The 3x3 recipe applied over the 2x2 Jordan algebra must fail Jacobi.
    let o = alg("O");
    let derk1 = canonical_der_basis(&o);
    let jder = der_h2(&o, SConvention::TransposedPairs).map_err(|e| e.to_string())?;
    let bad = squares::tits_with(&o, &derk1, &jder, "T(O,H2(O))");
    let rep = bad.verify_jacobi(JacobiMode::Auto);
    expect(
        !rep.passed(),
        "Tits recipe over H2(O) unexpectedly satisfies the Jacobi identity".to_string(),
    )?;

    // H2(O) is not a cubic Jordan algebra.
    let aref: magicsq::cayley::AlgRef = o.clone();
    let j2 = JordanAlgebra::new(&aref, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    expect(!j2.cubic_check(8, &mut rng), "cubic_check(H2(O)) should be false".to_string())?;

    // Doubling past dimension 8 destroys the composition law.
    let sed = CompositionAlgebra::from_chain("S", &[-1, -1, -1, -1]);
    expect(
        !sed.check_composition(),
        "dim-16 doubled algebra should fail the composition law".to_string(),
    )?;

    // A single corrupted structure constant is caught by verify_jacobi.
    let good = so_pq(3, 1);
    let mut table: std::collections::HashMap<(usize, usize), SparseVec> =
        std::collections::HashMap::new();
    for (i, j, k, c) in good.structure_constants() {
        table.entry((i, j)).or_default().push((k, c));
    }
    let first = table.iter_mut().min_by_key(|(p, _)| **p).unwrap();
    first.1[0].1 += magicsq::exactla::rat(1);
    let corrupted = magicsq::liealg::materialize_antisymmetric(
        "corrupted so(3,1)",
        good.labels().to_vec(),
        table,
    )
    .map_err(|e| e.to_string())?;
    let rep = corrupted.verify_jacobi(JacobiMode::Full);
    expect(!rep.passed(), "corrupted constants should fail verify_jacobi".to_string())?;
    expect(good.verify_jacobi(JacobiMode::Full).passed(), "control: clean so(3,1)".to_string())
}

// -- criterion 10 -----------------------------------------------------------

fn criterion_10() -> Result<(), String> {
    for name in ["H", "O", "O~"] {
        let aref: magicsq::cayley::AlgRef = alg(name);
        for rep in apxid::full_suite(&aref, 7, 200) {
            if !rep.passed() {
                return Err(format!("{rep}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let tits: Vec<Vec<LieAlgebra>> = COMPACT
        .iter()
        .map(|k1| COMPACT.iter().map(|k2| squares::tits_by_names(k1, k2)).collect())
        .collect();

    let criteria: Vec<(&str, Result<(), String>)> = vec![
        ("compact square: dims, definite Killing, Jacobi", criterion_1(&tits)),
        ("construction agreement: Vinberg, triality, explicit map", criterion_2(&tits)),
        ("structure/conformal row isomorphisms", criterion_3()),
        ("derivation and triality algebra dimensions", criterion_4()),
        ("mixed square signatures and Cartan decompositions", criterion_5()),
        ("doubly-split ranks and maximal compacts", criterion_6()),
        ("2x2 square is the orthogonal-algebra table", criterion_7()),
        ("matrix models sa/sl/sp", criterion_8()),
        ("negative controls", criterion_9()),
        ("matrix identity suite, zero defects", criterion_10()),
    ];

    let mut failures = 0;
    for (i, (desc, out)) in criteria.iter().enumerate() {
        match out {
            Ok(()) => println!("criterion {:>2}: PASS — {desc}", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL — {desc}: {e}", i + 1);
                failures += 1;
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}

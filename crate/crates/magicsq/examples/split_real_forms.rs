//! Non-compact real forms from split composition algebras.
//!
//! Replacing a factor by its split form produces the other real forms of
//! the exceptional algebras. The example prints Killing signatures for the
//! mixed square (split row factor, compact column factor), Cartan-decomposes
//! the E8(-24) cell to exhibit its 136-dimensional maximal compact
//! subalgebra, and shows the doubly-split cells where the generic rank
//! equals the signature magnitude.
//!
//! Run with: `cargo run --release --example split_real_forms`

use magicsq::cayley::build_algebra;
use magicsq::cli::fmt_signature;
use magicsq::splitforms::{cartan_decompose, maxcompact_theorem_check};
use magicsq::squares;

fn main() {
    println!("Killing signatures of T(K~1, H3(K2)) (split row, compact columns):");
    print!("{:>4}", "");
    for c in ["R", "C", "H", "O"] {
        print!(" {c:>14}");
    }
    println!();
    for k1 in ["R", "C~", "H~", "O~"] {
        print!("{k1:>4}");
        for k2 in ["R", "C", "H", "O"] {
            let l = squares::tits_by_names(k1, k2);
            print!(" {:>14}", fmt_signature(&l.killing_signature()));
        }
        println!();
    }

    // Cartan decomposition of the (O~, O) cell: E8(-24).
    let k1 = build_algebra("O~").unwrap();
    let k2 = build_algebra("O").unwrap();
    let cd = cartan_decompose(&k1, &k2).unwrap();
    println!(
        "\n{}: dim {} = n ({}) + p ({})",
        cd.cell.name(),
        cd.cell.dim(),
        cd.n_part.len(),
        cd.p_part.len()
    );
    println!("  Killing on n: {}", fmt_signature(&cd.killing_on_n));
    println!("  Killing on p: {}", fmt_signature(&cd.killing_on_p));
    match maxcompact_theorem_check(&k1, &k2) {
        Ok(n) => println!("  n identified: dim {} (= 133 + 3, E7 + su(2))", n.dim()),
        Err(e) => println!("  identification failed: {e}"),
    }

    // Doubly split: rank equals |signature|.
    println!("\ndoubly-split cells V(K~1, K~2): rank vs |Killing excess|");
    for kk1 in ["C~", "H~", "O~"] {
        for kk2 in ["C~", "H~", "O~"] {
            let l = squares::vinberg_by_names(kk1, kk2);
            let sig = l.killing_signature();
            println!(
                "  {:<12} dim {:>3}  rank {}  signature {}",
                l.name(),
                l.dim(),
                l.rank(),
                fmt_signature(&sig)
            );
        }
    }
}

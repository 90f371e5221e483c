//! Triality algebras `Tri K` of composition algebras.
//!
//! For a composition algebra `K`,
//!
//! ```text
//! Tri K = { (A,B,C) ∈ 3·so(K) : A(xy) = x(By) + (Cx)y for all x,y }
//! ```
//!
//! where `so(K)` consists of the endomorphisms skew with respect to the
//! norm form. `Tri K ≅ Der K ∔ 2K′` via the explicit parametrisation
//!
//! ```text
//! T(D,a,b) = (D + L_a − R_b,  D − L_{a+b} − R_b,  D + L_a + R_{a+b})
//! ```
//!
//! which gives dimensions `0, 2, 9, 28` over `R, C, H, O` (and the same
//! over the split forms); `Tri O` is a form of `so(8)` and the order-three
//! automorphism `θ(A,B,C) = (B̄, C, Ā)` (with `X̄ = KXK`, `K` the
//! conjugation) realises triality. The distinguished elements
//!
//! ```text
//! T_{x,y} = (4S_{x,y}, R_y R_x̄ − R_x R_ȳ, L_y L_x̄ − L_x L_ȳ)
//! ```
//!
//! lie in `Tri K` and generate the mixed brackets of the triality
//! construction of the magic square.

use crate::cayley::{
    left_mul, right_mul, s_rotation, AlgRef, CompositionAlgebra, Element, Endo,
};
use crate::exactla::{rat, Rational, SpanSolver};
use crate::liealg::{materialize_antisymmetric, LieAlgebra, SparseVec};
use crate::splitforms::canonical_der_basis;
use num::Zero;
use std::sync::Arc;

/// A triality triple `(A, B, C)` of endomorphisms of `K`.
pub type TriTriple = [Endo; 3];

/// Whether a triple of endomorphisms satisfies the defining identity
/// `A(xy) = x(By) + (Cx)y` on all basis pairs.
pub fn is_tri_triple(t: &TriTriple) -> bool {
    let alg = &t[0].alg;
    let d = alg.dim();
    for i in 0..d {
        let ei = Element::basis(alg, i);
        let cei = t[2].apply(&ei);
        for j in 0..d {
            let ej = Element::basis(alg, j);
            let lhs = t[0].apply(&ei.mul(&ej));
            let rhs = ei.mul(&t[1].apply(&ej)).add(&cei.mul(&ej));
            if !lhs.sub(&rhs).is_zero() {
                return false;
            }
        }
    }
    true
}

/// The triality algebra `Tri K` with the basis coming from the
/// parametrisation `T(D,a,b)`: first the canonical derivation basis as
/// `(D,D,D)`, then `T(0,e_u,0)` and `T(0,0,e_u)` over the imaginary units.
#[derive(Debug)]
pub struct TriAlgebra {
    pub alg: AlgRef,
    pub basis: Vec<TriTriple>,
    pub labels: Vec<String>,
    solver: SpanSolver,
}

fn flatten_triple(t: &TriTriple) -> Vec<Rational> {
    let mut v = t[0].flatten();
    v.extend(t[1].flatten());
    v.extend(t[2].flatten());
    v
}

impl TriAlgebra {
    pub fn new(k: &Arc<CompositionAlgebra>) -> TriAlgebra {
        let alg: AlgRef = k.clone();
        let derk = canonical_der_basis(k);
        let mut basis: Vec<TriTriple> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        for (d, l) in derk.endos.iter().zip(&derk.labels) {
            basis.push([d.clone(), d.clone(), d.clone()]);
            labels.push(format!("D({l})"));
        }
        for u in 1..alg.dim() {
            // T(0, e_u, 0) = (L_a, −L_a, L_a + R_a).
            let a = Element::basis(&alg, u);
            let (la, ra) = (left_mul(&a), right_mul(&a));
            basis.push([la.clone(), la.scale(&rat(-1)), la.add(&ra)]);
            labels.push(format!("a({})", alg.basis_label(u)));
        }
        for u in 1..alg.dim() {
            // T(0, 0, e_u) = (−R_b, −L_b − R_b, R_b).
            let b = Element::basis(&alg, u);
            let (lb, rb) = (left_mul(&b), right_mul(&b));
            basis.push([rb.scale(&rat(-1)), lb.add(&rb).scale(&rat(-1)), rb.clone()]);
            labels.push(format!("b({})", alg.basis_label(u)));
        }
        debug_assert!(basis.iter().all(is_tri_triple), "parametrised triple not in Tri K");
        let flat: Vec<Vec<Rational>> = basis.iter().map(flatten_triple).collect();
        let solver = SpanSolver::new(&flat);
        TriAlgebra { alg, basis, labels, solver }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a triple in the basis, if it lies in the span.
    pub fn expand(&self, t: &TriTriple) -> Option<Vec<Rational>> {
        self.solver.solve(&flatten_triple(t))
    }

    /// Componentwise bracket of two triples, expanded in the basis.
    pub fn bracket(&self, s: &TriTriple, t: &TriTriple) -> Option<Vec<Rational>> {
        let c = [
            s[0].commutator(&t[0]),
            s[1].commutator(&t[1]),
            s[2].commutator(&t[2]),
        ];
        self.expand(&c)
    }

    /// The abstract Lie algebra on this basis.
    pub fn lie(&self) -> LieAlgebra {
        let dim = self.dim();
        let mut table = std::collections::HashMap::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let coords = self
                    .bracket(&self.basis[i], &self.basis[j])
                    .expect("Tri K bracket escapes the span");
                let sv: SparseVec =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                if !sv.is_empty() {
                    table.insert((i, j), sv);
                }
            }
        }
        materialize_antisymmetric(
            &format!("Tri({})", self.alg.name()),
            self.labels.clone(),
            table,
        )
        .expect("Tri K bracket table inconsistent")
    }
}

/// The order-three automorphism `θ(A,B,C) = (B̄, C, Ā)` of `Tri K`.
pub fn theta(t: &TriTriple) -> TriTriple {
    [t[1].conj_conjugate(), t[2].clone(), t[0].conj_conjugate()]
}

/// `θ` iterated `n mod 3` times.
pub fn theta_pow(t: &TriTriple, n: usize) -> TriTriple {
    let mut out = t.clone();
    for _ in 0..n % 3 {
        out = theta(&out);
    }
    out
}

/// The triality triple
/// `T_{x,y} = (4S_{x,y}, R_y R_x̄ − R_x R_ȳ, L_y L_x̄ − L_x L_ȳ)`.
pub fn t_xy(x: &Element, y: &Element) -> TriTriple {
    let a = s_rotation(x, y).scale(&rat(4));
    let (xb, yb) = (x.conj(), y.conj());
    let b = right_mul(y)
        .compose(&right_mul(&xb))
        .sub(&right_mul(x).compose(&right_mul(&yb)));
    let c = left_mul(y)
        .compose(&left_mul(&xb))
        .sub(&left_mul(x).compose(&left_mul(&yb)));
    [a, b, c]
}

/// Dimension of the space of all triples satisfying the defining identity,
/// computed as the kernel of the constraint system over `so(K)³`. Used to
/// certify that the parametrised basis spans all of `Tri K`.
pub fn tri_constraint_kernel_dim(k: &Arc<CompositionAlgebra>) -> usize {
    let alg: AlgRef = k.clone();
    let d = alg.dim();
    // so(K) basis: M_ab = g_b E_ab − g_a E_ba for a < b.
    let mut so_basis: Vec<Endo> = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let mut m = crate::exactla::QMatrix::zeros(d, d);
            m.set(a, b, rat(alg.form_sign(b) as i64));
            m.set(b, a, rat(-(alg.form_sign(a) as i64)));
            so_basis.push(Endo::from_mat(&alg, m));
        }
    }
    let s = so_basis.len();
    // Columns: (slot, so-index); rows: coefficient of e_k in
    // A(e_i e_j) − e_i (B e_j) − (C e_i) e_j.
    let mut sys = crate::exactla::QMatrix::zeros(d * d * d, 3 * s);
    for (p, m) in so_basis.iter().enumerate() {
        for i in 0..d {
            let ei = Element::basis(&alg, i);
            for j in 0..d {
                let ej = Element::basis(&alg, j);
                let ta = m.apply(&ei.mul(&ej));
                let tb = ei.mul(&m.apply(&ej));
                let tc = m.apply(&ei).mul(&ej);
                for (kk, v) in ta.coeffs.iter().enumerate() {
                    sys.add_at((i * d + j) * d + kk, p, v);
                }
                for (kk, v) in tb.coeffs.iter().enumerate() {
                    sys.add_at((i * d + j) * d + kk, s + p, &-v.clone());
                }
                for (kk, v) in tc.coeffs.iter().enumerate() {
                    sys.add_at((i * d + j) * d + kk, 2 * s + p, &-v.clone());
                }
            }
        }
    }
    sys.kernel_basis().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_algebra;
    use crate::liealg::{identify, JacobiMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tri_dimensions() {
        for (name, dim) in [("R", 0usize), ("C", 2), ("H", 9), ("O", 28), ("C~", 2), ("H~", 9), ("O~", 28)] {
            let k = build_algebra(name).unwrap();
            let t = TriAlgebra::new(&k);
            assert_eq!(t.dim(), dim, "Tri {name}");
        }
    }

    #[test]
    fn parametrisation_spans_the_constraint_kernel() {
        for name in ["C", "H", "O", "H~"] {
            let k = build_algebra(name).unwrap();
            let t = TriAlgebra::new(&k);
            assert_eq!(t.dim(), tri_constraint_kernel_dim(&k), "Tri {name}");
        }
    }

    #[test]
    fn basis_satisfies_identity_and_theta_preserves_it() {
        for name in ["C", "H", "O", "O~"] {
            let k = build_algebra(name).unwrap();
            let t = TriAlgebra::new(&k);
            for b in &t.basis {
                assert!(is_tri_triple(b));
                let th = theta(b);
                assert!(is_tri_triple(&th), "θ leaves Tri {name}");
                let coords = t.expand(&th).expect("θ image outside the span");
                // θ³ = 1.
                let th3 = theta_pow(b, 3);
                assert!(th3
                    .iter()
                    .zip(b.iter())
                    .all(|(x, y)| x.sub(y).is_zero()));
                let _ = coords;
            }
        }
    }

    #[test]
    fn t_xy_lies_in_tri() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for name in ["H", "O", "O~"] {
            let k = build_algebra(name).unwrap();
            let alg: AlgRef = k.clone();
            let t = TriAlgebra::new(&k);
            for _ in 0..3 {
                let x = Element::random(&alg, &mut rng);
                let y = Element::random(&alg, &mut rng);
                let triple = t_xy(&x, &y);
                assert!(is_tri_triple(&triple), "T_xy not in Tri {name}");
                assert!(t.expand(&triple).is_some());
            }
        }
    }

    #[test]
    fn tri_lie_algebras_identified() {
        let c = TriAlgebra::new(&build_algebra("C").unwrap()).lie();
        assert_eq!(c.dim(), 2);
        assert!(c.verify_jacobi(JacobiMode::Full).passed());
        // Abelian: so(2) ⊕ so(2).
        assert!((0..2).all(|i| (0..2).all(|j| c.bracket_basis(i, j).is_empty())));

        let h = TriAlgebra::new(&build_algebra("H").unwrap()).lie();
        assert!(h.verify_jacobi(JacobiMode::Full).passed());
        let (dim, rank, sig) = h.invariants();
        assert_eq!((dim, rank), (9, 3));
        assert!(sig.is_negative_definite()); // so(3)³

        let o = TriAlgebra::new(&build_algebra("O").unwrap()).lie();
        assert!(o.verify_jacobi(JacobiMode::Full).passed());
        let (dim, rank, sig) = o.invariants();
        assert_eq!(identify(dim, rank, sig.excess()), Some("so(8)"));
    }

    #[test]
    fn tri_split_octonion_form() {
        let o = TriAlgebra::new(&build_algebra("O~").unwrap()).lie();
        assert!(o.verify_jacobi(JacobiMode::Full).passed());
        let (dim, rank, sig) = o.invariants();
        assert_eq!(identify(dim, rank, sig.excess()), Some("so(4,4)"));
    }
}

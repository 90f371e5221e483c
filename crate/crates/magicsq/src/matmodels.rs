//! Matrix models of the magic-square rows: `sa(n,K)`, `sl(n,K)`,
//! `sp(2n,K)` for `n = 2, 3`.
//!
//! Each model is a space of matrices over a composition algebra `K`
//! extended by a scalar part acting entrywise:
//!
//! * `n = 3`: scalar part `Der K`, matrix bracket
//!   `[X,Y] = (XY−YX)′ + (1/n) D(X,Y)` with
//!   `D(X,Y) = Σ_ij D_{x_ij, y_ji}`;
//! * `n = 2`: scalar part `so(K′)`, matrix bracket
//!   `[X,Y] = (XY−YX)′ + (1/n) F(X,Y)` with
//!   `F(X,Y)a = Σ_ij ([[x_ij,y_ji],a] + 2[x_ij,y_ji,a])`.
//!
//! The matrix spaces are the traceless antihermitian matrices `A_n′(K)`
//! (giving `sa(n,K) = Der H_n(K)`), the fully traceless matrices `M_n′(K)`
//! (giving `sl(n,K) ≅ Str′H_n(K)`), and the symplectic blocks `Q_{2n}′(K)`
//! of shape `[[A,B],[C,−A†]]` with `B,C` hermitian and `Im tr A = 0`
//! (giving `sp(2n,K) ≅ Con H_n(K)`).

use crate::cayley::{
    build_algebra, d_derivation, left_mul, AlgRef, Algebra, CompositionAlgebra, Element, Endo,
};
use crate::exactla::{rat, ratio, Rational, SpanSolver};
use crate::jordan::{a_prime_basis, so_kprime_basis, JordanAlgebra, KMatrix};
use crate::liealg::{materialize_antisymmetric, LieAlgebra, SparseVec};
use crate::splitforms::canonical_der_basis;
use num::Zero;
use std::collections::HashMap;
use std::sync::Arc;

/// Basis of the fully traceless matrices `M_n′(K)` (`tr X = 0` in `K`):
/// every off-diagonal unit, plus `diag(…, u, −u, …)` for every unit `u`.
pub fn m_prime_basis(alg: &AlgRef, n: usize) -> (Vec<KMatrix>, Vec<String>) {
    let kd = alg.dim();
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for u in 0..kd {
                let mut m = KMatrix::zeros(alg, n);
                m.set_entry(a, b, Element::basis(alg, u));
                mats.push(m);
                labels.push(format!("M[{a}{b}]{}", alg.basis_label(u)));
            }
        }
    }
    for t in 0..n - 1 {
        for u in 0..kd {
            let e = Element::basis(alg, u);
            let mut m = KMatrix::zeros(alg, n);
            m.set_entry(t, t, e.clone());
            m.set_entry(t + 1, t + 1, e.scale(&rat(-1)));
            mats.push(m);
            labels.push(format!("M[d{t}]{}", alg.basis_label(u)));
        }
    }
    (mats, labels)
}

/// Basis of the symplectic block matrices `Q_{2m}′(K)`:
/// `X = [[A, B], [C, −A†]]` with `A ∈ M_m(K)`, `Im tr A = 0`, and
/// `B, C ∈ H_m(K)` hermitian.
pub fn q_prime_basis(alg: &AlgRef, m: usize) -> (Vec<KMatrix>, Vec<String>) {
    let kd = alg.dim();
    let n = 2 * m;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    // A block: embed A at the top-left and −A† at the bottom-right.
    let mut push_a = |a: &KMatrix, label: String| {
        let mut x = KMatrix::zeros(alg, n);
        let ad = a.dagger();
        for p in 0..m {
            for q in 0..m {
                let e = a.entry(p, q);
                if !e.is_zero() {
                    x.set_entry(p, q, e.clone());
                }
                let e = ad.entry(p, q);
                if !e.is_zero() {
                    x.set_entry(m + p, m + q, e.scale(&rat(-1)));
                }
            }
        }
        mats.push(x);
        labels.push(label);
    };
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            for u in 0..kd {
                let mut a = KMatrix::zeros(alg, m);
                a.set_entry(p, q, Element::basis(alg, u));
                push_a(&a, format!("A[{p}{q}]{}", alg.basis_label(u)));
            }
        }
    }
    for p in 0..m {
        let mut a = KMatrix::zeros(alg, m);
        a.set_entry(p, p, Element::one(alg));
        push_a(&a, format!("A[d{p}]1"));
    }
    for t in 0..m - 1 {
        for u in 1..kd {
            if alg.conj_sign(u) != -1 {
                continue;
            }
            let e = Element::basis(alg, u);
            let mut a = KMatrix::zeros(alg, m);
            a.set_entry(t, t, e.clone());
            a.set_entry(t + 1, t + 1, e.scale(&rat(-1)));
            push_a(&a, format!("A[d{t}]{}", alg.basis_label(u)));
        }
    }
    // B and C blocks: hermitian matrices at the off-diagonal corners.
    let jm = JordanAlgebra::new(alg, m);
    for (h, l) in jm.basis.iter().zip(&jm.labels) {
        for (ro, co, tag) in [(0usize, m, "B"), (m, 0usize, "C")] {
            let mut x = KMatrix::zeros(alg, n);
            for p in 0..m {
                for q in 0..m {
                    let e = h.entry(p, q);
                    if !e.is_zero() {
                        x.set_entry(ro + p, co + q, e.clone());
                    }
                }
            }
            mats.push(x);
            labels.push(format!("{tag}{l}"));
        }
    }
    (mats, labels)
}

/// The scalar part of a matrix model: a basis of endomorphisms of `K`
/// acting entrywise, with a solver for expanding brackets.
struct ScalarPart {
    endos: Vec<Endo>,
    labels: Vec<String>,
    solver: Option<SpanSolver>,
}

impl ScalarPart {
    fn der_k(k: &Arc<CompositionAlgebra>) -> ScalarPart {
        let derk = canonical_der_basis(k);
        let solver = (!derk.endos.is_empty())
            .then(|| SpanSolver::new(&derk.endos.iter().map(Endo::flatten).collect::<Vec<_>>()));
        ScalarPart { endos: derk.endos.clone(), labels: derk.labels.clone(), solver }
    }

    fn so_k_prime(alg: &AlgRef) -> ScalarPart {
        let (endos, labels) = so_kprime_basis(alg);
        let solver = (!endos.is_empty())
            .then(|| SpanSolver::new(&endos.iter().map(Endo::flatten).collect::<Vec<_>>()));
        ScalarPart { endos, labels, solver }
    }

    fn expand(&self, e: &Endo) -> Option<Vec<Rational>> {
        if e.is_zero() {
            return Some(vec![Rational::zero(); self.endos.len()]);
        }
        self.solver.as_ref()?.solve(&e.flatten())
    }
}

/// `D(X,Y) = Σ_ij D_{x_ij, y_ji}` as an endomorphism of `K`.
pub fn d_matrix(x: &KMatrix, y: &KMatrix) -> Endo {
    let alg = &x.alg;
    let n = x.n;
    let mut out = Endo::zero(alg);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (x.entry(i, j), y.entry(j, i));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            out = out.add(&d_derivation(a, b));
        }
    }
    out
}

/// `F(X,Y) : a ↦ Σ_ij ([[x_ij,y_ji],a] + 2[x_ij,y_ji,a])` as an
/// endomorphism of `K` (vanishing on the real part).
pub fn f_matrix(x: &KMatrix, y: &KMatrix) -> Endo {
    let alg = &x.alg;
    let n = x.n;
    let mut out = Endo::zero(alg);
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (x.entry(i, j), y.entry(j, i));
            if u.is_zero() || v.is_zero() {
                continue;
            }
            out = out.add(&f_pair(u, v));
        }
    }
    out
}

/// `a ↦ [[u,v],a] − 2[u,v,a]` with the associator convention
/// `[x,y,z] = (xy)z − x(yz)`. On imaginary `u, v` this equals the
/// rotation `4S_{u,v}` (the sign of the associator term depends on the
/// associator convention; this is the one under which that identity — and
/// the bracket tables built from `F` — hold).
pub fn f_pair(u: &Element, v: &Element) -> Endo {
    let c = u.commutator(&v);
    let ad = left_mul(&c).sub(&crate::cayley::right_mul(&c));
    // [u,v,a] = (uv)a − u(va) = (L_{uv} − L_u L_v) a.
    let assoc = left_mul(&u.mul(v)).sub(&left_mul(u).compose(&left_mul(v)));
    ad.sub(&assoc.scale(&rat(2)))
}

fn flatten_kmatrix(x: &KMatrix) -> Vec<Rational> {
    let mut out = Vec::new();
    for p in 0..x.n {
        for q in 0..x.n {
            out.extend(x.entry(p, q).coeffs.iter().cloned());
        }
    }
    out
}

/// Which scalar part and pair map a model uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScalarKind {
    /// `Der K` with the derivation sum `D(X,Y)` (the `n = 3` models).
    DerK,
    /// `so(K′)` with the rotation sum `F(X,Y)` (the `n = 2` models).
    SoKPrime,
}

/// Build a matrix model `mats ∔ scalar part` with bracket
/// `[X,Y] = (XY−YX)′ + coef·(D|F)(X,Y)`.
pub fn matrix_model(
    k: &Arc<CompositionAlgebra>,
    mats: Vec<KMatrix>,
    mat_labels: Vec<String>,
    coef: Rational,
    kind: ScalarKind,
    name: &str,
) -> LieAlgebra {
    let alg: AlgRef = k.clone();
    let scalar = match kind {
        ScalarKind::DerK => ScalarPart::der_k(k),
        ScalarKind::SoKPrime => ScalarPart::so_k_prime(&alg),
    };
    let sd = scalar.endos.len();
    let md = mats.len();
    let dim = sd + md;

    let mut labels: Vec<String> = scalar.labels.iter().map(|l| format!("s.{l}")).collect();
    labels.extend(mat_labels);
    assert_eq!(labels.len(), dim);

    let flat: Vec<Vec<Rational>> = mats.iter().map(flatten_kmatrix).collect();
    let msolver = SpanSolver::new(&flat);

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, j: usize, sv: SparseVec| {
        if !sv.is_empty() {
            table.insert((i, j), sv);
        }
    };
    // Scalar × scalar.
    for i in 0..sd {
        for j in i + 1..sd {
            let c = scalar.endos[i].commutator(&scalar.endos[j]);
            let coords = scalar.expand(&c).expect("scalar bracket escapes the span");
            put(i, j, coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    // Scalar × matrix: entrywise action.
    for i in 0..sd {
        for (s, x) in mats.iter().enumerate() {
            let img = x.map_entries(&scalar.endos[i]);
            let coords = msolver
                .solve(&flatten_kmatrix(&img))
                .expect("entrywise action escapes the matrix span");
            put(
                i,
                sd + s,
                coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(t, v)| (sd + t, v))
                    .collect(),
            );
        }
    }
    // Matrix × matrix.
    for s in 0..md {
        for t in s + 1..md {
            let (x, y) = (&mats[s], &mats[t]);
            let comm = x.commutator_m(y).prime();
            let mcoords = msolver
                .solve(&flatten_kmatrix(&comm))
                .expect("matrix bracket escapes the matrix span");
            let pair = match kind {
                ScalarKind::DerK => d_matrix(x, y),
                ScalarKind::SoKPrime => f_matrix(x, y),
            };
            let scoords = scalar.expand(&pair).expect("pair map escapes the scalar span");
            let mut sv: SparseVec = scoords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v * &coef))
                .collect();
            sv.extend(
                mcoords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (sd + i, v)),
            );
            put(sd + s, sd + t, sv);
        }
    }
    materialize_antisymmetric(name, labels, table).expect("matrix model table inconsistent")
}

/// `sa(n,K) = A_n′(K) ∔ Der K` (n = 3) or `∔ so(K′)` (n = 2).
pub fn sa(n: usize, k: &Arc<CompositionAlgebra>) -> LieAlgebra {
    let alg: AlgRef = k.clone();
    let (mats, labels) = a_prime_basis(&alg, n);
    let (kind, coef) = model_kind(n);
    matrix_model(k, mats, labels, coef, kind, &format!("sa({n},{})", k.name()))
}

/// `sl(n,K) = M_n′(K) ∔ Der K` (n = 3) or `∔ so(K′)` (n = 2).
pub fn sl(n: usize, k: &Arc<CompositionAlgebra>) -> LieAlgebra {
    let alg: AlgRef = k.clone();
    let (mats, labels) = m_prime_basis(&alg, n);
    let (kind, coef) = model_kind(n);
    matrix_model(k, mats, labels, coef, kind, &format!("sl({n},{})", k.name()))
}

/// `sp(2n,K) = Q_{2n}′(K) ∔ Der K` (n = 3) or `∔ so(K′)` (n = 2).
///
/// The scalar coefficient is `1/(2n)` — the size of the *symplectic* matrix,
/// twice the size used for `sa`/`sl`.  (Over associative `K` the correction
/// term collapses and any coefficient closes, which is why only the octonion
/// forms are sensitive to this.)
pub fn sp(two_n: usize, k: &Arc<CompositionAlgebra>) -> LieAlgebra {
    assert!(two_n % 2 == 0, "sp takes an even matrix size");
    let alg: AlgRef = k.clone();
    let (mats, labels) = q_prime_basis(&alg, two_n / 2);
    let (kind, _) = model_kind(two_n / 2);
    let coef = ratio(1, two_n as i64);
    matrix_model(k, mats, labels, coef, kind, &format!("sp({two_n},{})", k.name()))
}

fn model_kind(n: usize) -> (ScalarKind, Rational) {
    match n {
        2 => (ScalarKind::SoKPrime, ratio(1, 2)),
        3 => (ScalarKind::DerK, ratio(1, 3)),
        _ => panic!("matrix models are defined for n = 2, 3"),
    }
}

/// Convenience by algebra name.
pub fn model_by_names(model: &str, n: usize, k: &str) -> LieAlgebra {
    let alg = build_algebra(k).expect("unknown algebra");
    match model {
        "sa" => sa(n, &alg),
        "sl" => sl(n, &alg),
        "sp" => sp(2 * n, &alg),
        _ => panic!("unknown model {model}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{compare, su_n, sq_n, JacobiMode};

    #[test]
    fn model_dimensions_octonion_row() {
        assert_eq!(sa(3, &build_algebra("O").unwrap()).dim(), 52);
        assert_eq!(sl(3, &build_algebra("O").unwrap()).dim(), 78);
        assert_eq!(sp(6, &build_algebra("O").unwrap()).dim(), 133);
        assert_eq!(sa(2, &build_algebra("O").unwrap()).dim(), 36);
        assert_eq!(sl(2, &build_algebra("O").unwrap()).dim(), 45);
        assert_eq!(sp(4, &build_algebra("O").unwrap()).dim(), 66);
    }

    #[test]
    fn small_models_are_lie_algebras() {
        for l in [
            sl(2, &build_algebra("H").unwrap()),
            sp(4, &build_algebra("C").unwrap()),
            sl(3, &build_algebra("C").unwrap()),
            sa(2, &build_algebra("O~").unwrap()),
            // Only the octonion symplectic forms exercise the 1/(2n)
            // coefficient: over associative K the correction term vanishes.
            sp(4, &build_algebra("O").unwrap()),
        ] {
            assert!(l.verify_jacobi(JacobiMode::Full).passed(), "{} fails Jacobi", l.name());
        }
    }

    #[test]
    fn sa_matches_su_and_sq() {
        for n in [2usize, 3] {
            let c = sa(n, &build_algebra("C").unwrap());
            assert!(compare(&c, &su_n(n)).agree(), "sa({n},C) vs su({n})");
            let h = sa(n, &build_algebra("H").unwrap());
            assert!(compare(&h, &sq_n(n)).agree(), "sa({n},H) vs sq({n})");
        }
    }

    #[test]
    fn octonion_models_match_exceptional_rows() {
        let o = build_algebra("O").unwrap();
        // sa(3,O) = F4: compact, rank 4.
        let f4 = sa(3, &o);
        let (dim, rank, sig) = f4.invariants();
        assert_eq!((dim, rank), (52, 4));
        assert!(sig.is_negative_definite());
        // sl(3,O): the excess-(−26) form of E6.
        let e6 = sl(3, &o);
        assert_eq!(e6.killing_signature().excess(), -26);
        // sp(6,O): the excess-(−25) form of E7.
        let e7 = sp(6, &o);
        assert_eq!(e7.killing_signature().excess(), -25);
    }

    #[test]
    fn octonion_two_by_two_models_are_orthogonal_forms() {
        use crate::liealg::{identify, so_pq};
        let o = build_algebra("O").unwrap();
        let l = sl(2, &o);
        let (dim, rank, sig) = l.invariants();
        assert_eq!(identify(dim, rank, sig.excess()), Some("so(9,1)"));
        assert!(compare(&l, &so_pq(9, 1)).agree());
        let p = sp(4, &o);
        let (dim, rank, sig) = p.invariants();
        assert_eq!(identify(dim, rank, sig.excess()), Some("so(10,2)"));
    }
}

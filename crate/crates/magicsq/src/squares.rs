//! The magic square of Lie algebras, by three independent constructions.
//!
//! For a pair of composition algebras `K1, K2` the square's `3×3`-row cell
//! is built as:
//!
//! * **Tits**: `T(K1, H₃(K2)) = Der K1 ∔ Der J ∔ K1′ ⊗ J′` with
//!   `[a⊗A, b⊗B] = (1/3)⟨A,B⟩D_{a,b} − ⟨a,b⟩[L_A,L_B] + ½[a,b]⊗(A*B)`;
//! * **Vinberg**: `V(K1,K2) = A₃′(K1⊗K2) ∔ Der K1 ∔ Der K2` with
//!   `[A,B] = (AB−BA)′ + ⅓ Σ_{pq} D_{a_pq, b_pq}` (see [`VinbergPairing`]
//!   for the choice of entry pairing);
//! * **triality**: `Tri K1 ⊕ Tri K2 ∔ 3(K1⊗K2)`.
//!
//! The three agree cell-by-cell, which is verified by explicit equivariant
//! linear maps and by invariant comparison (dimension, generic rank, Killing
//! signature). The `2×2` row uses
//! `L₂(K1,K2) = so(K1′) ∔ Der H₂(K2) ∔ K1′ ⊗ H₂′(K2)`, and matrix models
//! `sa/sl/sp` over `K` realise the rows `K1 = R, C̃, H̃` concretely.

use crate::cayley::{
    build_algebra, d_derivation, s_rotation, AlgRef, Algebra, CompositionAlgebra, Element, Endo,
    left_mul, right_mul,
};
use crate::exactla::{rat, ratio, QMatrix, Rational, SpanSolver};
use crate::jordan::{a_prime_basis, a_prime_coords, con, der_h2, der_h3, l_op, so_kprime_basis,
    str_prime, JordanDer, KMatrix, SConvention};
use crate::liealg::{materialize_antisymmetric, LieAlgebra, SparseVec};
use crate::splitforms::{canonical_der_basis, DerBasis};
use crate::tensor::{extend_factor_derivations, t_d_derivation, TensorAlgebra};
use crate::trialg::{t_xy, theta_pow, TriAlgebra, TriTriple};
use num::Zero;
use std::collections::HashMap;
use std::sync::Arc;

fn push_block(sv: &mut SparseVec, offset: usize, coords: &[Rational], scale: &Rational) {
    if scale.is_zero() {
        return;
    }
    for (k, c) in coords.iter().enumerate() {
        if !c.is_zero() {
            sv.push((offset + k, c * scale));
        }
    }
}

fn finish(sv: &mut SparseVec) {
    sv.sort_by_key(|(k, _)| *k);
    let mut merged: SparseVec = SparseVec::new();
    for (k, c) in sv.drain(..) {
        match merged.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => merged.push((k, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    *sv = merged;
}

/// The Tits algebra `T(K1, H₃(K2))` with an explicitly chosen basis of
/// `Der K1`. Basis order: `Der K1`, then `Der J` (itself `Der K2` followed
/// by `A₃′(K2)`), then `e_u ⊗ A_t` over the imaginary units of `K1` and the
/// traceless basis of `J`.
pub fn tits_with(
    k1: &Arc<CompositionAlgebra>,
    derk1: &DerBasis,
    jder: &JordanDer,
    name: &str,
) -> LieAlgebra {
    let k1a: AlgRef = k1.clone();
    let d1 = derk1.dim();
    let jd = jder.dim();
    let j = &jder.jordan;
    let (pmats, plabels) = j.prime_basis();
    let jp = pmats.len();
    let nu = k1.dim() - 1; // imaginary units e_1 … e_nu of K1
    let off = d1 + jd;
    let dim = off + nu * jp;
    let tidx = |u: usize, t: usize| off + (u - 1) * jp + t;

    let mut labels: Vec<String> = derk1.labels.iter().map(|l| format!("K1.{l}")).collect();
    labels.extend(jder.labels.iter().map(|l| format!("J.{l}")));
    for u in 1..=nu {
        for t in 0..jp {
            labels.push(format!("{}⊗{}", k1a.basis_label(u), plabels[t]));
        }
    }
    assert_eq!(labels.len(), dim);

    // --- precomputed Jordan-side data -----------------------------------
    let pfull: Vec<Vec<Rational>> = pmats.iter().map(|m| j.to_coords(m)).collect();
    let lops: Vec<QMatrix> = pmats.iter().map(|m| l_op(j, m)).collect();
    // [L_A, L_B] expanded in Der J (antisymmetric in (s,t)).
    let mut lab: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; jp]; jp];
    for s in 0..jp {
        for t in s + 1..jp {
            let c = lops[s].commutator(&lops[t]);
            let coords = jder.expand(&c).expect("[L_A, L_B] escapes Der J");
            lab[t][s] = Some(coords.iter().map(|x| -x).collect());
            lab[s][t] = Some(coords);
        }
    }
    // A*B in prime coordinates and ⟨A,B⟩ (both symmetric).
    let mut star_pc: Vec<Vec<Vec<Rational>>> = vec![vec![Vec::new(); jp]; jp];
    let mut jin: Vec<Vec<Rational>> = vec![vec![Rational::zero(); jp]; jp];
    for s in 0..jp {
        for t in s..jp {
            let st = j.prime_coords(&j.star(&pmats[s], &pmats[t]));
            star_pc[s][t] = st.clone();
            star_pc[t][s] = st;
            let v = j.j_inner(&pmats[s], &pmats[t]);
            jin[s][t] = v.clone();
            jin[t][s] = v;
        }
    }

    // --- precomputed K1-side data ---------------------------------------
    let units: Vec<Element> = (0..=nu).map(|u| Element::basis(&k1a, u)).collect();
    // D_{e_u, e_v} in Der K1 coordinates (antisymmetric).
    let mut duv: Vec<Vec<Vec<Rational>>> = vec![vec![Vec::new(); nu + 1]; nu + 1];
    // [e_u, e_v] coordinates over the imaginary units (antisymmetric).
    let mut cuv: Vec<Vec<Vec<Rational>>> = vec![vec![Vec::new(); nu + 1]; nu + 1];
    let mut guv: Vec<Vec<Rational>> = vec![vec![Rational::zero(); nu + 1]; nu + 1];
    for u in 1..=nu {
        for v in 1..=nu {
            let d = d_derivation(&units[u], &units[v]);
            duv[u][v] = derk1.expand(&d).expect("D_{a,b} escapes Der K1");
            let c = units[u].commutator(&units[v]);
            cuv[u][v] = c.coeffs[1..].to_vec();
            guv[u][v] = units[u].inner(&units[v]);
        }
    }

    let derk1_lie = (d1 > 0).then(|| derk1.lie());

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, k: usize, mut sv: SparseVec| {
        finish(&mut sv);
        if !sv.is_empty() {
            table.insert((i, k), sv);
        }
    };

    // Der K1 × Der K1 and Der J × Der J.
    if let Some(l1) = &derk1_lie {
        for i in 0..d1 {
            for k in i + 1..d1 {
                put(i, k, l1.bracket_basis(i, k));
            }
        }
    }
    for i in 0..jd {
        for k in i + 1..jd {
            let sv: SparseVec =
                jder.lie.bracket_basis(i, k).into_iter().map(|(a, c)| (d1 + a, c)).collect();
            put(d1 + i, d1 + k, sv);
        }
    }
    // Der K1 × tensor: [D, e_u ⊗ A] = (D e_u) ⊗ A.
    for i in 0..d1 {
        for u in 1..=nu {
            let img = derk1.endos[i].apply(&units[u]);
            for t in 0..jp {
                let mut sv = SparseVec::new();
                for (w, c) in img.coeffs.iter().enumerate().skip(1) {
                    if !c.is_zero() {
                        sv.push((tidx(w, t), c.clone()));
                    }
                }
                put(i, tidx(u, t), sv);
            }
        }
    }
    // Der J × tensor: [DJ, e_u ⊗ A] = e_u ⊗ (DJ A).
    for i in 0..jd {
        for t in 0..jp {
            let img = jder.ops[i].apply(&pfull[t]);
            let prime = j.full_to_prime(&img);
            for u in 1..=nu {
                let mut sv = SparseVec::new();
                push_block(&mut sv, tidx(u, 0), &prime, &rat(1));
                put(d1 + i, tidx(u, t), sv);
            }
        }
    }
    // Tensor × tensor.
    let third = ratio(1, 3);
    let half = ratio(1, 2);
    for u in 1..=nu {
        for s in 0..jp {
            let a_idx = tidx(u, s);
            for v in 1..=nu {
                for t in 0..jp {
                    let b_idx = tidx(v, t);
                    if a_idx >= b_idx {
                        continue;
                    }
                    let mut sv = SparseVec::new();
                    // (1/3)⟨A,B⟩ D_{e_u, e_v}.
                    let c = &jin[s][t] * &third;
                    push_block(&mut sv, 0, &duv[u][v], &c);
                    // −⟨e_u, e_v⟩ [L_A, L_B].
                    if !guv[u][v].is_zero() {
                        if let Some(coords) = &lab[s][t] {
                            push_block(&mut sv, d1, coords, &-guv[u][v].clone());
                        }
                    }
                    // ½ [e_u, e_v] ⊗ (A*B).
                    for (w, cw) in cuv[u][v].iter().enumerate() {
                        if cw.is_zero() {
                            continue;
                        }
                        push_block(&mut sv, tidx(w + 1, 0), &star_pc[s][t], &(cw * &half));
                    }
                    put(a_idx, b_idx, sv);
                }
            }
        }
    }
    materialize_antisymmetric(name, labels, table).expect("Tits bracket table inconsistent")
}

/// The Tits construction `T(K1, H₃(K2))` with the canonical derivation
/// bases.
pub fn tits(k1: &Arc<CompositionAlgebra>, k2: &Arc<CompositionAlgebra>) -> LieAlgebra {
    let derk1 = canonical_der_basis(k1);
    let jder = der_h3(k2);
    tits_with(k1, &derk1, &jder, &format!("T({},H3({}))", k1.name(), k2.name()))
}

/// Convenience: Tits cell by algebra names.
pub fn tits_by_names(k1: &str, k2: &str) -> LieAlgebra {
    let a = build_algebra(k1).expect("unknown algebra");
    let b = build_algebra(k2).expect("unknown algebra");
    tits(&a, &b)
}

/// Pairing convention for the derivation term of the Vinberg bracket.
///
/// Writing `A, B` for traceless antihermitian matrices over `K1⊗K2`, the
/// bracket is `[A,B] = (AB−BA)′ + (1/n) Σ_pq D_{a_pq, b_·}` where the
/// second argument of each `D` is either the equal-position entry `b_pq`
/// or the transposed entry `b_qp`. Over a single composition algebra the
/// two sums coincide (`b_qp = −b̄_pq` and `D_{x,ȳ} = −D_{x,y}`), but over
/// a tensor product the conjugation acts on both factors at once and only
/// the equal-position sum closes the Jacobi identity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VinbergPairing {
    /// `Σ_pq D_{a_pq, b_pq}` — the convention under which the bracket
    /// closes and matches the Tits construction.
    Aligned,
    /// `Σ_pq D_{a_pq, b_qp}` — fails the Jacobi identity whenever both
    /// factors have nonzero imaginary parts interacting (kept so that the
    /// failure is demonstrable in tests).
    Transposed,
}

/// The Vinberg algebra `V_n(K1,K2) = Der K1 ∔ Der K2 ∔ A_n′(K1⊗K2)`.
///
/// The derivations act entrywise through the factor embeddings
/// `D ↦ D⊗id`, `id⊗D`, and two matrices bracket as
/// `[A,B] = (AB−BA)′ + (1/n) Σ_pq D_{a_pq, b_pq}` with
/// `D_{p⊗q, u⊗v} = ⟨q,v⟩ D_{p,u} ⊕ ⟨p,u⟩ D_{q,v}` split along the factors.
pub fn vinberg_with(
    k1: &Arc<CompositionAlgebra>,
    k2: &Arc<CompositionAlgebra>,
    n: usize,
    pairing: VinbergPairing,
    name: &str,
) -> LieAlgebra {
    let k1a: AlgRef = k1.clone();
    let k2a: AlgRef = k2.clone();
    let derk1 = canonical_der_basis(k1);
    let derk2 = canonical_der_basis(k2);
    let (d1, d2) = (derk1.dim(), derk2.dim());
    let ta = TensorAlgebra::new(k1a.clone(), k2a.clone());
    let taref: AlgRef = ta.clone();
    let (amats, alabels) = a_prime_basis(&taref, n);
    let m = amats.len();
    let off = d1 + d2;
    let dim = off + m;

    let mut labels: Vec<String> = derk1.labels.iter().map(|l| format!("K1.{l}")).collect();
    labels.extend(derk2.labels.iter().map(|l| format!("K2.{l}")));
    labels.extend(alabels);
    assert_eq!(labels.len(), dim);

    // Entrywise actions of the factor derivations on K1⊗K2 matrices.
    let zero1 = Endo::zero(&k1a);
    let zero2 = Endo::zero(&k2a);
    let ext1: Vec<Endo> =
        derk1.endos.iter().map(|e| extend_factor_derivations(&ta, e, &zero2)).collect();
    let ext2: Vec<Endo> =
        derk2.endos.iter().map(|e| extend_factor_derivations(&ta, &zero1, e)).collect();

    let derk1_lie = (d1 > 0).then(|| derk1.lie());
    let derk2_lie = (d2 > 0).then(|| derk2.lie());

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, k: usize, mut sv: SparseVec| {
        finish(&mut sv);
        if !sv.is_empty() {
            table.insert((i, k), sv);
        }
    };

    // Der K1 × Der K1 and Der K2 × Der K2 (the mixed block vanishes).
    if let Some(l1) = &derk1_lie {
        for i in 0..d1 {
            for k in i + 1..d1 {
                put(i, k, l1.bracket_basis(i, k));
            }
        }
    }
    if let Some(l2) = &derk2_lie {
        for i in 0..d2 {
            for k in i + 1..d2 {
                let sv: SparseVec =
                    l2.bracket_basis(i, k).into_iter().map(|(a, c)| (d1 + a, c)).collect();
                put(d1 + i, d1 + k, sv);
            }
        }
    }
    // Derivations × matrices: entrywise action.
    for (i, e) in ext1.iter().chain(ext2.iter()).enumerate() {
        for (s, a) in amats.iter().enumerate() {
            let img = a.map_entries(e);
            let mut sv = SparseVec::new();
            push_block(&mut sv, off, &a_prime_coords(&taref, n, &img), &rat(1));
            put(i, off + s, sv);
        }
    }
    // Matrix × matrix.
    let inv_n = ratio(1, n as i64);
    for s in 0..m {
        for t in s + 1..m {
            let (a, b) = (&amats[s], &amats[t]);
            let mut sv = SparseVec::new();
            let comm = a.commutator_m(b).prime();
            push_block(&mut sv, off, &a_prime_coords(&taref, n, &comm), &rat(1));
            // (1/n) Σ_pq D_{a_pq, b_pq} (or b_qp), split along the factors.
            let mut lsum = Endo::zero(&k1a);
            let mut rsum = Endo::zero(&k2a);
            for p in 0..n {
                for q in 0..n {
                    let x = a.entry(p, q);
                    let y = match pairing {
                        VinbergPairing::Aligned => b.entry(p, q),
                        VinbergPairing::Transposed => b.entry(q, p),
                    };
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let (l, r) = t_d_derivation(&ta, x, y);
                    lsum = lsum.add(&l);
                    rsum = rsum.add(&r);
                }
            }
            if !lsum.is_zero() {
                let coords = derk1.expand(&lsum).expect("D-term escapes Der K1");
                push_block(&mut sv, 0, &coords, &inv_n);
            }
            if !rsum.is_zero() {
                let coords = derk2.expand(&rsum).expect("D-term escapes Der K2");
                push_block(&mut sv, d1, &coords, &inv_n);
            }
            put(off + s, off + t, sv);
        }
    }
    materialize_antisymmetric(name, labels, table).expect("Vinberg bracket table inconsistent")
}

/// The `3×3`-row Vinberg cell `V(K1,K2)` with the standard conventions.
pub fn vinberg(k1: &Arc<CompositionAlgebra>, k2: &Arc<CompositionAlgebra>) -> LieAlgebra {
    vinberg_with(k1, k2, 3, VinbergPairing::Aligned, &format!("V({},{})", k1.name(), k2.name()))
}

/// Convenience: Vinberg cell by algebra names.
pub fn vinberg_by_names(k1: &str, k2: &str) -> LieAlgebra {
    let a = build_algebra(k1).expect("unknown algebra");
    let b = build_algebra(k2).expect("unknown algebra");
    vinberg(&a, &b)
}

/// The triality construction
/// `L₃(K1,K2) = Tri K1 ⊕ Tri K2 ∔ 3(K1⊗K2)`.
///
/// The grade-one part carries three copies `F_i(x⊗y)` (`i = 1,2,3`) of
/// `K1⊗K2`. Writing a triality triple as `T = (T₁, T̄₂, T̄₃)`, the brackets
/// are
///
/// ```text
/// [T, F_i(x⊗y)]                = F_i(T_i x ⊗ y)           (T ∈ Tri K1)
/// [F_i(x₁⊗x₂), F_j(y₁⊗y₂)]     = F_k(ȳ₁x̄₁ ⊗ ȳ₂x̄₂)        ((i,j,k) cyclic)
/// [F_i(x₁⊗x₂), F_i(y₁⊗y₂)]     = ⟨x₂,y₂⟩ θ^{1−i}(T_{x₁,y₁})
///                              + ⟨x₁,y₁⟩ θ^{1−i}(T_{x₂,y₂})
/// ```
///
/// with `θ` the order-three automorphism of `Tri K` and `T_{x,y}` the
/// distinguished triality triples.
pub fn triality_square(k1: &Arc<CompositionAlgebra>, k2: &Arc<CompositionAlgebra>) -> LieAlgebra {
    let k1a: AlgRef = k1.clone();
    let k2a: AlgRef = k2.clone();
    let tri1 = TriAlgebra::new(k1);
    let tri2 = TriAlgebra::new(k2);
    let (t1, t2) = (tri1.dim(), tri2.dim());
    let (d1, d2) = (k1a.dim(), k2a.dim());
    let off = t1 + t2;
    let dim = off + 3 * d1 * d2;
    let fidx = |slot: usize, u: usize, v: usize| off + (slot - 1) * d1 * d2 + u * d2 + v;

    let mut labels: Vec<String> = tri1.labels.iter().map(|l| format!("T1.{l}")).collect();
    labels.extend(tri2.labels.iter().map(|l| format!("T2.{l}")));
    for slot in 1..=3 {
        for u in 0..d1 {
            for v in 0..d2 {
                labels.push(format!(
                    "F{slot}({}⊗{})",
                    k1a.basis_label(u),
                    k2a.basis_label(v)
                ));
            }
        }
    }
    assert_eq!(labels.len(), dim);

    // Slot components T_1 = A, T_2 = B̄, T_3 = C̄ for each triality basis
    // triple (A, B, C).
    let slot_ops = |tri: &TriAlgebra| -> Vec<[Endo; 3]> {
        tri.basis
            .iter()
            .map(|t| [t[0].clone(), t[1].conj_conjugate(), t[2].conj_conjugate()])
            .collect()
    };
    let slots1 = slot_ops(&tri1);
    let slots2 = slot_ops(&tri2);

    // θ^{1−i}(T_{e_u, e_w}) expanded in the triality basis, per slot
    // (antisymmetric in (u, w)). Exponent 1−i mod 3 is 0, 2, 1.
    let theta_exp = [0usize, 2, 1];
    let tcoords = |tri: &TriAlgebra, alg: &AlgRef, d: usize| -> Vec<Vec<Vec<Option<Vec<Rational>>>>> {
        let mut out = vec![vec![vec![None; d]; d]; 3];
        for (slot, exp) in theta_exp.iter().enumerate() {
            for u in 0..d {
                for w in u + 1..d {
                    let t: TriTriple =
                        t_xy(&Element::basis(alg, u), &Element::basis(alg, w));
                    let coords =
                        tri.expand(&theta_pow(&t, *exp)).expect("T_{x,y} escapes Tri K");
                    out[slot][w][u] = Some(coords.iter().map(|c| -c).collect());
                    out[slot][u][w] = Some(coords);
                }
            }
        }
        out
    };
    let tc1 = tcoords(&tri1, &k1a, d1);
    let tc2 = tcoords(&tri2, &k2a, d2);

    let lie1 = (t1 > 0).then(|| tri1.lie());
    let lie2 = (t2 > 0).then(|| tri2.lie());

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, k: usize, mut sv: SparseVec| {
        finish(&mut sv);
        if !sv.is_empty() {
            table.insert((i, k), sv);
        }
    };

    // Tri K1 × Tri K1 and Tri K2 × Tri K2 (the mixed block vanishes).
    if let Some(l1) = &lie1 {
        for i in 0..t1 {
            for k in i + 1..t1 {
                put(i, k, l1.bracket_basis(i, k));
            }
        }
    }
    if let Some(l2) = &lie2 {
        for i in 0..t2 {
            for k in i + 1..t2 {
                let sv: SparseVec =
                    l2.bracket_basis(i, k).into_iter().map(|(a, c)| (t1 + a, c)).collect();
                put(t1 + i, t1 + k, sv);
            }
        }
    }
    // Tri × grade-one: slot component acting on the matching factor.
    for (p, ops) in slots1.iter().enumerate() {
        for slot in 1..=3 {
            for u in 0..d1 {
                let img = ops[slot - 1].apply(&Element::basis(&k1a, u));
                for v in 0..d2 {
                    let mut sv = SparseVec::new();
                    for (w, c) in img.coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((fidx(slot, w, v), c.clone()));
                        }
                    }
                    put(p, fidx(slot, u, v), sv);
                }
            }
        }
    }
    for (p, ops) in slots2.iter().enumerate() {
        for slot in 1..=3 {
            for v in 0..d2 {
                let img = ops[slot - 1].apply(&Element::basis(&k2a, v));
                for u in 0..d1 {
                    let mut sv = SparseVec::new();
                    for (z, c) in img.coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((fidx(slot, u, z), c.clone()));
                        }
                    }
                    put(t1 + p, fidx(slot, u, v), sv);
                }
            }
        }
    }
    // Grade-one × grade-one.
    for si in 1..=3 {
        for sj in si..=3 {
            for u in 0..d1 {
                for v in 0..d2 {
                    let a_idx = fidx(si, u, v);
                    for w in 0..d1 {
                        for z in 0..d2 {
                            let b_idx = fidx(sj, w, z);
                            if a_idx >= b_idx {
                                continue;
                            }
                            let mut sv = SparseVec::new();
                            if si == sj {
                                // ⟨x₂,y₂⟩ θ^{1−i}(T_{x₁,y₁}) + ⟨x₁,y₁⟩ θ^{1−i}(T_{x₂,y₂}).
                                if v == z && u != w {
                                    let g = rat(k2a.form_sign(v) as i64);
                                    if let Some(coords) = &tc1[si - 1][u][w] {
                                        push_block(&mut sv, 0, coords, &g);
                                    }
                                }
                                if u == w && v != z {
                                    let g = rat(k1a.form_sign(u) as i64);
                                    if let Some(coords) = &tc2[si - 1][v][z] {
                                        push_block(&mut sv, t1, coords, &g);
                                    }
                                }
                            } else {
                                // [F_i(x), F_j(y)] = F_k(ȳ₁x̄₁ ⊗ ȳ₂x̄₂) for
                                // (i,j,k) cyclic; the pair (1,3) is
                                // anticyclic, so negate the swapped bracket.
                                let (m1, s1) = k1a.mul_basis(w, u);
                                let (m2, s2) = k2a.mul_basis(z, v);
                                let conj = k1a.conj_sign(u)
                                    * k1a.conj_sign(w)
                                    * k2a.conj_sign(v)
                                    * k2a.conj_sign(z);
                                let (sk, flip) = match (si, sj) {
                                    (1, 2) => (3, 1),
                                    (2, 3) => (1, 1),
                                    (1, 3) => (2, -1),
                                    _ => unreachable!(),
                                };
                                let c = rat((s1 * s2 * conj * flip) as i64);
                                if flip == -1 {
                                    // [F_1(x), F_3(y)] = −F_2(x̄₁ȳ₁ ⊗ x̄₂ȳ₂).
                                    let (m1, s1) = k1a.mul_basis(u, w);
                                    let (m2, s2) = k2a.mul_basis(v, z);
                                    let c = rat((s1 * s2 * conj * flip) as i64);
                                    sv.push((fidx(sk, m1, m2), c));
                                } else {
                                    sv.push((fidx(sk, m1, m2), c));
                                }
                            }
                            put(a_idx, b_idx, sv);
                        }
                    }
                }
            }
        }
    }
    materialize_antisymmetric(
        &format!("L3tri({},{})", k1.name(), k2.name()),
        labels,
        table,
    )
    .expect("triality bracket table inconsistent")
}

/// Convenience: triality cell by algebra names.
pub fn triality_by_names(k1: &str, k2: &str) -> LieAlgebra {
    let a = build_algebra(k1).expect("unknown algebra");
    let b = build_algebra(k2).expect("unknown algebra");
    triality_square(&a, &b)
}

/// The `2×2` magic square `L₂(K1,K2) = so(K1′) ∔ Der H₂(K2) ∔ K1′⊗H₂′(K2)`.
///
/// Basis order: `so(K1′)` rotations, then `Der H₂(K2)` (itself `so(K2′)`
/// followed by `A₂′(K2)`), then `e_u ⊗ A_t` over the imaginary units of
/// `K1` and the traceless hermitian basis of `H₂(K2)`. The brackets:
///
/// * `so(K1′)` acts on the `K1` factor of the tensor, `Der H₂` on the
///   Jordan factor, and the two commute;
/// * `[a⊗A, b⊗B] = 2⟨A,B⟩ S_{a,b} − ⟨a,b⟩[L_A,L_B]` — there is no
///   tensor component because `A*B = 0` identically on `H₂′`.
///
/// The result is the orthogonal algebra `so(K1′ ⊕ R ⊕ K2)` of the direct
/// sum of the norm form on `Im K1`, a one-dimensional positive line, and
/// the norm form on all of `K2`; the tests identify each cell with the
/// corresponding `so(p,q)`.
pub fn l2(k1: &Arc<CompositionAlgebra>, k2: &Arc<CompositionAlgebra>) -> LieAlgebra {
    l2_with_coefs(k1, k2, &rat(2), &rat(-1))
}

/// [`l2`] with explicit coefficients `α, β` in
/// `[a⊗A, b⊗B] = α⟨A,B⟩ S_{a,b} + β⟨a,b⟩[L_A,L_B]`. With the inner-product
/// normalisations used here (`⟨a,a⟩ = ±1` on unit imaginaries,
/// `⟨A,B⟩ = ½tr(A·B)`) Jacobi closes exactly on the ray `α = −2β`; rescaling
/// the tensor generators by `λ` moves `(α,β)` to `(λ²α, λ²β)`, so `(2,−1)`
/// is a normalisation choice within the unique closing ratio.
fn l2_with_coefs(
    k1: &Arc<CompositionAlgebra>,
    k2: &Arc<CompositionAlgebra>,
    alpha: &Rational,
    beta: &Rational,
) -> LieAlgebra {
    let k1a: AlgRef = k1.clone();
    let jder = der_h2(k2, SConvention::TransposedPairs)
        .expect("Der H2 closed form failed to verify");
    let j = &jder.jordan;
    let (so1_endos, so1_labels) = so_kprime_basis(&k1a);
    let sd = so1_endos.len();
    let jd = jder.dim();
    let (pmats, plabels) = j.prime_basis();
    let jp = pmats.len();
    let nu = k1.dim() - 1;
    let off = sd + jd;
    let dim = off + nu * jp;
    let tidx = |u: usize, t: usize| off + (u - 1) * jp + t;

    let mut labels: Vec<String> = so1_labels.iter().map(|l| format!("K1.{l}")).collect();
    labels.extend(jder.labels.iter().map(|l| format!("J.{l}")));
    for u in 1..=nu {
        for t in 0..jp {
            labels.push(format!("{}⊗{}", k1a.basis_label(u), plabels[t]));
        }
    }
    assert_eq!(labels.len(), dim);

    // --- precomputed data -----------------------------------------------
    let so1_flat: Vec<Vec<Rational>> = so1_endos.iter().map(|e| e.flatten()).collect();
    let so1_solver = (sd > 0).then(|| SpanSolver::new(&so1_flat));
    let expand_so1 = |e: &Endo| -> Vec<Rational> {
        so1_solver
            .as_ref()
            .and_then(|s| s.solve(&e.flatten()))
            .expect("endomorphism escapes so(K1')")
    };
    let units: Vec<Element> = (0..=nu).map(|u| Element::basis(&k1a, u)).collect();
    // 2 S_{e_u, e_v} in so(K1′) coordinates, and ⟨e_u, e_v⟩.
    let mut suv: Vec<Vec<Vec<Rational>>> = vec![vec![Vec::new(); nu + 1]; nu + 1];
    let mut guv: Vec<Vec<Rational>> = vec![vec![Rational::zero(); nu + 1]; nu + 1];
    for u in 1..=nu {
        for v in 1..=nu {
            if u != v {
                suv[u][v] = expand_so1(&s_rotation(&units[u], &units[v]).scale(alpha));
            }
            guv[u][v] = units[u].inner(&units[v]);
        }
    }
    let pfull: Vec<Vec<Rational>> = pmats.iter().map(|m| j.to_coords(m)).collect();
    let lops: Vec<QMatrix> = pmats.iter().map(|m| l_op(j, m)).collect();
    // [L_A, L_B] expanded in Der H₂ (antisymmetric in (s,t)).
    let mut lab: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; jp]; jp];
    for s in 0..jp {
        for t in s + 1..jp {
            let c = lops[s].commutator(&lops[t]);
            let coords = jder.expand(&c).expect("[L_A, L_B] escapes Der H2");
            lab[t][s] = Some(coords.iter().map(|x| -x).collect());
            lab[s][t] = Some(coords);
        }
    }
    let mut jin: Vec<Vec<Rational>> = vec![vec![Rational::zero(); jp]; jp];
    for s in 0..jp {
        for t in s..jp {
            let v = j.j_inner(&pmats[s], &pmats[t]);
            jin[s][t] = v.clone();
            jin[t][s] = v;
        }
    }

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, k: usize, mut sv: SparseVec| {
        finish(&mut sv);
        if !sv.is_empty() {
            table.insert((i, k), sv);
        }
    };

    // so(K1′) × so(K1′).
    for i in 0..sd {
        for k in i + 1..sd {
            let c = so1_endos[i].commutator(&so1_endos[k]);
            let mut sv = SparseVec::new();
            push_block(&mut sv, 0, &expand_so1(&c), &rat(1));
            put(i, k, sv);
        }
    }
    // Der H₂ × Der H₂, shifted past the so(K1′) block.
    for i in 0..jd {
        for k in i + 1..jd {
            let sv: SparseVec =
                jder.lie.bracket_basis(i, k).into_iter().map(|(a, c)| (sd + a, c)).collect();
            put(sd + i, sd + k, sv);
        }
    }
    // so(K1′) × tensor: [X, e_u ⊗ A] = (X e_u) ⊗ A.
    for i in 0..sd {
        for u in 1..=nu {
            let img = so1_endos[i].apply(&units[u]);
            for t in 0..jp {
                let mut sv = SparseVec::new();
                for (w, c) in img.coeffs.iter().enumerate().skip(1) {
                    if !c.is_zero() {
                        sv.push((tidx(w, t), c.clone()));
                    }
                }
                put(i, tidx(u, t), sv);
            }
        }
    }
    // Der H₂ × tensor: [D, e_u ⊗ A] = e_u ⊗ (D A).
    for i in 0..jd {
        for t in 0..jp {
            let img = jder.ops[i].apply(&pfull[t]);
            let prime = j.full_to_prime(&img);
            for u in 1..=nu {
                let mut sv = SparseVec::new();
                push_block(&mut sv, tidx(u, 0), &prime, &rat(1));
                put(sd + i, tidx(u, t), sv);
            }
        }
    }
    // Tensor × tensor: 2⟨A,B⟩ S_{e_u,e_v} − 4⟨e_u,e_v⟩ [L_A, L_B].
    for u in 1..=nu {
        for s in 0..jp {
            let a_idx = tidx(u, s);
            for v in 1..=nu {
                for t in 0..jp {
                    let b_idx = tidx(v, t);
                    if a_idx >= b_idx {
                        continue;
                    }
                    let mut sv = SparseVec::new();
                    if u != v && !jin[s][t].is_zero() {
                        push_block(&mut sv, 0, &suv[u][v], &jin[s][t]);
                    }
                    if !guv[u][v].is_zero() {
                        if let Some(coords) = &lab[s][t] {
                            push_block(&mut sv, sd, coords, &(&guv[u][v] * beta));
                        }
                    }
                    put(a_idx, b_idx, sv);
                }
            }
        }
    }
    materialize_antisymmetric(
        &format!("L2({},{})", k1.name(), k2.name()),
        labels,
        table,
    )
    .expect("L2 bracket table inconsistent")
}

/// Convenience: `2×2`-row cell by algebra names.
pub fn l2_by_names(k1: &str, k2: &str) -> LieAlgebra {
    let a = build_algebra(k1).expect("unknown algebra");
    let b = build_algebra(k2).expect("unknown algebra");
    l2(&a, &b)
}

/// The signature `(p, q)` of the quadratic form on `Im K1 ⊕ R ⊕ K2` whose
/// orthogonal algebra [`l2`] realises.
pub fn l2_form_signature(
    k1: &Arc<CompositionAlgebra>,
    k2: &Arc<CompositionAlgebra>,
) -> (usize, usize) {
    let mut p = 1; // the R summand
    let mut q = 0;
    for u in 1..k1.dim() {
        if k1.form_sign(u) == 1 { p += 1 } else { q += 1 }
    }
    for u in 0..k2.dim() {
        if k2.form_sign(u) == 1 { p += 1 } else { q += 1 }
    }
    (p, q)
}

/// The row isomorphism `T(C̃, H₃(K)) → Str′H₃(K)`: identity on `Der J`
/// and `ĩ⊗A ↦ L_A` for the split-complex imaginary unit `ĩ` (with
/// `⟨ĩ,ĩ⟩ = −1`). With the bases used here this is the identity matrix;
/// the content is that the two structure-constant tensors coincide.
pub fn str_row_map(k2: &Arc<CompositionAlgebra>) -> (LieAlgebra, LieAlgebra, Vec<SparseVec>) {
    let ct = build_algebra("C~").expect("split complex algebra");
    let jder = der_h3(k2);
    let t = tits(&ct, k2);
    let s = str_prime(&jder);
    let cols: Vec<SparseVec> = (0..t.dim()).map(|i| vec![(i, rat(1))]).collect();
    (t, s, cols)
}

/// The row isomorphism `T(H̃, H₃(K)) → Con H₃(K)`. Writing `e1, e2, e3`
/// for the split-quaternion imaginary units (`e1² = −1`,
/// `e2² = e3² = +1`), the inner derivations `ad_c = [c,·]` span `Der H̃`
/// and the map is
///
/// ```text
/// ad_e1 ↦ P_1 − Q_1,   ad_e2 ↦ L_1,   ad_e3 ↦ P_1 + Q_1,
/// e1⊗A ↦ P_A − Q_A,    e2⊗A ↦ L_A,    e3⊗A ↦ P_A + Q_A,
/// ```
///
/// identity on `Der J` (`1` is the Jordan matrix identity, `P/Q` the two
/// translation copies of `J`).
pub fn con_row_map(k2: &Arc<CompositionAlgebra>) -> (LieAlgebra, LieAlgebra, Vec<SparseVec>) {
    let ht = build_algebra("H~").expect("split quaternion algebra");
    let hta: AlgRef = ht.clone();
    let ad = |u: usize| {
        let c = Element::basis(&hta, u);
        left_mul(&c).sub(&right_mul(&c))
    };
    let derk1 = DerBasis::from_endos(
        &ht,
        vec![ad(1), ad(2), ad(3)],
        vec!["ad(e1)".into(), "ad(e2)".into(), "ad(e3)".into()],
    );
    let jder = der_h3(k2);
    let t = tits_with(&ht, &derk1, &jder, &format!("T(H~,H3({}))", k2.name()));
    let c = con(&jder);

    let j = &jder.jordan;
    let jd = jder.dim();
    let m = j.dim();
    let (lo, po, qo) = (jd, jd + m, jd + 2 * m);
    let (pmats, _) = j.prime_basis();
    let jp = pmats.len();
    let pfull: Vec<Vec<Rational>> = pmats.iter().map(|mm| j.to_coords(mm)).collect();

    // Images of the three tensor rows e1 = −k̃, e2 = ĩ, e3 = j̃.
    let tensor_img = |u: usize, t_idx: usize| -> SparseVec {
        let mut sv = SparseVec::new();
        let fc = &pfull[t_idx];
        match u {
            // e1⊗A = −k̃⊗A ↦ P_A − Q_A.
            1 => {
                push_block(&mut sv, po, fc, &rat(1));
                push_block(&mut sv, qo, fc, &rat(-1));
            }
            // e2⊗A = ĩ⊗A ↦ L_A.
            2 => push_block(&mut sv, lo, fc, &rat(1)),
            // e3⊗A = j̃⊗A ↦ P_A + Q_A.
            3 => {
                push_block(&mut sv, po, fc, &rat(1));
                push_block(&mut sv, qo, fc, &rat(1));
            }
            _ => unreachable!(),
        }
        finish(&mut sv);
        sv
    };

    let mut cols: Vec<SparseVec> = Vec::with_capacity(t.dim());
    // The identity matrix is the sum of the n diagonal basis units.
    let id_units = j.n;
    let mut push_id = |blocks: &[(usize, i64)]| {
        let mut sv = SparseVec::new();
        for &(off, s) in blocks {
            for a in 0..id_units {
                sv.push((off + a, rat(s)));
            }
        }
        finish(&mut sv);
        cols.push(sv);
    };
    push_id(&[(po, 1), (qo, -1)]); // ad_e1 ↦ P_1 − Q_1
    push_id(&[(lo, 1)]); // ad_e2 ↦ L_1
    push_id(&[(po, 1), (qo, 1)]); // ad_e3 ↦ P_1 + Q_1
    for i in 0..jd {
        cols.push(vec![(i, rat(1))]);
    }
    for u in 1..=3 {
        for t_idx in 0..jp {
            cols.push(tensor_img(u, t_idx));
        }
    }
    (t, c, cols)
}

/// Bracket of two coordinate vectors using a Lie algebra's structure
/// constants.
pub fn bracket_vec(l: &LieAlgebra, x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let w = ca * cb;
            if w.is_zero() {
                continue;
            }
            for (k, c) in l.bracket_basis(*a, *b) {
                out.push((k, c * &w));
            }
        }
    }
    finish(&mut out);
    out
}

/// Verify that the linear map sending the `i`-th basis vector of `src` to
/// the sparse vector `cols[i]` in `dst` is a Lie-algebra isomorphism:
/// invertible and bracket-preserving on every basis pair.
pub fn check_lie_isomorphism(
    src: &LieAlgebra,
    dst: &LieAlgebra,
    cols: &[SparseVec],
) -> Result<(), String> {
    let dim = src.dim();
    if dst.dim() != dim || cols.len() != dim {
        return Err(format!("dimension mismatch: {} vs {}", dim, dst.dim()));
    }
    let mut mat = QMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            mat.add_at(*i, j, c);
        }
    }
    if mat.rank() != dim {
        return Err("map is not invertible".into());
    }
    let apply = |v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in v {
            for (i, w) in &cols[*k] {
                out.push((*i, w * c));
            }
        }
        finish(&mut out);
        out
    };
    for i in 0..dim {
        for j in i + 1..dim {
            let lhs = apply(&src.bracket_basis(i, j));
            let rhs = bracket_vec(dst, &cols[i], &cols[j]);
            if lhs != rhs {
                return Err(format!(
                    "bracket not preserved at basis pair ({i}, {j}): {} vs {}",
                    lhs.len(),
                    rhs.len()
                ));
            }
        }
    }
    Ok(())
}

/// The explicit basis bijection `T(K1,H₃(K2)) → V(K1,K2)`:
/// `Der K1` and `Der K2 ⊂ Der J` map identically, a matrix part `C_A` of
/// `Der J` maps to `1⊗A`, and a tensor element `e_u ⊗ H` maps to the
/// antihermitian matrix with entries `e_u ⊗ h_pq`. Returns the two
/// algebras and the image columns.
pub fn tits_vinberg_map(
    k1: &Arc<CompositionAlgebra>,
    k2: &Arc<CompositionAlgebra>,
) -> (LieAlgebra, LieAlgebra, Vec<SparseVec>) {
    let k1a: AlgRef = k1.clone();
    let k2a: AlgRef = k2.clone();
    let derk1 = canonical_der_basis(k1);
    let jder = der_h3(k2);
    let t = tits_with(k1, &derk1, &jder, &format!("T({},H3({}))", k1.name(), k2.name()));
    let v = vinberg(k1, k2);
    let ta = TensorAlgebra::new(k1a.clone(), k2a.clone());
    let taref: AlgRef = ta.clone();

    let d1 = derk1.dim();
    let d2 = jder.derk_dim;
    let off = d1 + d2;
    let (amats2, _) = a_prime_basis(&k2a, 3);
    let j = &jder.jordan;
    let (pmats, _) = j.prime_basis();
    let nu = k1.dim() - 1;

    // Embed a K2 matrix (scaled by a K1 unit) into K1⊗K2.
    let embed = |u: usize, mk: &KMatrix| -> KMatrix {
        let eu = Element::basis(&k1a, u);
        let mut out = KMatrix::zeros(&taref, 3);
        for p in 0..3 {
            for q in 0..3 {
                let e = mk.entry(p, q);
                if !e.is_zero() {
                    out.set_entry(p, q, ta.pure(&eu, e));
                }
            }
        }
        out
    };

    let mut cols: Vec<SparseVec> = Vec::with_capacity(t.dim());
    for i in 0..d1 {
        cols.push(vec![(i, rat(1))]);
    }
    for i in 0..jder.dim() {
        if i < d2 {
            cols.push(vec![(d1 + i, rat(1))]);
        } else {
            let mut sv = SparseVec::new();
            let img = embed(0, &amats2[i - d2]);
            push_block(&mut sv, off, &a_prime_coords(&taref, 3, &img), &rat(1));
            finish(&mut sv);
            cols.push(sv);
        }
    }
    for u in 1..=nu {
        for h in &pmats {
            let mut sv = SparseVec::new();
            let img = embed(u, h);
            push_block(&mut sv, off, &a_prime_coords(&taref, 3, &img), &rat(1));
            finish(&mut sv);
            cols.push(sv);
        }
    }
    (t, v, cols)
}

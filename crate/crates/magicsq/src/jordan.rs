//! Hermitian matrix Jordan algebras `H_n(K)` over a composition algebra `K`
//! (or a tensor product of two), with exact rational coordinates.
//!
//! The Jordan product is the matrix anticommutator
//!
//! ```text
//! X·Y = XY + YX,
//! ```
//!
//! whose identity element is `E = ½·1` (half the matrix identity), and the
//! inner product is `⟨X,Y⟩ = ½ tr(X·Y)`, so that `⟨E,E⟩ = n/4` for `n×n`
//! matrices. With these conventions the inner product is associative,
//! `⟨X, Y·Z⟩ = ⟨X·Y, Z⟩`, and for `n = 3` the traceless product
//! `A*B = A·B − (4/n)⟨A,B⟩E` satisfies the cubic identity
//! `(n/6) X*(X·X) = ⟨X,X⟩X` on traceless `X` — the property that makes the
//! Tits construction work over a non-associative coordinate algebra.
//!
//! The derivation algebras are built in closed form:
//!
//! * `Der H₃(K) = Der K ∔ A₃′(K)`, where the traceless antihermitian
//!   matrices `A₃′(K)` act by the matrix commutator `C_A(H) = [A,H]` and
//!   bracket as `[A,B] = (AB−BA)′ + ⅓D(A,B)` with
//!   `D(A,B) = Σ_{pq} D_{a_pq, b_qp}` a derivation of `K`;
//! * `Der H₂(K) = so(K′) ∔ A₂′(K)`, with
//!   `[A,B] = (AB−BA)′ + 2S(A,B)` where `S(A,B) = Σ_{pq} S_{a_pq, b_qp}`
//!   is a rotation of the imaginary part `K′`.
//!
//! Every operator produced here is a matrix on the coordinate space of
//! `H_n(K)` and is checked (in tests) against the generic Leibniz-kernel
//! solver. On top of `Der J` the module builds the reduced structure
//! algebra `Str′J = Der J ∔ L(J′)` and the conformal algebra
//! `Con J = Str J ∔ 2J`.

use crate::cayley::{d_derivation, s_rotation, AlgRef, Algebra, CompositionAlgebra, Element, Endo};
use crate::exactla::{rat, ratio, QMatrix, Rational, SpanSolver};
use crate::liealg::{materialize_antisymmetric, LieAlgebra, SparseVec};
use crate::splitforms::{canonical_der_basis, DerBasis};
use num::Zero;
use rand::Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// An `n×n` matrix with entries in a composition (or tensor) algebra,
/// stored row-major.
#[derive(Debug, Clone)]
pub struct KMatrix {
    pub alg: AlgRef,
    pub n: usize,
    pub entries: Vec<Element>,
}

impl KMatrix {
    pub fn zeros(alg: &AlgRef, n: usize) -> KMatrix {
        KMatrix { alg: alg.clone(), n, entries: vec![Element::zero(alg); n * n] }
    }

    /// The matrix identity `1` (not the Jordan identity, which is `½·1`).
    pub fn identity(alg: &AlgRef, n: usize) -> KMatrix {
        let mut m = KMatrix::zeros(alg, n);
        for i in 0..n {
            m.entries[i * n + i] = Element::one(alg);
        }
        m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Element) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn add(&self, other: &KMatrix) -> KMatrix {
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        KMatrix { alg: self.alg.clone(), n: self.n, entries }
    }

    pub fn sub(&self, other: &KMatrix) -> KMatrix {
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        KMatrix { alg: self.alg.clone(), n: self.n, entries }
    }

    pub fn scale(&self, c: &Rational) -> KMatrix {
        let entries = self.entries.iter().map(|a| a.scale(c)).collect();
        KMatrix { alg: self.alg.clone(), n: self.n, entries }
    }

    /// Matrix product (entry products in the coordinate algebra; no
    /// associativity is assumed anywhere downstream).
    pub fn matmul(&self, other: &KMatrix) -> KMatrix {
        assert_eq!(self.n, other.n, "matmul: size mismatch");
        let n = self.n;
        let mut out = KMatrix::zeros(&self.alg, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Element::zero(&self.alg);
                for k in 0..n {
                    let (a, b) = (self.entry(i, k), other.entry(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.set_entry(i, j, acc);
            }
        }
        out
    }

    /// Conjugate transpose `X† = (x̄_ji)`.
    pub fn dagger(&self) -> KMatrix {
        let n = self.n;
        let mut out = KMatrix::zeros(&self.alg, n);
        for i in 0..n {
            for j in 0..n {
                out.set_entry(i, j, self.entry(j, i).conj());
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.sub(&self.dagger()).is_zero()
    }

    pub fn is_antihermitian(&self) -> bool {
        self.add(&self.dagger()).is_zero()
    }

    /// The (algebra-valued) trace.
    pub fn trace(&self) -> Element {
        let mut acc = Element::zero(&self.alg);
        for i in 0..self.n {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    /// Real part of the trace.
    pub fn re_trace(&self) -> Rational {
        self.trace().re()
    }

    /// Traceless projection `X′ = X − (tr X / n)·1`.
    pub fn prime(&self) -> KMatrix {
        let t = self.trace().scale(&ratio(-1, self.n as i64));
        let mut out = self.clone();
        for i in 0..self.n {
            let e = out.entry(i, i).add(&t);
            out.set_entry(i, i, e);
        }
        out
    }

    /// Matrix commutator `XY − YX`.
    pub fn commutator_m(&self, other: &KMatrix) -> KMatrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Jordan product `X·Y = XY + YX`.
    pub fn jordan(&self, other: &KMatrix) -> KMatrix {
        self.matmul(other).add(&other.matmul(self))
    }

    /// Apply a coordinate-algebra endomorphism to every entry.
    pub fn map_entries(&self, endo: &Endo) -> KMatrix {
        let entries = self.entries.iter().map(|e| endo.apply(e)).collect();
        KMatrix { alg: self.alg.clone(), n: self.n, entries }
    }
}

/// The Jordan algebra `H_n(K)` of hermitian `n×n` matrices over `K`, with a
/// fixed coordinate basis: the `n` real diagonal units `E_aa`, then for each
/// off-diagonal position `(a,b)`, `a < b`, one basis matrix per unit `u` of
/// `K` (with `ū` mirrored at `(b,a)`).
#[derive(Debug)]
pub struct JordanAlgebra {
    pub alg: AlgRef,
    pub n: usize,
    pub basis: Vec<KMatrix>,
    pub labels: Vec<String>,
    kd: usize,
}

impl JordanAlgebra {
    pub fn new(alg: &AlgRef, n: usize) -> Arc<JordanAlgebra> {
        let kd = alg.dim();
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for a in 0..n {
            let mut m = KMatrix::zeros(alg, n);
            m.set_entry(a, a, Element::one(alg));
            basis.push(m);
            labels.push(format!("E{a}{a}"));
        }
        for a in 0..n {
            for b in a + 1..n {
                for u in 0..kd {
                    let e = Element::basis(alg, u);
                    let mut m = KMatrix::zeros(alg, n);
                    m.set_entry(a, b, e.clone());
                    m.set_entry(b, a, e.conj());
                    basis.push(m);
                    labels.push(format!("[{a}{b}]{}", alg.basis_label(u)));
                }
            }
        }
        Arc::new(JordanAlgebra { alg: alg.clone(), n, basis, labels, kd })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the traceless part `J′`.
    pub fn prime_dim(&self) -> usize {
        self.dim() - 1
    }

    fn off_base(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b && b < self.n);
        let mut rank = 0;
        for p in 0..self.n {
            for q in p + 1..self.n {
                if (p, q) == (a, b) {
                    return self.n + rank * self.kd;
                }
                rank += 1;
            }
        }
        unreachable!()
    }

    /// Coordinates of a hermitian matrix in the fixed basis.
    pub fn to_coords(&self, x: &KMatrix) -> Vec<Rational> {
        debug_assert!(x.is_hermitian(), "to_coords: matrix not hermitian");
        let mut out = vec![Rational::zero(); self.dim()];
        for a in 0..self.n {
            out[a] = x.entry(a, a).re();
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                let base = self.off_base(a, b);
                for (u, c) in x.entry(a, b).coeffs.iter().enumerate() {
                    out[base + u] = c.clone();
                }
            }
        }
        out
    }

    pub fn from_coords(&self, coords: &[Rational]) -> KMatrix {
        assert_eq!(coords.len(), self.dim(), "from_coords: wrong length");
        let mut m = KMatrix::zeros(&self.alg, self.n);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.basis[i].scale(c));
            }
        }
        m
    }

    /// The Jordan identity `E = ½·1`.
    pub fn identity_e(&self) -> KMatrix {
        KMatrix::identity(&self.alg, self.n).scale(&ratio(1, 2))
    }

    /// The associative inner product `⟨X,Y⟩ = ½ tr(X·Y)`.
    pub fn j_inner(&self, x: &KMatrix, y: &KMatrix) -> Rational {
        x.jordan(y).re_trace() * ratio(1, 2)
    }

    /// Traceless product `A*B = A·B − (4/n)⟨A,B⟩E` on `J′`.
    pub fn star(&self, a: &KMatrix, b: &KMatrix) -> KMatrix {
        let p = a.jordan(b);
        let c = self.j_inner(a, b) * ratio(4, self.n as i64);
        p.sub(&self.identity_e().scale(&c))
    }

    /// Basis of the traceless part `J′`: the diagonal differences
    /// `f_t = E_tt − E_{t+1,t+1}`, then the off-diagonal basis matrices.
    pub fn prime_basis(&self) -> (Vec<KMatrix>, Vec<String>) {
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for t in 0..self.n - 1 {
            let mut m = KMatrix::zeros(&self.alg, self.n);
            m.set_entry(t, t, Element::one(&self.alg));
            m.set_entry(t + 1, t + 1, Element::one(&self.alg).scale(&rat(-1)));
            mats.push(m);
            labels.push(format!("f{t}"));
        }
        for i in self.n..self.dim() {
            mats.push(self.basis[i].clone());
            labels.push(self.labels[i].clone());
        }
        (mats, labels)
    }

    /// Coordinates of a traceless hermitian matrix in the [`prime_basis`]
    /// ordering.
    ///
    /// [`prime_basis`]: JordanAlgebra::prime_basis
    pub fn prime_coords(&self, x: &KMatrix) -> Vec<Rational> {
        let full = self.to_coords(x);
        self.full_to_prime(&full)
    }

    /// Convert full-basis coordinates of a traceless element to prime-basis
    /// coordinates (the diagonal reals must sum to zero).
    pub fn full_to_prime(&self, full: &[Rational]) -> Vec<Rational> {
        let total: Rational = full[..self.n].iter().sum();
        assert!(total.is_zero(), "full_to_prime: element is not traceless");
        let mut out = Vec::with_capacity(self.prime_dim());
        let mut acc = Rational::zero();
        for t in 0..self.n - 1 {
            acc += &full[t];
            out.push(acc.clone());
        }
        out.extend_from_slice(&full[self.n..]);
        out
    }

    /// Convert prime-basis coordinates to full-basis coordinates.
    pub fn prime_to_full(&self, prime: &[Rational]) -> Vec<Rational> {
        assert_eq!(prime.len(), self.prime_dim(), "prime_to_full: wrong length");
        let mut out = vec![Rational::zero(); self.dim()];
        // f_t contributes +1 at diag t and −1 at diag t+1.
        for t in 0..self.n - 1 {
            out[t] += &prime[t];
            out[t + 1] -= &prime[t];
        }
        out[self.n..].clone_from_slice(&prime[self.n - 1..]);
        out
    }

    /// A random traceless hermitian element with small rational coordinates.
    pub fn random_prime(&self, rng: &mut impl Rng) -> KMatrix {
        let (mats, _) = self.prime_basis();
        let mut out = KMatrix::zeros(&self.alg, self.n);
        for m in &mats {
            let c = rat(rng.gen_range(-3..4));
            if !c.is_zero() {
                out = out.add(&m.scale(&c));
            }
        }
        out
    }

    /// Check the polarised cubic identity
    /// `(n/6)(A*(B·C) + B*(C·A) + C*(A·B)) = ⟨A,B⟩C + ⟨B,C⟩A + ⟨C,A⟩B`
    /// on random traceless triples. True for `H₃(K)`, false for `H₂(K)`.
    pub fn cubic_check(&self, trials: usize, rng: &mut impl Rng) -> bool {
        for _ in 0..trials {
            let a = self.random_prime(rng);
            let b = self.random_prime(rng);
            let c = self.random_prime(rng);
            let lhs = self
                .star(&a, &b.jordan(&c))
                .add(&self.star(&b, &c.jordan(&a)))
                .add(&self.star(&c, &a.jordan(&b)))
                .scale(&ratio(self.n as i64, 6));
            let rhs = c
                .scale(&self.j_inner(&a, &b))
                .add(&a.scale(&self.j_inner(&b, &c)))
                .add(&b.scale(&self.j_inner(&c, &a)));
            if !lhs.sub(&rhs).is_zero() {
                return false;
            }
        }
        true
    }

    /// Jordan multiplication on basis coordinates, for the generic
    /// derivation solver.
    pub fn mul_table(&self, i: usize, j: usize) -> SparseVec {
        let p = self.basis[i].jordan(&self.basis[j]);
        self.to_coords(&p)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// The diagonal idempotent `e_i = E_ii` of `H₃(K)` as a matrix.
pub fn diag_unit(alg: &AlgRef, i: usize) -> KMatrix {
    let mut m = KMatrix::zeros(alg, 3);
    m.set_entry(i, i, Element::one(alg));
    m
}

/// The hermitian matrix `P_i(x)` with `x` at position `(j,k)` and `x̄` at
/// `(k,j)`, where `(i,j,k)` is a cyclic permutation of `(0,1,2)`.
pub fn p_i(alg: &AlgRef, i: usize, x: &Element) -> KMatrix {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut m = KMatrix::zeros(alg, 3);
    m.set_entry(j, k, x.clone());
    m.set_entry(k, j, x.conj());
    m
}

/// The antihermitian matrix `X_i(x)`: `−x` at `(j,k)` and `x̄` at `(k,j)`
/// for `(i,j,k)` cyclic. The commutator `C_{X_i(x)}` is the derivation
/// `F_i(x)` of `H₃(K)` used in the triality construction.
pub fn x_i(alg: &AlgRef, i: usize, x: &Element) -> KMatrix {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut m = KMatrix::zeros(alg, 3);
    m.set_entry(j, k, x.scale(&rat(-1)));
    m.set_entry(k, j, x.conj());
    m
}

/// Basis of the traceless antihermitian matrices `A_n′(K)`: for each
/// off-diagonal position `(a,b)`, `a < b`, one matrix per unit `u` (with
/// `−ū` mirrored), then for each `t < n−1` one matrix
/// `diag(…, u, −u, …)` per antihermitian unit `u`.
pub fn a_prime_basis(alg: &AlgRef, n: usize) -> (Vec<KMatrix>, Vec<String>) {
    let kd = alg.dim();
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for u in 0..kd {
                let e = Element::basis(alg, u);
                let mut m = KMatrix::zeros(alg, n);
                m.set_entry(a, b, e.clone());
                m.set_entry(b, a, e.conj().scale(&rat(-1)));
                mats.push(m);
                labels.push(format!("A[{a}{b}]{}", alg.basis_label(u)));
            }
        }
    }
    for t in 0..n - 1 {
        for u in 0..kd {
            if alg.conj_sign(u) != -1 {
                continue;
            }
            let e = Element::basis(alg, u);
            let mut m = KMatrix::zeros(alg, n);
            m.set_entry(t, t, e.clone());
            m.set_entry(t + 1, t + 1, e.scale(&rat(-1)));
            mats.push(m);
            labels.push(format!("A[d{t}]{}", alg.basis_label(u)));
        }
    }
    (mats, labels)
}

/// Coordinates of a traceless antihermitian matrix in the
/// [`a_prime_basis`] ordering.
pub fn a_prime_coords(alg: &AlgRef, n: usize, x: &KMatrix) -> Vec<Rational> {
    debug_assert!(x.is_antihermitian(), "a_prime_coords: not antihermitian");
    debug_assert!(x.trace().is_zero(), "a_prime_coords: not traceless");
    let kd = alg.dim();
    let imag: Vec<usize> = (0..kd).filter(|&u| alg.conj_sign(u) == -1).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.extend(x.entry(a, b).coeffs.iter().cloned());
        }
    }
    // Diagonal: coefficients on diag(…,u,−u,…) are partial sums of the
    // diagonal entries' components.
    let mut acc = vec![Rational::zero(); kd];
    for t in 0..n - 1 {
        for (u, c) in x.entry(t, t).coeffs.iter().enumerate() {
            acc[u] += c;
        }
        for &u in &imag {
            out.push(acc[u].clone());
        }
    }
    out
}

fn flatten_mat(m: &QMatrix) -> Vec<Rational> {
    m.to_dense_rows().into_iter().flatten().collect()
}

/// A derivation algebra of `H_n(K)`, realised as matrices on the Jordan
/// coordinate space, together with its abstract bracket table.
#[derive(Debug)]
pub struct JordanDer {
    pub jordan: Arc<JordanAlgebra>,
    /// Basis operators on the Jordan coordinate space. The first
    /// [`derk_dim`](JordanDer::derk_dim) of them act entrywise (derivations
    /// or rotations of the coordinate algebra); the rest are commutators
    /// `C_A` with traceless antihermitian matrices.
    pub ops: Vec<QMatrix>,
    pub labels: Vec<String>,
    pub derk_dim: usize,
    pub lie: LieAlgebra,
    solver: SpanSolver,
}

impl JordanDer {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    /// Coordinates of an operator in the basis, if it lies in the span.
    pub fn expand(&self, op: &QMatrix) -> Option<Vec<Rational>> {
        self.solver.solve(&flatten_mat(op))
    }

    pub fn combine(&self, coords: &[Rational]) -> QMatrix {
        let m = self.jordan.dim();
        let mut out = QMatrix::zeros(m, m);
        for (op, c) in self.ops.iter().zip(coords) {
            if !c.is_zero() {
                out = out.add(&op.scale(c));
            }
        }
        out
    }
}

/// Operator of an entrywise endomorphism of the coordinate algebra on the
/// Jordan coordinate space.
fn entrywise_op(j: &JordanAlgebra, endo: &Endo) -> QMatrix {
    let m = j.dim();
    let mut out = QMatrix::zeros(m, m);
    for (col, b) in j.basis.iter().enumerate() {
        let img = b.map_entries(endo);
        for (row, c) in j.to_coords(&img).into_iter().enumerate() {
            if !c.is_zero() {
                out.set(row, col, c);
            }
        }
    }
    out
}

/// Operator of the matrix commutator `C_A(H) = AH − HA` on the Jordan
/// coordinate space (`A` antihermitian, so `C_A` preserves hermiticity).
fn commutator_op(j: &JordanAlgebra, a: &KMatrix) -> QMatrix {
    let m = j.dim();
    let mut out = QMatrix::zeros(m, m);
    for (col, b) in j.basis.iter().enumerate() {
        let img = a.commutator_m(b);
        for (row, c) in j.to_coords(&img).into_iter().enumerate() {
            if !c.is_zero() {
                out.set(row, col, c);
            }
        }
    }
    out
}

/// Operator of Jordan multiplication `L_X(Y) = X·Y` on the coordinate space.
pub fn l_op(j: &JordanAlgebra, x: &KMatrix) -> QMatrix {
    let m = j.dim();
    let mut out = QMatrix::zeros(m, m);
    for (col, b) in j.basis.iter().enumerate() {
        let img = x.jordan(b);
        for (row, c) in j.to_coords(&img).into_iter().enumerate() {
            if !c.is_zero() {
                out.set(row, col, c);
            }
        }
    }
    out
}

static DER_H3_CACHE: OnceLock<Mutex<HashMap<String, Arc<JordanDer>>>> = OnceLock::new();

/// `Der H₃(K) = Der K ∔ A₃′(K)` with the closed-form bracket table.
/// Results are cached per coordinate algebra.
pub fn der_h3(alg: &Arc<CompositionAlgebra>) -> Arc<JordanDer> {
    let cache = DER_H3_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(alg.name()) {
        return d.clone();
    }
    let d = Arc::new(build_der_h3(alg));
    cache.lock().unwrap().insert(alg.name().to_string(), d.clone());
    d
}

fn build_der_h3(alg: &Arc<CompositionAlgebra>) -> JordanDer {
    let aref: AlgRef = alg.clone();
    let jordan = JordanAlgebra::new(&aref, 3);
    let derk: DerBasis = canonical_der_basis(alg);
    let dk = derk.dim();

    let (amats, alabels) = a_prime_basis(&aref, 3);
    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (e, l) in derk.endos.iter().zip(&derk.labels) {
        ops.push(entrywise_op(&jordan, e));
        labels.push(format!("Der({l})"));
    }
    for (m, l) in amats.iter().zip(&alabels) {
        ops.push(commutator_op(&jordan, m));
        labels.push(l.clone());
    }

    let flat: Vec<Vec<Rational>> = ops.iter().map(flatten_mat).collect();
    let solver = SpanSolver::new(&flat);

    // Closed-form bracket table.
    let dim = ops.len();
    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let derk_lie = if dk > 0 { Some(derk.lie()) } else { None };
    for i in 0..dim {
        for j in i + 1..dim {
            let mut sv: SparseVec = SparseVec::new();
            match (i < dk, j < dk) {
                (true, true) => {
                    sv = derk_lie.as_ref().unwrap().bracket_basis(i, j);
                }
                (true, false) => {
                    // [D, C_A] = C_{D(A)} (entrywise action on A).
                    let da = amats[j - dk].map_entries(&derk.endos[i]);
                    for (k, c) in a_prime_coords(&aref, 3, &da).into_iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((dk + k, c));
                        }
                    }
                }
                (false, false) => {
                    // [C_A, C_B] = C_{(AB−BA)′} + ⅓D(A,B).
                    let (a, b) = (&amats[i - dk], &amats[j - dk]);
                    let comm = a.commutator_m(b).prime();
                    for (k, c) in a_prime_coords(&aref, 3, &comm).into_iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((dk + k, c));
                        }
                    }
                    let mut dab = Endo::zero(&aref);
                    for p in 0..3 {
                        for q in 0..3 {
                            let (x, y) = (a.entry(p, q), b.entry(q, p));
                            if x.is_zero() || y.is_zero() {
                                continue;
                            }
                            dab = dab.add(&d_derivation(x, y));
                        }
                    }
                    if !dab.is_zero() {
                        let coords = derk
                            .expand(&dab.scale(&ratio(1, 3)))
                            .expect("D(A,B) escapes Der K");
                        for (k, c) in coords.into_iter().enumerate() {
                            if !c.is_zero() {
                                sv.push((k, c));
                            }
                        }
                    }
                }
                (false, true) => unreachable!(),
            }
            sv.sort_by_key(|(k, _)| *k);
            if !sv.is_empty() {
                table.insert((i, j), sv);
            }
        }
    }
    let lie = materialize_antisymmetric(&format!("Der(H3({}))", alg.name()), labels.clone(), table)
        .expect("Der H3 bracket table inconsistent");
    JordanDer { jordan, ops, labels, derk_dim: dk, lie, solver }
}

/// Which pairing of matrix entries feeds the rotation term `S(A,B)` of the
/// `2×2` bracket `[A,B] = (AB−BA)′ + 2S(A,B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SConvention {
    /// `S(A,B) = Σ_{pq} S_{a_pq, b_qp}` (transposed index pairing; this is
    /// the variant that reproduces the operator brackets).
    TransposedPairs,
    /// `S(A,B) = Σ_{pq} S_{a_pq, b_pq}` (aligned index pairing). On `2×2`
    /// traceless antihermitian matrices this coincides with the transposed
    /// pairing: for off-diagonal entries both sums reduce to `2S_{x′,y′}`
    /// and the diagonal contributions are identical.
    AlignedPairs,
}

/// Basis of `so(K′)` (rotations of the imaginary part, skew with respect to
/// the possibly indefinite norm form), as endomorphisms of `K`.
pub fn so_kprime_basis(alg: &AlgRef) -> (Vec<Endo>, Vec<String>) {
    let kd = alg.dim();
    let mut endos = Vec::new();
    let mut labels = Vec::new();
    for a in 1..kd {
        for b in a + 1..kd {
            let mut m = QMatrix::zeros(kd, kd);
            m.set(a, b, rat(alg.form_sign(b) as i64));
            m.set(b, a, rat(-(alg.form_sign(a) as i64)));
            endos.push(Endo::from_mat(alg, m));
            labels.push(format!("so({},{})", alg.basis_label(a), alg.basis_label(b)));
        }
    }
    (endos, labels)
}

/// `Der H₂(K) = so(K′) ∔ A₂′(K)` with the closed-form bracket
/// `[A,B] = (AB−BA)′ + 2S(A,B)`.
///
/// The closed-form table is verified against the operator commutators of
/// the basis; an `Err` is returned if the chosen [`SConvention`] fails to
/// reproduce them (which is how the rejected aligned-pairs variant shows
/// itself).
pub fn der_h2(
    alg: &Arc<CompositionAlgebra>,
    conv: SConvention,
) -> Result<JordanDer, String> {
    let aref: AlgRef = alg.clone();
    let jordan = JordanAlgebra::new(&aref, 2);
    let (so_endos, so_labels) = so_kprime_basis(&aref);
    let sd = so_endos.len();
    let (amats, alabels) = a_prime_basis(&aref, 2);

    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (e, l) in so_endos.iter().zip(&so_labels) {
        ops.push(entrywise_op(&jordan, e));
        labels.push(l.clone());
    }
    for (m, l) in amats.iter().zip(&alabels) {
        ops.push(commutator_op(&jordan, m));
        labels.push(l.clone());
    }
    let flat: Vec<Vec<Rational>> = ops.iter().map(flatten_mat).collect();
    let solver = SpanSolver::new(&flat);

    // Solver over so(K′) endomorphisms for the S(A,B) expansion.
    let so_flat: Vec<Vec<Rational>> = so_endos.iter().map(|e| e.flatten()).collect();
    let so_solver = if so_flat.is_empty() { None } else { Some(SpanSolver::new(&so_flat)) };

    let dim = ops.len();
    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut sv: SparseVec = SparseVec::new();
            match (i < sd, j < sd) {
                (true, true) => {
                    let c = so_endos[i].commutator(&so_endos[j]);
                    let coords = so_solver
                        .as_ref()
                        .and_then(|s| s.solve(&c.flatten()))
                        .ok_or("so(K') not closed")?;
                    for (k, v) in coords.into_iter().enumerate() {
                        if !v.is_zero() {
                            sv.push((k, v));
                        }
                    }
                }
                (true, false) => {
                    let da = amats[j - sd].map_entries(&so_endos[i]);
                    for (k, c) in a_prime_coords(&aref, 2, &da).into_iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((sd + k, c));
                        }
                    }
                }
                (false, false) => {
                    let (a, b) = (&amats[i - sd], &amats[j - sd]);
                    let comm = a.commutator_m(b).prime();
                    for (k, c) in a_prime_coords(&aref, 2, &comm).into_iter().enumerate() {
                        if !c.is_zero() {
                            sv.push((sd + k, c));
                        }
                    }
                    let mut sab = Endo::zero(&aref);
                    for p in 0..2 {
                        for q in 0..2 {
                            let x = a.entry(p, q);
                            let y = match conv {
                                SConvention::TransposedPairs => b.entry(q, p),
                                SConvention::AlignedPairs => b.entry(p, q),
                            };
                            if x.is_zero() || y.is_zero() {
                                continue;
                            }
                            sab = sab.add(&s_rotation(x, y));
                        }
                    }
                    if !sab.is_zero() {
                        let coords = so_solver
                            .as_ref()
                            .and_then(|s| s.solve(&sab.scale(&rat(2)).flatten()))
                            .ok_or_else(|| {
                                format!("S({}, {}) escapes so(K')", alabels[i - sd], alabels[j - sd])
                            })?;
                        for (k, v) in coords.into_iter().enumerate() {
                            if !v.is_zero() {
                                sv.push((k, v));
                            }
                        }
                    }
                }
                (false, true) => unreachable!(),
            }
            sv.sort_by_key(|(k, _)| *k);
            // Verify the closed form against the operator commutator.
            let opc = ops[i].commutator(&ops[j]);
            let mut rhs = QMatrix::zeros(jordan.dim(), jordan.dim());
            for (k, c) in &sv {
                rhs = rhs.add(&ops[*k].scale(c));
            }
            if !opc.sub(&rhs).is_zero() {
                return Err(format!(
                    "closed-form bracket [{}, {}] disagrees with the operator commutator",
                    labels[i], labels[j]
                ));
            }
            if !sv.is_empty() {
                table.insert((i, j), sv);
            }
        }
    }
    let lie = materialize_antisymmetric(&format!("Der(H2({}))", alg.name()), labels.clone(), table)
        .map_err(|e| e.to_string())?;
    Ok(JordanDer { jordan, ops, labels, derk_dim: sd, lie, solver })
}

/// The reduced structure algebra `Str′J = Der J ∔ L(J′)`, with
/// `[D, L_A] = L_{DA}` and `[L_A, L_B] ∈ Der J`.
pub fn str_prime(der: &JordanDer) -> LieAlgebra {
    let j = &der.jordan;
    let d = der.dim();
    let (pmats, plabels) = j.prime_basis();
    let pd = pmats.len();
    let lops: Vec<QMatrix> = pmats.iter().map(|m| l_op(j, m)).collect();
    let pcoords: Vec<Vec<Rational>> = pmats.iter().map(|m| j.to_coords(m)).collect();

    let mut labels = der.labels.clone();
    labels.extend(plabels.iter().map(|l| format!("L.{l}")));

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    for i in 0..d {
        for k in i + 1..d {
            let sv = der.lie.bracket_basis(i, k);
            if !sv.is_empty() {
                table.insert((i, k), sv);
            }
        }
    }
    for i in 0..d {
        for a in 0..pd {
            // [D, L_A] = L_{DA}.
            let img = der.ops[i].apply(&pcoords[a]);
            let prime = j.full_to_prime(&img);
            let sv: SparseVec = prime
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (d + t, c))
                .collect();
            if !sv.is_empty() {
                table.insert((i, d + a), sv);
            }
        }
    }
    for a in 0..pd {
        for b in a + 1..pd {
            let c = lops[a].commutator(&lops[b]);
            let coords = der.expand(&c).expect("[L_A, L_B] escapes Der J");
            let sv: SparseVec =
                coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            if !sv.is_empty() {
                table.insert((d + a, d + b), sv);
            }
        }
    }
    materialize_antisymmetric(
        &format!("Str'(H{}({}))", j.n, j.alg.name()),
        labels,
        table,
    )
    .expect("Str' bracket table inconsistent")
}

/// The conformal algebra `Con J = Der J ∔ L(J) ∔ 2J`, with
/// `[T,(x,y)] = (Tx, T*y)` (where `*` fixes `Der J` and negates `L(J)`),
/// translations commuting among themselves, and
/// `[(x,0),(0,y)] = ½L_{x·y} + ½[L_x, L_y]`.
pub fn con(der: &JordanDer) -> LieAlgebra {
    let j = &der.jordan;
    let d = der.dim();
    let m = j.dim();
    let lops: Vec<QMatrix> = j.basis.iter().map(|b| l_op(j, b)).collect();
    // Block offsets: [Der | L | P = (x,0) | Q = (0,y)].
    let (lo, po, qo) = (d, d + m, d + 2 * m);

    let mut labels = der.labels.clone();
    labels.extend(j.labels.iter().map(|l| format!("L.{l}")));
    labels.extend(j.labels.iter().map(|l| format!("P.{l}")));
    labels.extend(j.labels.iter().map(|l| format!("Q.{l}")));

    let push_vec = |sv: &mut SparseVec, off: usize, v: Vec<Rational>| {
        for (k, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                sv.push((off + k, c));
            }
        }
    };

    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut put = |i: usize, k: usize, sv: SparseVec| {
        if !sv.is_empty() {
            assert!(i < k, "table order");
            table.insert((i, k), sv);
        }
    };

    // Der × Der.
    for i in 0..d {
        for k in i + 1..d {
            put(i, k, der.lie.bracket_basis(i, k));
        }
    }
    // Der × {L, P, Q}: entryblock actions [D, L_X] = L_{DX}, [D,(x,y)] = (Dx, Dy).
    for i in 0..d {
        for a in 0..m {
            let img: Vec<Rational> = (0..m).map(|r| der.ops[i].get(r, a)).collect();
            for (off, block) in [(lo, 0), (po, 1), (qo, 2)] {
                let _ = block;
                let mut sv = SparseVec::new();
                push_vec(&mut sv, off, img.clone());
                put(i, off + a, sv);
            }
        }
    }
    // L × L: operator commutator lands in Der J.
    for a in 0..m {
        for b in a + 1..m {
            let c = lops[a].commutator(&lops[b]);
            let coords = der.expand(&c).expect("[L_X, L_Y] escapes Der J");
            let mut sv = SparseVec::new();
            push_vec(&mut sv, 0, coords);
            put(lo + a, lo + b, sv);
        }
    }
    // L × P and L × Q: [L_X, (y,0)] = (X·y, 0), [L_X, (0,y)] = −(0, X·y).
    for a in 0..m {
        for b in 0..m {
            let prod = j.to_coords(&j.basis[a].jordan(&j.basis[b]));
            let mut sv = SparseVec::new();
            push_vec(&mut sv, po, prod.clone());
            put(lo + a, po + b, sv);
            let mut sv = SparseVec::new();
            push_vec(&mut sv, qo, prod.into_iter().map(|c| -c).collect());
            put(lo + a, qo + b, sv);
        }
    }
    // P × Q: [(x,0),(0,y)] = ½L_{x·y} + ½[L_x, L_y].
    for a in 0..m {
        for b in 0..m {
            let mut sv = SparseVec::new();
            let prod = j.to_coords(&j.basis[a].jordan(&j.basis[b]));
            let half = ratio(1, 2);
            let der_part = lops[a].commutator(&lops[b]).scale(&half);
            let coords = der.expand(&der_part).expect("[L_x, L_y] escapes Der J");
            push_vec(&mut sv, 0, coords);
            push_vec(&mut sv, lo, prod.into_iter().map(|c| c * &half).collect());
            put(po + a, qo + b, sv);
        }
    }
    // P × P and Q × Q vanish: nothing to insert.
    materialize_antisymmetric(
        &format!("Con(H{}({}))", j.n, j.alg.name()),
        labels,
        table,
    )
    .expect("Con bracket table inconsistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_algebra, all_names};
    use crate::liealg::{
        compare, derivation_algebra, leibniz_kernel_dim_modp, so_pq, sl_n_r, sp_2n_r, su_pq,
        JacobiMode,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn aref(name: &str) -> AlgRef {
        build_algebra(name).unwrap()
    }

    #[test]
    fn h3_idempotent_and_pi_product_table() {
        let o = aref("O");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = Element::random(&o, &mut rng);
        let y = Element::random(&o, &mut rng);
        for i in 0..3 {
            let (jj, kk) = ((i + 1) % 3, (i + 2) % 3);
            let ei = diag_unit(&o, i);
            // e_i · e_j = 2δ_ij e_i.
            for j in 0..3 {
                let ej = diag_unit(&o, j);
                let expect =
                    if i == j { ei.scale(&rat(2)) } else { KMatrix::zeros(&o, 3) };
                assert!(ei.jordan(&ej).sub(&expect).is_zero());
            }
            // e_i · P_j(x) = (1 − δ_ij) P_j(x).
            for j in 0..3 {
                let pj = p_i(&o, j, &x);
                let expect = if i == j { KMatrix::zeros(&o, 3) } else { pj.clone() };
                assert!(ei.jordan(&pj).sub(&expect).is_zero());
            }
            // P_i(x) · P_i(y) = 2⟨x,y⟩(e_j + e_k).
            let lhs = p_i(&o, i, &x).jordan(&p_i(&o, i, &y));
            let rhs = diag_unit(&o, jj)
                .add(&diag_unit(&o, kk))
                .scale(&(x.inner(&y) * rat(2)));
            assert!(lhs.sub(&rhs).is_zero());
            // P_i(x) · P_j(y) = P_k(ȳx̄).
            let lhs = p_i(&o, i, &x).jordan(&p_i(&o, jj, &y));
            let rhs = p_i(&o, kk, &y.conj().mul(&x.conj()));
            assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn inner_product_is_associative_and_normalised() {
        let os = aref("O~");
        let j = JordanAlgebra::new(&os, 3);
        let e = j.identity_e();
        assert_eq!(j.j_inner(&e, &e), ratio(3, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let x = j.random_prime(&mut rng);
            let y = j.random_prime(&mut rng);
            let z = j.random_prime(&mut rng);
            assert_eq!(j.j_inner(&x, &y.jordan(&z)), j.j_inner(&x.jordan(&y), &z));
        }
    }

    #[test]
    fn cubic_identity_holds_for_h3_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for name in all_names() {
            let a = aref(name);
            let j3 = JordanAlgebra::new(&a, 3);
            assert!(j3.cubic_check(8, &mut rng), "cubic fails for H3({name})");
        }
        let o = aref("O");
        let j2 = JordanAlgebra::new(&o, 2);
        assert!(!j2.cubic_check(8, &mut rng), "cubic should fail for H2(O)");
    }

    #[test]
    fn der_h3_dimensions() {
        let expected = [("R", 3), ("C", 8), ("C~", 8), ("H", 21), ("H~", 21), ("O", 52), ("O~", 52)];
        for (name, dim) in expected {
            let alg = build_algebra(name).unwrap();
            assert_eq!(der_h3(&alg).dim(), dim, "Der H3({name})");
        }
    }

    #[test]
    fn der_h3_ops_are_derivations_and_dim_is_exact() {
        let alg = build_algebra("O").unwrap();
        let der = der_h3(&alg);
        let j = &der.jordan;
        // Leibniz on random pairs for random basis combinations.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..6 {
            let op = &der.ops[rng.gen_range(0..der.dim())];
            let x = j.random_prime(&mut rng);
            let y = j.random_prime(&mut rng);
            let dx = j.from_coords(&op.apply(&j.to_coords(&x)));
            let dy = j.from_coords(&op.apply(&j.to_coords(&y)));
            let lhs = j.from_coords(&op.apply(&j.to_coords(&x.jordan(&y))));
            let rhs = dx.jordan(&y).add(&x.jordan(&dy));
            assert!(lhs.sub(&rhs).is_zero());
        }
        // The span dimension equals the full Leibniz-kernel dimension.
        let modp = leibniz_kernel_dim_modp(j.dim(), |i, k| j.mul_table(i, k));
        assert_eq!(modp, 52);
        assert_eq!(der.dim(), modp);
    }

    #[test]
    fn der_h4_octonion_collapses() {
        // For n ≥ 4 octonionic hermitian matrices stop being a Jordan
        // algebra in the useful sense: the derivation algebra of the
        // anticommutator product drops to A4′(R) ⊕ Der O.
        let o = aref("O");
        let j4 = JordanAlgebra::new(&o, 4);
        let modp = leibniz_kernel_dim_modp(j4.dim(), |i, k| j4.mul_table(i, k));
        assert_eq!(modp, 6 + 14);
    }

    #[test]
    fn der_h3_closed_form_matches_operator_commutators() {
        // Exhaustively for the quaternions, sampled for the octonions.
        let h = build_algebra("H").unwrap();
        let der = der_h3(&h);
        for i in 0..der.dim() {
            for j in i + 1..der.dim() {
                let opc = der.ops[i].commutator(&der.ops[j]);
                let sv = der.lie.bracket_basis(i, j);
                let coords = {
                    let mut v = vec![Rational::zero(); der.dim()];
                    for (k, c) in sv {
                        v[k] = c;
                    }
                    v
                };
                assert!(opc.sub(&der.combine(&coords)).is_zero(), "pair ({i},{j})");
            }
        }
        let o = build_algebra("O~").unwrap();
        let der = der_h3(&o);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..25 {
            let i = rng.gen_range(0..der.dim());
            let j = rng.gen_range(0..der.dim());
            if i == j {
                continue;
            }
            let opc = der.ops[i].commutator(&der.ops[j]);
            let sv = der.lie.bracket_basis(i, j);
            let mut coords = vec![Rational::zero(); der.dim()];
            for (k, c) in sv {
                coords[k] = c;
            }
            assert!(opc.sub(&der.combine(&coords)).is_zero(), "pair ({i},{j})");
        }
    }

    #[test]
    fn der_h3_compact_invariants() {
        // Der H3(O) is the compact 52-dimensional exceptional algebra:
        // rank 4, negative-definite Killing form.
        let o = build_algebra("O").unwrap();
        let der = der_h3(&o);
        let (dim, rank, sig) = der.lie.invariants();
        assert_eq!((dim, rank), (52, 4));
        assert!(sig.is_negative_definite());
        assert!(der.lie.verify_jacobi(JacobiMode::Full).passed());
    }

    #[test]
    fn der_h2_two_routes_agree_and_identify() {
        for (name, (p, q)) in [("O", (9, 0)), ("O~", (5, 4)), ("H", (5, 0)), ("C~", (2, 1))] {
            let alg = build_algebra(name).unwrap();
            let der = der_h2(&alg, SConvention::TransposedPairs).unwrap();
            // Route 2: generic derivation solver on the Jordan product.
            let j = JordanAlgebra::new(&(alg.clone() as AlgRef), 2);
            let (mats, generic) =
                derivation_algebra(&format!("DerSolve(H2({name}))"), j.dim(), |i, k| {
                    j.mul_table(i, k)
                });
            assert_eq!(mats.len(), der.dim(), "H2({name}) dimension");
            let report = compare(&der.lie, &generic);
            assert!(report.agree(), "{report}");
            let report = compare(&der.lie, &so_pq(p, q));
            assert!(report.agree(), "{report}");
        }
    }

    #[test]
    fn der_h2_pairing_conventions_coincide() {
        // On 2×2 traceless antihermitian matrices the transposed and
        // aligned pairings feeding S(A,B) give the same operator, so both
        // conventions yield identical bracket tables.
        let o = build_algebra("O").unwrap();
        let a = der_h2(&o, SConvention::TransposedPairs).unwrap();
        let b = der_h2(&o, SConvention::AlignedPairs).unwrap();
        for i in 0..a.dim() {
            for j in i + 1..a.dim() {
                assert_eq!(a.lie.bracket_basis(i, j), b.lie.bracket_basis(i, j));
            }
        }
    }

    #[test]
    fn str_prime_small_cases() {
        // Str′H3(R) = sl(3,R).
        let r = build_algebra("R").unwrap();
        let s = str_prime(&der_h3(&r));
        let report = compare(&s, &sl_n_r(3));
        assert!(report.agree(), "{report}");
        assert!(s.verify_jacobi(JacobiMode::Full).passed());
        // Str′H3(C) = sl(3,C) as a real algebra: dimension 16.
        let c = build_algebra("C").unwrap();
        let s = str_prime(&der_h3(&c));
        assert_eq!(s.dim(), 16);
        assert!(s.verify_jacobi(JacobiMode::Full).passed());
    }

    #[test]
    fn str_prime_h3_o_is_e6_form() {
        // dim 78, Killing signature excess −26 (maximal compact subalgebra
        // is the 52-dimensional compact exceptional algebra).
        let o = build_algebra("O").unwrap();
        let s = str_prime(&der_h3(&o));
        assert_eq!(s.dim(), 78);
        assert_eq!(s.killing_signature().excess(), -26);
    }

    #[test]
    fn con_small_cases() {
        // Con H3(R) = sp(6,R).
        let r = build_algebra("R").unwrap();
        let c = con(&der_h3(&r));
        let report = compare(&c, &sp_2n_r(3));
        assert!(report.agree(), "{report}");
        assert!(c.verify_jacobi(JacobiMode::Full).passed());
        // Con H3(C) = su(3,3).
        let cc = build_algebra("C").unwrap();
        let c = con(&der_h3(&cc));
        let report = compare(&c, &su_pq(3, 3));
        assert!(report.agree(), "{report}");
        assert!(c.verify_jacobi(JacobiMode::Full).passed());
    }

    #[test]
    fn str_grading_supports_involution() {
        // The map fixing Der J and negating L(J′) is an automorphism of
        // Str′: der×L brackets land in L, L×L brackets land in der.
        let h = build_algebra("H").unwrap();
        let der = der_h3(&h);
        let s = str_prime(&der);
        let d = der.dim();
        for i in 0..s.dim() {
            for j in i + 1..s.dim() {
                let parity = usize::from(i >= d) + usize::from(j >= d);
                for (k, _) in s.bracket_basis(i, j) {
                    assert_eq!(usize::from(k >= d), parity % 2, "grading at ({i},{j})");
                }
            }
        }
    }
}

//! Composition algebras by iterated doubling.
//!
//! Starting from the reals, each doubling step adjoins a new unit `l` with
//! `l² = ε` and multiplication
//!
//! ```text
//! x(ly) = l(x̄y),   (lx)y = l(yx),   (lx)(ly) = ε·y·x̄,
//! ```
//!
//! so a chain of signs `ε = (ε1, …, εk)` determines an algebra of dimension
//! `2^k`. With all signs `−1` the chain yields the division algebras
//! `C, H, O`; flipping the *last* sign to `+1` yields the split forms
//! `C~, H~, O~`. In every basis unit product `e_i e_j = ±e_k`, so the whole
//! multiplication is a signed index table.
//!
//! The norm `|x|² = x x̄` is a diagonal quadratic form on the unit basis;
//! the algebra is a composition algebra (`|xy|² = |x|²·|y|²`) exactly
//! while the dimension stays ≤ 8, which [`CompositionAlgebra::check_composition`]
//! verifies by exhaustive polarization.

use crate::exactla::{rat, QMatrix, Rational};
use num::Zero;
use rand::Rng;
use std::fmt;
use std::sync::Arc;

/// Errors surfaced to callers (bad names, malformed requests).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The algebra name is not one of `R, C, H, O, C~, H~, O~`.
    UnknownAlgebra(String),
    /// A request referenced an unsupported combination.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownAlgebra(name) => {
                write!(f, "unknown algebra name `{name}` (expected R, C, H, O, C~, H~ or O~)")
            }
            Error::Unsupported(msg) => write!(f, "unsupported request: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// A finite-dimensional real algebra with a monomial basis: every product of
/// basis units is `±` another basis unit, conjugation acts by signs on the
/// basis, and the norm form is diagonal. Composition algebras and their
/// tensor products both have this shape.
pub trait Algebra: Send + Sync + fmt::Debug {
    /// Vector-space dimension.
    fn dim(&self) -> usize;
    /// Display name.
    fn name(&self) -> &str;
    /// `e_i e_j = sign * e_k`; returns `(k, sign)`.
    fn mul_basis(&self, i: usize, j: usize) -> (usize, i8);
    /// `ē_i = conj_sign(i) * e_i`.
    fn conj_sign(&self, i: usize) -> i8;
    /// `⟨e_i, e_i⟩ = form_sign(i)` (the form is diagonal, off-diagonal zero).
    fn form_sign(&self, i: usize) -> i8;
    /// Human-readable label of basis unit `i`.
    fn basis_label(&self, i: usize) -> String;
}

/// Shared handle to an algebra with monomial basis.
pub type AlgRef = Arc<dyn Algebra>;

/// A composition algebra presented by its doubling chain.
#[derive(Debug)]
pub struct CompositionAlgebra {
    name: String,
    dim: usize,
    eps_chain: Vec<i8>,
    /// `mul[i*dim + j] = (k, sign)` with `e_i e_j = sign e_k`.
    mul: Vec<(usize, i8)>,
    conj: Vec<i8>,
    form: Vec<i8>,
}

impl Algebra for CompositionAlgebra {
    fn dim(&self) -> usize {
        self.dim
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn mul_basis(&self, i: usize, j: usize) -> (usize, i8) {
        self.mul[i * self.dim + j]
    }
    fn conj_sign(&self, i: usize) -> i8 {
        self.conj[i]
    }
    fn form_sign(&self, i: usize) -> i8 {
        self.form[i]
    }
    fn basis_label(&self, i: usize) -> String {
        if i == 0 {
            "1".to_string()
        } else {
            format!("e{i}")
        }
    }
}

impl CompositionAlgebra {
    /// Build the algebra of dimension `2^chain.len()` from a doubling chain.
    pub fn from_chain(name: &str, chain: &[i8]) -> Arc<CompositionAlgebra> {
        assert!(chain.iter().all(|&e| e == 1 || e == -1), "chain signs must be ±1");
        let mut dim = 1usize;
        let mut mul = vec![(0usize, 1i8)];
        let mut conj = vec![1i8];
        for &eps in chain {
            let m = dim;
            let d = 2 * m;
            let mut new_mul = vec![(0usize, 0i8); d * d];
            let at = |i: usize, j: usize| mul[i * m + j];
            for i in 0..m {
                for j in 0..m {
                    // F · F
                    new_mul[i * d + j] = at(i, j);
                    // x(ly) = l(x̄y)
                    let (k, s) = at(i, j);
                    new_mul[i * d + (m + j)] = (m + k, conj[i] * s);
                    // (lx)y = l(yx)
                    let (k, s) = at(j, i);
                    new_mul[(m + i) * d + j] = (m + k, s);
                    // (lx)(ly) = ε y x̄
                    let (k, s) = at(j, i);
                    new_mul[(m + i) * d + (m + j)] = (k, eps * conj[i] * s);
                }
            }
            let mut new_conj = conj.clone();
            new_conj.extend(std::iter::repeat(-1i8).take(m));
            dim = d;
            mul = new_mul;
            conj = new_conj;
        }
        let mut form = vec![0i8; dim];
        for i in 0..dim {
            // ⟨e_i, e_i⟩ = Re(e_i ē_i); e_i e_i is always ± the unit.
            let (k, s) = mul[i * dim + i];
            assert!(k == 0, "basis unit square is not scalar");
            form[i] = conj[i] * s;
        }
        Arc::new(CompositionAlgebra { name: name.to_string(), dim, eps_chain: chain.to_vec(), mul, conj, form })
    }

    /// The doubling chain that produced this algebra.
    pub fn eps_chain(&self) -> &[i8] {
        &self.eps_chain
    }

    /// True if the last doubling sign is `+1` (split form).
    pub fn is_split(&self) -> bool {
        self.eps_chain.last() == Some(&1)
    }

    /// The division algebra `F` such that this algebra is `F²`, if dim > 1.
    pub fn halved(&self) -> Option<Arc<CompositionAlgebra>> {
        if self.eps_chain.is_empty() {
            return None;
        }
        let sub = &self.eps_chain[..self.eps_chain.len() - 1];
        let name = match sub.len() {
            0 => "R",
            1 => {
                if sub == [-1] {
                    "C"
                } else {
                    "C~"
                }
            }
            2 => {
                if sub == [-1, -1] {
                    "H"
                } else {
                    "H~"
                }
            }
            _ => "?",
        };
        Some(CompositionAlgebra::from_chain(name, sub))
    }

    /// Exhaustive polarized check of the composition law
    /// `⟨xz, yw⟩ + ⟨yz, xw⟩ = 2⟨x,y⟩⟨z,w⟩` over all basis 4-tuples.
    pub fn check_composition(&self) -> bool {
        let d = self.dim;
        for a in 0..d {
            for b in 0..d {
                let lhs_outer = 2 * (self.form[a] as i64) * (if a == b { 1 } else { 0 });
                for c in 0..d {
                    for e in 0..d {
                        let (k1, s1) = self.mul_basis(a, c);
                        let (k2, s2) = self.mul_basis(b, e);
                        let t1 = if k1 == k2 { (s1 * s2 * self.form[k1]) as i64 } else { 0 };
                        let (k3, s3) = self.mul_basis(b, c);
                        let (k4, s4) = self.mul_basis(a, e);
                        let t2 = if k3 == k4 { (s3 * s4 * self.form[k3]) as i64 } else { 0 };
                        let rhs = lhs_outer * (self.form[c] as i64) * (if c == e { 1 } else { 0 });
                        if t1 + t2 != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Build a named composition algebra.
///
/// Recognized names: `R`, `C`, `H`, `O` (division) and `C~`, `H~`, `O~`
/// (split; the `~` marks a `+1` in the last doubling slot).
pub fn build_algebra(name: &str) -> Result<Arc<CompositionAlgebra>, Error> {
    let chain: &[i8] = match name {
        "R" => &[],
        "C" => &[-1],
        "H" => &[-1, -1],
        "O" => &[-1, -1, -1],
        "C~" => &[1],
        "H~" => &[-1, 1],
        "O~" => &[-1, -1, 1],
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    };
    Ok(CompositionAlgebra::from_chain(name, chain))
}

/// All seven named composition algebras, division forms first.
pub fn all_names() -> [&'static str; 7] {
    ["R", "C", "H", "O", "C~", "H~", "O~"]
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An element of an algebra with monomial basis, as exact coordinates.
#[derive(Debug, Clone)]
pub struct Element {
    pub alg: AlgRef,
    pub coeffs: Vec<Rational>,
}

fn same_algebra(a: &AlgRef, b: &AlgRef) {
    assert!(
        a.name() == b.name() && a.dim() == b.dim(),
        "elements of different algebras: {} vs {}",
        a.name(),
        b.name()
    );
}

impl Element {
    pub fn zero(alg: &AlgRef) -> Element {
        Element { alg: alg.clone(), coeffs: vec![Rational::zero(); alg.dim()] }
    }

    pub fn basis(alg: &AlgRef, i: usize) -> Element {
        let mut e = Element::zero(alg);
        e.coeffs[i] = rat(1);
        e
    }

    pub fn one(alg: &AlgRef) -> Element {
        Element::basis(alg, 0)
    }

    pub fn from_coeffs(alg: &AlgRef, coeffs: Vec<Rational>) -> Element {
        assert!(coeffs.len() == alg.dim(), "coefficient count != dim");
        Element { alg: alg.clone(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        same_algebra(&self.alg, &other.alg);
        Element {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        same_algebra(&self.alg, &other.alg);
        Element {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        Element { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Algebra product.
    pub fn mul(&self, other: &Element) -> Element {
        same_algebra(&self.alg, &other.alg);
        let d = self.alg.dim();
        let mut out = vec![Rational::zero(); d];
        for i in 0..d {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let (k, s) = self.alg.mul_basis(i, j);
                let term = &self.coeffs[i] * &other.coeffs[j];
                if s == 1 {
                    out[k] += term;
                } else {
                    out[k] -= term;
                }
            }
        }
        Element { alg: self.alg.clone(), coeffs: out }
    }

    /// Conjugation `x ↦ x̄` (identity on the unit, `−1` on imaginaries).
    pub fn conj(&self) -> Element {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.alg.conj_sign(i) == 1 { c.clone() } else { -c.clone() })
            .collect();
        Element { alg: self.alg.clone(), coeffs }
    }

    /// Real part (coefficient of the unit).
    pub fn re(&self) -> Rational {
        self.coeffs[0].clone()
    }

    /// Imaginary part `x − Re(x)`.
    pub fn im(&self) -> Element {
        let mut out = self.clone();
        out.coeffs[0] = Rational::zero();
        out
    }

    /// Inner product `⟨x, y⟩ = Re(x ȳ)`; diagonal in the unit basis.
    pub fn inner(&self, other: &Element) -> Rational {
        same_algebra(&self.alg, &other.alg);
        let mut acc = Rational::zero();
        for i in 0..self.alg.dim() {
            if self.coeffs[i].is_zero() || other.coeffs[i].is_zero() {
                continue;
            }
            let t = &self.coeffs[i] * &other.coeffs[i];
            if self.alg.form_sign(i) == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }

    /// Norm `|x|² = ⟨x, x⟩ = x x̄`.
    pub fn norm(&self) -> Rational {
        self.inner(self)
    }

    /// Commutator `[x, y] = xy − yx`.
    pub fn commutator(&self, other: &Element) -> Element {
        self.mul(other).sub(&other.mul(self))
    }

    /// Associator `[x, y, z] = (xy)z − x(yz)`.
    pub fn associator(x: &Element, y: &Element, z: &Element) -> Element {
        x.mul(y).mul(z).sub(&x.mul(&y.mul(z)))
    }

    /// Random element with integer coefficients in `[-3, 3]`.
    pub fn random(alg: &AlgRef, rng: &mut impl Rng) -> Element {
        let coeffs = (0..alg.dim()).map(|_| rat(rng.gen_range(-3..=3))).collect();
        Element { alg: alg.clone(), coeffs }
    }

    /// Random imaginary element (unit coefficient zero).
    pub fn random_imaginary(alg: &AlgRef, rng: &mut impl Rng) -> Element {
        let mut e = Element::random(alg, rng);
        e.coeffs[0] = Rational::zero();
        e
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", c, self.alg.basis_label(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Linear endomorphisms
// ---------------------------------------------------------------------------

/// A linear map of the underlying vector space of an algebra.
#[derive(Debug, Clone)]
pub struct Endo {
    pub alg: AlgRef,
    pub mat: QMatrix,
}

impl Endo {
    pub fn zero(alg: &AlgRef) -> Endo {
        Endo { alg: alg.clone(), mat: QMatrix::zeros(alg.dim(), alg.dim()) }
    }

    pub fn identity(alg: &AlgRef) -> Endo {
        Endo { alg: alg.clone(), mat: QMatrix::identity(alg.dim()) }
    }

    pub fn from_mat(alg: &AlgRef, mat: QMatrix) -> Endo {
        assert!(mat.rows() == alg.dim() && mat.cols() == alg.dim(), "endo shape mismatch");
        Endo { alg: alg.clone(), mat }
    }

    /// Build from images of the basis units.
    pub fn from_images(alg: &AlgRef, images: &[Element]) -> Endo {
        let d = alg.dim();
        assert!(images.len() == d, "need one image per basis unit");
        let mut mat = QMatrix::zeros(d, d);
        for (j, img) in images.iter().enumerate() {
            same_algebra(&img.alg, alg);
            for (i, c) in img.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    mat.set(i, j, c.clone());
                }
            }
        }
        Endo { alg: alg.clone(), mat }
    }

    pub fn apply(&self, x: &Element) -> Element {
        same_algebra(&self.alg, &x.alg);
        Element { alg: self.alg.clone(), coeffs: self.mat.apply(&x.coeffs) }
    }

    pub fn add(&self, other: &Endo) -> Endo {
        same_algebra(&self.alg, &other.alg);
        Endo { alg: self.alg.clone(), mat: self.mat.add(&other.mat) }
    }

    pub fn sub(&self, other: &Endo) -> Endo {
        same_algebra(&self.alg, &other.alg);
        Endo { alg: self.alg.clone(), mat: self.mat.sub(&other.mat) }
    }

    pub fn scale(&self, c: &Rational) -> Endo {
        Endo { alg: self.alg.clone(), mat: self.mat.scale(c) }
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Endo) -> Endo {
        same_algebra(&self.alg, &other.alg);
        Endo { alg: self.alg.clone(), mat: self.mat.matmul(&other.mat) }
    }

    pub fn commutator(&self, other: &Endo) -> Endo {
        same_algebra(&self.alg, &other.alg);
        Endo { alg: self.alg.clone(), mat: self.mat.commutator(&other.mat) }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Leibniz check `T(e_i e_j) = T(e_i)e_j + e_i T(e_j)` over all pairs.
    pub fn is_derivation(&self) -> bool {
        let d = self.alg.dim();
        let alg = &self.alg;
        for i in 0..d {
            let ei = Element::basis(alg, i);
            let dei = self.apply(&ei);
            for j in 0..d {
                let ej = Element::basis(alg, j);
                let lhs = self.apply(&ei.mul(&ej));
                let rhs = dei.mul(&ej).add(&ei.mul(&self.apply(&ej)));
                if !lhs.sub(&rhs).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Antisymmetry with respect to the norm form:
    /// `⟨Tx, y⟩ + ⟨x, Ty⟩ = 0` for all basis `x, y`.
    pub fn is_skew(&self) -> bool {
        let d = self.alg.dim();
        for i in 0..d {
            for j in 0..d {
                // ⟨T e_i, e_j⟩ = form_j * mat[j][i]
                let a = self.mat.get(j, i)
                    * rat(self.alg.form_sign(j) as i64);
                let b = self.mat.get(i, j)
                    * rat(self.alg.form_sign(i) as i64);
                if !(a + b).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Conjugate by the conjugation map: `T̄ = K T K` where `Kx = x̄`.
    pub fn conj_conjugate(&self) -> Endo {
        let d = self.alg.dim();
        let mut mat = QMatrix::zeros(d, d);
        for (i, j, v) in self.mat.iter_nonzero() {
            let s = self.alg.conj_sign(i) * self.alg.conj_sign(j);
            mat.set(i, j, if s == 1 { v.clone() } else { -v.clone() });
        }
        Endo { alg: self.alg.clone(), mat }
    }

    /// Flattened matrix (row-major) as a coordinate vector; used to express
    /// operators in a chosen operator basis.
    pub fn flatten(&self) -> Vec<Rational> {
        let d = self.alg.dim();
        let mut v = vec![Rational::zero(); d * d];
        for (i, j, x) in self.mat.iter_nonzero() {
            v[i * d + j] = x.clone();
        }
        v
    }
}

/// Left multiplication operator `L_x : z ↦ xz`.
pub fn left_mul(x: &Element) -> Endo {
    let d = x.alg.dim();
    let mut mat = QMatrix::zeros(d, d);
    for (i, c) in x.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            let (k, s) = x.alg.mul_basis(i, j);
            mat.add_at(k, j, &(c * rat(s as i64)));
        }
    }
    Endo { alg: x.alg.clone(), mat }
}

/// Right multiplication operator `R_x : z ↦ zx`.
pub fn right_mul(x: &Element) -> Endo {
    let d = x.alg.dim();
    let mut mat = QMatrix::zeros(d, d);
    for (i, c) in x.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            let (k, s) = x.alg.mul_basis(j, i);
            mat.add_at(k, j, &(c * rat(s as i64)));
        }
    }
    Endo { alg: x.alg.clone(), mat }
}

/// The standard inner derivation
/// `D_{x,y} = [L_x, L_y] + [L_x, R_y] + [R_x, R_y]`.
///
/// Equivalently `D_{x,y}(z) = [[x,y], z] − 3[x, y, z]`; both forms are
/// exercised by the unit tests.
pub fn d_derivation(x: &Element, y: &Element) -> Endo {
    let lx = left_mul(x);
    let ly = left_mul(y);
    let rx = right_mul(x);
    let ry = right_mul(y);
    lx.commutator(&ly).add(&lx.commutator(&ry)).add(&rx.commutator(&ry))
}

/// The rotation `S_{x,y} : z ↦ ⟨x,z⟩y − ⟨y,z⟩x` (skew for the norm form).
pub fn s_rotation(x: &Element, y: &Element) -> Endo {
    same_algebra(&x.alg, &y.alg);
    let d = x.alg.dim();
    let mut mat = QMatrix::zeros(d, d);
    for j in 0..d {
        let fj = rat(x.alg.form_sign(j) as i64);
        // column j: form_j * (x_j * y − y_j * x)
        for i in 0..d {
            let v = (&x.coeffs[j] * &y.coeffs[i] - &y.coeffs[j] * &x.coeffs[i]) * &fj;
            if !v.is_zero() {
                mat.set(i, j, v);
            }
        }
    }
    Endo { alg: x.alg.clone(), mat }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(name: &str) -> AlgRef {
        build_algebra(name).unwrap()
    }

    #[test]
    fn complex_and_split_complex_squares() {
        let c = alg("C");
        let i = Element::basis(&c, 1);
        assert_eq!(i.mul(&i).coeffs[0], rat(-1));
        let cs = alg("C~");
        let j = Element::basis(&cs, 1);
        assert_eq!(j.mul(&j).coeffs[0], rat(1));
    }

    #[test]
    fn octonion_basic_relations() {
        let o = alg("O");
        assert_eq!(o.dim(), 8);
        // Quaternionic subalgebra: with e2 the first doubling unit,
        // e1 e2 = e1 (l·1) = l(ē1·1) = −e3 in this chain convention.
        let e1 = Element::basis(&o, 1);
        let e2 = Element::basis(&o, 2);
        let e3 = Element::basis(&o, 3);
        assert!(e1.mul(&e2).add(&e3).is_zero());
        // All imaginary units square to −1.
        for i in 1..8 {
            let e = Element::basis(&o, i);
            assert_eq!(e.mul(&e).coeffs[0], rat(-1));
            assert_eq!(e.norm(), rat(1));
        }
        // Nonassociative: the associator of e1, e2, e4 is nonzero.
        let e4 = Element::basis(&o, 4);
        assert!(!Element::associator(&e1, &e2, &e4).is_zero());
    }

    #[test]
    fn split_octonion_norm_signature() {
        let os = alg("O~");
        // l = e4 (the doubling unit) has norm −ε = −1.
        assert_eq!(os.form_sign(4), -1);
        let split: i64 = (0..8).map(|i| os.form_sign(i) as i64).sum();
        assert_eq!(split, 0, "split octonions have a (4,4) norm form");
    }

    #[test]
    fn conjugation_is_antiautomorphism() {
        for name in all_names() {
            let a = alg(name);
            let d = a.dim();
            for i in 0..d {
                for j in 0..d {
                    let x = Element::basis(&a, i);
                    let y = Element::basis(&a, j);
                    let lhs = x.mul(&y).conj();
                    let rhs = y.conj().mul(&x.conj());
                    assert!(lhs.sub(&rhs).is_zero(), "conj not anti-automorphism in {name}");
                }
            }
        }
    }

    #[test]
    fn alternative_law_holds_up_to_dim8() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
        for name in all_names() {
            let a = alg(name);
            for _ in 0..10 {
                let x = Element::random(&a, &mut rng);
                let y = Element::random(&a, &mut rng);
                assert!(Element::associator(&x, &x, &y).is_zero(), "x(xy)=(xx)y fails in {name}");
                assert!(Element::associator(&x, &y, &y).is_zero(), "(xy)y=x(yy) fails in {name}");
            }
        }
    }

    #[test]
    fn composition_law_all_named_algebras() {
        for name in all_names() {
            let a = build_algebra(name).unwrap();
            assert!(a.check_composition(), "composition law fails in {name}");
        }
    }

    #[test]
    fn composition_law_fails_in_dim16() {
        let s = CompositionAlgebra::from_chain("S", &[-1, -1, -1, -1]);
        assert!(!s.check_composition(), "sedenions must not satisfy the composition law");
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(build_algebra("Q"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn d_derivation_is_a_derivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["H", "O", "O~"] {
            let a = alg(name);
            for _ in 0..5 {
                let x = Element::random(&a, &mut rng);
                let y = Element::random(&a, &mut rng);
                let d = d_derivation(&x, &y);
                assert!(d.is_derivation(), "D_(x,y) not a derivation in {name}");
                assert!(d.is_skew(), "D_(x,y) not skew in {name}");
            }
        }
    }

    #[test]
    fn d_derivation_bracket_minus_associator_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = alg("O");
        for _ in 0..5 {
            let x = Element::random(&a, &mut rng);
            let y = Element::random(&a, &mut rng);
            let z = Element::random(&a, &mut rng);
            let d = d_derivation(&x, &y);
            let lhs = d.apply(&z);
            let rhs = x
                .commutator(&y)
                .commutator(&z)
                .sub(&Element::associator(&x, &y, &z).scale(&rat(3)));
            assert!(lhs.sub(&rhs).is_zero(), "D_(x,y)z != [[x,y],z] - 3[x,y,z]");
        }
    }

    #[test]
    fn d_derivation_cyclic_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = alg("O");
        for _ in 0..3 {
            let x = Element::random(&a, &mut rng);
            let y = Element::random(&a, &mut rng);
            let z = Element::random(&a, &mut rng);
            let sum = d_derivation(&x.commutator(&y), &z)
                .add(&d_derivation(&y.commutator(&z), &x))
                .add(&d_derivation(&z.commutator(&x), &y));
            assert!(sum.is_zero(), "cyclic derivation identity fails");
        }
    }

    #[test]
    fn multiplication_operator_identities_on_imaginaries() {
        // For imaginary x, y:
        //   [L_x,L_y] = (2/3)D_{x,y} + (1/3)L_[x,y] + (2/3)R_[x,y]
        //   [L_x,R_y] = -(1/3)D_{x,y} + (1/3)L_[x,y] - (1/3)R_[x,y]
        //   [R_x,R_y] = (2/3)D_{x,y} - (2/3)L_[x,y] - (1/3)R_[x,y]
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for name in ["O", "O~"] {
            let a = alg(name);
            for _ in 0..4 {
                let x = Element::random_imaginary(&a, &mut rng);
                let y = Element::random_imaginary(&a, &mut rng);
                let d = d_derivation(&x, &y);
                let c = x.commutator(&y);
                let (lc, rc) = (left_mul(&c), right_mul(&c));
                let ll = left_mul(&x).commutator(&left_mul(&y));
                let lr = left_mul(&x).commutator(&right_mul(&y));
                let rr = right_mul(&x).commutator(&right_mul(&y));
                let e1 = ll
                    .sub(&d.scale(&ratio(2, 3)))
                    .sub(&lc.scale(&ratio(1, 3)))
                    .sub(&rc.scale(&ratio(2, 3)));
                assert!(e1.is_zero(), "[L,L] identity fails in {name}");
                let e2 = lr
                    .add(&d.scale(&ratio(1, 3)))
                    .sub(&lc.scale(&ratio(1, 3)))
                    .add(&rc.scale(&ratio(1, 3)));
                assert!(e2.is_zero(), "[L,R] identity fails in {name}");
                let e3 = rr
                    .sub(&d.scale(&ratio(2, 3)))
                    .add(&lc.scale(&ratio(2, 3)))
                    .add(&rc.scale(&ratio(1, 3)));
                assert!(e3.is_zero(), "[R,R] identity fails in {name}");
            }
        }
    }

    #[test]
    fn s_rotation_is_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["O", "O~"] {
            let a = alg(name);
            let x = Element::random(&a, &mut rng);
            let y = Element::random(&a, &mut rng);
            let s = s_rotation(&x, &y);
            assert!(s.is_skew());
        }
    }

    #[test]
    fn inner_product_matches_re_mul_conj() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for name in all_names() {
            let a = alg(name);
            let x = Element::random(&a, &mut rng);
            let y = Element::random(&a, &mut rng);
            assert_eq!(x.inner(&y), x.mul(&y.conj()).re());
        }
    }

    #[test]
    fn halved_algebra_chains() {
        let os = build_algebra("O~").unwrap();
        let h = os.halved().unwrap();
        assert_eq!(h.name(), "H");
        assert_eq!(h.eps_chain(), &[-1, -1]);
        assert!(build_algebra("R").unwrap().halved().is_none());
    }
}

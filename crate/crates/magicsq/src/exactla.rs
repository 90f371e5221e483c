//! Exact rational scalars and linear algebra.
//!
//! Everything downstream is built on [`Rational`] (arbitrary-precision,
//! always reduced, positive denominator) and [`QMatrix`]. The two nontrivial
//! operations are [`QMatrix::kernel_basis`] (exact Gauss–Jordan elimination)
//! and [`QMatrix::congruence_signature`] (Sylvester signature of a symmetric
//! matrix via exact symmetric congruence pivoting, including the hyperbolic
//! 2×2 case where every diagonal entry of the active block vanishes).
//!
//! Matrices store their entries either densely or as coordinate triples kept
//! in lexicographic order; small matrices (fewer than 64×64 entries) default
//! to dense storage.

use num::{BigInt, BigRational, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar: arbitrary-precision, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Convenience constructor for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Convenience constructor for the fraction `n/d` (reduced automatically).
pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "ratio: zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Inertia of a real symmetric bilinear form: the number of positive,
/// negative, and zero eigenvalues (computed exactly, without eigenvalues).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureTriple {
    /// Number of positive squares in a diagonalizing basis.
    pub pos: usize,
    /// Number of negative squares.
    pub neg: usize,
    /// Dimension of the radical.
    pub zero: usize,
}

impl SignatureTriple {
    /// `pos - neg`, the classical signature.
    pub fn excess(&self) -> i64 {
        self.pos as i64 - self.neg as i64
    }

    /// Total dimension `pos + neg + zero`.
    pub fn dim(&self) -> usize {
        self.pos + self.neg + self.zero
    }

    /// True when the form is negative definite (all squares negative).
    pub fn is_negative_definite(&self) -> bool {
        self.pos == 0 && self.zero == 0
    }
}

impl fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+, {}-, {}0)", self.pos, self.neg, self.zero)
    }
}

/// Threshold (total entry count) below which matrices default to dense
/// storage.
const DENSE_LIMIT: usize = 64 * 64;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    /// Row-major grid of `rows * cols` entries.
    Dense(Vec<Rational>),
    /// Nonzero entries keyed by `(row, col)`; the map order is the
    /// lexicographic coordinate order.
    Sparse(BTreeMap<(usize, usize), Rational>),
}

/// Exact rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl QMatrix {
    /// Zero matrix; storage is chosen from the size (dense below 64×64).
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let storage = if rows * cols < DENSE_LIMIT {
            Storage::Dense(vec![Rational::zero(); rows * cols])
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        QMatrix { rows, cols, storage }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat(1));
        }
        m
    }

    /// Build from explicit rows (all rows must have equal length).
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = QMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Build from integer rows (test convenience).
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(i, j)` (cloned; zero entries are materialized on demand).
    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j].clone(),
            Storage::Sparse(map) => map.get(&(i, j)).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Overwrite the entry at `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &mut self.storage {
            Storage::Dense(d) => d[i * self.cols + j] = v,
            Storage::Sparse(map) => {
                if v.is_zero() {
                    map.remove(&(i, j));
                } else {
                    map.insert((i, j), v);
                }
            }
        }
    }

    /// `self[i][j] += v`.
    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(map) => map.len(),
        }
    }

    /// Iterate the nonzero entries in lexicographic `(row, col)` order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let cols = self.cols;
        let dense_iter: Box<dyn Iterator<Item = (usize, usize, &Rational)>> = match &self.storage {
            Storage::Dense(d) => Box::new(
                d.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(k, v)| (k / cols, k % cols, v)),
            ),
            Storage::Sparse(map) => Box::new(map.iter().map(|(&(i, j), v)| (i, j, v))),
        };
        dense_iter
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.iter_nonzero().next().is_none()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.iter_nonzero() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in add: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut out = self.clone();
        for (i, j, v) in other.iter_nonzero() {
            out.add_at(i, j, v);
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (i, j, v) in self.iter_nonzero() {
            out.set(i, j, v * c);
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert!(
            self.cols == other.rows,
            "shape mismatch in matmul: {}x{} * {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut out = QMatrix::zeros(self.rows, other.cols);
        // Accumulate via the sparse iterators of both factors.
        let mut rows_of_other: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); other.rows];
        for (k, j, v) in other.iter_nonzero() {
            rows_of_other[k].push((j, v));
        }
        for (i, k, a) in self.iter_nonzero() {
            for &(j, b) in &rows_of_other[k] {
                out.add_at(i, j, &(a * b));
            }
        }
        out
    }

    /// Apply to a (column) vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert!(v.len() == self.cols, "shape mismatch in apply");
        let mut out = vec![Rational::zero(); self.rows];
        for (i, j, a) in self.iter_nonzero() {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        out
    }

    /// Commutator `self*other - other*self`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        self.iter_nonzero().all(|(i, j, v)| *v == self.get(j, i))
    }

    /// Dense row-major copy of the entries.
    pub fn to_dense_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (i, j, v) in self.iter_nonzero() {
            rows[i][j] = v.clone();
        }
        rows
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut rows = self.to_dense_rows();
        row_echelon(&mut rows).len()
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    ///
    /// The basis is canonical for a fixed input: each vector corresponds to a
    /// free column of the reduced row-echelon form and has a `1` in that
    /// coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut rows = self.to_dense_rows();
        let pivots = reduced_row_echelon(&mut rows);
        let pivot_cols: Vec<usize> = pivots.clone();
        let is_pivot = |j: usize| pivot_cols.contains(&j);
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if is_pivot(j) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[j] = rat(1);
            for (r, &pc) in pivot_cols.iter().enumerate() {
                // RREF row r: x_pc + sum over free cols of rows[r][f] * x_f = 0
                v[pc] = -rows[r][j].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Sylvester inertia of a symmetric matrix, by exact symmetric congruence
    /// pivoting. Panics if the matrix is not symmetric.
    pub fn congruence_signature(&self) -> SignatureTriple {
        assert!(self.is_symmetric(), "congruence_signature: matrix not symmetric");
        let n = self.rows;
        let mut a = self.to_dense_rows();
        let (mut pos, mut neg) = (0usize, 0usize);
        let mut k = 0usize;
        while k < n {
            // Find a nonzero diagonal pivot in the active block.
            let diag = (k..n).find(|&i| !a[i][i].is_zero());
            let piv = match diag {
                Some(i) => i,
                None => {
                    // All active diagonal entries vanish. Find any nonzero
                    // off-diagonal entry; if none, the rest is the radical.
                    let mut found = None;
                    'search: for i in k..n {
                        for j in (i + 1)..n {
                            if !a[i][j].is_zero() {
                                found = Some((i, j));
                                break 'search;
                            }
                        }
                    }
                    match found {
                        None => break,
                        Some((i, j)) => {
                            // Congruence by (row/col i) += (row/col j) turns the
                            // hyperbolic pair into a usable diagonal pivot:
                            // new a[i][i] = 2 a[i][j] != 0.
                            for t in 0..n {
                                let v = a[j][t].clone();
                                a[i][t] += v;
                            }
                            for t in 0..n {
                                let v = a[t][j].clone();
                                a[t][i] += v;
                            }
                            i
                        }
                    }
                }
            };
            if piv != k {
                a.swap(piv, k);
                for row in a.iter_mut() {
                    row.swap(piv, k);
                }
            }
            let d = a[k][k].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in (k + 1)..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &d;
                for j in k..n {
                    let v = &a[k][j] * &f;
                    a[i][j] -= v;
                }
            }
            // Re-symmetrize the active block (we only updated rows; columns
            // follow by symmetry of the congruence).
            for i in (k + 1)..n {
                a[i][k] = Rational::zero();
                a[k][i] = Rational::zero();
            }
            for i in (k + 1)..n {
                for j in (i + 1)..n {
                    a[j][i] = a[i][j].clone();
                }
            }
            // Keep entries small: scaling row+col i by a positive rational is
            // a congruence by a positive diagonal matrix.
            for i in (k + 1)..n {
                if let Some(s) = positive_row_normalizer(&a[i][(k + 1)..n.min(a.len())]) {
                    for j in (k + 1)..n {
                        let v = &a[i][j] * &s;
                        a[i][j] = v;
                    }
                    for t in (k + 1)..n {
                        let v = &a[t][i] * &s;
                        a[t][i] = v;
                    }
                }
            }
            k += 1;
        }
        SignatureTriple { pos, neg, zero: n - (pos + neg) }
    }
}

/// Positive scalar that normalizes a row's content (lcm of denominators over
/// gcd of numerators), or `None` for a zero row or an already-normalized one.
fn positive_row_normalizer(row: &[Rational]) -> Option<Rational> {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::from(1);
    for v in row {
        if v.is_zero() {
            continue;
        }
        num_gcd = num::integer::gcd(num_gcd, v.numer().abs());
        den_lcm = num::integer::lcm(den_lcm, v.denom().clone());
    }
    if num_gcd.is_zero() {
        return None;
    }
    let s = Rational::new(den_lcm, num_gcd);
    if s == rat(1) {
        None
    } else {
        Some(s)
    }
}

/// In-place row echelon reduction; returns the pivot columns.
fn row_echelon(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let d = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v /= &d;
        }
        for i in (r + 1)..m {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..n {
                let v = &rows[r][j] * &f;
                rows[i][j] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// In-place reduced row echelon form; returns the pivot columns.
fn reduced_row_echelon(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let pivots = row_echelon(rows);
    let n = rows.first().map_or(0, Vec::len);
    for (r, &c) in pivots.iter().enumerate().rev() {
        for i in 0..r {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..n {
                let v = &rows[r][j] * &f;
                rows[i][j] -= v;
            }
        }
    }
    pivots
}

/// Incremental exact row-echelon accumulator: rows are inserted one at a
/// time and reduced against the pivots seen so far. Used to express vectors
/// in the span of a basis and to count ranks of large systems.
#[derive(Debug, Clone)]
pub struct Echelon {
    n: usize,
    /// Echelon rows, each normalized to a leading 1; parallel array of the
    /// leading column of each row.
    rows: Vec<Vec<Rational>>,
    leads: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new(), leads: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows; returns the residual.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        assert!(v.len() == self.n, "Echelon::reduce: wrong length");
        for (row, &lead) in self.rows.iter().zip(&self.leads) {
            if v[lead].is_zero() {
                continue;
            }
            let f = v[lead].clone();
            for j in lead..self.n {
                if !row[j].is_zero() {
                    let t = &row[j] * &f;
                    v[j] -= t;
                }
            }
        }
        v
    }

    /// Insert `v`; returns `true` if it increased the rank.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let d = r[lead].clone();
        for x in r.iter_mut() {
            *x /= &d;
        }
        // Keep rows sorted by leading column for fast reduction.
        let pos = self.leads.partition_point(|&l| l < lead);
        self.rows.insert(pos, r);
        self.leads.insert(pos, lead);
        true
    }

    /// True when `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: Vec<Rational>) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }
}

/// Expresses vectors in the span of a fixed basis: solves
/// `sum_i x_i basis[i] = v` exactly and returns the coefficients.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    n: usize,
    k: usize,
    /// RREF of the matrix whose rows are `basis[i]` extended by the i-th
    /// standard coordinate vector (to carry the coefficients along).
    rows: Vec<Vec<Rational>>,
    leads: Vec<usize>,
}

impl SpanSolver {
    /// Build from a linearly independent basis of vectors of length `n`.
    pub fn new(basis: &[Vec<Rational>]) -> Self {
        let k = basis.len();
        let n = basis.first().map_or(0, Vec::len);
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(k);
        let mut leads: Vec<usize> = Vec::with_capacity(k);
        for (i, b) in basis.iter().enumerate() {
            assert!(b.len() == n, "SpanSolver: ragged basis");
            let mut row: Vec<Rational> = b.clone();
            row.extend(vec![Rational::zero(); k]);
            row[n + i] = rat(1);
            // reduce against existing
            for (er, &lead) in rows.iter().zip(&leads) {
                if row[lead].is_zero() {
                    continue;
                }
                let f = row[lead].clone();
                for j in 0..(n + k) {
                    if !er[j].is_zero() {
                        let t = &er[j] * &f;
                        row[j] -= t;
                    }
                }
            }
            let lead = row[..n]
                .iter()
                .position(|x| !x.is_zero())
                .expect("SpanSolver: basis is linearly dependent");
            let d = row[lead].clone();
            for x in row.iter_mut() {
                *x /= &d;
            }
            let pos = leads.partition_point(|&l| l < lead);
            rows.insert(pos, row);
            leads.insert(pos, lead);
        }
        SpanSolver { n, k, rows, leads }
    }

    /// Coefficients of `v` in the basis, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert!(v.len() == self.n, "SpanSolver::solve: wrong length");
        let mut row: Vec<Rational> = v.to_vec();
        row.extend(vec![Rational::zero(); self.k]);
        for (er, &lead) in self.rows.iter().zip(&self.leads) {
            if row[lead].is_zero() {
                continue;
            }
            let f = row[lead].clone();
            for j in 0..(self.n + self.k) {
                if !er[j].is_zero() {
                    let t = &er[j] * &f;
                    row[j] -= t;
                }
            }
        }
        if row[..self.n].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(row[self.n..].iter().map(|c| -c).collect())
    }
}

// ---------------------------------------------------------------------------
// Modular elimination (rank of large matrices at machine-word cost).
// ---------------------------------------------------------------------------

/// Two fixed 31-bit primes used for modular rank computations.
pub const MODP_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

/// Residue of a rational mod `p`; `None` if the denominator vanishes mod `p`.
pub fn residue_modp(v: &Rational, p: u64) -> Option<u64> {
    let pm = BigInt::from(p);
    let num = ((v.numer() % &pm) + &pm) % &pm;
    let den = ((v.denom() % &pm) + &pm) % &pm;
    let den: u64 = den.try_into().ok()?;
    if den == 0 {
        return None;
    }
    let num: u64 = num.try_into().ok()?;
    Some(mulmod(num, invmod(den, p), p))
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Rank of a dense matrix over `F_p` (rows are residue vectors).
pub fn rank_modp(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for c in 0..n {
        if rank == m {
            break;
        }
        let Some(piv) = (rank..m).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = invmod(rows[rank][c] % p, p);
        for j in c..n {
            rows[rank][j] = mulmod(rows[rank][j] % p, inv, p);
        }
        let (pivot_row, rest) = {
            let (a, b) = rows.split_at_mut(rank + 1);
            (&a[rank], b)
        };
        for row in rest.iter_mut() {
            let f = row[c] % p;
            if f == 0 {
                continue;
            }
            let neg = p - f;
            for j in c..n {
                row[j] = (row[j] + mulmod(neg, pivot_row[j], p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Incremental mod-p echelon accumulator for very large sparse systems
/// (rank only). Rows are inserted as sparse `(col, residue)` lists.
pub struct EchelonModP {
    n: usize,
    p: u64,
    /// Dense echelon rows with leading coefficient 1, keyed by lead column.
    rows: Vec<Vec<u64>>,
    leads: Vec<usize>,
    /// lead column -> index in `rows`.
    lead_of: Vec<Option<usize>>,
}

impl EchelonModP {
    pub fn new(n: usize, p: u64) -> Self {
        EchelonModP { n, p, rows: Vec::new(), leads: Vec::new(), lead_of: vec![None; n] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a sparse row; returns `true` if the rank grew.
    pub fn insert_sparse(&mut self, entries: &[(usize, u64)]) -> bool {
        let p = self.p;
        let mut v = vec![0u64; self.n];
        for &(j, x) in entries {
            v[j] = (v[j] + x) % p;
        }
        let Some(lead) = self.first_unreduced(&mut v) else {
            return false;
        };
        let inv = invmod(v[lead], p);
        for t in lead..self.n {
            if v[t] != 0 {
                v[t] = mulmod(v[t], inv, p);
            }
        }
        self.lead_of[lead] = Some(self.rows.len());
        self.rows.push(v);
        self.leads.push(lead);
        true
    }

    /// Fully reduce `v` in place; returns its leading index, if nonzero.
    fn first_unreduced(&self, v: &mut [u64]) -> Option<usize> {
        let p = self.p;
        let mut j = 0usize;
        while j < self.n {
            if v[j] == 0 {
                j += 1;
                continue;
            }
            match self.lead_of[j] {
                None => return Some(j),
                Some(ri) => {
                    let f = p - v[j];
                    let row = &self.rows[ri];
                    for t in j..self.n {
                        if row[t] != 0 {
                            v[t] = (v[t] + mulmod(f, row[t], p)) % p;
                        }
                    }
                    j += 1;
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reduction_and_sign() {
        let v = ratio(6, -4);
        assert_eq!(v, ratio(-3, 2));
        assert!(v.denom() > &BigInt::zero());
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let z = QMatrix::zeros(3, 3);
        assert_eq!(z.kernel_basis().len(), 3);
        let id = QMatrix::identity(4);
        assert_eq!(id.kernel_basis().len(), 0);
        assert_eq!(id.rank(), 4);
    }

    #[test]
    fn kernel_of_simple_rank1() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let m = QMatrix::from_i64_rows(&[&[1, 1, 1]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let img = m.apply(v);
            assert!(img.iter().all(Rational::is_zero));
        }
        assert_eq!(m.rank() + ker.len(), m.cols());
    }

    #[test]
    fn signature_examples() {
        let d = QMatrix::from_i64_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        assert_eq!(d.congruence_signature(), SignatureTriple { pos: 1, neg: 1, zero: 1 });

        // Hyperbolic plane: zero diagonal, off-diagonal 1.
        let h = QMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(h.congruence_signature(), SignatureTriple { pos: 1, neg: 1, zero: 0 });

        // Negative definite (Killing form of a compact 3-dim algebra).
        let k = QMatrix::from_i64_rows(&[&[-2, 0, 0], &[0, -2, 0], &[0, 0, -2]]);
        assert_eq!(k.congruence_signature(), SignatureTriple { pos: 0, neg: 3, zero: 0 });
    }

    #[test]
    fn signature_congruence_invariance() {
        let s = QMatrix::from_i64_rows(&[&[2, 1, 0], &[1, -3, 2], &[0, 2, 5]]);
        let p = QMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]);
        assert_eq!(p.rank(), 3);
        let congruent = p.transpose().matmul(&s).matmul(&p);
        assert_eq!(s.congruence_signature(), congruent.congruence_signature());
    }

    #[test]
    fn span_solver_roundtrip() {
        let basis = vec![
            vec![rat(1), rat(0), rat(2)],
            vec![rat(0), rat(3), rat(1)],
        ];
        let solver = SpanSolver::new(&basis);
        let v = vec![rat(2), rat(3), rat(5)]; // 2*b0 + 1*b1
        let c = solver.solve(&v).unwrap();
        assert_eq!(c, vec![rat(2), rat(1)]);
        assert!(solver.solve(&[rat(0), rat(0), rat(1)]).is_none());
    }

    #[test]
    fn modp_rank_matches_exact() {
        let m = QMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let p = MODP_PRIMES[0];
        let rows: Vec<Vec<u64>> = m
            .to_dense_rows()
            .iter()
            .map(|row| row.iter().map(|v| residue_modp(v, p).unwrap()).collect())
            .collect();
        assert_eq!(rank_modp(rows, p), m.rank());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn echelon_modp_incremental() {
        let p = MODP_PRIMES[1];
        let mut e = EchelonModP::new(3, p);
        assert!(e.insert_sparse(&[(0, 1), (1, 2)]));
        assert!(e.insert_sparse(&[(1, 1), (2, 1)]));
        // Dependent row: (0,1),(1,2) + 0*... => already in span.
        assert!(!e.insert_sparse(&[(0, 1), (1, 2)]));
        assert_eq!(e.rank(), 2);
    }
}

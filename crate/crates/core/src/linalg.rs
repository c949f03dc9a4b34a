//! Exact integer and rational linear algebra.
//!
//! Everything here is exact: matrices hold arbitrary-precision integers,
//! eliminations run over the rationals, and no floating point is used
//! anywhere. Entry growth under mutation words is unbounded, so all entry
//! types are `BigInt`/`BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coordinate vector. `num-rational` keeps entries in
/// lowest terms automatically.
pub type RatVector = Vec<BigRational>;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor for literal matrices in tests and models.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.at(i, k) * other.at(k, j)).sum()
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.at(i, k) * &v[k]).sum())
            .collect()
    }

    /// v^T * M * w.
    pub fn bilinear(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let mw = self.mul_vec(w);
        dot(v, &mw)
    }

    /// Same pairing evaluated on rational vectors.
    pub fn bilinear_rat(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += &v[i] * BigRational::from(self.at(i, j).clone()) * &w[j];
            }
        }
        acc
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.at(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                    a.set(i, j, &num / &prev);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        row_hermite_normal_form(self).rows()
    }

    /// Exact inverse over the rationals; `None` when singular.
    pub fn inverse_rational(&self) -> Option<RatMatrix> {
        RatMatrix::from_int(self).inverse()
    }

    /// Exact integer inverse; `None` unless the matrix is unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = self.inverse_rational()?;
        inv.to_int()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_submul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(dst, c) - q * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_submul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, dst) - q * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                (0..self.cols).map(|j| self.at(i, j).to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

/// Smith decomposition `U * M * V = D` with unimodular `U`, `V` and
/// nonnegative diagonal `D` satisfying `d1 | d2 | ...`.
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        'pivot: loop {
            // Move the nonzero entry of least magnitude in the trailing block to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a.at(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| a.at(i, j).magnitude() < a.at(bi, bj).magnitude())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            if pi != t {
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if !a.at(i, t).is_zero() {
                    let q = a.at(i, t).div_floor(a.at(t, t));
                    a.row_submul(i, t, &q);
                    u.row_submul(i, t, &q);
                    if !a.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a.at(t, j).is_zero() {
                    let q = a.at(t, j).div_floor(a.at(t, t));
                    a.col_submul(j, t, &q);
                    v.col_submul(j, t, &q);
                    if !a.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Pivot must divide the whole trailing block for d1 | d2 | ...
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.at(i, j) % a.at(t, t)).is_zero() {
                        let one = BigInt::from(-1);
                        a.row_submul(t, i, &one);
                        u.row_submul(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if a.at(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { d: a, u, v }
}

/// Canonical basis of the row lattice: row-style Hermite normal form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn row_hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a.at(i, c).is_zero()
                    && best
                        .map(|b| a.at(i, c).magnitude() < a.at(b, c).magnitude())
                        .unwrap_or(true)
                {
                    best = Some(i);
                }
            }
            let Some(pi) = best else { break };
            a.swap_rows(r, pi);
            let mut cleared = true;
            for i in r + 1..rows {
                if !a.at(i, c).is_zero() {
                    let q = a.at(i, c).div_floor(a.at(r, c));
                    a.row_submul(i, r, &q);
                    if !a.at(i, c).is_zero() {
                        cleared = false;
                    }
                }
            }
            if cleared {
                if a.at(r, c).is_negative() {
                    a.negate_row(r);
                }
                for i in 0..r {
                    let q = a.at(i, c).div_floor(a.at(r, c));
                    a.row_submul(i, r, &q);
                }
                r += 1;
                break;
            }
        }
    }
    IntMatrix::from_rows((0..r).map(|i| a.row(i)).collect())
}

/// Basis of the saturation `{ v : M v = 0 over Q }` as matrix rows,
/// canonically normalized (echelon order, positive leading entries).
pub fn saturated_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let steps = m.rows().min(m.cols());
    let mut kernel_rows = Vec::new();
    for j in 0..m.cols() {
        let in_kernel = j >= steps || snf.d.at(j, j).is_zero();
        if in_kernel {
            kernel_rows.push(snf.v.col(j));
        }
    }
    if kernel_rows.is_empty() {
        return IntMatrix::zero(0, m.cols());
    }
    row_hermite_normal_form(&IntMatrix::from_rows(kernel_rows))
}

/// Inertia of a symmetric integer form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Signature of a symmetric matrix by exact congruence diagonalization.
///
/// Pre: `q` symmetric. A zero diagonal entry with a nonzero off-diagonal
/// partner is resolved by the usual row-plus-column addition.
pub fn signature(q: &IntMatrix) -> Signature {
    assert!(q.is_symmetric(), "signature requires a symmetric matrix");
    let n = q.rows();
    let mut a = RatMatrix::from_int(q);
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for k in 0..n {
        if a.at(k, k).is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a.at(i, i).is_zero()) {
                a.swap_rows(k, i);
                a.swap_cols(k, i);
            } else if let Some(i) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) {
                // all remaining diagonal entries vanish; diag becomes 2*a[i][k]
                a.add_row(k, i);
                a.add_col(k, i);
            } else {
                sig.zero += 1;
                continue;
            }
        }
        let pivot = a.at(k, k).clone();
        for i in k + 1..n {
            if !a.at(i, k).is_zero() {
                let f = a.at(i, k) / &pivot;
                a.row_submul(i, k, &f);
                a.col_submul(i, k, &f);
            }
        }
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    sig
}

/// Exact solution of `A x = b`; `None` when inconsistent. When the system
/// is underdetermined the unique solution lying in the row space of `A`
/// is returned.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Option<RatVector> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let ar = RatMatrix::from_int(a);
    let (solution, unique) = ar.solve(b)?;
    if unique {
        return Some(solution);
    }
    // Minimal-norm solution: x = A^T y with (A A^T) y = b. The result is
    // independent of the choice of y since Ker(A A^T) = Ker(A^T).
    let at = a.transpose();
    let gram = RatMatrix::from_int(&a.mul(&at));
    let (y, _) = gram.solve(b)?;
    let atr = RatMatrix::from_int(&at);
    Some(atr.mul_vec(&y))
}

// ---------------------------------------------------------------------------
// Rational matrices (internal workhorse for eliminations and projections).
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data.iter().map(|x| BigRational::from(x.clone())).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> RatVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.at(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s = (0..self.cols).map(|k| self.at(i, k) * other.at(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    /// Integer cast; `None` if any entry has a nontrivial denominator.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.at(i, j);
                if !x.is_integer() {
                    return None;
                }
                out.set(i, j, x.to_integer());
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !a.at(i, k).is_zero())?;
            a.swap_rows(k, pivot_row);
            inv.swap_rows(k, pivot_row);
            let pivot = a.at(k, k).clone();
            a.scale_row(k, &pivot.recip());
            inv.scale_row(k, &pivot.recip());
            for i in 0..n {
                if i != k && !a.at(i, k).is_zero() {
                    let f = a.at(i, k).clone();
                    a.row_submul(i, k, &f);
                    inv.row_submul(i, k, &f);
                }
            }
        }
        Some(inv)
    }

    /// Gaussian elimination on `[A | b]`. Returns `(solution, unique)` with
    /// free variables set to zero, or `None` when inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<(RatVector, bool)> {
        assert_eq!(self.rows, b.len());
        let n = self.cols;
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            rhs.swap(r, p);
            let pivot = a.at(r, c).clone();
            a.scale_row(r, &pivot.recip());
            rhs[r] = &rhs[r] / &pivot;
            for i in 0..self.rows {
                if i != r && !a.at(i, c).is_zero() {
                    let f = a.at(i, c).clone();
                    a.row_submul(i, r, &f);
                    rhs[i] = &rhs[i] - &f * &rhs[r];
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        for i in r..self.rows {
            if !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for (row, &c) in pivot_cols.iter().enumerate() {
            x[c] = rhs[row].clone();
        }
        Some((x, pivot_cols.len() == n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, f: &BigRational) {
        for c in 0..self.cols {
            let v = self.at(r, c) * f;
            self.set(r, c, v);
        }
    }

    fn row_submul(&mut self, dst: usize, src: usize, f: &BigRational) {
        for c in 0..self.cols {
            let v = self.at(dst, c) - f * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn col_submul(&mut self, dst: usize, src: usize, f: &BigRational) {
        for r in 0..self.rows {
            let v = self.at(r, dst) - f * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize) {
        for r in 0..self.rows {
            let v = self.at(r, dst) + self.at(r, src);
            self.set(r, dst, v);
        }
    }
}

// ---------------------------------------------------------------------------
// Integer vector helpers.
// ---------------------------------------------------------------------------

pub fn dot(v: &[BigInt], w: &[BigInt]) -> BigInt {
    assert_eq!(v.len(), w.len());
    v.iter().zip(w).map(|(a, b)| a * b).sum()
}

pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    vec_gcd(v).is_one()
}

/// Sign normalization: negate so the first nonzero coordinate is positive.
pub fn normalize_sign(v: &[BigInt]) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|y| -y).collect(),
        _ => v.to_vec(),
    }
}

pub fn vec_sub(v: &[BigInt], w: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

pub fn vec_add(v: &[BigInt], w: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn vec_neg(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|a| -a).collect()
}

pub fn vec_scale(c: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|a| c * a).collect()
}

pub fn to_rational(v: &[BigInt]) -> RatVector {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

/// Extend a primitive integer row to a unimodular matrix having it as the
/// first row.
pub fn complete_primitive_row(c: &[BigInt]) -> IntMatrix {
    assert!(is_primitive(c), "row must be primitive");
    let row = IntMatrix::from_rows(vec![c.to_vec()]);
    let snf = smith_normal_form(&row);
    // u * c * v = e1 with u = [±1], so the first row of (±v)^{-1} is c.
    let mut t = snf
        .v
        .inverse_unimodular()
        .expect("SNF column transform is unimodular");
    if snf.u.at(0, 0).is_negative() {
        t.negate_row(0);
    }
    debug_assert_eq!(t.row(0), c);
    t
}

/// Enumerate integer vectors of the given dimension by increasing sup-norm
/// shell, lexicographic within a shell, first nonzero coordinate positive.
pub fn shell_vectors(dim: usize, bound: u64) -> impl Iterator<Item = Vec<BigInt>> {
    (1..=bound as i64).flat_map(move |radius| {
        ShellIter::new(dim, radius).filter(move |v| {
            v.iter().any(|x| x.abs() == radius)
                && match v.iter().find(|x| **x != 0) {
                    Some(x) => *x > 0,
                    None => false,
                }
        })
        .map(|v| v.into_iter().map(BigInt::from).collect())
    })
}

struct ShellIter {
    radius: i64,
    current: Option<Vec<i64>>,
}

impl ShellIter {
    fn new(dim: usize, radius: i64) -> Self {
        ShellIter {
            radius,
            current: Some(vec![-radius; dim]),
        }
    }
}

impl Iterator for ShellIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        // lexicographic increment in the box [-radius, radius]^dim
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.radius {
                next[i] += 1;
                for x in next.iter_mut().skip(i + 1) {
                    *x = -self.radius;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

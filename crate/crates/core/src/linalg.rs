//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers (`BigInt`) or
//! reduced fractions of them (`BigRational`). There is no floating point.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A column of integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Euclidean dot product of coordinate vectors (no form involved).
    pub fn dot(&self, other: &IntVector) -> Result<BigInt> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|c| -c).collect())
    }

    /// The representative of `±self` whose first nonzero coordinate is positive.
    pub fn canonical_sign(&self) -> IntVector {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self.0.iter().find(|c| !c.is_zero()), Some(c) if c.is_negative())
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(coords: [i64; N]) -> Self {
        IntVector::from_i64s(&coords)
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            check_dim(ncols, row.len())?;
            entries.extend(row);
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, entries })
    }

    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Self {
        IntMatrix {
            rows: rows.len(),
            cols: C,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        let nrows = cols.first().map_or(0, IntVector::dim);
        for c in cols {
            check_dim(nrows, c.dim())?;
        }
        let entries = (0..nrows)
            .flat_map(|i| cols.iter().map(move |c| c[i].clone()))
            .collect();
        Ok(IntMatrix { rows: nrows, cols: cols.len(), entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix { rows: n, cols: n, entries: vec![BigInt::zero(); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        IntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                entries.push((0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum());
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        check_dim(self.cols, v.dim())?;
        Ok(IntVector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// Top-left `k`×`k` block.
    pub fn leading_block(&self, k: usize) -> IntMatrix {
        let entries = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        IntMatrix { rows: k, cols: k, entries }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, self.rows, self.cols, |i, j| self.get(i, j).to_string())
    }
}

fn write_rows(
    f: &mut fmt::Formatter<'_>,
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> String,
) -> fmt::Result {
    write!(f, "[")?;
    for i in 0..rows {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "[")?;
        for j in 0..cols {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", entry(i, j))?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

/// Dense row-major matrix of reduced fractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            check_dim(ncols, row.len())?;
            entries.extend(row);
        }
        Ok(RatMatrix { rows: nrows, cols: ncols, entries })
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rational()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(BigRational::is_integer)
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(BigRational::to_integer).collect(),
        })
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn transpose(&self) -> RatMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        RatMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Exact determinant by fraction-free elimination on the cleared-denominator matrix.
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let lcm = self.entries.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let scaled: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let det = det_exact(&IntMatrix { rows: self.rows, cols: self.cols, entries: scaled })?;
        let scale = num_traits::pow(lcm, self.rows);
        Ok(BigRational::new(det, scale))
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, self.rows, self.cols, |i, j| self.get(i, j).to_string())
    }
}

/// Exact determinant via Bareiss fraction-free elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Leading principal minors of orders `1..=n`.
pub fn leading_principal_minors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    (1..=m.rows).map(|k| det_exact(&m.leading_block(k))).collect()
}

/// Exact inverse by Gauss–Jordan elimination over the rationals.
pub fn invert_rational(m: &IntMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.to_rational().to_rows();
    let mut inv = RatMatrix::identity(n).to_rows();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                let di = &factor * &inv[col][j];
                a[r][j] -= da;
                inv[r][j] -= di;
            }
        }
    }
    RatMatrix::from_rows(inv)
}

/// `m = Uᵀ · diag(d) · U` with `U` unit upper triangular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldl {
    pub diag: Vec<BigRational>,
    pub upper: RatMatrix,
}

/// LDLᵀ decomposition of a symmetric positive-definite matrix.
///
/// Fails with [`Error::NotPositiveDefinite`] as soon as a non-positive pivot appears.
pub fn ldl_decompose(m: &IntMatrix) -> Result<Ldl> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows;
    let g = m.to_rational();
    let mut d: Vec<BigRational> = Vec::with_capacity(n);
    let mut u = RatMatrix::identity(n).to_rows();
    for j in 0..n {
        let mut dj = g.get(j, j).clone();
        for k in 0..j {
            dj -= &d[k] * &u[k][j] * &u[k][j];
        }
        if !dj.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for i in j + 1..n {
            let mut s = g.get(j, i).clone();
            for k in 0..j {
                s -= &d[k] * &u[k][j] * &u[k][i];
            }
            u[j][i] = s / &dj;
        }
        d.push(dj);
    }
    Ok(Ldl { diag: d, upper: RatMatrix::from_rows(u)? })
}

/// Integer basis of the saturated kernel `{v : Σ cᵢ vᵢ = 0}` of a nonzero functional.
///
/// Unimodular column reduction drives the row `c` to `(g, 0, …, 0)`; the
/// remaining columns of the accumulated transform are the kernel basis.
pub fn kernel_of_functional(coeffs: &IntVector) -> Result<Vec<IntVector>> {
    if coeffs.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let n = coeffs.dim();
    let mut row: Vec<BigInt> = coeffs.coords().to_vec();
    // columns of the unimodular transform
    let mut cols: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();
    for i in 1..n {
        if row[i].is_zero() {
            continue;
        }
        let (a, b) = (row[0].clone(), row[i].clone());
        let eg = a.extended_gcd(&b);
        let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        let (p, q) = (-(&b / &g), &a / &g);
        let c0 = cols[0].clone();
        let ci = cols[i].clone();
        cols[0] = c0.iter().zip(&ci).map(|(x, y)| &s * x + &t * y).collect();
        cols[i] = c0.iter().zip(&ci).map(|(x, y)| &p * x + &q * y).collect();
        row[0] = g;
        row[i] = BigInt::zero();
    }
    if row[0].is_zero() {
        // first coefficient was zero and every later one too; impossible for a nonzero functional
        return Err(Error::ZeroFunctional);
    }
    Ok(cols.into_iter().skip(1).map(IntVector::new).collect())
}

/// gcd of the maximal (`k`×`k`) minors of the `n`×`k` matrix with the given columns.
///
/// A rank-`k` sublattice of `Zⁿ` is saturated iff this is 1.
pub fn maximal_minors_gcd(basis: &[IntVector]) -> Result<BigInt> {
    let k = basis.len();
    let n = basis.first().map_or(0, IntVector::dim);
    let m = IntMatrix::from_columns(basis)?;
    let mut g = BigInt::zero();
    for rows in combinations(n, k) {
        let sub = IntMatrix {
            rows: k,
            cols: k,
            entries: rows
                .iter()
                .flat_map(|&r| (0..k).map(move |c| (r, c)))
                .map(|(r, c)| m.get(r, c).clone())
                .collect(),
        };
        g = g.gcd(&det_exact(&sub)?);
    }
    Ok(g)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rational coefficients `c` with `Σ cⱼ basisⱼ = target`, if `target` lies in the span.
pub fn solve_in_span(basis: &[IntVector], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = target.len();
    if basis.iter().any(|b| b.dim() != n) {
        return None;
    }
    // augmented n × (k+1) system
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            basis
                .iter()
                .map(|b| BigRational::from_integer(b[i].clone()))
                .chain(std::iter::once(target[i].clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        sol[c] = a[row][k].clone();
    }
    Some(sol)
}

/// Whether every vector of `a` is an integer combination of `b` and vice versa.
pub fn spans_same_lattice(a: &[IntVector], b: &[IntVector]) -> bool {
    contains_all(a, b) && contains_all(b, a)
}

/// Whether every vector of `vectors` is an integer combination of `basis`.
pub fn contains_all(basis: &[IntVector], vectors: &[IntVector]) -> bool {
    vectors.iter().all(|v| {
        let target: Vec<BigRational> =
            v.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        matches!(solve_in_span(basis, &target), Some(c) if c.iter().all(BigRational::is_integer))
    })
}

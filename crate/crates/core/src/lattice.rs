//! Integral lattices: norms, definiteness, discriminants, short vectors and
//! orthogonal complements of a marked vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    det_exact, invert_rational, kernel_of_functional, leading_principal_minors, ldl_decompose,
    IntMatrix, IntVector, Ldl,
};

/// A free Z-module with a symmetric integral bilinear form, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMatrix,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Result<Self> {
        Lattice::new(IntMatrix::from_i64(rows))
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// `uᵀ · G · v`.
    pub fn inner(&self, u: &IntVector, v: &IntVector) -> Result<BigInt> {
        u.dot(&self.gram.mul_vec(v)?)
    }

    pub fn norm(&self, v: &IntVector) -> Result<BigInt> {
        self.inner(v, v)
    }

    /// Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        leading_principal_minors(&self.gram)
            .map(|m| m.iter().all(Signed::is_positive))
            .unwrap_or(false)
    }

    pub fn discriminant(&self) -> BigInt {
        det_exact(&self.gram).expect("gram is square")
    }

    /// ⟨v,v⟩ ≡ Σ gᵢᵢ vᵢ² (mod 2), so the diagonal decides evenness.
    pub fn is_even(&self) -> bool {
        self.gram.diagonal().iter().all(|d| d.is_even())
    }

    /// All nonzero `v` with `⟨v,v⟩ ≤ bound`, one per `±v` pair (first nonzero
    /// coordinate positive), sorted lexicographically.
    ///
    /// Fincke–Pohst enumeration over the exact LDLᵀ decomposition.
    pub fn short_vectors(&self, bound: u64) -> Result<Vec<IntVector>> {
        let ldl = ldl_decompose(&self.gram)?;
        if bound == 0 || self.rank() == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut coords = vec![BigInt::zero(); self.rank()];
        let budget = BigRational::from_integer(bound.into());
        fincke_pohst(&ldl, self.rank() - 1, &budget, &mut coords, &mut out);
        Ok(finish(out))
    }

    /// Same contract as [`Lattice::short_vectors`], by exhaustive search over the box
    /// `vᵢ² ≤ bound · (G⁻¹)ᵢᵢ`.
    pub fn short_vectors_bruteforce(&self, bound: u64) -> Result<Vec<IntVector>> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = self.rank();
        if bound == 0 || n == 0 {
            return Ok(Vec::new());
        }
        let inv = invert_rational(&self.gram)?;
        let bound_int = BigInt::from(bound);
        let radii: Vec<BigInt> = (0..n)
            .map(|i| {
                let t = inv.get(i, i) * BigRational::from_integer(bound_int.clone());
                t.floor().to_integer().sqrt()
            })
            .collect();
        let mut cur: Vec<BigInt> = radii.iter().map(|r| -r).collect();
        let mut out = Vec::new();
        loop {
            let v = IntVector::new(cur.clone());
            if !v.is_zero() && v.is_canonical() && self.norm(&v)? <= bound_int {
                out.push(v);
            }
            // odometer step
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(finish(out));
                }
                i -= 1;
                if cur[i] < radii[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -radii[i].clone();
            }
        }
    }
}

fn finish(mut vs: Vec<IntVector>) -> Vec<IntVector> {
    vs.retain(|v| !v.is_zero() && v.is_canonical());
    vs.sort();
    vs.dedup();
    vs
}

// Coordinates are fixed from the last one down. At level i the partial norm is
// d_i (x_i + c_i)^2 with c_i = Σ_{j>i} u_ij x_j, and the remaining budget bounds x_i.
fn fincke_pohst(
    ldl: &Ldl,
    level: usize,
    budget: &BigRational,
    coords: &mut Vec<BigInt>,
    out: &mut Vec<IntVector>,
) {
    let n = coords.len();
    let d = &ldl.diag[level];
    let mut center = BigRational::zero();
    for j in level + 1..n {
        center += ldl.upper.get(level, j) * BigRational::from_integer(coords[j].clone());
    }
    let t = budget / d;
    let s = BigRational::from_integer(t.floor().to_integer().sqrt() + 1);
    let lo = (-&center - &s).ceil().to_integer();
    let hi = (-&center + &s).floor().to_integer();
    let mut x = lo;
    while x <= hi {
        let shifted = BigRational::from_integer(x.clone()) + &center;
        let partial = d * &shifted * &shifted;
        if &partial <= budget {
            coords[level] = x.clone();
            if level == 0 {
                out.push(IntVector::new(coords.clone()));
            } else {
                fincke_pohst(ldl, level - 1, &(budget - &partial), coords, out);
            }
        }
        x += 1;
    }
    coords[level] = BigInt::zero();
}

/// A lattice with a distinguished vector of norm 3 (the square of the hyperplane class).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLattice {
    lattice: Lattice,
    marked: IntVector,
}

impl MarkedLattice {
    pub fn new(lattice: Lattice, marked: IntVector) -> Result<Self> {
        if marked.dim() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), found: marked.dim() });
        }
        let norm = lattice.norm(&marked)?;
        if norm != BigInt::from(3) {
            return Err(Error::MarkedNorm(norm));
        }
        Ok(MarkedLattice { lattice, marked })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn marked(&self) -> &IntVector {
        &self.marked
    }

    /// Pairing with the marked vector.
    pub fn degree(&self, v: &IntVector) -> Result<BigInt> {
        self.lattice.inner(&self.marked, v)
    }

    /// The saturated sublattice of vectors orthogonal to the marked vector.
    pub fn orthogonal_complement(&self) -> Result<Sublattice> {
        let functional = self.lattice.gram.mul_vec(&self.marked)?;
        let basis = kernel_of_functional(&functional)?;
        Sublattice::new(self.lattice.clone(), basis)
    }
}

/// A sublattice given by a basis in parent coordinates, with its induced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    parent: Lattice,
    basis: Vec<IntVector>,
    induced: Lattice,
}

impl Sublattice {
    pub fn new(parent: Lattice, basis: Vec<IntVector>) -> Result<Self> {
        let k = basis.len();
        let mut rows = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                rows[i][j] = parent.inner(&basis[i], &basis[j])?;
            }
        }
        let induced = Lattice::new(IntMatrix::from_rows(rows)?)?;
        Ok(Sublattice { parent, basis, induced })
    }

    pub fn parent(&self) -> &Lattice {
        &self.parent
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn gram(&self) -> &IntMatrix {
        self.induced.gram()
    }

    /// The induced form as a standalone lattice.
    pub fn as_lattice(&self) -> &Lattice {
        &self.induced
    }

    pub fn is_even(&self) -> bool {
        self.induced.is_even()
    }

    /// Parent coordinates of the sublattice vector with the given basis coefficients.
    pub fn embed(&self, coeffs: &IntVector) -> Result<IntVector> {
        if coeffs.dim() != self.basis.len() {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), found: coeffs.dim() });
        }
        let mut out = vec![BigInt::zero(); self.parent.rank()];
        for (c, b) in coeffs.coords().iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b.coords()) {
                *o += c * x;
            }
        }
        Ok(IntVector::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{maximal_minors_gcd, spans_same_lattice};

    fn gram1(t: i64) -> Lattice {
        Lattice::from_i64(&[[3, 4, 6], [4, 10, t], [6, t, 18]]).unwrap()
    }
    fn gram2(t: i64) -> Lattice {
        Lattice::from_i64(&[[3, 6, 7], [6, 18, t], [7, t, 25]]).unwrap()
    }
    fn gram4(t: i64) -> Lattice {
        Lattice::from_i64(&[[3, 1, 7], [1, 3, t], [7, t, 25]]).unwrap()
    }
    fn gram5(t: i64) -> Lattice {
        Lattice::from_i64(&[[3, 1, 10], [1, 3, t], [10, t, 46]]).unwrap()
    }

    #[test]
    fn inner_products() {
        let v = IntVector::from([-4, 1, 1]);
        assert_eq!(gram1(3).inner(&v, &v).unwrap(), 2.into());
        assert_eq!(gram1(3).inner(&IntVector::zeros(3), &v).unwrap(), 0.into());
        let w = IntVector::from([-2, -2, 1]);
        assert_eq!(gram5(9).norm(&w).unwrap(), 2.into());
        assert!(gram1(3).inner(&IntVector::from([1, 0]), &v).is_err());
    }

    #[test]
    fn definiteness_and_discriminant() {
        assert!(gram1(3).is_positive_definite());
        assert!(!gram1(2).is_positive_definite());
        assert!(Lattice::new(IntMatrix::identity(3)).unwrap().is_positive_definite());
        assert_eq!(gram2(14).discriminant(), 156.into());
        let g3 = Lattice::from_i64(&[[3, 6, 10], [6, 18, 20], [10, 20, 46]]).unwrap();
        assert_eq!(g3.discriminant(), 228.into());
        assert_eq!(Lattice::from_i64(&[[3]]).unwrap().discriminant(), 3.into());
    }

    #[test]
    fn rejects_asymmetric_gram() {
        assert_eq!(Lattice::from_i64(&[[1, 2], [0, 1]]), Err(Error::NotSymmetric));
    }

    #[test]
    fn short_vector_examples() {
        assert!(gram1(13).short_vectors(2).unwrap().contains(&[0, 1, -1].into()));
        assert!(gram1(8).short_vectors(2).unwrap().is_empty());
        assert!(gram2(7).short_vectors(2).unwrap().contains(&[5, -1, -1].into()));
        assert!(gram4(7).short_vectors_bruteforce(2).unwrap().contains(&[2, 1, -1].into()));
        let rank_one = Lattice::from_i64(&[[3]]).unwrap();
        assert!(rank_one.short_vectors_bruteforce(2).unwrap().is_empty());
        assert!(rank_one.short_vectors(3).unwrap() == vec![IntVector::from([1])]);
    }

    #[test]
    fn zero_bound_and_indefinite() {
        assert!(gram1(8).short_vectors(0).unwrap().is_empty());
        assert_eq!(gram1(2).short_vectors(2), Err(Error::NotPositiveDefinite));
        assert_eq!(gram1(2).short_vectors_bruteforce(2), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn identity_short_vectors() {
        let id = Lattice::new(IntMatrix::identity(3)).unwrap();
        let v = id.short_vectors(1).unwrap();
        assert_eq!(v, vec![IntVector::from([0, 0, 1]), [0, 1, 0].into(), [1, 0, 0].into()]);
        assert_eq!(id.short_vectors(2).unwrap().len(), 3 + 6);
    }

    #[test]
    fn complements() {
        let h = IntVector::from([1, 0, 0]);
        let c = MarkedLattice::new(gram4(0), h.clone()).unwrap().orthogonal_complement().unwrap();
        assert!(spans_same_lattice(c.basis(), &[[1, -3, 0].into(), [-3, 2, 1].into()]));
        let c = MarkedLattice::new(gram5(4), h.clone()).unwrap().orthogonal_complement().unwrap();
        assert!(spans_same_lattice(c.basis(), &[[1, -3, 0].into(), [-3, -1, 1].into()]));
        let diag = Lattice::from_i64(&[[3, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        let c = MarkedLattice::new(diag, h.clone()).unwrap().orthogonal_complement().unwrap();
        assert!(spans_same_lattice(c.basis(), &[[0, 1, 0].into(), [0, 0, 1].into()]));
        assert_eq!(maximal_minors_gcd(c.basis()).unwrap(), 1.into());
    }

    #[test]
    fn marked_vector_must_have_norm_three() {
        let err = MarkedLattice::new(gram1(8), [0, 1, 0].into()).unwrap_err();
        assert_eq!(err, Error::MarkedNorm(10.into()));
    }

    #[test]
    fn evenness() {
        assert!(!Lattice::from_i64(&[[24, 32], [32, 51]]).unwrap().is_even());
        assert!(Lattice::from_i64(&[[2, 1], [1, 2]]).unwrap().is_even());
        let c = MarkedLattice::new(gram1(8), [1, 0, 0].into()).unwrap().orthogonal_complement().unwrap();
        assert!(c.is_even());
        // the full lattice contains h² of norm 3
        assert!(!gram1(8).is_even());
    }

    #[test]
    fn embed_maps_coefficients() {
        let c = MarkedLattice::new(gram4(0), [1, 0, 0].into()).unwrap().orthogonal_complement().unwrap();
        let v = c.embed(&[1, 1].into()).unwrap();
        assert_eq!(gram4(0).inner(&[1, 0, 0].into(), &v).unwrap(), 0.into());
    }
}

//! Finite-index overlattices `B ⊃ A_τ` in the normal form
//! `B = ⟨e₁, e₂, V⟩`, `V = (x′e₁ + y′e₂ + e₃)/n`, `0 ≤ x′, y′ < n`.
//!
//! A candidate is accepted when `B` is integral, `B₀ = h²^⊥ ⊂ B` is integral and
//! even, and `B` has no vector of norm 2 (otherwise its locus is empty, exactly as
//! for `A_τ` itself). A component is irreducible iff no candidate is accepted.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, Verdict};
use crate::lattice::Lattice;
use crate::linalg::{kernel_of_functional, IntMatrix, IntVector, RatMatrix};

/// All `n ≥ 2` with `n² | d`, ascending.
pub fn candidate_indices(d: &BigInt) -> Vec<u64> {
    if !d.is_positive() {
        return Vec::new();
    }
    let root = d.sqrt();
    let mut out = Vec::new();
    let mut n = BigInt::from(2);
    while n <= root {
        if (d % (&n * &n)).is_zero() {
            out.push(u64::try_from(&n).expect("index fits in u64"));
        }
        n += 1;
    }
    out
}

fn check_params(n: u64, xprime: u64, yprime: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameters("index n must be positive".into()));
    }
    if xprime >= n || yprime >= n {
        return Err(Error::InvalidParameters(format!(
            "need 0 <= x', y' < n, got n={n}, x'={xprime}, y'={yprime}"
        )));
    }
    Ok(())
}

/// Gram matrix of `(e₁, e₂, V)`: entries `α = ⟨V,e₁⟩`, `β = ⟨V,e₂⟩`, `γ = ⟨V,V⟩`.
pub fn overlattice_gram(f: &FamilySpec, tau: i64, n: u64, xprime: u64, yprime: u64) -> Result<RatMatrix> {
    check_params(n, xprime, yprime)?;
    let g = f.gram_matrix(tau);
    let w = IntVector::from([xprime as i64, yprime as i64, 1]);
    let gw = g.mul_vec(&w)?;
    let nn = BigInt::from(n);
    let alpha = BigRational::new(gw[0].clone(), nn.clone());
    let beta = BigRational::new(gw[1].clone(), nn.clone());
    let gamma = BigRational::new(w.dot(&gw)?, &nn * &nn);
    let int = |x: &BigInt| BigRational::from_integer(x.clone());
    RatMatrix::from_rows(vec![
        vec![int(g.get(0, 0)), int(g.get(0, 1)), alpha.clone()],
        vec![int(g.get(1, 0)), int(g.get(1, 1)), beta.clone()],
        vec![alpha, beta, gamma],
    ])
}

/// `B₀`: basis in `B`-coordinates and its (rational) Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    pub basis: Vec<IntVector>,
    pub gram: RatMatrix,
}

/// The rank-2 sublattice of `B` orthogonal to `h² = e₁`.
///
/// The basis is the saturated kernel of the pairing-with-`h²` functional on
/// `(e₁, e₂, V)`, Lagrange-reduced for the induced form.
pub fn complement_gram(f: &FamilySpec, tau: i64, n: u64, xprime: u64, yprime: u64) -> Result<Complement> {
    let gram_b = overlattice_gram(f, tau, n, xprime, yprime)?;
    complement_of(&gram_b)
}

fn complement_of(gram_b: &RatMatrix) -> Result<Complement> {
    let row: Vec<BigRational> = (0..gram_b.cols()).map(|j| gram_b.get(0, j).clone()).collect();
    let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let functional = IntVector::new(
        row.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect(),
    );
    let basis = kernel_of_functional(&functional)?;
    let basis = lagrange_reduce(gram_b, basis);
    let gram = induced(gram_b, &basis);
    Ok(Complement { basis, gram })
}

fn pair(g: &RatMatrix, u: &IntVector, v: &IntVector) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..u.dim() {
        for j in 0..v.dim() {
            acc += g.get(i, j) * BigRational::from_integer(&u[i] * &v[j]);
        }
    }
    acc
}

fn induced(g: &RatMatrix, basis: &[IntVector]) -> RatMatrix {
    let rows = basis
        .iter()
        .map(|u| basis.iter().map(|v| pair(g, u, v)).collect())
        .collect();
    RatMatrix::from_rows(rows).expect("square")
}

fn combine(u: &IntVector, v: &IntVector, k: &BigInt) -> IntVector {
    // u - k v
    IntVector::new(u.coords().iter().zip(v.coords()).map(|(a, b)| a - k * b).collect())
}

// Gauss–Lagrange reduction of a rank-2 basis for a positive-definite form.
fn lagrange_reduce(g: &RatMatrix, basis: Vec<IntVector>) -> Vec<IntVector> {
    if basis.len() != 2 {
        return basis;
    }
    let (mut a, mut b) = (basis[0].clone(), basis[1].clone());
    if !pair(g, &a, &a).is_positive() || !pair(g, &b, &b).is_positive() {
        return vec![a, b];
    }
    loop {
        if pair(g, &b, &b) < pair(g, &a, &a) {
            std::mem::swap(&mut a, &mut b);
        }
        let mu = (pair(g, &a, &b) / pair(g, &a, &a)).round().to_integer();
        if mu.is_zero() {
            break;
        }
        b = combine(&b, &a, &mu);
        if pair(g, &b, &b) >= pair(g, &a, &a) {
            break;
        }
    }
    vec![a.canonical_sign(), b.canonical_sign()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RejectionReason {
    #[serde(rename = "B-not-integral")]
    BNotIntegral,
    #[serde(rename = "B0-not-integral")]
    B0NotIntegral,
    #[serde(rename = "B0-not-even")]
    B0NotEven,
    /// `B` contains a vector of norm 2, so no cubic realizes it.
    #[serde(rename = "B-has-root")]
    BHasRoot,
}

impl RejectionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectionReason::BNotIntegral => "B-not-integral",
            RejectionReason::B0NotIntegral => "B0-not-integral",
            RejectionReason::B0NotEven => "B0-not-even",
            RejectionReason::BHasRoot => "B-has-root",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlatticeCandidate {
    pub n: u64,
    pub xprime: u64,
    pub yprime: u64,
    pub gram_b: RatMatrix,
    pub b0_basis: Vec<IntVector>,
    pub gram_b0: RatMatrix,
    pub accepted: bool,
    pub rejection: Option<RejectionReason>,
    /// Norm-2 vector of `B` (in `B`-coordinates) when rejected for that reason.
    pub root: Option<IntVector>,
}

impl OverlatticeCandidate {
    pub fn evaluate(f: &FamilySpec, tau: i64, n: u64, xprime: u64, yprime: u64) -> Result<Self> {
        let gram_b = overlattice_gram(f, tau, n, xprime, yprime)?;
        let Complement { basis: b0_basis, gram: gram_b0 } = complement_of(&gram_b)?;
        let mut root = None;
        let rejection = if !gram_b.is_integral() {
            Some(RejectionReason::BNotIntegral)
        } else if !gram_b0.is_integral() {
            Some(RejectionReason::B0NotIntegral)
        } else if !gram_b0.to_integer().map(|g| g.diagonal().iter().all(|d| d.is_even())).unwrap_or(false) {
            Some(RejectionReason::B0NotEven)
        } else {
            root = find_root(gram_b.to_integer().as_ref().expect("integral"))?;
            root.as_ref().map(|_| RejectionReason::BHasRoot)
        };
        Ok(OverlatticeCandidate {
            n,
            xprime,
            yprime,
            gram_b,
            b0_basis,
            gram_b0,
            accepted: rejection.is_none(),
            rejection,
            root,
        })
    }

    /// `det(gram_B) · n²`, which equals `d(A_τ)`.
    pub fn index_identity(&self) -> Result<BigRational> {
        let n = BigInt::from(self.n);
        Ok(self.gram_b.det()? * BigRational::from_integer(&n * &n))
    }
}

fn find_root(gram: &IntMatrix) -> Result<Option<IntVector>> {
    let lattice = Lattice::new(gram.clone())?;
    let two = BigInt::from(2);
    for v in lattice.short_vectors(2)? {
        if lattice.norm(&v)? == two {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

impl fmt::Display for OverlatticeCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} x'={} y'={} B={} B0={}", self.n, self.xprime, self.yprime, self.gram_b, self.gram_b0)?;
        match self.rejection {
            Some(r) => write!(f, " rejected: {}", r.as_str())?,
            None => write!(f, " ACCEPTED")?,
        }
        if let Some(root) = &self.root {
            write!(f, " root={root}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shortcut {
    SquarefreeDiscriminant,
    FullSieve,
}

impl Shortcut {
    pub fn as_str(self) -> &'static str {
        match self {
            Shortcut::SquarefreeDiscriminant => "squarefree-discriminant",
            Shortcut::FullSieve => "full-sieve",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityVerdict {
    pub tau: i64,
    pub discriminant: BigInt,
    pub indices: Vec<u64>,
    pub candidates_checked: usize,
    /// Every candidate, in `(n, x′, y′)` order.
    pub ledger: Vec<OverlatticeCandidate>,
    pub survivors: Vec<OverlatticeCandidate>,
    pub irreducible: bool,
    pub shortcut: Shortcut,
}

/// Runs the overlattice sieve on a nonempty component.
pub fn sieve(f: &FamilySpec, tau: i64) -> Result<IrreducibilityVerdict> {
    let class = f.classify_component(tau)?;
    let Verdict::Nonempty { discriminant } = class.verdict else {
        return Err(Error::EmptyComponent { family: f.name.clone(), tau });
    };
    let indices = candidate_indices(&discriminant);
    let mut ledger = Vec::new();
    for &n in &indices {
        for x in 0..n {
            for y in 0..n {
                ledger.push(OverlatticeCandidate::evaluate(f, tau, n, x, y)?);
            }
        }
    }
    let survivors: Vec<_> = ledger.iter().filter(|c| c.accepted).cloned().collect();
    Ok(IrreducibilityVerdict {
        tau,
        discriminant,
        candidates_checked: ledger.len(),
        shortcut: if indices.is_empty() { Shortcut::SquarefreeDiscriminant } else { Shortcut::FullSieve },
        indices,
        irreducible: survivors.is_empty(),
        survivors,
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::builtin_family;
    use crate::linalg::contains_all;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn indices() {
        assert_eq!(candidate_indices(&36.into()), vec![2, 3, 6]);
        assert_eq!(candidate_indices(&64.into()), vec![2, 4, 8]);
        assert!(candidate_indices(&53.into()).is_empty());
        assert!(candidate_indices(&0.into()).is_empty());
    }

    #[test]
    fn alpha_closed_form_c8_c26() {
        let f = builtin_family("c8-c26").unwrap();
        for n in 2..6u64 {
            for x in 0..n {
                for y in 0..n {
                    let g = overlattice_gram(&f, 1, n, x, y).unwrap();
                    assert_eq!(g.get(0, 2), &r(3 * x as i64 + y as i64 + 7, n as i64));
                }
            }
        }
    }

    #[test]
    fn gamma_closed_form_c18_c38() {
        let f = builtin_family("c18-c38").unwrap();
        let tau = 20i64;
        let (n, x, y) = (4i64, 3i64, 2i64);
        let g = overlattice_gram(&f, tau, n as u64, x as u64, y as u64).unwrap();
        let num = 3 * x * x + 18 * y * y + 2 * tau * y + 20 * x + 12 * x * y + 46;
        assert_eq!(g.get(2, 2), &r(num, n * n));
    }

    #[test]
    fn index_one_is_the_lattice_itself() {
        let f = builtin_family("c18-c14").unwrap();
        let g = overlattice_gram(&f, 8, 1, 0, 0).unwrap();
        assert_eq!(g, f.gram_matrix(8).to_rational());
        let c = complement_gram(&f, 8, 1, 0, 0).unwrap();
        let a0 = f.gram_at_tau(8).orthogonal_complement().unwrap();
        assert_eq!(c.gram.det().unwrap(), BigRational::from_integer(a0.as_lattice().discriminant()));
        assert!(crate::linalg::spans_same_lattice(&c.basis, a0.basis()));
    }

    #[test]
    fn parameter_checks() {
        let f = builtin_family("c18-c14").unwrap();
        assert!(overlattice_gram(&f, 8, 2, 2, 0).is_err());
        assert!(overlattice_gram(&f, 8, 0, 0, 0).is_err());
    }

    #[test]
    fn c18_c14_complement_contains_scroll_difference() {
        let f = builtin_family("c18-c14").unwrap();
        for n in 2..5 {
            for x in 0..n {
                for y in 0..n {
                    let c = complement_gram(&f, 6, n, x, y).unwrap();
                    assert!(contains_all(&c.basis, &[[4, -3, 0].into()]));
                }
            }
        }
    }

    #[test]
    fn c8_c38_tau_minus_one_candidate() {
        let f = builtin_family("c8-c38").unwrap();
        let c = OverlatticeCandidate::evaluate(&f, -1, 3, 1, 2).unwrap();
        assert!(c.gram_b.is_integral());
        assert_eq!(c.gram_b.to_integer().unwrap(), IntMatrix::from_i64(&[[3, 1, 5], [1, 3, 2], [5, 2, 9]]));
        // det(B) = 5, so B0 has determinant 15 in any basis
        assert_eq!(c.gram_b0.det().unwrap(), r(15, 1));
        assert_eq!(c.gram_b0.to_integer().unwrap(), IntMatrix::from_i64(&[[4, -1], [-1, 4]]));
        assert_eq!(c.rejection, Some(RejectionReason::BHasRoot));
        assert_eq!(c.root, Some([1, 0, -1].into()));
    }

    #[test]
    fn sieve_squarefree_shortcut() {
        let f = builtin_family("c18-c14").unwrap();
        let v = sieve(&f, 5).unwrap();
        assert_eq!(v.discriminant, 57.into());
        assert_eq!(v.shortcut, Shortcut::SquarefreeDiscriminant);
        assert!(v.irreducible);
        assert_eq!(v.candidates_checked, 0);
    }

    #[test]
    fn sieve_refuses_empty_component() {
        let f = builtin_family("c18-c14").unwrap();
        assert_eq!(sieve(&f, 3), Err(Error::EmptyComponent { family: "c18-c14".into(), tau: 3 }));
    }

    #[test]
    fn sieve_c8_c38_minus_one() {
        let f = builtin_family("c8-c38").unwrap();
        let v = sieve(&f, -1).unwrap();
        assert_eq!(v.indices, vec![3]);
        assert_eq!(v.candidates_checked, 9);
        let integral: Vec<_> = v.ledger.iter().filter(|c| c.gram_b.is_integral()).collect();
        assert_eq!(integral.len(), 1);
        assert_eq!((integral[0].n, integral[0].xprime, integral[0].yprime), (3, 1, 2));
        assert!(v.irreducible);
    }

    #[test]
    fn sieve_finds_genuine_overlattice() {
        // V = (S14 + T)/2 gives an integral B with det 21, even B0 and no roots
        let f = builtin_family("c18-c14").unwrap();
        let v = sieve(&f, 8).unwrap();
        assert!(!v.irreducible);
        assert_eq!(v.survivors.len(), 1);
        let s = &v.survivors[0];
        assert_eq!((s.n, s.xprime, s.yprime), (2, 0, 1));
        assert_eq!(s.gram_b.to_integer().unwrap(), IntMatrix::from_i64(&[[3, 4, 5], [4, 10, 9], [5, 9, 11]]));
    }
}

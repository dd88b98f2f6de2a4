//! Brauer-class triviality for sextic del Pezzo fibrations (`b₂`, `b₃`) and
//! quadric surface bundles (`β`), decided through pairings with the fiber class.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, FiberKind, FiberSpec, Verdict};
use crate::linalg::IntVector;

pub const GOOD_FIBRATION_ASSUMPTION: &str =
    "the sextic del Pezzo fibration of a general member is good";

/// A cycle `W = a·e₁ + b·e₂ + c·e₃` with its pairing against the fiber class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleWitness {
    pub coefficients: IntVector,
    pub pairing: BigInt,
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficients.coords();
        write!(f, "W_{{{},{},{}}}", c[0], c[1], c[2])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrauerClass {
    Trivial { witness: CycleWitness },
    Nontrivial,
}

impl BrauerClass {
    pub fn is_trivial(&self) -> bool {
        matches!(self, BrauerClass::Trivial { .. })
    }

    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            BrauerClass::Trivial { witness } => Some(witness),
            BrauerClass::Nontrivial => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        if self.is_trivial() {
            "triv"
        } else {
            "nontriv"
        }
    }

    fn from_witness(w: Option<CycleWitness>) -> Self {
        match w {
            Some(witness) => BrauerClass::Trivial { witness },
            None => BrauerClass::Nontrivial,
        }
    }
}

fn fiber_of(f: &FamilySpec, kind: Option<FiberKind>) -> Result<&FiberSpec> {
    let expected = kind.map(FiberKind::as_str).unwrap_or("fiber");
    match &f.fiber {
        Some(fs) if kind.is_none_or(|k| k == fs.kind) => Ok(fs),
        _ => Err(Error::FiberNotApplicable { family: f.name.clone(), expected }),
    }
}

/// Coefficients of `W ↦ ⟨W, F⟩`, i.e. `gram(τ)·F`.
pub fn fiber_pairing_form(f: &FamilySpec, tau: i64) -> Result<IntVector> {
    let fiber = fiber_of(f, None)?;
    f.gram_matrix(tau).mul_vec(&fiber.coefficients)
}

fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

// Solves cb·b + cc·c = k with b the least positive admissible value
// (b is taken modulo |cc| / gcd(cb, cc)).
fn solve_two(cb: &BigInt, cc: &BigInt, k: &BigInt) -> Option<(BigInt, BigInt)> {
    if cc.is_zero() {
        if cb.is_zero() {
            return k.is_zero().then(|| (BigInt::zero(), BigInt::zero()));
        }
        return k.is_multiple_of(cb).then(|| (k / cb, BigInt::zero()));
    }
    let m = cc.abs();
    let g = cb.gcd(&m);
    if !k.is_multiple_of(&g) {
        return None;
    }
    let modulus = &m / &g;
    let b = if modulus.is_one() {
        BigInt::one()
    } else {
        let inv = (cb / &g).extended_gcd(&modulus).x;
        let r = ((k / &g) * inv).mod_floor(&modulus);
        if r.is_zero() {
            modulus
        } else {
            r
        }
    };
    let rest = k - cb * &b;
    debug_assert!(rest.is_multiple_of(cc));
    let c = rest / cc;
    Some((b, c))
}

/// Integer solution of `c_a·a + c_b·b + c_c·c = k` in witness normal form.
///
/// Prefers `a = 0` with the least positive `b`. If that is impossible, `a` is
/// scanned over `0, 1, -1, 2, -2, …`, which reaches every residue class that
/// can occur before exceeding `gcd(c_b, c_c)`.
pub fn solve_pairing(form: &IntVector, k: &BigInt) -> Option<IntVector> {
    let c = form.coords();
    let g = gcd_all(c);
    if g.is_zero() || !k.is_multiple_of(&g) {
        return None;
    }
    let (ca, cb, cc) = (&c[0], &c[1], &c[2]);
    let h = cb.gcd(cc);
    if h.is_zero() {
        return Some(IntVector::new(vec![k / ca, BigInt::zero(), BigInt::zero()]));
    }
    let mut a = BigInt::zero();
    loop {
        if let Some((b, c)) = solve_two(cb, cc, &(k - ca * &a)) {
            return Some(IntVector::new(vec![a, b, c]));
        }
        a = if a.is_positive() { -a } else { -a + 1 };
        if a.abs() > h {
            return None;
        }
    }
}

/// A cycle pairing to exactly `k` with the fiber class, if one exists.
pub fn multisection_witness(f: &FamilySpec, tau: i64, k: i64) -> Result<Option<CycleWitness>> {
    let fiber = fiber_of(f, None)?;
    let form = fiber_pairing_form(f, tau)?;
    let Some(coefficients) = solve_pairing(&form, &BigInt::from(k)) else {
        return Ok(None);
    };
    let pairing = f.lattice_at(tau).inner(&coefficients, &fiber.coefficients)?;
    assert_eq!(pairing, BigInt::from(k), "witness {coefficients} does not pair to {k}");
    Ok(Some(CycleWitness { coefficients, pairing }))
}

fn require_nonempty(f: &FamilySpec, tau: i64) -> Result<BigInt> {
    match f.classify_component(tau)?.verdict {
        Verdict::Nonempty { discriminant } => Ok(discriminant),
        Verdict::Empty { .. } => Err(Error::EmptyComponent { family: f.name.clone(), tau }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dp6Report {
    pub tau: i64,
    pub form: IntVector,
    pub b2: BrauerClass,
    pub b3: BrauerClass,
    pub both_trivial: bool,
    pub rational_via_fibration: bool,
    pub rational_via_divisor: bool,
    pub assumptions: Vec<String>,
}

pub fn dp6_report(f: &FamilySpec, tau: i64) -> Result<Dp6Report> {
    fiber_of(f, Some(FiberKind::DelPezzo6))?;
    require_nonempty(f, tau)?;
    let b2 = BrauerClass::from_witness(multisection_witness(f, tau, 2)?);
    let b3 = BrauerClass::from_witness(multisection_witness(f, tau, 3)?);
    let both_trivial = b2.is_trivial() && b3.is_trivial();
    Ok(Dp6Report {
        tau,
        form: fiber_pairing_form(f, tau)?,
        b2,
        b3,
        both_trivial,
        rational_via_fibration: both_trivial,
        rational_via_divisor: f.rational_via_divisor(),
        assumptions: vec![GOOD_FIBRATION_ASSUMPTION.to_string()],
    })
}

impl fmt::Display for Dp6Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |c: &BrauerClass| c.witness().map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        writeln!(f, "tau = {}", self.tau)?;
        writeln!(f, "<W,F> = {}", self.form)?;
        writeln!(f, "b2: {} {}", self.b2.as_str(), w(&self.b2))?;
        writeln!(f, "b3: {} {}", self.b3.as_str(), w(&self.b3))?;
        writeln!(f, "rational via fibration: {}", self.rational_via_fibration)?;
        write!(f, "rational via divisor: {}", self.rational_via_divisor)
    }
}

/// Why `β` was declared nontrivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Justification {
    EvenDiscriminantRank3,
    None,
}

impl Justification {
    pub fn as_str(self) -> &'static str {
        match self {
            Justification::EvenDiscriminantRank3 => "even-discriminant-rank-3",
            Justification::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricReport {
    pub tau: i64,
    pub discriminant: BigInt,
    pub form: IntVector,
    /// Trivial with the normal-form odd witness, or nontrivial.
    pub beta: BrauerClass,
    /// The family's named odd cycle, when it pairs oddly at this τ.
    pub odd_witness: Option<CycleWitness>,
    /// A cycle with `⟨W, Q⟩ = 1`, i.e. a rational section.
    pub section_witness: Option<CycleWitness>,
    pub justification: Justification,
    pub rational_via_section: bool,
    pub rational_via_divisor: bool,
}

pub fn quadric_report(f: &FamilySpec, tau: i64) -> Result<QuadricReport> {
    let fiber = fiber_of(f, Some(FiberKind::QuadricSurface))?;
    let discriminant = require_nonempty(f, tau)?;
    let form = fiber_pairing_form(f, tau)?;
    let lattice = f.lattice_at(tau);
    let g = gcd_all(form.coords());
    let beta = if g.is_odd() {
        let coefficients = solve_pairing(&form, &g).expect("gcd is always attained");
        let pairing = lattice.inner(&coefficients, &fiber.coefficients)?;
        BrauerClass::Trivial { witness: CycleWitness { coefficients, pairing } }
    } else {
        BrauerClass::Nontrivial
    };
    let odd_witness = match &f.odd_cycle {
        Some(v) => {
            let pairing = lattice.inner(v, &fiber.coefficients)?;
            pairing.is_odd().then(|| CycleWitness { coefficients: v.clone(), pairing })
        }
        None => None,
    };
    let justification = if !beta.is_trivial() && discriminant.is_even() {
        Justification::EvenDiscriminantRank3
    } else {
        Justification::None
    };
    Ok(QuadricReport {
        tau,
        discriminant,
        section_witness: multisection_witness(f, tau, 1)?,
        rational_via_section: beta.is_trivial(),
        rational_via_divisor: f.rational_via_divisor(),
        form,
        beta,
        odd_witness,
        justification,
    })
}

impl fmt::Display for QuadricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tau = {}", self.tau)?;
        writeln!(f, "d(A_tau) = {}", self.discriminant)?;
        writeln!(f, "<W,Q> = {}", self.form)?;
        match &self.beta {
            BrauerClass::Trivial { witness } => writeln!(f, "beta: triv {witness} (pairing {})", witness.pairing)?,
            BrauerClass::Nontrivial => writeln!(f, "beta: nontriv ({})", self.justification.as_str())?,
        }
        if let Some(w) = &self.odd_witness {
            writeln!(f, "odd cycle: {} = {w} (pairing {})", w.coefficients, w.pairing)?;
        }
        write!(f, "rational via section: {}", self.rational_via_section)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::builtin_family;

    fn fam(n: &str) -> FamilySpec {
        builtin_family(n).unwrap()
    }

    #[test]
    fn pairing_forms() {
        for tau in 3..14 {
            assert_eq!(fiber_pairing_form(&fam("c18-c14"), tau).unwrap(), [6, 16 - tau, 6].into());
        }
        for tau in 7..22 {
            assert_eq!(fiber_pairing_form(&fam("c18-c26"), tau).unwrap(), [6, 6, 28 - tau].into());
        }
        for tau in 12..29 {
            assert_eq!(fiber_pairing_form(&fam("c18-c38"), tau).unwrap(), [6, 6, 40 - tau].into());
        }
        for tau in -2..8 {
            assert_eq!(fiber_pairing_form(&fam("c8-c26"), tau).unwrap(), [2, -2, 7 - tau].into());
        }
        for tau in -2..10 {
            assert_eq!(fiber_pairing_form(&fam("c8-c38"), tau).unwrap(), [2, -2, 10 - tau].into());
        }
    }

    #[test]
    fn witness_examples() {
        let w = multisection_witness(&fam("c18-c14"), 5, 2).unwrap().unwrap();
        assert_eq!(w.coefficients, [0, 4, -7].into());
        let w = multisection_witness(&fam("c18-c26"), 9, 3).unwrap().unwrap();
        assert_eq!(w.coefficients, [0, 10, -3].into());
        assert_eq!(multisection_witness(&fam("c18-c38"), 16, 2).unwrap(), None);
    }

    #[test]
    fn solver_fallback_needs_nonzero_a() {
        // 4b + 6c is always even, so k = 3 needs an odd a
        let form = IntVector::from([3, 4, 6]);
        let w = solve_pairing(&form, &3.into()).unwrap();
        assert_eq!(w, [1, 3, -2].into());
        let w = solve_pairing(&form, &5.into()).unwrap();
        assert_eq!(w.dot(&form).unwrap(), 5.into());
        assert_eq!(w[0], 1.into());
        assert_eq!(solve_pairing(&[2, 4, 6].into(), &3.into()), None);
        assert_eq!(solve_pairing(&[0, 0, 0].into(), &1.into()), None);
        assert_eq!(solve_pairing(&[5, 0, 0].into(), &10.into()), Some([2, 0, 0].into()));
    }

    #[test]
    fn dp6_examples() {
        let r = dp6_report(&fam("c18-c14"), 4).unwrap();
        assert!(!r.b2.is_trivial() && !r.b3.is_trivial());
        assert!(r.rational_via_divisor && !r.rational_via_fibration);
        let r = dp6_report(&fam("c18-c38"), 25).unwrap();
        assert!(!r.b2.is_trivial());
        assert_eq!(r.b3.witness().unwrap().coefficients, [0, 3, -1].into());
        let r = dp6_report(&fam("c18-c26"), 17).unwrap();
        assert_eq!(r.b2.witness().unwrap().coefficients, [0, 4, -2].into());
        assert_eq!(r.b3.witness().unwrap().coefficients, [0, 6, -3].into());
        assert!(r.both_trivial);
    }

    #[test]
    fn dp6_preconditions() {
        assert!(matches!(dp6_report(&fam("c8-c26"), 0), Err(Error::FiberNotApplicable { .. })));
        assert!(matches!(dp6_report(&fam("c18-c14"), 3), Err(Error::EmptyComponent { .. })));
        assert!(matches!(quadric_report(&fam("c18-c14"), 5), Err(Error::FiberNotApplicable { .. })));
    }

    #[test]
    fn quadric_examples() {
        let r = quadric_report(&fam("c8-c26"), 4).unwrap();
        assert!(r.beta.is_trivial());
        let odd = r.odd_witness.unwrap();
        assert_eq!(odd.coefficients, [0, 3, 1].into());
        assert_eq!(odd.pairing, (-3).into());

        let r = quadric_report(&fam("c8-c38"), 2).unwrap();
        assert!(!r.beta.is_trivial());
        assert_eq!(r.discriminant, 96.into());
        assert_eq!(r.justification, Justification::EvenDiscriminantRank3);
        assert_eq!(r.section_witness, None);

        let r = quadric_report(&fam("c8-c38"), 7).unwrap();
        assert!(r.beta.is_trivial());
        assert_eq!(r.odd_witness.unwrap().pairing, (-7).into());
        assert_eq!(r.section_witness.unwrap().pairing, 1.into());
    }
}

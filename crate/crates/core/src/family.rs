//! Rank-3 families `A_τ = ⟨h², e₂, e₃⟩` whose only free pairing is `τ = ⟨e₂, e₃⟩`,
//! their admissible `τ` ranges and the emptiness classification of each component.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, MarkedLattice};
use crate::linalg::{IntMatrix, IntVector};

/// Names of the built-in families, in report order.
pub const BUILTIN_FAMILIES: [&str; 5] = ["c18-c14", "c18-c26", "c18-c38", "c8-c26", "c8-c38"];

/// Discriminants of rank-2 labellings whose divisors consist of rational cubics.
pub const RATIONAL_LABELLING_DISCRIMINANTS: [i64; 3] = [14, 26, 38];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberKind {
    /// Sextic del Pezzo fibration; the fiber class has degree 6.
    #[serde(rename = "del-pezzo-6")]
    DelPezzo6,
    /// Quadric surface bundle; the fiber class has degree 2.
    QuadricSurface,
}

impl FiberKind {
    pub fn degree(self) -> i64 {
        match self {
            FiberKind::DelPezzo6 => 6,
            FiberKind::QuadricSurface => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FiberKind::DelPezzo6 => "del-pezzo-6",
            FiberKind::QuadricSurface => "quadric-surface",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSpec {
    /// Fiber class in the family basis.
    pub coefficients: IntVector,
    pub kind: FiberKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: String,
    pub basis_labels: [String; 3],
    pub g12: BigInt,
    pub g22: BigInt,
    pub g13: BigInt,
    pub g33: BigInt,
    pub fiber: Option<FiberSpec>,
    /// A fixed cycle known to pair oddly with the quadric class on part of the range.
    pub odd_cycle: Option<IntVector>,
}

impl FamilySpec {
    /// Builds a family, checking that the fiber class (if any) has the degree its kind requires.
    pub fn new(
        name: impl Into<String>,
        basis_labels: [String; 3],
        [g12, g22, g13, g33]: [BigInt; 4],
        fiber: Option<FiberSpec>,
        odd_cycle: Option<IntVector>,
    ) -> Result<Self> {
        let spec = FamilySpec { name: name.into(), basis_labels, g12, g22, g13, g33, fiber, odd_cycle };
        if let Some(f) = &spec.fiber {
            if f.coefficients.dim() != 3 {
                return Err(Error::InvalidFamily(format!(
                    "{}: fiber class needs 3 coefficients",
                    spec.name
                )));
            }
            let deg = spec.degree(&f.coefficients);
            if deg != BigInt::from(f.kind.degree()) {
                return Err(Error::InvalidFamily(format!(
                    "{}: {} fiber class has degree {deg}, expected {}",
                    spec.name,
                    f.kind.as_str(),
                    f.kind.degree()
                )));
            }
        }
        if let Some(c) = &spec.odd_cycle {
            if c.dim() != 3 {
                return Err(Error::InvalidFamily(format!("{}: odd cycle needs 3 coefficients", spec.name)));
            }
        }
        Ok(spec)
    }

    /// `⟨h², v⟩`; independent of τ.
    pub fn degree(&self, v: &IntVector) -> BigInt {
        BigInt::from(3) * &v[0] + &self.g12 * &v[1] + &self.g13 * &v[2]
    }

    /// `(⟨h², e₂⟩, ⟨h², e₃⟩)`.
    pub fn surface_degrees(&self) -> (BigInt, BigInt) {
        (self.g12.clone(), self.g13.clone())
    }

    /// Discriminants of the two labellings `⟨h², e₂⟩` and `⟨h², e₃⟩`.
    pub fn labelling_discriminants(&self) -> (BigInt, BigInt) {
        (
            BigInt::from(3) * &self.g22 - &self.g12 * &self.g12,
            BigInt::from(3) * &self.g33 - &self.g13 * &self.g13,
        )
    }

    /// Whether one of the labellings lies on a divisor whose members are rational.
    pub fn rational_via_divisor(&self) -> bool {
        let (d2, d3) = self.labelling_discriminants();
        RATIONAL_LABELLING_DISCRIMINANTS.iter().any(|&d| d2 == d.into() || d3 == d.into())
    }

    pub fn gram_matrix(&self, tau: i64) -> IntMatrix {
        let t = BigInt::from(tau);
        IntMatrix::from_rows(vec![
            vec![3.into(), self.g12.clone(), self.g13.clone()],
            vec![self.g12.clone(), self.g22.clone(), t.clone()],
            vec![self.g13.clone(), t, self.g33.clone()],
        ])
        .expect("3x3")
    }

    pub fn lattice_at(&self, tau: i64) -> Lattice {
        Lattice::new(self.gram_matrix(tau)).expect("symmetric by construction")
    }

    /// `A_τ` marked by `h² = (1,0,0)`.
    pub fn gram_at_tau(&self, tau: i64) -> MarkedLattice {
        MarkedLattice::new(self.lattice_at(tau), [1, 0, 0].into()).expect("⟨h²,h²⟩ = 3")
    }

    pub fn discriminant_at(&self, tau: i64) -> BigInt {
        self.lattice_at(tau).discriminant()
    }

    /// Coefficients `(a, b, c)` of `d(A_τ) = aτ² + bτ + c`.
    pub fn discriminant_polynomial(&self) -> [BigInt; 3] {
        let d0 = self.discriminant_at(0);
        let d1 = self.discriminant_at(1);
        let dm = self.discriminant_at(-1);
        let a = (&d1 + &dm - BigInt::from(2) * &d0) / 2;
        let b = (&d1 - &dm) / 2;
        [a, b, d0]
    }

    /// All τ making `A_τ` positive definite, ascending.
    ///
    /// The discriminant is concave in τ, so the admissible set is an interval around the
    /// vertex; scanning stops on each side at the first non-positive value.
    pub fn admissible_tau_range(&self) -> Vec<i64> {
        let (d2, _) = self.labelling_discriminants();
        if !d2.is_positive() {
            return Vec::new();
        }
        let [a, b, _] = self.discriminant_polynomial();
        // a = -3 for every family (the τ² coefficient is -g₁₁)
        debug_assert!(a.is_negative());
        let vertex = num_integer::Integer::div_floor(&(-&b), &(BigInt::from(2) * &a));
        let Ok(start) = i64::try_from(vertex) else { return Vec::new() };
        let positive = |t: i64| self.discriminant_at(t).is_positive();
        let seed = [start - 1, start, start + 1].into_iter().find(|&t| positive(t));
        let Some(seed) = seed else { return Vec::new() };
        let mut lo = seed;
        while positive(lo - 1) {
            lo -= 1;
        }
        let mut hi = seed;
        while positive(hi + 1) {
            hi += 1;
        }
        (lo..=hi).collect()
    }

    /// Emptiness verdict for `C_τ`: empty iff `A_τ` has a vector of norm 2.
    pub fn classify_component(&self, tau: i64) -> Result<ComponentClass> {
        if !self.admissible_tau_range().contains(&tau) {
            return Err(Error::TauOutOfRange { family: self.name.clone(), tau });
        }
        let marked = self.gram_at_tau(tau);
        let lattice = marked.lattice();
        let two = BigInt::from(2);
        let mut roots = Vec::new();
        for v in lattice.short_vectors(2)? {
            if lattice.norm(&v)? == two {
                let orthogonal = marked.degree(&v)?.is_zero();
                roots.push((!orthogonal, v));
            }
        }
        // roots orthogonal to h² first, then lexicographic
        roots.sort();
        let verdict = match roots.into_iter().next() {
            Some((full, witness)) => Verdict::Empty {
                witness,
                located_in: if full { Location::FullLattice } else { Location::PrimitivePart },
            },
            None => Verdict::Nonempty { discriminant: lattice.discriminant() },
        };
        Ok(ComponentClass { tau, verdict })
    }

    /// Checks the determinant against the reference closed form on τ ∈ [-50, 50].
    pub fn discriminant_polynomial_check(&self) -> Result<bool> {
        let [a, b, c] = reference_discriminant_polynomial(&self.name)
            .ok_or_else(|| Error::NotBuiltin(self.name.clone()))?;
        Ok((-50i64..=50).all(|t| {
            let expected = BigInt::from(a * t * t + b * t + c);
            self.discriminant_at(t) == expected
        }))
    }
}

/// Closed forms `d(A_τ) = aτ² + bτ + c` for the built-in families.
pub fn reference_discriminant_polynomial(name: &str) -> Option<[i64; 3]> {
    Some(match name {
        // -3(τ² - 16τ + 36)
        "c18-c14" => [-3, 48, -108],
        // -3(τ² - 28τ + 144)
        "c18-c26" => [-3, 84, -432],
        // -3(τ² - 40τ + 324)
        "c18-c38" => [-3, 120, -972],
        "c8-c26" => [-3, 14, 53],
        "c8-c38" => [-3, 20, 68],
        _ => return None,
    })
}

fn labels(a: &str, b: &str, c: &str) -> [String; 3] {
    [a.to_string(), b.to_string(), c.to_string()]
}

fn pairings(p: [i64; 4]) -> [BigInt; 4] {
    p.map(BigInt::from)
}

/// The built-in family of the given name.
pub fn builtin_family(name: &str) -> Result<FamilySpec> {
    let dp6 = |c: [i64; 3]| Some(FiberSpec { coefficients: c.into(), kind: FiberKind::DelPezzo6 });
    let quadric = Some(FiberSpec { coefficients: [1, -1, 0].into(), kind: FiberKind::QuadricSurface });
    match name {
        "c18-c14" => FamilySpec::new(name, labels("h2", "S14", "T"), pairings([4, 10, 6, 18]), dp6([4, 0, -1]), None),
        "c18-c26" => FamilySpec::new(name, labels("h2", "T", "S26"), pairings([6, 18, 7, 25]), dp6([4, -1, 0]), None),
        "c18-c38" => FamilySpec::new(name, labels("h2", "T", "S38"), pairings([6, 18, 10, 46]), dp6([4, -1, 0]), None),
        "c8-c26" => FamilySpec::new(
            name,
            labels("h2", "P", "S26"),
            pairings([1, 3, 7, 25]),
            quadric,
            Some([0, 3, 1].into()),
        ),
        "c8-c38" => FamilySpec::new(
            name,
            labels("h2", "P", "S38"),
            pairings([1, 3, 10, 46]),
            quadric,
            Some([0, 5, 1].into()),
        ),
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    FullLattice,
    PrimitivePart,
}

impl Location {
    pub fn as_str(self) -> &'static str {
        match self {
            Location::FullLattice => "full-lattice",
            Location::PrimitivePart => "primitive-part",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A norm-2 vector exists.
    Empty { witness: IntVector, located_in: Location },
    /// No norm-2 vector; the component has codimension two.
    Nonempty { discriminant: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub tau: i64,
    pub verdict: Verdict,
}

impl ComponentClass {
    pub fn is_empty(&self) -> bool {
        matches!(self.verdict, Verdict::Empty { .. })
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Empty { witness, located_in } => {
                write!(f, "tau={}: empty, norm-2 witness {witness} ({})", self.tau, located_in.as_str())
            }
            Verdict::Nonempty { discriminant } => {
                write!(f, "tau={}: nonempty, d={discriminant}", self.tau)
            }
        }
    }
}

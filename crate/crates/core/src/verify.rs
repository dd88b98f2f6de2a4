//! Cross-checks of every registered family against the published tables.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::config::Registry;
use crate::error::Result;
use crate::family::FamilySpec;
use crate::report::{build_report, Int, ReportRow, Status, Triviality};

type Pair = Option<(i64, i64)>;

/// Published data for one family.
#[derive(Clone, Debug)]
pub struct Reference {
    pub name: &'static str,
    pub range: (i64, i64),
    /// Empty components with a norm-2 vector (equal up to sign).
    pub empty: &'static [(i64, [i64; 3])],
    /// Discriminants of the nonempty components, τ ascending.
    pub discriminants: &'static [i64],
    /// `(τ, W_{0,b,c} with ⟨W,F⟩ = 2, W_{0,b,c} with ⟨W,F⟩ = 3)`.
    pub dp6: &'static [(i64, Pair, Pair)],
    /// `Some(r)`: β is trivial exactly when τ ≡ r (mod 2).
    pub beta_trivial_parity: Option<i64>,
}

pub const REFERENCES: [Reference; 5] = [
    Reference {
        name: "c18-c14",
        range: (3, 13),
        empty: &[(3, [-4, 1, 1]), (13, [0, -1, 1])],
        discriminants: &[36, 57, 72, 81, 84, 81, 72, 57, 36],
        dp6: &[
            (4, None, None),
            (5, Some((4, -7)), Some((3, -5))),
            (6, Some((2, -3)), None),
            (7, None, Some((1, -1))),
            (8, Some((1, -1)), None),
            (9, Some((2, -2)), Some((3, -3))),
            (10, None, None),
            (11, Some((4, -3)), Some((3, -2))),
            (12, Some((2, -1)), None),
        ],
        beta_trivial_parity: None,
    },
    Reference {
        name: "c18-c26",
        range: (7, 21),
        empty: &[(7, [-5, 1, 1]), (21, [1, 1, -1])],
        discriminants: &[48, 81, 108, 129, 144, 153, 156, 153, 144, 129, 108, 81, 48],
        dp6: &[
            (8, Some((7, -2)), None),
            (9, Some((13, -4)), Some((10, -3))),
            (10, None, None),
            (11, Some((6, -2)), Some((9, -3))),
            (12, Some((3, -1)), None),
            (13, None, Some((3, -1))),
            (14, Some((5, -2)), None),
            (15, Some((9, -4)), Some((7, -3))),
            (16, None, None),
            (17, Some((4, -2)), Some((6, -3))),
            (18, Some((2, -1)), None),
            (19, None, Some((2, -1))),
            (20, Some((3, -2)), None),
        ],
        beta_trivial_parity: None,
    },
    Reference {
        name: "c18-c38",
        range: (12, 28),
        empty: &[],
        discriminants: &[36, 81, 120, 153, 180, 201, 216, 225, 228, 225, 216, 201, 180, 153, 120, 81, 36],
        dp6: &[
            (12, Some((5, -1)), None),
            (13, None, Some((5, -1))),
            (14, Some((9, -2)), None),
            (15, Some((17, -4)), Some((13, -3))),
            (16, None, None),
            (17, Some((8, -2)), Some((12, -3))),
            (18, Some((4, -1)), None),
            (19, None, Some((4, -1))),
            (20, Some((7, -2)), None),
            (21, Some((13, -4)), Some((10, -3))),
            (22, None, None),
            (23, Some((6, -2)), Some((9, -3))),
            (24, Some((3, -1)), None),
            (25, None, Some((3, -1))),
            (26, Some((5, -2)), None),
            (27, Some((9, -4)), Some((7, -3))),
            (28, None, None),
        ],
        beta_trivial_parity: None,
    },
    Reference {
        name: "c8-c26",
        range: (-2, 7),
        empty: &[(-2, [3, -2, -1]), (7, [-2, -1, 1])],
        discriminants: &[36, 53, 64, 69, 68, 61, 48, 29],
        dp6: &[],
        beta_trivial_parity: Some(0),
    },
    Reference {
        name: "c8-c38",
        range: (-2, 9),
        empty: &[(-2, [-4, 2, 1]), (9, [-2, -2, 1])],
        discriminants: &[45, 68, 85, 96, 101, 100, 93, 80, 61, 36],
        dp6: &[],
        beta_trivial_parity: Some(1),
    },
];

pub fn reference(name: &str) -> Option<&'static Reference> {
    REFERENCES.iter().find(|r| r.name == name)
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    /// One `PASS`/`FAIL`/`SKIP` line per check.
    pub lines: Vec<String>,
    pub families: usize,
    pub polynomials: usize,
    pub rows: usize,
    /// Names of families with at least one failed check.
    pub failed_families: Vec<String>,
    pub failures: usize,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self) -> String {
        let base = format!(
            "{} families, {} discriminant polynomials, {} component rows verified",
            self.families, self.polynomials, self.rows
        );
        if self.passed() {
            base
        } else {
            format!("{base}; {} checks FAILED in {}", self.failures, self.failed_families.join(", "))
        }
    }

    fn record(&mut self, family: &str, ok: bool, what: String) -> bool {
        let tag = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("{tag} {family} {what}"));
        if !ok {
            self.failures += 1;
            if !self.failed_families.iter().any(|f| f == family) {
                self.failed_families.push(family.to_string());
            }
        }
        ok
    }
}

fn coords(v: &Option<Vec<Int>>) -> Option<Vec<BigInt>> {
    v.as_ref().map(|v| v.iter().map(|x| x.0.clone()).collect())
}

fn same_up_to_sign(found: &[BigInt], expected: &[i64; 3]) -> bool {
    let pos = found.iter().zip(expected).all(|(a, b)| *a == BigInt::from(*b));
    let neg = found.iter().zip(expected).all(|(a, b)| *a == BigInt::from(-*b));
    pos || neg
}

fn check_witness(col: &str, found: &Option<Vec<Int>>, expected: Pair, errs: &mut Vec<String>) {
    let want = expected.map(|(b, c)| vec![BigInt::from(0), b.into(), c.into()]);
    let got = coords(found);
    if got != want {
        let show = |v: &Option<Vec<BigInt>>| match v {
            Some(v) => format!("({},{},{})", v[0], v[1], v[2]),
            None => "none".into(),
        };
        errs.push(format!("{col} witness {} != {}", show(&got), show(&want)));
    }
}

fn check_row(r: &Reference, row: &ReportRow, expected_d: Option<i64>, errs: &mut Vec<String>) -> String {
    let tau = row.tau;
    if let Some(&(_, w)) = r.empty.iter().find(|(t, _)| *t == tau) {
        match (&row.status, coords(&row.witness)) {
            (Status::Empty, Some(found)) if same_up_to_sign(&found, &w) => {}
            (Status::Empty, found) => errs.push(format!("witness {found:?} is not ±{w:?}")),
            _ => errs.push("expected empty".into()),
        }
        return "empty".into();
    }
    if row.status != Status::Nonempty {
        errs.push("expected nonempty".into());
        return "nonempty".into();
    }
    let d = expected_d.expect("nonempty row has a reference discriminant");
    if row.discriminant.0 != BigInt::from(d) {
        errs.push(format!("d = {} != {d}", row.discriminant));
    }
    if row.irreducible != Some(true) {
        let surv: Vec<String> = row.survivors.iter().map(|[n, x, y]| format!("(n={n},x'={x},y'={y})")).collect();
        errs.push(format!("sieve leaves {} overlattice(s) {}", row.survivors.len(), surv.join(" ")));
    }
    let mut what = format!("nonempty d={d} irreducible");
    if let Some(&(_, k2, k3)) = r.dp6.iter().find(|(t, _, _)| *t == tau) {
        let flag = |p: Pair| if p.is_some() { Triviality::Triv } else { Triviality::Nontriv };
        if row.b2 != Some(flag(k2)) || row.b3 != Some(flag(k3)) {
            errs.push(format!("b2/b3 flags {:?}/{:?}", row.b2, row.b3));
        }
        check_witness("<W,F>=2", &row.b2_witness, k2, errs);
        check_witness("<W,F>=3", &row.b3_witness, k3, errs);
        what.push_str(&format!(" b2 {} b3 {}", flag(k2).as_str(), flag(k3).as_str()));
    } else if !r.dp6.is_empty() {
        errs.push("no Brauer reference row".into());
    }
    if let Some(parity) = r.beta_trivial_parity {
        let want = if tau.mod_floor(&2) == parity { Triviality::Triv } else { Triviality::Nontriv };
        if row.beta != Some(want) {
            errs.push(format!("beta {:?}, expected {}", row.beta, want.as_str()));
        }
        if want == Triviality::Nontriv && row.discriminant.0.is_odd() {
            errs.push("nontrivial beta with odd discriminant".into());
        }
        what.push_str(&format!(" beta {}", want.as_str()));
    }
    what
}

fn verify_family(f: &FamilySpec, r: &Reference, out: &mut VerifyOutcome) -> Result<()> {
    let name = f.name.as_str();
    let range = f.admissible_tau_range();
    let found = (range.first().copied(), range.last().copied());
    let range_ok = found == (Some(r.range.0), Some(r.range.1));
    out.record(name, range_ok, format!("tau range {}..{} (found {:?}..{:?})", r.range.0, r.range.1, found.0, found.1));

    let poly_ok = f.discriminant_polynomial_check().unwrap_or(false);
    if out.record(name, poly_ok, "discriminant polynomial on [-50, 50]".into()) {
        out.polynomials += 1;
    }

    let report = match build_report(f) {
        Ok(rep) => rep,
        Err(e) => {
            out.record(name, false, format!("report failed: {e}"));
            return Ok(());
        }
    };
    let nonempty: Vec<i64> = (r.range.0..=r.range.1).filter(|t| !r.empty.iter().any(|(e, _)| e == t)).collect();
    let mut all_rows = range_ok;
    for tau in r.range.0..=r.range.1 {
        let Some(row) = report.rows.iter().find(|row| row.tau == tau) else {
            out.record(name, false, format!("tau={tau}: missing row"));
            all_rows = false;
            continue;
        };
        let d = nonempty.iter().position(|t| *t == tau).and_then(|i| r.discriminants.get(i).copied());
        let mut errs = Vec::new();
        let what = check_row(r, row, d, &mut errs);
        if errs.is_empty() {
            out.record(name, true, format!("tau={tau}: {what}"));
            out.rows += 1;
        } else {
            out.record(name, false, format!("tau={tau}: {}", errs.join("; ")));
            all_rows = false;
        }
    }
    if all_rows {
        out.families += 1;
    }
    Ok(())
}

/// Verifies every registered family with reference data, or only `only`.
pub fn run_verify(registry: &Registry, only: Option<&str>) -> Result<VerifyOutcome> {
    let families: Vec<&FamilySpec> = match only {
        Some(name) => vec![registry.get(name)?],
        None => registry.families().iter().collect(),
    };
    let mut out = VerifyOutcome::default();
    for f in families {
        match reference(&f.name) {
            Some(r) => verify_family(f, r, &mut out)?,
            None => out.lines.push(format!("SKIP {} no reference data", f.name)),
        }
    }
    Ok(out)
}

impl std::fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        write!(f, "{s}{}", self.summary())
    }
}

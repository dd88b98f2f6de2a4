//! Per-family component reports and their JSON, CSV and markdown renderings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::brauer::{dp6_report, quadric_report, BrauerClass, CycleWitness, GOOD_FIBRATION_ASSUMPTION};
use crate::error::{Error, Result};
use crate::family::{FamilySpec, FiberKind, Location, Verdict};
use crate::linalg::IntVector;
use crate::overlattice::sieve;

pub const NORMAL_FORM_ASSUMPTION: &str =
    "every finite overlattice of A_tau has a basis (h2, e2, (x'h2 + y'e2 + e3)/n) with 0 <= x', y' < n";

/// Integer that serializes as a JSON number when it fits in 64 bits and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Self {
        Int(v.clone())
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Int(v.into())),
            Raw::Str(s) => s.parse().map(Int).map_err(serde::de::Error::custom),
        }
    }
}

fn ints(v: &IntVector) -> Vec<Int> {
    v.coords().iter().map(Int::from).collect()
}

fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_w(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("W_{{{}}}", parts.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Empty,
    Nonempty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Triviality {
    Triv,
    Nontriv,
}

impl Triviality {
    fn of(c: &BrauerClass) -> Self {
        if c.is_trivial() {
            Triviality::Triv
        } else {
            Triviality::Nontriv
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Triviality::Triv => "triv",
            Triviality::Nontriv => "nontriv",
        }
    }
}

fn witness_coords(c: &BrauerClass) -> Option<Vec<Int>> {
    c.witness().map(|w: &CycleWitness| ints(&w.coefficients))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub tau: i64,
    pub status: Status,
    pub discriminant: Int,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_location: Option<Location>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates_checked: Option<usize>,
    /// `(n, x′, y′)` of every accepted overlattice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub survivors: Vec<[u64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<Triviality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_witness: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b3: Option<Triviality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b3_witness: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub both_trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_via_fibration: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Triviality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_witness: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_cycle: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nontriviality_justification: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_via_section: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_via_divisor: Option<bool>,
}

impl ReportRow {
    fn blank(tau: i64, status: Status, discriminant: BigInt) -> Self {
        ReportRow {
            tau,
            status,
            discriminant: discriminant.into(),
            witness: None,
            witness_location: None,
            irreducible: None,
            candidates_checked: None,
            survivors: Vec::new(),
            b2: None,
            b2_witness: None,
            b3: None,
            b3_witness: None,
            both_trivial: None,
            rational_via_fibration: None,
            beta: None,
            beta_witness: None,
            odd_cycle: None,
            nontriviality_justification: None,
            rational_via_section: None,
            rational_via_divisor: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub family: String,
    pub generated_by: String,
    pub assumptions: Vec<String>,
    pub rows: Vec<ReportRow>,
}

pub fn build_report(f: &FamilySpec) -> Result<IntersectionReport> {
    let kind = f.fiber.as_ref().map(|fs| fs.kind);
    let mut assumptions = vec![NORMAL_FORM_ASSUMPTION.to_string()];
    if kind == Some(FiberKind::DelPezzo6) {
        assumptions.push(GOOD_FIBRATION_ASSUMPTION.to_string());
    }
    let mut rows = Vec::new();
    for tau in f.admissible_tau_range() {
        let class = f.classify_component(tau)?;
        let row = match class.verdict {
            Verdict::Empty { witness, located_in } => {
                let mut row = ReportRow::blank(tau, Status::Empty, f.discriminant_at(tau));
                row.witness = Some(ints(&witness));
                row.witness_location = Some(located_in);
                row
            }
            Verdict::Nonempty { discriminant } => {
                let mut row = ReportRow::blank(tau, Status::Nonempty, discriminant);
                let v = sieve(f, tau)?;
                row.irreducible = Some(v.irreducible);
                row.candidates_checked = Some(v.candidates_checked);
                row.survivors = v.survivors.iter().map(|c| [c.n, c.xprime, c.yprime]).collect();
                match kind {
                    Some(FiberKind::DelPezzo6) => {
                        let r = dp6_report(f, tau)?;
                        row.b2 = Some(Triviality::of(&r.b2));
                        row.b2_witness = witness_coords(&r.b2);
                        row.b3 = Some(Triviality::of(&r.b3));
                        row.b3_witness = witness_coords(&r.b3);
                        row.both_trivial = Some(r.both_trivial);
                        row.rational_via_fibration = Some(r.rational_via_fibration);
                        row.rational_via_divisor = Some(r.rational_via_divisor);
                    }
                    Some(FiberKind::QuadricSurface) => {
                        let r = quadric_report(f, tau)?;
                        row.beta = Some(Triviality::of(&r.beta));
                        row.beta_witness = witness_coords(&r.beta);
                        row.odd_cycle = r.odd_witness.as_ref().map(|w| ints(&w.coefficients));
                        if !r.beta.is_trivial() {
                            row.nontriviality_justification = Some(r.justification.as_str().to_string());
                        }
                        row.rational_via_section = Some(r.rational_via_section);
                        row.rational_via_divisor = Some(r.rational_via_divisor);
                    }
                    None => row.rational_via_divisor = Some(f.rational_via_divisor()),
                }
                row
            }
        };
        rows.push(row);
    }
    Ok(IntersectionReport {
        family: f.name.clone(),
        generated_by: format!("fourfold {}", env!("CARGO_PKG_VERSION")),
        assumptions,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    DelPezzo,
    Quadric,
    Plain,
}

impl IntersectionReport {
    fn layout(&self) -> Layout {
        if self.rows.iter().any(|r| r.b2.is_some()) {
            Layout::DelPezzo
        } else if self.rows.iter().any(|r| r.beta.is_some()) {
            Layout::Quadric
        } else {
            Layout::Plain
        }
    }

    /// Column headers shared by the CSV and markdown renderings.
    pub fn headers(&self) -> Vec<&'static str> {
        let mut h = vec!["tau", "status", "d(A_tau)", "root", "root_in", "irreducible", "candidates", "survivors"];
        match self.layout() {
            Layout::DelPezzo => h.extend([
                "<W,F>=2",
                "<W,F>=3",
                "b2",
                "b3",
                "rational_via_fibration",
                "rational_via_divisor",
            ]),
            Layout::Quadric => h.extend([
                "beta",
                "W_{a,b,c}",
                "odd_cycle",
                "justification",
                "rational_via_section",
                "rational_via_divisor",
            ]),
            Layout::Plain => h.push("rational_via_divisor"),
        }
        h
    }

    /// One string cell per header, per row. Absent values render as `-`.
    pub fn cells(&self) -> Vec<Vec<String>> {
        let layout = self.layout();
        let dash = || "-".to_string();
        let opt = |v: &Option<Vec<Int>>, f: fn(&[Int]) -> String| v.as_deref().map(f).unwrap_or_else(dash);
        let flag = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_else(dash);
        let triv = |t: Option<Triviality>| t.map(|t| t.as_str().to_string()).unwrap_or_else(dash);
        self.rows
            .iter()
            .map(|r| {
                let mut c = vec![
                    r.tau.to_string(),
                    match r.status {
                        Status::Empty => "empty".into(),
                        Status::Nonempty => "nonempty".into(),
                    },
                    r.discriminant.to_string(),
                    opt(&r.witness, fmt_vec),
                    r.witness_location.map(|l| l.as_str().to_string()).unwrap_or_else(dash),
                    flag(r.irreducible),
                    r.candidates_checked.map(|n| n.to_string()).unwrap_or_else(dash),
                    if r.survivors.is_empty() {
                        dash()
                    } else {
                        let s: Vec<String> = r.survivors.iter().map(|[n, x, y]| format!("n={n}:{x},{y}")).collect();
                        s.join(" ")
                    },
                ];
                match layout {
                    Layout::DelPezzo => c.extend([
                        opt(&r.b2_witness, fmt_w),
                        opt(&r.b3_witness, fmt_w),
                        triv(r.b2),
                        triv(r.b3),
                        flag(r.rational_via_fibration),
                        flag(r.rational_via_divisor),
                    ]),
                    Layout::Quadric => c.extend([
                        triv(r.beta),
                        opt(&r.beta_witness, fmt_w),
                        opt(&r.odd_cycle, fmt_vec),
                        r.nontriviality_justification.clone().unwrap_or_else(dash),
                        flag(r.rational_via_section),
                        flag(r.rational_via_divisor),
                    ]),
                    Layout::Plain => c.push(flag(r.rational_via_divisor)),
                }
                c
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(self.headers()).map_err(ser)?;
        for row in self.cells() {
            w.write_record(&row).map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("## {}\n\n", self.family);
        for a in &self.assumptions {
            out.push_str(&format!("- assumes: {a}\n"));
        }
        out.push('\n');
        let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
        let headers: Vec<String> = self.headers().into_iter().map(String::from).collect();
        out.push_str(&line(headers.clone()));
        out.push_str(&line(headers.iter().map(|_| "---".to_string()).collect()));
        for row in self.cells() {
            out.push_str(&line(row));
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Markdown => Ok(self.to_markdown()),
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn run_report(f: &FamilySpec, format: Format) -> Result<String> {
    build_report(f)?.render(format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::builtin_family;

    #[test]
    fn int_serialization() {
        assert_eq!(serde_json::to_string(&Int(42.into())).unwrap(), "42");
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&Int(big.clone())).unwrap();
        assert_eq!(s, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::from_str::<Int>(&s).unwrap(), Int(big));
        assert_eq!(serde_json::from_str::<Int>("-7").unwrap(), Int((-7).into()));
    }

    #[test]
    fn format_parse() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("xml".parse::<Format>(), Err(Error::UnknownFormat("xml".into())));
    }

    #[test]
    fn c8_c26_csv() {
        let f = builtin_family("c8-c26").unwrap();
        let csv = run_report(&f, Format::Csv).unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 10);
        let nonempty: Vec<&str> = rows.iter().filter(|r| &r[1] == "nonempty").map(|r| r.get(2).unwrap()).collect();
        assert_eq!(nonempty, ["36", "53", "64", "69", "68", "61", "48", "29"]);
    }

    #[test]
    fn c18_c14_markdown_row_seven() {
        let f = builtin_family("c18-c14").unwrap();
        let md = run_report(&f, Format::Markdown).unwrap();
        let row = md.lines().find(|l| l.starts_with("| 7 |")).unwrap();
        assert!(row.contains("| - | W_{0,1,-1} | nontriv | triv |"), "{row}");
    }

    #[test]
    fn formats_carry_the_same_cells() {
        for name in crate::family::BUILTIN_FAMILIES {
            let rep = build_report(&builtin_family(name).unwrap()).unwrap();
            let from_json = IntersectionReport::from_json(&rep.to_json().unwrap()).unwrap().cells();
            let csv = rep.to_csv().unwrap();
            let mut rd = csv::Reader::from_reader(csv.as_bytes());
            let from_csv: Vec<Vec<String>> =
                rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
            let md = rep.to_markdown();
            let from_md: Vec<Vec<String>> = md
                .lines()
                .filter(|l| l.starts_with("| ") && !l.starts_with("| tau") && !l.starts_with("| ---"))
                .map(|l| l.trim_matches(|c| c == '|' || c == ' ').split(" | ").map(String::from).collect())
                .collect();
            assert_eq!(from_json, from_csv, "{name}");
            assert_eq!(from_json, from_md, "{name}");
        }
    }

    #[test]
    fn c18_c38_json_rows() {
        let f = builtin_family("c18-c38").unwrap();
        let json = run_report(&f, Format::Json).unwrap();
        let r = IntersectionReport::from_json(&json).unwrap();
        let taus: Vec<i64> = r.rows.iter().filter(|r| r.status == Status::Nonempty).map(|r| r.tau).collect();
        assert_eq!(taus, (12..=28).collect::<Vec<_>>());
        assert_eq!(r.to_json().unwrap(), json);
    }
}

//! Embedded graph pairs, expected fates, and the classification pipeline.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigraph::{BigraphPair, CodecError};
use crate::connections::{build_cells, count_gauge_orbits, SolveOptions};
use crate::exec::Execution;
use crate::graph_ops::{stable_extensions, star_profile, translate};
use crate::iso::pair_isomorphic;
use crate::obstructions::{run_battery, BatteryOptions, Check, ObstructionError, Outcome, Verdict};
use crate::spectral::{norm_squared, supertransitivity, NormReport};
use crate::INDEX;

pub const Z5: &str = "bwd1v1p1p1p1duals1v4x3x2x1";
pub const D10: &str = "bwd1v1p1v1x1v1duals1v1x2v1";
pub const Z4: &str = "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v2x1x3";
pub const A4A5_PLUS: &str = "bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3";
pub const A4A5_MINUS: &str = "bwd1v1v1v1p1p1v0x1x0p0x0x1v1x0p0x1duals1v1v1x2x3v2x1";
pub const S4S5_PLUS: &str = "bwd1v1v1v1p1v1x0p0x1v1x1p0x1v0x1v1duals1v1v1x2v1x2v1";
pub const S4S5_MINUS: &str = "bwd1v1v1v1p1v0x1p0x1v1x0p0x1p0x1v0x0x1v1duals1v1v1x2v1x2x3v1";
pub const S4S5_ALT_PLUS: &str = "bwd1v1v1v1p1v1x0p0x1v1x0p1x1v1x0v1duals1v1v1x2v1x2v1";
pub const S4S5_ALT_MINUS: &str = "bwd1v1v1v1p1v0x1p0x1v1x0p1x0p0x1v0x1x0v1duals1v1v1x2v1x2x3v1";
pub const GAMMA_4621: &str = "bwd1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1v1duals1v1v1v1x2v1v1";
pub const GAMMA_5521: &str = "bwd1v1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1duals1v1v1v1x2x3v1v1";

/// Candidate pairs `G_1 .. G_15` as `(plus, minus)`.
pub const CANDIDATES: [(&str, &str); 15] = [
    (
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x2x3x1",
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x2x3x1",
    ),
    (
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x3x2x1",
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x2x3x1",
    ),
    (
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x3x2x1",
        "bwd1v1v1p1v1x0p1x0p1x0p0x1duals1v1v4x3x2x1",
    ),
    (
        "bwd1v1v1p1v1x0p1x0p0x1v0x1x0p0x1x0p0x0x1v1x0x0p0x0x1p0x0x1v0x0x1duals1v1v3x2x1v3x2x1",
        "bwd1v1v1p1v1x0p1x0p0x1v0x1x0p0x0x1p0x1x0v1x0x0p0x1x0p0x1x0v0x0x1duals1v1v3x2x1v3x2x1",
    ),
    (
        "bwd1v1v1v1p1v1x0p1x0v1x0p1x0p0x1v1x0x0v1duals1v1v1x2v1x2x3v1",
        "bwd1v1v1v1p1v1x0p0x1v1x1p1x0v0x1v1duals1v1v1x2v1x2v1",
    ),
    (
        "bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
        "bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
    ),
    (
        "bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v1x2",
        "bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v1x2",
    ),
    (
        "bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v2x1",
        "bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
    ),
    (
        "bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
        "bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
    ),
    (
        "bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v1x2",
        "bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
    ),
    (
        "bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v2x1",
        "bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v2x1",
    ),
    (
        "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3",
        "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3",
    ),
    (
        "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v3x2x1",
        "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v3x2x1",
    ),
    (
        "bwd1v1v1p1p1v1x0x0p0x1x0v1x0p1x0duals1v1v1x2",
        "bwd1v1v1p1p1v1x0x0p0x1x0v1x0p1x0duals1v1v1x2",
    ),
    (
        "bwd1v1v1p1p1v1x0x0p0x1x0v1x0p0x1v1x0p0x1v1x0p0x1duals1v1v2x1v2x1",
        "bwd1v1v1p1p1v1x0x0p0x1x0v1x0p0x1v1x0p0x1v1x0p0x1duals1v1v2x1v2x1",
    ),
];

/// Citation recorded for eliminations that are not computed here.
pub const EXTERNAL_CITATION: &str = "chirality result for index-5 principal graph pairs (external)";

/// Translations used when expanding the cylinder seed.
pub const CYLINDER_TRANSLATIONS: [i64; 3] = [0, 2, 4];
/// Largest number of appended depths when expanding the cylinder seed.
pub const CYLINDER_EXTRA_DEPTHS: usize = 4;

/// The known realized pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Realized {
    Z5,
    D10,
    Z4,
    A4A5,
    S4S5,
}

impl Realized {
    pub const ALL: [Realized; 5] = [
        Realized::Z5,
        Realized::D10,
        Realized::Z4,
        Realized::A4A5,
        Realized::S4S5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Realized::Z5 => "Z5",
            Realized::D10 => "D10",
            Realized::Z4 => "Z4<F5:F5x",
            Realized::A4A5 => "A4<A5",
            Realized::S4S5 => "S4<S5",
        }
    }

    pub fn strings(self) -> (&'static str, &'static str) {
        match self {
            Realized::Z5 => (Z5, Z5),
            Realized::D10 => (D10, D10),
            Realized::Z4 => (Z4, Z4),
            Realized::A4A5 => (A4A5_PLUS, A4A5_MINUS),
            Realized::S4S5 => (S4S5_PLUS, S4S5_MINUS),
        }
    }
}

impl fmt::Display for Realized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn pair_of(plus: &str, minus: &str) -> BigraphPair {
    BigraphPair::parse(plus, minus).expect("embedded strings are valid")
}

/// A realized pair in its stored orientation.
pub fn realized(r: Realized) -> BigraphPair {
    let (p, m) = r.strings();
    pair_of(p, m)
}

/// Pairs whose elimination is cited rather than computed.
pub fn external_registry() -> Vec<(&'static str, BigraphPair)> {
    [9usize, 11]
        .into_iter()
        .map(|i| {
            let name = if i == 9 { "G_9" } else { "G_11" };
            let (p, m) = CANDIDATES[i - 1];
            (name, pair_of(p, m))
        })
        .collect()
}

/// The one shape on which the connection prerequisite is tested.
pub fn connection_prerequisite_shape() -> BigraphPair {
    let (p, m) = CANDIDATES[5];
    pair_of(p, m)
}

/// Expected or computed outcome of the pipeline for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fate {
    RealizedUnique,
    Eliminated(Check),
    EliminatedExternal,
    /// Every member of the generated family is eliminated by the given check.
    CylinderFamily(Check),
    OutOfScope(String),
    /// Passes every check but matches no realized pair.
    Unresolved,
}

impl fmt::Display for Fate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fate::RealizedUnique => f.write_str("REALIZED_UNIQUE"),
            Fate::Eliminated(c) => write!(f, "ELIMINATED({c})"),
            Fate::EliminatedExternal => f.write_str("ELIMINATED_EXTERNAL"),
            Fate::CylinderFamily(c) => write!(f, "CYLINDER_FAMILY({c})"),
            Fate::OutOfScope(r) => write!(f, "OUT_OF_SCOPE({r})"),
            Fate::Unresolved => f.write_str("UNRESOLVED"),
        }
    }
}

impl FromStr for Fate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            _ => (s, None),
        };
        let check = |a: Option<&str>| -> Result<Check, String> {
            let a = a.ok_or_else(|| format!("{head} needs a reason, e.g. {head}(schou_star)"))?;
            Check::ALL
                .into_iter()
                .find(|c| c.name() == a)
                .ok_or_else(|| format!("unknown check '{a}'"))
        };
        match head {
            "REALIZED_UNIQUE" | "REALIZED" => Ok(Fate::RealizedUnique),
            "ELIMINATED" => Ok(Fate::Eliminated(check(arg)?)),
            "ELIMINATED_EXTERNAL" => Ok(Fate::EliminatedExternal),
            "CYLINDER_FAMILY" => Ok(Fate::CylinderFamily(check(arg.or(Some("schou_star")))?)),
            "OUT_OF_SCOPE" => Ok(Fate::OutOfScope(arg.unwrap_or("norm").to_string())),
            "UNRESOLVED" => Ok(Fate::Unresolved),
            _ => Err(format!("unknown fate '{s}'")),
        }
    }
}

impl Serialize for Fate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// What an entry is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// A known realized pair.
    Realized,
    /// A realized 1-supertransitive pair, also fed to the pipeline.
    RealizedScreened,
    /// A candidate pair to be classified.
    Candidate,
    /// Seed of a generated cylinder family.
    CylinderSeed,
    /// Alternate strings for a realized pair.
    Alternate,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub pair: BigraphPair,
    pub expected_fate: Fate,
    pub role: Role,
    pub source: &'static str,
}

impl CatalogEntry {
    fn new(name: &str, plus: &str, minus: &str, expected_fate: Fate, role: Role, source: &'static str) -> Self {
        CatalogEntry {
            name: name.to_string(),
            pair: pair_of(plus, minus),
            expected_fate,
            role,
            source,
        }
    }

    /// Whether the pipeline classifies this entry.
    pub fn is_pipeline_input(&self) -> bool {
        matches!(self.role, Role::Candidate | Role::CylinderSeed | Role::RealizedScreened)
    }

    /// The raw strings; `(plus, minus)`.
    pub fn strings(&self) -> (String, String) {
        (self.pair.plus().to_string(), self.pair.minus().to_string())
    }
}

fn candidate_fate(i: usize) -> Fate {
    use Check::*;
    match i {
        1..=3 => Fate::Eliminated(DualDimensionMismatch),
        4 | 14 | 15 => Fate::Eliminated(SubunitVertex),
        7 | 10 => Fate::Eliminated(InvertibleGroup),
        6 => Fate::Eliminated(ConnectionPrerequisite),
        12 => Fate::Eliminated(Spoke2n),
        9 | 11 => Fate::EliminatedExternal,
        5 | 8 | 13 => Fate::RealizedUnique,
        _ => unreachable!(),
    }
}

/// The full embedded dataset.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for r in Realized::ALL {
        let (p, m) = r.strings();
        let role = if matches!(r, Realized::Z5 | Realized::D10) {
            Role::RealizedScreened
        } else {
            Role::Realized
        };
        out.push(CatalogEntry::new(
            r.name(),
            p,
            m,
            Fate::RealizedUnique,
            role,
            "realized pairs",
        ));
    }
    out.push(CatalogEntry::new(
        "S4<S5/alt",
        S4S5_ALT_PLUS,
        S4S5_ALT_MINUS,
        Fate::RealizedUnique,
        Role::Alternate,
        "alternate labeling used for the connection computation",
    ));
    for (k, (p, m)) in CANDIDATES.iter().enumerate() {
        let i = k + 1;
        out.push(CatalogEntry::new(
            &format!("G_{i}"),
            p,
            m,
            candidate_fate(i),
            Role::Candidate,
            "candidate list",
        ));
    }
    out.push(CatalogEntry::new(
        "Gamma_4621",
        GAMMA_4621,
        GAMMA_4621,
        Fate::CylinderFamily(Check::SchouStar),
        Role::CylinderSeed,
        "cylinder seed, expanded by translation and stable extension",
    ));
    out.push(CatalogEntry::new(
        "Gamma_5521",
        GAMMA_5521,
        GAMMA_5521,
        Fate::Eliminated(Check::SchouStar),
        Role::Candidate,
        "candidate list",
    ));
    out
}

/// Looks up an entry by name (case-insensitive).
pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog_entries()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
}

/// The members of a cylinder family generated from `seed`.
pub fn cylinder_family(seed: &BigraphPair, translations: &[i64], extra_depths: usize) -> Vec<(String, BigraphPair)> {
    let mut out = Vec::new();
    for &t in translations {
        let base = translate(seed, t).expect("even translation");
        for (k, q) in stable_extensions(&base, extra_depths).into_iter().enumerate() {
            let label = star_profile(q.plus())
                .map(|s| s.label())
                .unwrap_or_else(|| format!("#{k}"));
            out.push((format!("t{t}/{label}"), q));
        }
    }
    out
}

/// The index being classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexLimit {
    pub target: BigRational,
}

impl Default for IndexLimit {
    fn default() -> Self {
        IndexLimit {
            target: BigRational::from_integer(INDEX.into()),
        }
    }
}

impl Serialize for IndexLimit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.target)
    }
}

/// Canonical match of a surviving pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalMatch {
    pub canonical: Realized,
    /// Whether the pair matches the opposite of the stored orientation.
    pub via_opposite: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub name: String,
    pub plus: String,
    pub minus: String,
    pub norm_sq: [NormReport; 2],
    pub index_five: bool,
    pub supertransitivity: usize,
    pub verdicts: Vec<Verdict>,
    pub fate: Fate,
    pub matched: Option<CanonicalMatch>,
}

/// Finds the realized pair `p` is isomorphic to, allowing the opposite.
pub fn match_canonical(p: &BigraphPair) -> Option<CanonicalMatch> {
    Realized::ALL.into_iter().find_map(|r| {
        pair_isomorphic(p, &realized(r), true).map(|iso| CanonicalMatch {
            canonical: r,
            via_opposite: iso.swapped,
        })
    })
}

/// Norm check, battery and canonical matching for one pair.
pub fn classify_pair(name: &str, p: &BigraphPair) -> Result<ClassificationRecord, ObstructionError> {
    let sp = norm_squared(p.plus(), Some(INDEX));
    let sm = norm_squared(p.minus(), Some(INDEX));
    let index_five = sp.exact_target.is_some() && sm.exact_target.is_some();
    let mut record = ClassificationRecord {
        name: name.to_string(),
        plus: p.plus().to_string(),
        minus: p.minus().to_string(),
        norm_sq: [sp.report(), sm.report()],
        index_five,
        supertransitivity: supertransitivity(p.plus()),
        verdicts: Vec::new(),
        fate: Fate::OutOfScope("norm".into()),
        matched: None,
    };
    let battery = run_battery(p, BatteryOptions::default())?;
    if !index_five {
        // only index-independent checks may eliminate off-index pairs
        if let Some(v) = battery
            .verdicts
            .iter()
            .find(|v| v.is_eliminated() && v.check.index_independent())
        {
            record.fate = Fate::Eliminated(v.check);
        }
        record.verdicts = battery.verdicts;
        return Ok(record);
    }
    record.fate = match (battery.outcome, battery.eliminated_by) {
        (_, Some(check)) => Fate::Eliminated(check),
        (Outcome::EliminatedExternal, None) => Fate::EliminatedExternal,
        _ => {
            record.matched = match_canonical(p);
            if record.matched.is_some() {
                Fate::RealizedUnique
            } else {
                Fate::Unresolved
            }
        }
    };
    record.verdicts = battery.verdicts;
    Ok(record)
}

/// One row of a fate comparison that went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub name: String,
    pub expected: Fate,
    pub computed: Fate,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, computed {}",
            self.name, self.expected, self.computed
        )
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub survivors: usize,
    pub eliminated: usize,
    pub external: usize,
    pub total: usize,
}

/// A realized invariant reached by the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Invariant {
    pub canonical: Realized,
    pub opposite: bool,
    /// Surviving pipeline entries matched to this invariant.
    pub witnesses: Vec<String>,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.opposite {
            write!(f, "{} (opposite)", self.canonical)
        } else {
            write!(f, "{}", self.canonical)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub index: IndexLimit,
    pub records: Vec<ClassificationRecord>,
    pub summary: Summary,
    pub invariants: Vec<Invariant>,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub connections: Vec<ConnectionEvidence>,
}

impl Report {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn survivor_names(&self) -> BTreeSet<String> {
        self.records
            .iter()
            .filter(|r| r.fate == Fate::RealizedUnique)
            .map(|r| r.name.clone())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str("# Index 5 classification\n\n");
        s.push_str("| pair | norm² = 5 | supertransitivity | fate | match |\n");
        s.push_str("|---|---|---|---|---|\n");
        for r in &self.records {
            let m = r
                .matched
                .as_ref()
                .map(|m| {
                    if m.via_opposite {
                        format!("{} (opposite)", m.canonical)
                    } else {
                        m.canonical.to_string()
                    }
                })
                .unwrap_or_default();
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.name,
                if r.index_five { "yes" } else { "no" },
                r.supertransitivity,
                r.fate,
                m
            ));
        }
        s.push_str(&format!(
            "\n{} pairs: {} survivors, {} eliminated, {} eliminated by citation.\n",
            self.summary.total, self.summary.survivors, self.summary.eliminated, self.summary.external
        ));
        s.push_str(&format!("\n## Invariants ({})\n\n", self.invariants.len()));
        for inv in &self.invariants {
            s.push_str(&format!("- {inv}: {}\n", inv.witnesses.join(", ")));
        }
        if !self.connections.is_empty() {
            s.push_str("\n## Connection search (numerical evidence)\n\n");
            s.push_str("| pair | cells | converged | best residual | orbits | continuum |\n");
            s.push_str("|---|---|---|---|---|---|\n");
            for c in &self.connections {
                s.push_str(&format!(
                    "| {} | {} | {}/{} | {:.1e} | {} | {} |\n",
                    c.canonical, c.cells, c.converged, c.restarts, c.best_residual, c.orbit_count, c.continuum
                ));
            }
        }
        if !self.mismatches.is_empty() {
            s.push_str("\n## Mismatches\n\n");
            for m in &self.mismatches {
                s.push_str(&format!("- {m}\n"));
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub execution: Execution,
    /// When set, solve for connections on every realized survivor and attach
    /// the orbit summaries. Fates never depend on this.
    pub connections: Option<SolveOptions>,
}

/// Numeric connection search on one realized pair. Evidence only.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectionEvidence {
    pub canonical: Realized,
    pub cells: usize,
    pub restarts: usize,
    pub converged: usize,
    pub best_residual: f64,
    pub orbit_count: usize,
    pub continuum: bool,
    pub status: &'static str,
}

fn connection_evidence(r: Realized, opts: &SolveOptions) -> Option<ConnectionEvidence> {
    let cells = build_cells(&realized(r)).ok()?;
    let rep = count_gauge_orbits(&cells, opts);
    Some(ConnectionEvidence {
        canonical: r,
        cells: rep.cells,
        restarts: rep.restarts,
        converged: rep.converged,
        best_residual: rep.best_residual,
        orbit_count: rep.orbit_count,
        continuum: rep.continuum,
        status: "numerical evidence",
    })
}

/// Expands catalog entries into pipeline inputs `(name, pair, expected)`.
pub fn pipeline_inputs(entries: &[CatalogEntry]) -> Vec<(String, BigraphPair, Fate)> {
    let mut out = Vec::new();
    for e in entries.iter().filter(|e| e.is_pipeline_input()) {
        match &e.expected_fate {
            Fate::CylinderFamily(check) => {
                for (label, q) in cylinder_family(&e.pair, &CYLINDER_TRANSLATIONS, CYLINDER_EXTRA_DEPTHS) {
                    out.push((format!("{}/{label}", e.name), q, Fate::Eliminated(*check)));
                }
            }
            f => out.push((e.name.clone(), e.pair.clone(), f.clone())),
        }
    }
    out
}

/// Classifies every pipeline input of `entries` and compares with the
/// expected fates.
pub fn reproduce_with(entries: &[CatalogEntry], opts: ReportOptions) -> Result<Report, ObstructionError> {
    let inputs = pipeline_inputs(entries);
    let results = opts.execution.map(inputs, |(name, pair, expected)| {
        classify_pair(&name, &pair).map(|r| (r, expected))
    });
    let mut records = Vec::new();
    let mut mismatches = Vec::new();
    for res in results {
        let (rec, expected) = res?;
        if rec.fate != expected {
            mismatches.push(Mismatch {
                name: rec.name.clone(),
                expected,
                computed: rec.fate.clone(),
            });
        }
        records.push(rec);
    }

    let mut summary = Summary {
        total: records.len(),
        ..Summary::default()
    };
    for r in &records {
        match r.fate {
            Fate::RealizedUnique => summary.survivors += 1,
            Fate::Eliminated(_) => summary.eliminated += 1,
            Fate::EliminatedExternal => summary.external += 1,
            _ => {}
        }
    }

    let mut invariants: Vec<Invariant> = Vec::new();
    for r in &records {
        let Some(m) = &r.matched else { continue };
        let canonical = realized(m.canonical);
        let chiral = pair_isomorphic(&canonical.opposite(), &canonical, false).is_none();
        for opposite in [false, true] {
            if opposite && !chiral {
                continue;
            }
            match invariants
                .iter_mut()
                .find(|i| i.canonical == m.canonical && i.opposite == opposite)
            {
                Some(inv) => inv.witnesses.push(r.name.clone()),
                None => invariants.push(Invariant {
                    canonical: m.canonical,
                    opposite,
                    witnesses: vec![r.name.clone()],
                }),
            }
        }
    }
    invariants.sort();

    let connections = match &opts.connections {
        Some(solve_opts) => {
            let mut seen: Vec<Realized> = invariants.iter().map(|i| i.canonical).collect();
            seen.dedup();
            seen.iter()
                .filter_map(|&r| connection_evidence(r, solve_opts))
                .collect()
        }
        None => Vec::new(),
    };

    Ok(Report {
        index: IndexLimit::default(),
        records,
        summary,
        invariants,
        mismatches,
        connections,
    })
}

/// Runs the pipeline on the embedded catalog.
pub fn reproduce_classification(opts: ReportOptions) -> Result<Report, ObstructionError> {
    reproduce_with(&catalog_entries(), opts)
}

/// A pair read from disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRecord {
    pub plus: String,
    pub minus: String,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub expected_fate: Option<Fate>,
}

impl PairRecord {
    pub fn pair(&self) -> Result<BigraphPair, CodecError> {
        BigraphPair::parse(&self.plus, &self.minus)
    }

    /// Two lines (plus, then minus) or a JSON object.
    pub fn parse_text(text: &str) -> Result<PairRecord, String> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| e.to_string());
        }
        let lines: Vec<&str> = t.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        match lines.as_slice() {
            [one] => Ok(PairRecord {
                plus: one.to_string(),
                minus: one.to_string(),
                name: None,
                expected_fate: None,
            }),
            [plus, minus] => Ok(PairRecord {
                plus: plus.to_string(),
                minus: minus.to_string(),
                name: None,
                expected_fate: None,
            }),
            _ => Err(format!("expected one or two lines, found {}", lines.len())),
        }
    }
}

/// Every distinct graph string in the catalog.
pub fn all_graph_strings() -> Vec<String> {
    let mut set: Vec<String> = Vec::new();
    for e in catalog_entries() {
        for s in [e.pair.plus(), e.pair.minus()] {
            let s = s.to_string();
            if !set.contains(&s) {
                set.push(s);
            }
        }
    }
    set
}

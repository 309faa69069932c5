//! The `atlas-report/1` output document and its plain-text rendering.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use atlas_core::atlas::{ClassCoordinates, Coord};
use atlas_core::engine::MultiCharacterClass;
use atlas_core::groups::ModulusData;
use atlas_core::hjr::{H2Class, ModularObstruction};
use atlas_core::num::{fmt_rat, Int};

use crate::error::CliError;
use crate::problem::CochainSpec;

pub const REPORT_SCHEMA: &str = "atlas-report/1";

pub fn small(x: &Int) -> Result<i64, CliError> {
    x.to_i64().ok_or_else(|| CliError::Input(format!("integer {x} does not fit in 64 bits")))
}

/// A class coordinate: a residue `value` of `Z_mod` or a point of `R/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordJson {
    Cyclic {
        #[serde(rename = "mod")]
        modulus: u64,
        value: String,
    },
    Circle {
        circle: String,
    },
}

impl CoordJson {
    pub fn from_coord(c: &Coord) -> Result<Self, CliError> {
        Ok(match c {
            Coord::Cyclic { modulus, value } => CoordJson::Cyclic {
                modulus: modulus.to_u64().ok_or_else(|| CliError::Input(format!("modulus {modulus} too large")))?,
                value: value.to_string(),
            },
            Coord::Circle { value } => CoordJson::Circle { circle: fmt_rat(value) },
        })
    }

    fn text(&self) -> String {
        match self {
            CoordJson::Cyclic { modulus, value } => format!("{value} in Z_{modulus}"),
            CoordJson::Circle { circle } => format!("{circle} in R/Z"),
        }
    }
}

fn coords(cs: &[Coord]) -> Result<Vec<CoordJson>, CliError> {
    cs.iter().map(CoordJson::from_coord).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternClass {
    pub indices: Vec<usize>,
    pub coords: Vec<CoordJson>,
}

/// Class coordinates per index pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassesJson {
    pub a_ijk: Vec<PatternClass>,
    pub a_ik: Vec<PatternClass>,
    pub b_ii: Vec<PatternClass>,
    pub b_ij: Vec<PatternClass>,
}

impl ClassesJson {
    pub fn from_classes(c: &ClassCoordinates) -> Result<Self, CliError> {
        let pc = |indices: Vec<usize>, cs: &[Coord]| Ok::<_, CliError>(PatternClass { indices, coords: coords(cs)? });
        Ok(ClassesJson {
            a_ijk: c.a_ijk.iter().map(|(&(i, j, k), cs)| pc(vec![i, j, k], cs)).collect::<Result<_, _>>()?,
            a_ik: c.a_ik.iter().map(|(&(i, k), cs)| pc(vec![i, k], cs)).collect::<Result<_, _>>()?,
            b_ii: c.b_ii.iter().map(|(&i, cs)| pc(vec![i], cs)).collect::<Result<_, _>>()?,
            b_ij: c.b_ij.iter().map(|(&(i, j), cs)| pc(vec![i, j], cs)).collect::<Result<_, _>>()?,
        })
    }
}

/// A nonzero entry of an alternating multi-character class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub indices: Vec<usize>,
    pub value: String,
}

pub fn class_entries(c: &MultiCharacterClass) -> Vec<ClassEntry> {
    c.entries.iter().map(|(idx, v)| ClassEntry { indices: idx.clone(), value: fmt_rat(v) }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusJson {
    pub p: Vec<i64>,
    pub q: Vec<i64>,
}

impl ModulusJson {
    pub fn from_modulus(m: &ModulusData) -> Result<Self, CliError> {
        Ok(ModulusJson {
            p: m.p.iter().map(small).collect::<Result<_, _>>()?,
            q: m.q.iter().map(small).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Membership {
    pub z: bool,
    pub b: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorEntry {
    pub indices: Vec<usize>,
    pub coord: CoordJson,
}

/// `ν(b_j)` as `value` in `[0, 1)` and as the point `value·T` of `R/TZ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NuEntry {
    pub generator: usize,
    pub value: String,
    pub torus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionJson {
    pub a_sector: Vec<SectorEntry>,
    pub b_ii: Vec<PatternClass>,
    pub b_ij: Vec<PatternClass>,
    pub nu: Vec<NuEntry>,
    pub zero: bool,
}

impl ObstructionJson {
    pub fn from_obstruction(o: &ModularObstruction) -> Result<Self, CliError> {
        let b = ClassesJson::from_classes(&o.b_sector)?;
        Ok(ObstructionJson {
            a_sector: o
                .a_sector
                .iter()
                .map(|(&(i, j, k), c)| Ok(SectorEntry { indices: vec![i, j, k], coord: CoordJson::from_coord(c)? }))
                .collect::<Result<_, CliError>>()?,
            b_ii: b.b_ii,
            b_ij: b.b_ij,
            nu: o
                .nu
                .iter()
                .enumerate()
                .map(|(n, v)| NuEntry { generator: n + 1, value: fmt_rat(v), torus: format!("{}·T", fmt_rat(v)) })
                .collect(),
            zero: o.is_zero(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub display: String,
    pub cochain: CochainSpec,
}

/// Exhaustive evaluation on the box `[-bound, bound]` of the coordinates
/// the polynomials actually involve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCheck {
    pub bound: u32,
    pub cocycle_points: u64,
    pub cocycle_defects: u64,
    pub witness_points: Option<u64>,
    pub witness_defects: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoboundaryReport {
    pub source: String,
    pub flavor: String,
    pub rank: usize,
    pub arity: usize,
    pub cochain: String,
    pub is_cocycle: bool,
    pub class: Option<Vec<ClassEntry>>,
    pub is_coboundary: Option<bool>,
    pub witness: Option<WitnessJson>,
    pub grid_check: Option<GridCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Character {
    pub x: String,
    pub y: String,
}

/// Rank-one record: Bezout data, the basis `(w_0, w_1)` with `b_1 = D_1 w_1`,
/// the character `χ_{x,y}` of `λ` and the outer period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleAutomorphismJson {
    pub p1: i64,
    pub q1: i64,
    pub d1: i64,
    pub u1: i64,
    pub v1: i64,
    pub r1: i64,
    pub s1: i64,
    pub w0: [i64; 2],
    pub w1: [i64; 2],
    pub b1: [i64; 2],
    pub b1_in_w: [i64; 2],
    pub quotient: String,
    pub lambda: String,
    pub character: Character,
    pub outer_period: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsReport {
    pub modulus: ModulusJson,
    pub membership: Membership,
    pub b_violations: Vec<String>,
    pub classes: ClassesJson,
    pub zero: bool,
    pub fiber_consistent: bool,
    pub obstruction: ObstructionJson,
    pub single_automorphism: Option<SingleAutomorphismJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolveReport {
    pub rank: usize,
    pub c_a: String,
    pub b_a: WitnessJson,
    pub symbolic_zero: bool,
    pub samples: usize,
    pub seed: u64,
    pub failures: usize,
    pub max_deviation: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Json {
    pub ijk: Vec<PatternClass>,
    pub ik: Vec<PatternClass>,
}

impl H2Json {
    pub fn from_class(h: &H2Class) -> Result<Self, CliError> {
        Ok(H2Json {
            ijk: h
                .ijk
                .iter()
                .map(|(&(i, j, k), cs)| Ok(PatternClass { indices: vec![i, j, k], coords: coords(cs)? }))
                .collect::<Result<_, CliError>>()?,
            ik: h
                .ik
                .iter()
                .map(|(&(i, k), cs)| Ok(PatternClass { indices: vec![i, k], coords: coords(cs)? }))
                .collect::<Result<_, CliError>>()?,
        })
    }
}

/// `h2` and `res` are present when `AS a` is integral; otherwise
/// `h2_unavailable` names the failing triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjrReport {
    pub modulus: ModulusJson,
    pub h2: Option<H2Json>,
    pub res: Option<ClassesJson>,
    pub h2_unavailable: Option<String>,
    pub a_hat: Vec<ClassEntry>,
    pub delta: ObstructionJson,
    pub partial_qm: Vec<ClassEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCheck {
    pub coboundary: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassReport {
    pub modulus: ModulusJson,
    pub membership: Membership,
    pub b_violations: Vec<String>,
    pub classes: ClassesJson,
    pub zero: bool,
    pub witness: Option<WitnessCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
    pub findings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "lowercase")]
pub enum Body {
    Coboundary(CoboundaryReport),
    Invariants(InvariantsReport),
    Resolve(ResolveReport),
    Hjr(HjrReport),
    Class(ClassReport),
    Verify(VerifyReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Report {
    pub fn new(body: Body) -> Self {
        Report { schema: REPORT_SCHEMA.to_string(), body }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let r: Report = serde_json::from_str(text).map_err(|e| CliError::Input(format!("report schema violation: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(CliError::Input(format!("schema is {:?}, expected {REPORT_SCHEMA:?}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let o = &mut out;
        match &self.body {
            Body::Coboundary(r) => {
                line(o, format!("cochain ({} on {} rank {}, arity {}): {}", r.source, r.flavor, r.rank, r.arity, r.cochain));
                line(o, format!("cocycle: {}", r.is_cocycle));
                match &r.class {
                    Some(c) if c.is_empty() => line(o, "class: 0".into()),
                    Some(c) => line(o, format!("class: {}", entries_text(c))),
                    None if !r.is_cocycle => line(o, "class: n/a (not a cocycle)".into()),
                    None => line(o, "class: n/a (central flavor)".into()),
                }
                line(o, format!("coboundary: {}", opt_text(&r.is_coboundary)));
                if let Some(w) = &r.witness {
                    line(o, format!("witness f: {}", w.display));
                }
                if let Some(g) = &r.grid_check {
                    line(o, format!("grid [-{0},{0}]: cocycle defects {1} of {2}", g.bound, g.cocycle_defects, g.cocycle_points));
                    if let (Some(d), Some(n)) = (g.witness_defects, g.witness_points) {
                        line(o, format!("grid [-{0},{0}]: witness defects {d} of {n}", g.bound));
                    }
                }
            }
            Body::Invariants(r) => {
                modulus_text(o, &r.modulus);
                membership_text(o, &r.membership, &r.b_violations);
                classes_text(o, "", &r.classes);
                line(o, format!("class zero: {}", r.zero));
                line(o, format!("fiber consistent: {}", r.fiber_consistent));
                obstruction_text(o, "obstruction", &r.obstruction);
                if let Some(s) = &r.single_automorphism {
                    line(o, format!("single automorphism (p1, q1) = ({}, {}):", s.p1, s.q1));
                    line(o, format!("  D1 = {}, u1 = {}, v1 = {}, r1 = {}, s1 = {}", s.d1, s.u1, s.v1, s.r1, s.s1));
                    line(o, format!("  w0 = {:?}, w1 = {:?} in the basis (z0, z1)", s.w0, s.w1));
                    line(o, format!("  b1 = {:?} = {:?} in the basis (w0, w1)", s.b1, s.b1_in_w));
                    line(o, format!("  Q_m = {}, Lambda = {}", s.quotient, s.lambda));
                    line(o, format!("  character (x, y) = ({}, {}), outer period {}", s.character.x, s.character.y, s.outer_period));
                }
            }
            Body::Resolve(r) => {
                line(o, format!("c_a: {}", r.c_a));
                line(o, format!("b_a: {}", r.b_a.display));
                line(o, format!("symbolic identity: {}", r.symbolic_zero));
                line(
                    o,
                    format!(
                        "sampled {} triples (seed {}): {} failures, max deviation {}",
                        r.samples, r.seed, r.failures, r.max_deviation
                    ),
                );
                line(o, format!("{}", if r.passed { "PASS" } else { "FAIL" }));
            }
            Body::Hjr(r) => {
                modulus_text(o, &r.modulus);
                match (&r.h2, &r.res) {
                    (Some(h), Some(res)) => {
                        for p in &h.ijk {
                            pattern_text(o, "H2", p);
                        }
                        for p in &h.ik {
                            pattern_text(o, "H2", p);
                        }
                        classes_text(o, "Res", res);
                    }
                    _ => line(o, format!("H2: {}", r.h2_unavailable.as_deref().unwrap_or("unavailable"))),
                }
                line(o, format!("a_hat: {}", entries_text(&r.a_hat)));
                obstruction_text(o, "delta", &r.delta);
                line(o, format!("partial_Qm: {}", entries_text(&r.partial_qm)));
            }
            Body::Class(r) => {
                modulus_text(o, &r.modulus);
                membership_text(o, &r.membership, &r.b_violations);
                classes_text(o, "", &r.classes);
                line(o, format!("class zero: {}", r.zero));
                if let Some(w) = &r.witness {
                    line(o, format!("witness oracle: coboundary {}, agrees {}", w.coboundary, w.agrees));
                }
            }
            Body::Verify(r) => {
                line(o, format!("suite {} (seed {})", r.suite, r.seed));
                for c in &r.checks {
                    line(o, format!("  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
                }
                for f in &r.findings {
                    line(o, format!("  FINDING {f}"));
                }
                line(o, format!("{}", if r.passed { "PASS" } else { "FAIL" }));
            }
        }
        out
    }
}

fn line(o: &mut String, s: String) {
    writeln!(o, "{s}").expect("write to string");
}

fn opt_text<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "n/a".to_string(), T::to_string)
}

fn entries_text(es: &[ClassEntry]) -> String {
    if es.is_empty() {
        return "0".into();
    }
    es.iter().map(|e| format!("{:?} -> {}", e.indices, e.value)).collect::<Vec<_>>().join(", ")
}

fn pattern_text(o: &mut String, label: &str, p: &PatternClass) {
    let cs: Vec<String> = p.coords.iter().map(CoordJson::text).collect();
    line(o, format!("{label} {:?}: ({})", p.indices, cs.join(", ")));
}

fn classes_text(o: &mut String, prefix: &str, c: &ClassesJson) {
    for (label, ps) in [("Lambda_a", &c.a_ijk), ("Lambda_a", &c.a_ik), ("Lambda_b", &c.b_ii), ("Lambda_b", &c.b_ij)] {
        for p in ps {
            let label = if prefix.is_empty() { label.to_string() } else { format!("{prefix} {label}") };
            pattern_text(o, &label, p);
        }
    }
}

fn modulus_text(o: &mut String, m: &ModulusJson) {
    line(o, format!("modulus p = {:?}, q = {:?}", m.p, m.q));
}

fn membership_text(o: &mut String, m: &Membership, violations: &[String]) {
    line(o, format!("membership: Z {}, B {}", m.z, m.b));
    for v in violations {
        line(o, format!("  not in B: {v}"));
    }
}

fn obstruction_text(o: &mut String, label: &str, ob: &ObstructionJson) {
    for e in &ob.a_sector {
        line(o, format!("{label} c_a {:?}: {}", e.indices, e.coord.text()));
    }
    for p in ob.b_ii.iter().chain(&ob.b_ij) {
        pattern_text(o, &format!("{label} c_b"), p);
    }
    for n in &ob.nu {
        line(o, format!("{label} nu(b_{}) = {} = {}", n.generator, n.value, n.torus));
    }
    line(o, format!("{label} zero: {}", ob.zero));
}

//! The `atlas-problem/1` input document and its conversion to library types.

use serde::{Deserialize, Serialize};

use atlas_core::cochain::{Cochain, Flavor, Layout};
use atlas_core::families::{ParameterA, ParameterB};
use atlas_core::groups::ModulusData;
use atlas_core::num::{parse_rat, Int};

use crate::error::CliError;

pub const PROBLEM_SCHEMA: &str = "atlas-problem/1";

/// One parameter entry: `a(x,y,z)` or `b(i,j)` with a `"num/den"` value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub indices: Vec<usize>,
    pub value: String,
}

/// One monomial of a cochain: a coefficient and, per slot, a list of
/// factors such as `"e1"`, `"e0"`, `"e1_2"` or `"e2^3"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub slots: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainSpec {
    pub flavor: String,
    pub arity: usize,
    #[serde(default)]
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_bound: Option<u32>,
}

/// A problem file. `p` defaults to all ones and `q` to all zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub schema: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain: Option<CochainSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

impl Problem {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let p: Problem = serde_json::from_str(text).map_err(|e| CliError::Input(format!("schema violation: {e}")))?;
        if p.schema != PROBLEM_SCHEMA {
            return Err(CliError::Input(format!("schema is {:?}, expected {PROBLEM_SCHEMA:?}", p.schema)));
        }
        if p.rank == 0 {
            return Err(CliError::Input("rank must be at least 1".into()));
        }
        Ok(p)
    }

    pub fn modulus(&self) -> Result<ModulusData, CliError> {
        let r = self.rank;
        let p = self.p.clone().unwrap_or_else(|| vec![1; r]);
        let q = self.q.clone().unwrap_or_else(|| vec![0; r]);
        if p.len() != r || q.len() != r {
            return Err(CliError::Input(format!("p and q must have {r} entries, got {} and {}", p.len(), q.len())));
        }
        Ok(ModulusData::new(p.into_iter().map(Int::from).collect(), q.into_iter().map(Int::from).collect())?)
    }

    pub fn parameter_a(&self) -> Result<ParameterA, CliError> {
        let mut a = ParameterA::new(self.rank);
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.a {
            let [x, y, z] = e.indices[..] else {
                return Err(CliError::Input(format!("a entry needs 3 indices, got {:?}", e.indices)));
            };
            if !seen.insert((x, y, z)) {
                return Err(CliError::Input(format!("a({x},{y},{z}) given twice")));
            }
            a.set((x, y, z), parse_rat(&e.value)?)?;
        }
        Ok(a)
    }

    pub fn parameter_b(&self) -> Result<ParameterB, CliError> {
        let mut b = ParameterB::new(self.rank);
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.b {
            let [i, j] = e.indices[..] else {
                return Err(CliError::Input(format!("b entry needs 2 indices, got {:?}", e.indices)));
            };
            if !seen.insert((i, j)) {
                return Err(CliError::Input(format!("b({i},{j}) given twice")));
            }
            b.set((i, j), parse_rat(&e.value)?)?;
        }
        Ok(b)
    }

    pub fn cochain(&self) -> Result<Option<Cochain>, CliError> {
        self.cochain.as_ref().map(|c| c.to_cochain(self.rank)).transpose()
    }
}

fn parse_factor(layout: &Layout, s: &str) -> Result<(usize, u8), CliError> {
    let (var, e) = match s.split_once('^') {
        Some((v, e)) => {
            let e: u8 = e.trim().parse().map_err(|_| CliError::Input(format!("bad exponent in factor {s:?}")))?;
            (v.trim(), e)
        }
        None => (s.trim(), 1),
    };
    if e == 0 {
        return Err(CliError::Input(format!("zero exponent in factor {s:?}")));
    }
    Ok((layout.parse_var(var)?, e))
}

impl CochainSpec {
    pub fn to_cochain(&self, rank: usize) -> Result<Cochain, CliError> {
        let flavor = Flavor::parse(&self.flavor)?;
        let layout = Layout::new(flavor, rank);
        let mut c = Cochain::zero(flavor, rank, self.arity);
        for t in &self.terms {
            if t.slots.len() != self.arity {
                return Err(CliError::Input(format!("term has {} slots, arity is {}", t.slots.len(), self.arity)));
            }
            let slots = t
                .slots
                .iter()
                .map(|s| s.iter().map(|f| parse_factor(&layout, f)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&[(usize, u8)]> = slots.iter().map(Vec::as_slice).collect();
            c = c.add(&Cochain::term(flavor, rank, parse_rat(&t.coeff)?, &refs)?)?;
        }
        Ok(c)
    }

    /// The terms of `c` in the input format, in monomial order.
    pub fn from_cochain(c: &Cochain) -> Self {
        let layout = c.layout();
        let w = layout.width();
        let terms = c
            .poly()
            .terms()
            .iter()
            .map(|(m, coeff)| Term {
                coeff: atlas_core::num::fmt_rat(coeff),
                slots: (0..c.arity())
                    .map(|s| {
                        (0..w)
                            .filter(|&idx| m[s * w + idx] > 0)
                            .map(|idx| match m[s * w + idx] {
                                1 => layout.var_name(idx),
                                e => format!("{}^{e}", layout.var_name(idx)),
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        CochainSpec { flavor: c.flavor().name().to_string(), arity: c.arity(), terms }
    }
}

//! Coboundary decisions on free abelian groups via asymmetrization, explicit
//! witnesses by integer row reduction, and the standard form with respect to
//! the distinguished central generator `z_0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cochain::{Cochain, Flavor, Layout};
use crate::error::{AtlasError, Result};
use crate::lattice::ModZSolver;
use crate::num::{frac, is_integer, Int, Rat};
use crate::poly::{Mono, Poly};

/// Class of a cocycle on `Z^r` as an alternating multi-character: the
/// entry at `i_1 < ... < i_n` is `(AS c)(a_{i_1}, ..., a_{i_n})` mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCharacterClass {
    pub arity: usize,
    /// Nonzero entries only, each in `[0, 1)`.
    pub entries: BTreeMap<Vec<usize>, Rat>,
}

impl MultiCharacterClass {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Rat {
        self.entries.get(idx).cloned().unwrap_or_else(Rat::zero)
    }
}

pub fn is_cocycle(c: &Cochain) -> bool {
    c.boundary().is_trivial_mod_one()
}

fn abelian_indices(layout: &Layout) -> Vec<usize> {
    let start = if layout.flavor.has_e0() { 0 } else { 1 };
    (start..=layout.rank).collect()
}

fn require_abelian(c: &Cochain) -> Result<()> {
    if c.flavor().has_central() {
        return Err(AtlasError::Precondition(format!(
            "asymmetrization decides coboundaries only on free abelian groups, not on flavor {}",
            c.flavor().name()
        )));
    }
    Ok(())
}

fn require_cocycle(c: &Cochain) -> Result<()> {
    if !is_cocycle(c) {
        return Err(AtlasError::Precondition("the cochain is not a cocycle".into()));
    }
    Ok(())
}

pub fn multicharacter_class(c: &Cochain) -> Result<MultiCharacterClass> {
    require_abelian(c)?;
    require_cocycle(c)?;
    let layout = c.layout();
    let n = c.arity();
    let a = c.asymmetrize();
    let mut entries = BTreeMap::new();
    for idx in abelian_indices(&layout).into_iter().combinations(n) {
        let slots: Vec<Vec<Int>> = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Int::zero(); layout.width()];
                v[i] = Int::one();
                v
            })
            .collect();
        let v = frac(&a.eval_coords(&slots)?);
        if !v.is_zero() {
            entries.insert(idx, v);
        }
    }
    Ok(MultiCharacterClass { arity: n, entries })
}

pub fn is_coboundary(c: &Cochain) -> Result<bool> {
    if c.flavor().has_central() {
        require_cocycle(c)?;
        return Ok(WitnessSolver::new().solve(c, RowSet::All)?.is_some());
    }
    Ok(multicharacter_class(c)?.is_zero())
}

/// Which rows of the boundary system are constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowSet {
    All,
    /// Rows that are not of standard shape for the given zero slot.
    NonStandard(ZeroSlot),
}

/// Slot that carries `ẽ_0` in the standard form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ZeroSlot {
    #[default]
    First,
    Last,
}

impl ZeroSlot {
    fn index(self, arity: usize) -> usize {
        match self {
            ZeroSlot::First => 0,
            ZeroSlot::Last => arity - 1,
        }
    }
}

type Weight = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BlockKey {
    layout: (Flavor, usize),
    arity: usize,
    weight: Weight,
    rows: RowSet,
}

struct Block {
    basis: Vec<Mono>,
    rows: BTreeMap<Mono, usize>,
    solver: ModZSolver,
}

/// Solves `∂f ≡ c (mod integer-valued)` for `f` in the capped basis.
/// Factorizations are cached per block and reused across targets.
#[derive(Default)]
pub struct WitnessSolver {
    cache: HashMap<BlockKey, Arc<Block>>,
}

/// Binomial exponent choices for one slot within the degree cap, with their weights.
fn slot_choices(layout: &Layout) -> Vec<(Vec<u8>, Weight)> {
    let w = layout.width();
    let ab = abelian_indices(layout);
    let mut ab_parts: Vec<Vec<u8>> = vec![vec![0; w]];
    for (x, &i) in ab.iter().enumerate() {
        let mut m = vec![0; w];
        m[i] = 1;
        ab_parts.push(m.clone());
        m[i] = 2;
        ab_parts.push(m);
        for &j in &ab[x + 1..] {
            let mut m = vec![0; w];
            m[i] = 1;
            m[j] = 1;
            ab_parts.push(m);
        }
    }
    let mut central: Vec<Option<usize>> = vec![None];
    if layout.flavor.has_central() {
        central.extend((layout.rank + 1..w).map(Some));
    }
    let mut out = Vec::new();
    for a in &ab_parts {
        for c in &central {
            let mut m = a.clone();
            if let Some(c) = c {
                m[*c] = 1;
            }
            let wt = slot_weight(layout, &m);
            out.push((m, wt));
        }
    }
    out
}

fn slot_weight(layout: &Layout, slot: &[u8]) -> Weight {
    let mut wt = vec![0u32; layout.rank + 1];
    for (idx, &e) in slot.iter().enumerate() {
        if e == 0 {
            continue;
        }
        match layout.central_pair(idx) {
            Some((j, k)) => {
                wt[j] += e as u32;
                wt[k] += e as u32;
            }
            None => wt[idx] += e as u32,
        }
    }
    wt
}

fn mono_weight(layout: &Layout, m: &[u8]) -> Weight {
    let w = layout.width();
    let mut wt = vec![0u32; layout.rank + 1];
    for slot in m.chunks(w) {
        for (a, b) in wt.iter_mut().zip(slot_weight(layout, slot)) {
            *a += b;
        }
    }
    wt
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn is_row_constrained(rows: RowSet, layout: &Layout, arity: usize, m: &[u8]) -> bool {
    match rows {
        RowSet::All => true,
        RowSet::NonStandard(z) => {
            let w = layout.width();
            let zi = z.index(arity);
            m.chunks(w).enumerate().any(|(s, slot)| {
                if s == zi {
                    slot[0] >= 2 || (slot[0] == 1 && slot[1..].iter().any(|&e| e > 0))
                } else {
                    slot[0] > 0
                }
            })
        }
    }
}

impl WitnessSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Basis monomials of `f` (binomial form, `arity` slots). Graded flavors
    /// take the exact weight, Heisenberg flavors everything below it.
    fn basis(layout: &Layout, arity: usize, weight: &Weight) -> Vec<Mono> {
        let choices = slot_choices(layout);
        let exact = !layout.flavor.has_central();
        let mut out = Vec::new();
        let mut stack: Vec<(Mono, Weight)> = vec![(Vec::new(), vec![0; weight.len()])];
        for _ in 0..arity {
            let mut next = Vec::new();
            for (m, wt) in &stack {
                for (sm, sw) in &choices {
                    let nw: Weight = wt.iter().zip(sw).map(|(a, b)| a + b).collect();
                    if leq(&nw, weight) {
                        let mut nm = m.clone();
                        nm.extend_from_slice(sm);
                        next.push((nm, nw));
                    }
                }
            }
            stack = next;
        }
        for (m, wt) in stack {
            if !exact || &wt == weight {
                out.push(m);
            }
        }
        out
    }

    fn block(&mut self, key: BlockKey) -> Result<Arc<Block>> {
        if let Some(b) = self.cache.get(&key) {
            return Ok(b.clone());
        }
        let (flavor, rank) = key.layout;
        let layout = Layout::new(flavor, rank);
        let n = key.arity;
        let nv = n.saturating_sub(1) * layout.width();
        let basis = Self::basis(&layout, n.saturating_sub(1), &key.weight);
        let mut columns: Vec<BTreeMap<Mono, Rat>> = Vec::with_capacity(basis.len());
        let mut rowset: BTreeSet<Mono> = BTreeSet::new();
        for b in &basis {
            let f = Poly::from_binomial(nv, &BTreeMap::from([(b.clone(), Rat::one())]));
            let df = Cochain::from_poly(flavor, rank, n - 1, f)?.boundary();
            let mut col = df.poly().to_binomial();
            col.retain(|m, _| is_row_constrained(key.rows, &layout, n, m));
            for (m, v) in &col {
                if !is_integer(v) {
                    return Err(AtlasError::Solver("boundary of a binomial basis element is not integral".into()));
                }
                rowset.insert(m.clone());
            }
            columns.push(col);
        }
        let rows: BTreeMap<Mono, usize> = rowset.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut a = vec![vec![Int::zero(); basis.len()]; rows.len()];
        for (j, col) in columns.iter().enumerate() {
            for (m, v) in col {
                a[rows[m]][j] = v.to_integer();
            }
        }
        let solver = ModZSolver::new(a, basis.len());
        let block = Arc::new(Block { basis, rows, solver });
        self.cache.insert(key, block.clone());
        Ok(block)
    }

    /// Some `f` with `∂f - c` integer valued on the constrained rows, or `None`.
    pub fn solve(&mut self, c: &Cochain, rows: RowSet) -> Result<Option<Cochain>> {
        let layout = c.layout();
        let n = c.arity();
        if n == 0 {
            return Ok(if c.is_trivial_mod_one() { Some(Cochain::zero(c.flavor(), c.rank(), 0)) } else { None });
        }
        let nv = (n - 1) * layout.width();
        let mut target = c.poly().fractional_part_binomial();
        target.retain(|m, _| is_row_constrained(rows, &layout, n, m));
        // Group target rows into blocks.
        let mut groups: BTreeMap<Weight, BTreeMap<Mono, Rat>> = BTreeMap::new();
        if layout.flavor.has_central() {
            if !target.is_empty() {
                let mut top = vec![0u32; layout.rank + 1];
                for m in target.keys() {
                    for (a, b) in top.iter_mut().zip(mono_weight(&layout, m)) {
                        *a = (*a).max(b);
                    }
                }
                groups.insert(top, target);
            }
        } else {
            for (m, v) in target {
                groups.entry(mono_weight(&layout, &m)).or_default().insert(m, v);
            }
        }
        let mut f_coeffs: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (weight, tgt) in groups {
            let key = BlockKey { layout: (layout.flavor, layout.rank), arity: n, weight, rows };
            let block = self.block(key)?;
            let mut t = vec![Rat::zero(); block.rows.len()];
            for (m, v) in tgt {
                match block.rows.get(&m) {
                    Some(&i) => t[i] = v,
                    None => return Ok(None),
                }
            }
            let Some(x) = block.solver.solve(&t) else { return Ok(None) };
            for (b, v) in block.basis.iter().zip(x) {
                if !v.is_zero() {
                    f_coeffs.insert(b.clone(), v);
                }
            }
        }
        let f = Cochain::from_poly(c.flavor(), c.rank(), n - 1, Poly::from_binomial(nv, &f_coeffs))?;
        Ok(Some(f.reduce_mod_one()))
    }
}

/// An `f` of arity `n - 1` with `∂f - c` integer valued.
pub fn coboundary_witness(c: &Cochain) -> Result<Cochain> {
    WitnessSolver::new().witness(c)
}

impl WitnessSolver {
    pub fn witness(&mut self, c: &Cochain) -> Result<Cochain> {
        require_cocycle(c)?;
        if c.arity() == 0 {
            return Err(AtlasError::Precondition("a 0-cochain is never a coboundary".into()));
        }
        if !c.flavor().has_central() && !multicharacter_class(c)?.is_zero() {
            return Err(AtlasError::Precondition("the cocycle has a nonzero multi-character class".into()));
        }
        let f = self.solve(c, RowSet::All)?.ok_or_else(|| {
            AtlasError::Solver("no witness in the capped basis; the cochain exceeds the degree cap".into())
        })?;
        if !f.boundary().sub(c)?.is_trivial_mod_one() {
            return Err(AtlasError::Solver("witness failed verification".into()));
        }
        Ok(f)
    }
}

/// `c ≡ c' = ∂f` shifted so that
/// `c'(.., z_0^k g, ..) = k d(other slots) + c_s(..)` with `c_s`, `d` free of `ẽ_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub zero_slot: ZeroSlot,
    pub cs: Cochain,
    pub d: Cochain,
    /// `f` with `c - ∂f ≡ c'`.
    pub shift: Cochain,
}

impl StandardForm {
    /// The recombined standard-form cochain `c'`.
    pub fn cochain(&self) -> Result<Cochain> {
        let layout = self.cs.layout();
        let e0 = Cochain::term(layout.flavor, layout.rank, Rat::one(), &[&[(0, 1)]])?;
        let d_part = match self.zero_slot {
            ZeroSlot::First => e0.tensor(&self.d)?,
            ZeroSlot::Last => self.d.tensor(&e0)?,
        };
        self.cs.add(&d_part)
    }

    /// Does `d` satisfy `∂d ≡ 0`?
    pub fn d_is_cocycle(&self) -> bool {
        is_cocycle(&self.d)
    }
}

pub fn standard_form(c: &Cochain, zero_slot: ZeroSlot) -> Result<StandardForm> {
    WitnessSolver::new().standard_form(c, zero_slot)
}

impl WitnessSolver {
    pub fn standard_form(&mut self, c: &Cochain, zero_slot: ZeroSlot) -> Result<StandardForm> {
        if !c.flavor().has_e0() {
            return Err(AtlasError::Precondition(format!("flavor {} has no distinguished z_0", c.flavor().name())));
        }
        if c.arity() == 0 {
            return Err(AtlasError::Precondition("standard form needs arity at least 1".into()));
        }
        require_cocycle(c)?;
        let layout = c.layout();
        let n = c.arity();
        let w = layout.width();
        let shift = self
            .solve(c, RowSet::NonStandard(zero_slot))?
            .ok_or_else(|| AtlasError::Solver("no capped shift brings the cocycle to standard form".into()))?;
        let rest = c.sub(&shift.boundary())?.poly().fractional_part_binomial();
        let zi = zero_slot.index(n);
        let mut cs = BTreeMap::new();
        let mut d = BTreeMap::new();
        for (m, v) in rest {
            if is_row_constrained(RowSet::NonStandard(zero_slot), &layout, n, &m) {
                return Err(AtlasError::Solver("standard-form residue left a non-standard term".into()));
            }
            if m[zi * w] == 1 {
                let mut dm = m.clone();
                dm.drain(zi * w..(zi + 1) * w);
                d.insert(dm, v);
            } else {
                cs.insert(m, v);
            }
        }
        let cs = Cochain::from_poly(c.flavor(), c.rank(), n, Poly::from_binomial(n * w, &cs))?;
        let d = Cochain::from_poly(c.flavor(), c.rank(), n - 1, Poly::from_binomial((n - 1) * w, &d))?;
        Ok(StandardForm { zero_slot, cs: cs.reduce_mod_one(), d: d.reduce_mod_one(), shift })
    }
}

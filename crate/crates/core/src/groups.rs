//! The groups `G = Z^r`, `N = PG`, the modulus extensions `G_m`, `Q_m`, the
//! Heisenberg group `H = M x_{n_M} G` and its extension `H_m`.
//!
//! Real components are kept in units of the period `T'`, so `z_0 = (0, 1)`
//! and every element has exact rational coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{AtlasError, Result};
use crate::num::{carry, is_integer, rat_int, residue, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusData {
    pub p: Vec<Int>,
    pub q: Vec<Int>,
}

impl ModulusData {
    pub fn new(p: Vec<Int>, q: Vec<Int>) -> Result<Self> {
        if p.is_empty() {
            return Err(AtlasError::Input("rank must be positive".into()));
        }
        if p.len() != q.len() {
            return Err(AtlasError::Input(format!("p has {} entries but q has {}", p.len(), q.len())));
        }
        for (i, (pi, qi)) in p.iter().zip(&q).enumerate() {
            if *pi < Int::one() {
                return Err(AtlasError::Input(format!("p_{} = {pi} must be >= 1", i + 1)));
            }
            if qi.is_negative() || qi >= pi {
                return Err(AtlasError::Input(format!("q_{} = {qi} must lie in 0..p_{}", i + 1, i + 1)));
            }
        }
        Ok(ModulusData { p, q })
    }

    pub fn from_i64(p: &[i64], q: &[i64]) -> Result<Self> {
        Self::new(p.iter().map(|&x| Int::from(x)).collect(), q.iter().map(|&x| Int::from(x)).collect())
    }

    /// Trivial modulus `q = 0` with the given `p`.
    pub fn untwisted(p: &[i64]) -> Result<Self> {
        Self::from_i64(p, &vec![0; p.len()])
    }

    pub fn rank(&self) -> usize {
        self.p.len()
    }

    /// `p_i` for 1-based `i`.
    pub fn pi(&self, i: usize) -> &Int {
        &self.p[i - 1]
    }

    pub fn qi(&self, i: usize) -> &Int {
        &self.q[i - 1]
    }

    /// `n(g) = sum e_i(g) q_i / p_i`, the `T'`-normalised value of `m(g)`.
    pub fn n_of(&self, g: &GroupElement) -> Rat {
        g.0.iter()
            .zip(self.p.iter().zip(&self.q))
            .fold(Rat::zero(), |acc, (e, (p, q))| acc + Rat::new(e * q, p.clone()))
    }

    fn check(&self, r: usize) -> Result<()> {
        if r != self.rank() {
            return Err(AtlasError::Mismatch(format!("rank {r} against modulus of rank {}", self.rank())));
        }
        Ok(())
    }
}

/// An element of `Z^r`, coordinates `e_1(g), ..., e_r(g)` stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<Int>);

impl GroupElement {
    pub fn zero(r: usize) -> Self {
        GroupElement(vec![Int::zero(); r])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        GroupElement(v.iter().map(|&x| Int::from(x)).collect())
    }

    /// `k a_i` for 1-based `i`.
    pub fn basis(r: usize, i: usize, k: i64) -> Self {
        let mut g = Self::zero(r);
        g.0[i - 1] = Int::from(k);
        g
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `e_i(g)` for 1-based `i`.
    pub fn e(&self, i: usize) -> &Int {
        &self.0[i - 1]
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupElement(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        GroupElement(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

/// Sparse upper-triangular integer matrix `m`, keys `(j, k)` with `1 <= j < k <= r`.
pub type Central = BTreeMap<(usize, usize), Int>;

fn central_add(a: &Central, b: &Central) -> Central {
    let mut out = a.clone();
    for (key, v) in b {
        let e = out.entry(*key).or_insert_with(Int::zero);
        *e += v;
        if e.is_zero() {
            out.remove(key);
        }
    }
    out
}

fn central_neg(a: &Central) -> Central {
    a.iter().map(|(k, v)| (*k, -v)).collect()
}

/// `n_M(g; h)` with `e_{j,k} = e_j(g) e_k(h)`.
pub fn n_m(g: &GroupElement, h: &GroupElement) -> Central {
    let r = g.rank();
    let mut out = Central::new();
    for j in 1..=r {
        if g.e(j).is_zero() {
            continue;
        }
        for k in j + 1..=r {
            let v = g.e(j) * h.e(k);
            if !v.is_zero() {
                out.insert((j, k), v);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub central: Central,
    pub g: GroupElement,
}

impl HeisenbergElement {
    pub fn identity(r: usize) -> Self {
        HeisenbergElement { central: Central::new(), g: GroupElement::zero(r) }
    }

    pub fn new(central: Central, g: GroupElement) -> Result<Self> {
        let r = g.rank();
        for (&(j, k), v) in &central {
            if !(1 <= j && j < k && k <= r) {
                return Err(AtlasError::Input(format!("central key ({j},{k}) is not strictly upper triangular for rank {r}")));
            }
            if v.is_zero() {
                return Err(AtlasError::Input(format!("central entry ({j},{k}) is zero")));
            }
        }
        Ok(HeisenbergElement { central, g })
    }

    /// `s_H(g) = (0, g)`.
    pub fn section(g: GroupElement) -> Self {
        HeisenbergElement { central: Central::new(), g }
    }

    pub fn central_only(r: usize, central: Central) -> Self {
        HeisenbergElement { central, g: GroupElement::zero(r) }
    }

    pub fn rank(&self) -> usize {
        self.g.rank()
    }

    /// `e_{j,k}(m_0(h))`.
    pub fn ejk(&self, j: usize, k: usize) -> Int {
        self.central.get(&(j, k)).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_central(&self) -> bool {
        self.g.is_zero()
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement { central: central_add(&central_neg(&self.central), &n_m(&self.g, &self.g)), g: self.g.neg() }
    }
}

fn same_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(AtlasError::Mismatch(format!("rank {a} against rank {b}")));
    }
    Ok(())
}

pub fn heisenberg_mul(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    same_rank(x.rank(), y.rank())?;
    let central = central_add(&central_add(&x.central, &y.central), &n_m(&x.g, &y.g));
    Ok(HeisenbergElement { central, g: x.g.add(&y.g) })
}

/// `x y x^{-1} y^{-1}`, the central element `x ∧ y` with
/// `e_{j,k} = e_j(x) e_k(y) - e_j(y) e_k(x)`. Conjugation reads
/// `y^{-1} x y = (x ∧ y) x`.
pub fn commutator(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    same_rank(x.rank(), y.rank())?;
    let central = central_add(&n_m(&x.g, &y.g), &central_neg(&n_m(&y.g, &x.g)));
    Ok(HeisenbergElement::central_only(x.rank(), central))
}

/// An element `(g, s)` of `G_m`; `s` is in units of `T'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmElement {
    pub g: GroupElement,
    pub s: Rat,
}

impl GmElement {
    pub fn new(g: GroupElement, s: Rat, m: &ModulusData) -> Result<Self> {
        m.check(g.rank())?;
        if !is_integer(&(&s - m.n_of(&g))) {
            return Err(AtlasError::Input(format!("s = {s} is not congruent to n(g) = {} mod 1", m.n_of(&g))));
        }
        Ok(GmElement { g, s })
    }

    /// From coordinates `(ẽ_0, e_1..e_r)`.
    pub fn from_coords(e0: Int, g: GroupElement, m: &ModulusData) -> Self {
        let s = m.n_of(&g) + rat_int(&e0);
        GmElement { g, s }
    }

    /// `ẽ_0 = s - n(g)`.
    pub fn e0(&self, m: &ModulusData) -> Int {
        (&self.s - m.n_of(&self.g)).to_integer()
    }

    pub fn add(&self, o: &Self) -> Self {
        GmElement { g: self.g.add(&o.g), s: &self.s + &o.s }
    }

    pub fn neg(&self) -> Self {
        GmElement { g: self.g.neg(), s: -&self.s }
    }

    pub fn z0(r: usize) -> Self {
        GmElement { g: GroupElement::zero(r), s: Rat::one() }
    }
}

/// `s_m(g) = (g, n(g))`.
pub fn section_sm(g: &GroupElement, m: &ModulusData) -> Result<GmElement> {
    m.check(g.rank())?;
    Ok(GmElement { g: g.clone(), s: m.n_of(g) })
}

/// `N` inside `G_m`: the element `sum t_i b_i = (P t, 0)` with
/// `b_j = p_j z_j - q_j z_0`.
pub fn embed_n(t: &GroupElement, m: &ModulusData) -> Result<GmElement> {
    m.check(t.rank())?;
    let g = GroupElement(t.0.iter().zip(&m.p).map(|(a, p)| a * p).collect());
    Ok(GmElement { g, s: Rat::zero() })
}

/// An element `(m, g, s)` of `H_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmElement {
    pub central: Central,
    pub g: GroupElement,
    pub s: Rat,
}

impl HmElement {
    pub fn new(central: Central, g: GroupElement, s: Rat, m: &ModulusData) -> Result<Self> {
        let h = HeisenbergElement::new(central, g)?;
        let gm = GmElement::new(h.g, s, m)?;
        Ok(HmElement { central: h.central, g: gm.g, s: gm.s })
    }

    pub fn from_coords(central: Central, e0: Int, g: GroupElement, m: &ModulusData) -> Self {
        let s = m.n_of(&g) + rat_int(&e0);
        HmElement { central, g, s }
    }

    /// `s_m(h) = (m, s_m(g))`.
    pub fn lift(h: &HeisenbergElement, m: &ModulusData) -> Result<Self> {
        let gm = section_sm(&h.g, m)?;
        Ok(HmElement { central: h.central.clone(), g: gm.g, s: gm.s })
    }

    /// The `L`-element `(c, P t, 0)`.
    pub fn in_l(central: Central, t: &GroupElement, m: &ModulusData) -> Result<Self> {
        let n = embed_n(t, m)?;
        Ok(HmElement { central, g: n.g, s: n.s })
    }

    pub fn identity(r: usize) -> Self {
        HmElement { central: Central::new(), g: GroupElement::zero(r), s: Rat::zero() }
    }

    pub fn rank(&self) -> usize {
        self.g.rank()
    }

    pub fn e0(&self, m: &ModulusData) -> Int {
        (&self.s - m.n_of(&self.g)).to_integer()
    }

    pub fn ejk(&self, j: usize, k: usize) -> Int {
        self.central.get(&(j, k)).cloned().unwrap_or_else(Int::zero)
    }

    /// Projection to `H` forgetting `s`.
    pub fn to_h(&self) -> HeisenbergElement {
        HeisenbergElement { central: self.central.clone(), g: self.g.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let h = heisenberg_mul(&self.to_h(), &o.to_h())?;
        Ok(HmElement { central: h.central, g: h.g, s: &self.s + &o.s })
    }

    pub fn inverse(&self) -> Self {
        let h = self.to_h().inverse();
        HmElement { central: h.central, g: h.g, s: -&self.s }
    }

    /// Is this element in `L = M x PG` (that is, `(c, P t, 0)`)?
    pub fn is_in_l(&self, m: &ModulusData) -> bool {
        self.s.is_zero() && self.g.0.iter().zip(&m.p).all(|(e, p)| residue(e, p).is_zero())
    }

    /// `e_{i,N}(g) = e_i(g) / p_i` for `g` in `L`.
    pub fn e_n(&self, i: usize, m: &ModulusData) -> Rat {
        Rat::new(self.g.e(i).clone(), m.pi(i).clone())
    }
}

pub fn hm_commutator(x: &HmElement, y: &HmElement) -> Result<HmElement> {
    let c = commutator(&x.to_h(), &y.to_h())?;
    Ok(HmElement { central: c.central, g: c.g, s: Rat::zero() })
}

/// An element of `Q_m = G_m / N`: residues `{e_i}_{p_i}` and `s` in `T'`-units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QmElement {
    pub q: Vec<Int>,
    pub s: Rat,
}

impl QmElement {
    pub fn new(q: Vec<Int>, s: Rat, m: &ModulusData) -> Result<Self> {
        m.check(q.len())?;
        for (i, (qi, p)) in q.iter().zip(&m.p).enumerate() {
            if qi.is_negative() || qi >= p {
                return Err(AtlasError::Input(format!("residue {qi} at {} outside 0..{p}", i + 1)));
            }
        }
        let lift = GroupElement(q.clone());
        if !is_integer(&(&s - m.n_of(&lift))) {
            return Err(AtlasError::Input(format!("s = {s} is not congruent to n(lift) mod 1")));
        }
        Ok(QmElement { q, s })
    }

    /// From residues and the `ẽ_0` offset.
    pub fn from_coords(q: Vec<Int>, e0: Int, m: &ModulusData) -> Self {
        let s = m.n_of(&GroupElement(q.clone())) + rat_int(&e0);
        QmElement { q, s }
    }

    /// Image of `(g, s)` in `G_m`.
    pub fn project(x: &GmElement, m: &ModulusData) -> Self {
        let q = x.g.0.iter().zip(&m.p).map(|(e, p)| residue(e, p)).collect();
        QmElement { q, s: x.s.clone() }
    }

    /// `ẽ_0(q̃) = s - sum {e_i(q)} q_i / p_i`.
    pub fn e0(&self, m: &ModulusData) -> Int {
        (&self.s - m.n_of(&GroupElement(self.q.clone()))).to_integer()
    }

    pub fn mul(&self, o: &Self, m: &ModulusData) -> Self {
        let q = self.q.iter().zip(&o.q).zip(&m.p).map(|((a, b), p)| residue(&(a + b), p)).collect();
        QmElement { q, s: &self.s + &o.s }
    }

    /// The cross-section `s(q̃) = (sum {e_i(q)} a_i, s)` into `G_m`.
    pub fn section(&self) -> GmElement {
        GmElement { g: GroupElement(self.q.clone()), s: self.s.clone() }
    }
}

/// `n_N(q_1; q_2)` as the coefficient vector `t` of `sum t_i b_i`, with
/// `t_i = η_{p_i}({e_i(q_1)}, {e_i(q_2)}) / p_i ∈ {0, 1}`.
pub fn nn_cocycle(q1: &[Int], q2: &[Int], m: &ModulusData) -> Result<GroupElement> {
    m.check(q1.len())?;
    m.check(q2.len())?;
    Ok(GroupElement(
        q1.iter().zip(q2).zip(&m.p).map(|((a, b), p)| carry(a, b, p) / p).collect(),
    ))
}

/// `n_L(q_1; q_2) = s(q_1) s(q_2) s(q_1 q_2)^{-1}` in `H`, where `s` lifts
/// residues through `s_H`. The abelian part is `P n_N(q_1; q_2)`.
pub fn nl_cocycle(q1: &[Int], q2: &[Int], m: &ModulusData) -> Result<HeisenbergElement> {
    let t = nn_cocycle(q1, q2, m)?;
    let r = m.rank();
    let mut central = Central::new();
    for j in 1..=r {
        let rj = residue(&q1[j - 1], m.pi(j));
        let eta_j = carry(&q1[j - 1], &q2[j - 1], m.pi(j));
        for k in j + 1..=r {
            let rk2 = residue(&q2[k - 1], m.pi(k));
            let rk12 = residue(&(&q1[k - 1] + &q2[k - 1]), m.pi(k));
            let v = &rj * rk2 - &eta_j * rk12;
            if !v.is_zero() {
                central.insert((j, k), v);
            }
        }
    }
    let g = GroupElement(t.0.iter().zip(&m.p).map(|(a, p)| a * p).collect());
    Ok(HeisenbergElement { central, g })
}

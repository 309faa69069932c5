//! Characteristic cocycles `(λ_{a,b}, μ_a)` of `(H_m, L, M)`: the parameter
//! lattices `Z` and `B`, class coordinates in `Λ = Λ_a ⊕ Λ_b`, fiber
//! consistency of the `b`-sector and the rank-one invariants.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cochain::{Cochain, Flavor, Layout};
use crate::error::{AtlasError, Result};
use crate::families::{b_part, family_xyzuv, pairs, triples, x_as, ParameterA, ParameterB};
use crate::groups::{hm_commutator, HmElement, ModulusData};
use crate::lattice::ModZSolver;
use crate::num::{euclid_pair, frac, gcd_all, is_integer, rat_int, xgcd, Int, Rat};
use crate::poly::{Mono, Poly};

/// A failed lattice condition, with the offending indices and value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["i", "j", "k"];
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "{} at ({})=({}): {}",
            self.condition,
            names[..self.indices.len()].join(","),
            idx.join(","),
            self.detail
        )
    }
}

fn check_ranks(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<()> {
    if a.rank != m.rank() || b.rank != m.rank() {
        return Err(AtlasError::Mismatch(format!(
            "parameters of rank {} and {} against a modulus of rank {}",
            a.rank,
            b.rank,
            m.rank()
        )));
    }
    Ok(())
}

fn r(v: &Int) -> Rat {
    rat_int(v)
}

fn in_lattice(x: &Rat, d: &Int) -> bool {
    is_integer(&(x * r(d)))
}

/// Violations of the `a`-side cocycle condition of `Z`.
pub fn z_a_violations(a: &ParameterA, m: &ModulusData) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, j, k) in triples(a.rank) {
        let d = gcd_all([m.pi(i), m.pi(j), m.pi(k)]);
        let v = a.as_a(i, j, k);
        if !in_lattice(&v, &d) {
            out.push(Violation {
                condition: "Z-a",
                indices: vec![i, j, k],
                detail: format!("AS a = {v} is not in (1/{d})Z"),
            });
        }
    }
    out
}

/// Violations of `b(i,j) p_j - b(i,0) q_j ∈ Z`, checked for all `i, j >= 1`.
pub fn z_b_violations(b: &ParameterB, m: &ModulusData) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 1..=b.rank {
        for j in 1..=b.rank {
            let v = b.get(i, j) * r(m.pi(j)) - b.get(i, 0) * r(m.qi(j));
            if !is_integer(&v) {
                out.push(Violation {
                    condition: "Z-b",
                    indices: vec![i, j],
                    detail: format!("b(i,j) p_j - b(i,0) q_j = {v} is not an integer"),
                });
            }
        }
    }
    out
}

/// Every violated condition of `Z`, in a fixed order.
pub fn z_violations(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<Vec<Violation>> {
    check_ranks(a, b, m)?;
    let mut out = z_a_violations(a, m);
    out.extend(z_b_violations(b, m));
    Ok(out)
}

/// Conditions of `B` beyond those of `Z`.
pub fn b_extra_violations(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<Vec<Violation>> {
    check_ranks(a, b, m)?;
    let mut out = Vec::new();
    for (i, j, k) in triples(a.rank) {
        for idx in [(i, j, k), (j, i, k), (k, i, j)] {
            let v = a.get(idx.0, idx.1, idx.2);
            if !is_integer(&v) {
                out.push(Violation {
                    condition: "B-a",
                    indices: vec![idx.0, idx.1, idx.2],
                    detail: format!("a = {v} is not an integer"),
                });
            }
        }
    }
    for (i, k) in pairs(a.rank) {
        for idx in [(i, i, k), (k, i, k)] {
            let v = a.get(idx.0, idx.1, idx.2);
            if !is_integer(&v) {
                out.push(Violation {
                    condition: "B-a",
                    indices: vec![idx.0, idx.1, idx.2],
                    detail: format!("a = {v} is not an integer"),
                });
            }
        }
    }
    for (i, j) in pairs(b.rank) {
        let l = m.pi(i).lcm(m.pi(j));
        let v = b.get(i, j) / r(m.pi(i)) + b.get(j, i) / r(m.pi(j));
        if !in_lattice(&v, &l) {
            out.push(Violation {
                condition: "B-b",
                indices: vec![i, j],
                detail: format!("b(i,j)/p_i + b(j,i)/p_j = {v} is not in (1/{l})Z"),
            });
        }
    }
    for i in 1..=b.rank {
        for j in [0, i] {
            let v = b.get(i, j);
            if !is_integer(&v) {
                out.push(Violation {
                    condition: "B-b",
                    indices: vec![i, j],
                    detail: format!("b(i,j) = {v} is not an integer"),
                });
            }
        }
    }
    Ok(out)
}

pub fn membership_z(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<bool> {
    Ok(z_violations(a, b, m)?.is_empty())
}

pub fn membership_b(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<bool> {
    Ok(membership_z(a, b, m)? && b_extra_violations(a, b, m)?.is_empty())
}

/// The pairwise form of the `b`-coboundary lattice: `p_j x + p_i y ∈
/// gcd(p_i, p_j) Z` with `x = b(i,j)`, `y = b(j,i)`, and `b(i,0), b(i,i) ∈ Z`.
pub fn b_lattice_pairwise(b: &ParameterB, m: &ModulusData) -> Result<bool> {
    if b.rank != m.rank() {
        return Err(AtlasError::Mismatch(format!("b of rank {} against modulus of rank {}", b.rank, m.rank())));
    }
    let diag = (1..=b.rank).all(|i| is_integer(&b.get(i, 0)) && is_integer(&b.get(i, i)));
    let off = pairs(b.rank).all(|(i, j)| {
        let d = m.pi(i).gcd(m.pi(j));
        let v = b.get(i, j) * r(m.pi(j)) + b.get(j, i) * r(m.pi(i));
        is_integer(&(v / r(&d)))
    });
    Ok(diag && off)
}

/// `b`-part of `B` in the quotient form `b(i,j)/p_i + b(j,i)/p_j ∈ (1/lcm)Z`.
pub fn b_lattice_quotient(b: &ParameterB, m: &ModulusData) -> Result<bool> {
    let a = ParameterA::new(b.rank);
    Ok(b_extra_violations(&a, b, m)?.is_empty())
}

/// The pair `(λ, μ)` as arity-2 cochains on `H_m`, without the lattice check.
pub fn characteristic_cochains(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<(Cochain, Cochain)> {
    check_ranks(a, b, m)?;
    let fam = family_xyzuv(a, Flavor::Hm)?;
    let lambda = fam.y.add(&x_as(a, Flavor::Hm)?)?.add(&b_part(b, &m.p)?)?;
    Ok((lambda, fam.v))
}

/// A characteristic cocycle `λ_{a,b} = Y_a + X_{AS a} + Σ b(i,j) e_{i,N} ⊗ ẽ_j`
/// on `L × H_m` and `μ_a = V_a` on `L × L`, both in exponent form.
#[derive(Clone, Debug)]
pub struct CharacteristicCocycle {
    pub a: ParameterA,
    pub b: ParameterB,
    pub modulus: ModulusData,
    lambda: Cochain,
    mu: Cochain,
}

/// Builds `(λ_{a,b}, μ_a)`; the parameters must lie in `Z`.
pub fn build_characteristic(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<CharacteristicCocycle> {
    let bad = z_violations(a, b, m)?;
    if let Some(v) = bad.first() {
        return Err(AtlasError::Precondition(v.to_string()));
    }
    let (lambda, mu) = characteristic_cochains(a, b, m)?;
    Ok(CharacteristicCocycle { a: a.clone(), b: b.clone(), modulus: m.clone(), lambda, mu })
}

impl CharacteristicCocycle {
    pub fn lambda_cochain(&self) -> &Cochain {
        &self.lambda
    }

    pub fn mu_cochain(&self) -> &Cochain {
        &self.mu
    }

    fn require_l(&self, g: &HmElement) -> Result<()> {
        if !g.is_in_l(&self.modulus) {
            return Err(AtlasError::Input("argument is not in L".into()));
        }
        Ok(())
    }

    /// Exponent of `λ(g; h)` for `g ∈ L`, `h ∈ H_m`, in `[0, 1)`.
    pub fn lambda(&self, g: &HmElement, h: &HmElement) -> Result<Rat> {
        self.require_l(g)?;
        Ok(frac(&self.lambda.eval_hm(&[g.clone(), h.clone()], &self.modulus)?))
    }

    /// Exponent of `μ(g; h)` for `g, h ∈ L`, in `[0, 1)`.
    pub fn mu(&self, g: &HmElement, h: &HmElement) -> Result<Rat> {
        self.require_l(g)?;
        self.require_l(h)?;
        Ok(frac(&self.mu.eval_hm(&[g.clone(), h.clone()], &self.modulus)?))
    }

    /// Defects mod 1 of the characteristic identities at `g_1, g_2, g_3 ∈ L`
    /// and `h_1, h_2 ∈ H_m`; every entry is zero for a characteristic cocycle.
    pub fn identity_defects(&self, g: [&HmElement; 3], h: [&HmElement; 2]) -> Result<IdentityDefects> {
        let [g1, g2, g3] = g;
        let [h1, h2] = h;
        let la = |x: &HmElement, y: &HmElement| self.lambda(x, y);
        let mu = |x: &HmElement, y: &HmElement| self.mu(x, y);
        let conj = |x: &HmElement, y: &HmElement| y.inverse().mul(x)?.mul(y);
        let g12 = g1.mul(g2)?;
        let lhs = la(g2, h1)? - la(&g12, h1)? + la(g1, h1)?;
        let mid = mu(&conj(g1, h1)?, &conj(g2, h1)?)? - mu(g1, g2)?;
        let a_mu = frac(&(&lhs - mid));
        let a_lambda = frac(&(lhs - la(&hm_commutator(g2, h1)?, g1)?));
        let b = la(g1, h2)? - la(g1, &h1.mul(h2)?)? + la(g1, h1)? - la(&hm_commutator(h1, g1)?, h2)?;
        let c = la(g1, g2)? - mu(g2, &conj(g1, g2)?)? + mu(g1, g2)?;
        let cocycle = mu(g2, g3)? - mu(&g12, g3)? + mu(g1, &g2.mul(g3)?)? - mu(g1, g2)?;
        Ok(IdentityDefects { a_mu, a_lambda, b: frac(&b), c: frac(&c), cocycle: frac(&cocycle) })
    }
}

/// Defects of the identities `(a)` in its `μ` and `λ` readings, `(b)`, `(c)`,
/// and of the 2-cocycle identity of `μ` on `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityDefects {
    pub a_mu: Rat,
    pub a_lambda: Rat,
    pub b: Rat,
    pub c: Rat,
    pub cocycle: Rat,
}

impl IdentityDefects {
    pub fn all_zero(&self) -> bool {
        [&self.a_mu, &self.a_lambda, &self.b, &self.c, &self.cocycle].iter().all(|v| v.is_zero())
    }
}

/// A coordinate of a class: a residue in `Z_D` or a point of `R/Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Cyclic { modulus: Int, value: Int },
    Circle { value: Rat },
}

impl Coord {
    pub fn cyclic(value: &Int, modulus: &Int) -> Coord {
        Coord::Cyclic { modulus: modulus.clone(), value: value.mod_floor(modulus) }
    }

    /// The point `x` of `(1/D) Z / Z`, stored as `D x mod D`.
    pub fn fraction(x: &Rat, d: &Int) -> Result<Coord> {
        let k = x * r(d);
        if !is_integer(&k) {
            return Err(AtlasError::Precondition(format!("{x} is not in (1/{d})Z")));
        }
        Ok(Coord::cyclic(&k.to_integer(), d))
    }

    pub fn circle(x: &Rat) -> Coord {
        Coord::Circle { value: frac(x) }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coord::Cyclic { value, .. } => value.is_zero(),
            Coord::Circle { value, .. } => value.is_zero(),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Cyclic { modulus, value } => write!(f, "{value} mod {modulus}"),
            Coord::Circle { value } => write!(f, "{value}"),
        }
    }
}

/// `([D AS a]_D, [a(j,i,k)]_1, [a(k,i,j)]_1)` with `D = gcd(p_i, p_j, p_k)`.
pub fn class_a_ijk(a: &ParameterA, (i, j, k): (usize, usize, usize), m: &ModulusData) -> Result<[Coord; 3]> {
    if !(1 <= i && i < j && j < k && k <= a.rank) || a.rank != m.rank() {
        return Err(AtlasError::Input(format!("({i},{j},{k}) is not an increasing triple of rank {}", m.rank())));
    }
    let d = gcd_all([m.pi(i), m.pi(j), m.pi(k)]);
    Ok([Coord::fraction(&a.as_a(i, j, k), &d)?, Coord::circle(&a.get(j, i, k)), Coord::circle(&a.get(k, i, j))])
}

/// `([a(i,i,k)]_1, [a(k,i,k)]_1)`: an odd integer on a diagonal pattern is
/// already a coboundary, so these coordinates live in `R/Z`.
pub fn class_a_ik(a: &ParameterA, (i, k): (usize, usize)) -> Result<[Coord; 2]> {
    if !(1 <= i && i < k && k <= a.rank) {
        return Err(AtlasError::Input(format!("({i},{k}) is not an increasing pair of rank {}", a.rank)));
    }
    Ok([Coord::circle(&a.get(i, i, k)), Coord::circle(&a.get(k, i, k))])
}

/// Class of `λ_z^{i,i}`, `z = (x, u)`: `([p x - q u]_{D}, [-v_i x + u_i u]_1)`.
pub fn class_b_ii(x: &Rat, u: &Rat, p: &Int, q: &Int) -> Result<[Coord; 2]> {
    let c = r(p) * x - r(q) * u;
    if !is_integer(&c) {
        return Err(AtlasError::Precondition(format!("p x - q u = {c} is not an integer")));
    }
    let (d, ui, vi) = euclid_pair(p, q)?;
    Ok([Coord::cyclic(&c.to_integer(), &d), Coord::circle(&(-r(&vi) * x + r(&ui) * u))])
}

/// Integer data attached to a pair of moduli `(p_i, q_i)`, `(p_j, q_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConstants {
    /// `gcd(p_i, p_j, q_i, q_j)`.
    pub d: Int,
    pub d_ij: Int,
    pub e_ij: Int,
    pub r_ij: Int,
    pub r_ji: Int,
    pub s_ij: Int,
    pub s_ji: Int,
    pub m_ij: Int,
    pub n_ij: Int,
    pub w_ij: Int,
    pub w_ji: Int,
    pub x_ij: Int,
    pub y_ij: Int,
}

impl PairConstants {
    /// When `q_i = q_j = 0` the data is completed by `(s_ji, s_ij) = (1, 0)`
    /// and `(w_ij, w_ji) = (0, 1)`, which keeps the change of basis unimodular
    /// so the last two coordinates read `[u]` and `[v]`.
    pub fn new(pi: &Int, qi: &Int, pj: &Int, qj: &Int) -> Result<Self> {
        for (p, q) in [(pi, qi), (pj, qj)] {
            if *p < Int::one() || q.is_negative() || q >= p {
                return Err(AtlasError::Input(format!("modulus pair ({p}, {q}) needs p >= 1 and 0 <= q < p")));
            }
        }
        let d = gcd_all([pi, pj, qi, qj]);
        let d_ij = pi.gcd(pj);
        let e_ij = qi.gcd(qj);
        let (r_ij, r_ji) = (pi / &d_ij, pj / &d_ij);
        let m_ij = &d_ij / &d;
        let n_ij = &e_ij / &d;
        if e_ij.is_zero() {
            return Ok(PairConstants {
                d,
                d_ij,
                e_ij,
                r_ij,
                r_ji,
                s_ij: Int::zero(),
                s_ji: Int::one(),
                m_ij,
                n_ij,
                w_ij: Int::zero(),
                w_ji: Int::one(),
                x_ij: Int::one(),
                y_ij: Int::zero(),
            });
        }
        let (s_ij, s_ji) = (qi / &e_ij, qj / &e_ij);
        let (_, w_ij, w_ji) = xgcd(qi, qj);
        let (_, x_ij, y_ij) = xgcd(&d_ij, &e_ij);
        Ok(PairConstants { d, d_ij, e_ij, r_ij, r_ji, s_ij, s_ji, m_ij, n_ij, w_ij, w_ji, x_ij, y_ij })
    }
}

/// Class of `λ_z^{i,j}`, `z = (x, u, y, v)` with `x = b(i,j)`, `u = b(i,0)`,
/// `y = b(j,i)`, `v = b(j,0)`.
pub fn class_b_ij(z: [&Rat; 4], (pi, qi): (&Int, &Int), (pj, qj): (&Int, &Int)) -> Result<[Coord; 3]> {
    let [x, u, y, v] = z;
    let cx = x * r(pj) - u * r(qj);
    let cy = y * r(pi) - v * r(qi);
    if !is_integer(&cx) || !is_integer(&cy) {
        return Err(AtlasError::Precondition(format!("p_j x - q_j u = {cx} and p_i y - q_i v = {cy} must be integers")));
    }
    let c = PairConstants::new(pi, qi, pj, qj)?;
    let big_x = x * r(&c.r_ji) + y * r(&c.r_ij);
    let big_s = u * r(&c.s_ji) + v * r(&c.s_ij);
    let first = r(&c.m_ij) * &big_x - r(&c.n_ij) * &big_s;
    let second = r(&c.y_ij) * &big_x + r(&c.x_ij) * &big_s;
    let third = -u * r(&c.w_ij) + v * r(&c.w_ji);
    Ok([Coord::fraction(&first, &c.d)?, Coord::circle(&second), Coord::circle(&third)])
}

/// Class coordinates of a characteristic cocycle, one entry per index pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub a_ijk: BTreeMap<(usize, usize, usize), [Coord; 3]>,
    pub a_ik: BTreeMap<(usize, usize), [Coord; 2]>,
    pub b_ii: BTreeMap<usize, [Coord; 2]>,
    pub b_ij: BTreeMap<(usize, usize), [Coord; 3]>,
}

impl ClassCoordinates {
    pub fn a_sector_zero(&self) -> bool {
        self.a_ijk.values().flatten().chain(self.a_ik.values().flatten()).all(Coord::is_zero)
    }

    pub fn b_sector_zero(&self) -> bool {
        self.b_ii.values().flatten().chain(self.b_ij.values().flatten()).all(Coord::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.a_sector_zero() && self.b_sector_zero()
    }
}

fn b_sector(b: &ParameterB, m: &ModulusData, out: &mut ClassCoordinates) -> Result<()> {
    for i in 1..=b.rank {
        out.b_ii.insert(i, class_b_ii(&b.get(i, i), &b.get(i, 0), m.pi(i), m.qi(i))?);
    }
    for (i, j) in pairs(b.rank) {
        let z = [&b.get(i, j), &b.get(i, 0), &b.get(j, i), &b.get(j, 0)];
        out.b_ij.insert((i, j), class_b_ij(z, (m.pi(i), m.qi(i)), (m.pi(j), m.qi(j)))?);
    }
    Ok(())
}

/// The class of `(λ_{a,b}, μ_a)` in `Λ`; the parameters must lie in `Z`.
pub fn classify(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<ClassCoordinates> {
    if let Some(v) = z_violations(a, b, m)?.first() {
        return Err(AtlasError::Precondition(v.to_string()));
    }
    let mut out = ClassCoordinates::default();
    for t in triples(a.rank) {
        out.a_ijk.insert(t, class_a_ijk(a, t, m)?);
    }
    for p in pairs(a.rank) {
        out.a_ik.insert(p, class_a_ik(a, p)?);
    }
    b_sector(b, m, &mut out)?;
    Ok(out)
}

/// The `b`-sector classes alone; `b` must satisfy the `b`-side of `Z`.
pub fn classify_b(b: &ParameterB, m: &ModulusData) -> Result<ClassCoordinates> {
    classify(&ParameterA::new(b.rank), b, m)
}

/// Per-pattern `b`-data: `(x, u)` for `(i,i)` and `(x, u, y, v)` for `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BPatterns {
    pub ii: BTreeMap<usize, (Rat, Rat)>,
    pub ij: BTreeMap<(usize, usize), (Rat, Rat, Rat, Rat)>,
}

impl BPatterns {
    pub fn from_b(b: &ParameterB) -> Self {
        let mut out = BPatterns::default();
        for i in 1..=b.rank {
            out.ii.insert(i, (b.get(i, i), b.get(i, 0)));
        }
        for (i, j) in pairs(b.rank) {
            out.ij.insert((i, j), (b.get(i, j), b.get(i, 0), b.get(j, i), b.get(j, 0)));
        }
        out
    }

    /// Whether the circle readings `[u]` of index `i` agree across every
    /// pattern that contains `i`.
    pub fn is_consistent(&self) -> bool {
        let mut seen: BTreeMap<usize, Rat> = BTreeMap::new();
        let mut check = |i: usize, u: &Rat| {
            let f = frac(u);
            match seen.get(&i) {
                Some(prev) => *prev == f,
                None => {
                    seen.insert(i, f);
                    true
                }
            }
        };
        let mut ok = true;
        for (&i, (_, u)) in &self.ii {
            ok &= check(i, u);
        }
        for (&(i, j), (_, u, _, v)) in &self.ij {
            ok &= check(i, u);
            ok &= check(j, v);
        }
        ok
    }
}

/// Fiber consistency of the `b`-sector read off a parameter in `Z`.
pub fn fiber_consistency(b: &ParameterB, m: &ModulusData) -> Result<bool> {
    if b.rank != m.rank() {
        return Err(AtlasError::Mismatch(format!("b of rank {} against modulus of rank {}", b.rank, m.rank())));
    }
    if let Some(v) = z_b_violations(b, m).first() {
        return Err(AtlasError::Precondition(v.to_string()));
    }
    Ok(BPatterns::from_b(b).is_consistent())
}

/// Invariants of one automorphism with periodic modulus `(p_1, q_1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleAutomorphism {
    pub p1: Int,
    pub q1: Int,
    pub d1: Int,
    pub u1: Int,
    pub v1: Int,
    pub r1: Int,
    pub s1: Int,
    /// `w_0 = u_1 z_0 - v_1 z_1` in the basis `(z_0, z_1)`.
    pub w0: [Int; 2],
    /// `w_1 = -s_1 z_0 + r_1 z_1` in the basis `(z_0, z_1)`.
    pub w1: [Int; 2],
}

impl SingleAutomorphism {
    /// `b_1 = p_1 z_1 - q_1 z_0` in the basis `(z_0, z_1)`.
    pub fn b1(&self) -> [Int; 2] {
        [-self.q1.clone(), self.p1.clone()]
    }

    /// `b_1` in the basis `(w_0, w_1)`, by inverting the unimodular matrix.
    pub fn b1_in_w_basis(&self) -> Result<[Int; 2]> {
        let det = &self.w0[0] * &self.w1[1] - &self.w0[1] * &self.w1[0];
        if !det.abs().is_one() {
            return Err(AtlasError::Solver(format!("basis matrix has determinant {det}")));
        }
        let [z0, z1] = self.b1();
        let c0 = (&self.w1[1] * &z0 - &self.w1[0] * &z1) * &det;
        let c1 = (-&self.w0[1] * &z0 + &self.w0[0] * &z1) * &det;
        Ok([c0, c1])
    }

    pub fn quotient_presentation(&self) -> String {
        format!("Z + Z_{}", self.d1)
    }

    pub fn lambda_presentation(&self) -> String {
        format!("T + Z_{}", self.d1)
    }
}

pub fn single_automorphism_invariants(p1: &Int, q1: &Int) -> Result<SingleAutomorphism> {
    if *p1 < Int::one() || q1.is_negative() || q1 >= p1 {
        return Err(AtlasError::Input(format!("(p1, q1) = ({p1}, {q1}) needs p1 >= 1 and 0 <= q1 < p1")));
    }
    let (d1, u1, v1) = euclid_pair(p1, q1)?;
    let (r1, s1) = (p1 / &d1, q1 / &d1);
    let w0 = [u1.clone(), -v1.clone()];
    let w1 = [-s1.clone(), r1.clone()];
    Ok(SingleAutomorphism { p1: p1.clone(), q1: q1.clone(), d1, u1, v1, r1, s1, w0, w1 })
}

/// `p_1 s_o`, where `s_o` is the order of `χ_{x,y}(z_0) = exp(2πi(x r_1 + y v_1))`.
pub fn outer_period(x: &Rat, y: &Rat, p1: &Int, q1: &Int) -> Result<Int> {
    let s = single_automorphism_invariants(p1, q1)?;
    let t = x * r(&s.r1) + y * r(&s.v1);
    Ok(p1 * t.denom())
}

/// Invariants of a pair of automorphisms: the `b`-sector classes and the
/// modular obstruction `(c_b, ν_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInvariants {
    pub classes: ClassCoordinates,
    pub obstruction: crate::hjr::ModularObstruction,
}

/// Rank-2 invariants of `b`; `b` must satisfy the `b`-side of `Z`.
pub fn pair_invariants(m: &ModulusData, b: &ParameterB) -> Result<PairInvariants> {
    if m.rank() != 2 {
        return Err(AtlasError::Precondition(format!("pair invariants need rank 2, got {}", m.rank())));
    }
    let classes = classify_b(b, m)?;
    let obstruction = crate::hjr::delta_map(&ParameterA::new(2), b, m)?;
    Ok(PairInvariants { classes, obstruction })
}

/// Key of one entry of `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ParamKey {
    A(usize, usize, usize),
    B(usize, usize),
}

/// Decides whether `(λ_{a,b}, μ_a)` is a coboundary `(f(h^{-1} g h) - f(g),
/// f(g) + f(h) - f(gh))` by solving for `f: L -> T` in a polynomial basis of
/// the coordinates `(t, c)` of `(c, P t, 0) ∈ L`, modulo integer-valued maps.
/// The system is factored once per modulus and reused across parameters.
pub struct CharacteristicWitness {
    modulus: ModulusData,
    basis: Vec<Mono>,
    nrows: usize,
    solver: ModZSolver,
    columns: BTreeMap<ParamKey, Vec<(usize, Rat)>>,
}

fn l_width(r: usize) -> usize {
    r + r * (r - 1) / 2
}

fn l_central(r: usize, j: usize, k: usize) -> usize {
    Layout::new(Flavor::H, r).ejk(j, k) - 1
}

impl CharacteristicWitness {
    pub fn new(m: &ModulusData) -> Result<Self> {
        let r = m.rank();
        let wl = l_width(r);
        let w = Layout::new(Flavor::Hm, r).width();
        let basis = l_basis(r);
        let p: Vec<Rat> = m.p.iter().map(r_).collect();
        let q: Vec<Rat> = m.q.iter().map(r_).collect();

        let hm_images = |off: usize, nv: usize| -> Vec<Poly> {
            let lay = Layout::new(Flavor::Hm, r);
            let mut out = vec![Poly::zero(nv); w];
            for i in 1..=r {
                let t = Poly::var(nv, off + i - 1);
                out[0] = out[0].sub(&t.scale(&q[i - 1]));
                out[lay.e(i)] = t.scale(&p[i - 1]);
            }
            for (j, k) in pairs(r) {
                out[lay.ejk(j, k)] = Poly::var(nv, off + l_central(r, j, k));
            }
            out
        };

        // μ-equations: variables (g_1, g_2) in L-coordinates.
        let nv_mu = 2 * wl;
        let mut prod = Vec::with_capacity(wl);
        for i in 1..=r {
            prod.push(Poly::var(nv_mu, i - 1).add(&Poly::var(nv_mu, wl + i - 1)));
        }
        for (j, k) in pairs(r) {
            let c = l_central(r, j, k);
            let cross = Poly::var(nv_mu, j - 1).mul(&Poly::var(nv_mu, wl + k - 1)).scale(&(&p[j - 1] * &p[k - 1]));
            prod.push(Poly::var(nv_mu, c).add(&Poly::var(nv_mu, wl + c)).add(&cross));
        }
        let first: Vec<Poly> = (0..wl).map(|v| Poly::var(nv_mu, v)).collect();
        let second: Vec<Poly> = (0..wl).map(|v| Poly::var(nv_mu, wl + v)).collect();
        let mu_slots = [hm_images(0, nv_mu), hm_images(wl, nv_mu)].concat();

        // λ-equations: variables (g, h), g in L-coordinates, h in H_m-coordinates.
        let nv_la = wl + w;
        let lay = Layout::new(Flavor::Hm, r);
        let hvar = |i: usize| Poly::var(nv_la, wl + lay.e(i));
        let mut conj = Vec::with_capacity(wl);
        for i in 1..=r {
            conj.push(Poly::var(nv_la, i - 1));
        }
        for (j, k) in pairs(r) {
            let tj = Poly::var(nv_la, j - 1).scale(&p[j - 1]);
            let tk = Poly::var(nv_la, k - 1).scale(&p[k - 1]);
            let wedge = tj.mul(&hvar(k)).sub(&hvar(j).mul(&tk));
            conj.push(Poly::var(nv_la, l_central(r, j, k)).add(&wedge));
        }
        let plain: Vec<Poly> = (0..wl).map(|v| Poly::var(nv_la, v)).collect();
        let la_slots = [hm_images(0, nv_la), (0..w).map(|v| Poly::var(nv_la, wl + v)).collect()].concat();

        let mut keys: BTreeMap<(u8, Mono), usize> = BTreeMap::new();
        let index = |kind: u8, mono: Mono, keys: &mut BTreeMap<(u8, Mono), usize>| {
            let n = keys.len();
            *keys.entry((kind, mono)).or_insert(n)
        };

        let mut basis_cols: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(basis.len());
        for mono in &basis {
            let beta = Poly::from_binomial(wl, &BTreeMap::from([(mono.clone(), Rat::one())]));
            let d_mu = beta.substitute(&first, nv_mu).add(&beta.substitute(&second, nv_mu)).sub(&beta.substitute(&prod, nv_mu));
            let d_la = beta.substitute(&conj, nv_la).sub(&beta.substitute(&plain, nv_la));
            let mut col = Vec::new();
            for (kind, poly) in [(0u8, d_mu), (1u8, d_la)] {
                for (bm, c) in poly.to_binomial() {
                    col.push((index(kind, bm, &mut keys), c));
                }
            }
            basis_cols.push(col);
        }

        let mut param_keys = Vec::new();
        for (i, j, k) in triples(r) {
            param_keys.extend([ParamKey::A(i, j, k), ParamKey::A(j, i, k), ParamKey::A(k, i, j)]);
        }
        for (i, k) in pairs(r) {
            param_keys.extend([ParamKey::A(i, i, k), ParamKey::A(k, i, k)]);
        }
        for i in 1..=r {
            for j in 0..=r {
                param_keys.push(ParamKey::B(i, j));
            }
        }
        let mut columns = BTreeMap::new();
        for key in param_keys {
            let mut a = ParameterA::new(r);
            let mut b = ParameterB::new(r);
            match key {
                ParamKey::A(x, y, z) => a.set((x, y, z), Rat::one())?,
                ParamKey::B(i, j) => b.set((i, j), Rat::one())?,
            }
            let (lambda, mu) = characteristic_cochains(&a, &b, m)?;
            let t_mu = mu.poly().substitute(&mu_slots, nv_mu);
            let t_la = lambda.poly().substitute(&la_slots, nv_la);
            let mut col = Vec::new();
            for (kind, poly) in [(0u8, t_mu), (1u8, t_la)] {
                for (bm, c) in poly.to_binomial() {
                    col.push((index(kind, bm, &mut keys), c));
                }
            }
            columns.insert(key, col);
        }

        let nrows = keys.len();
        let mut mat = vec![vec![Int::zero(); basis.len()]; nrows];
        for (c, col) in basis_cols.iter().enumerate() {
            for (row, v) in col {
                if !is_integer(v) {
                    return Err(AtlasError::Solver(format!("non-integral boundary coefficient {v}")));
                }
                mat[*row][c] = v.to_integer();
            }
        }
        let solver = ModZSolver::new(mat, basis.len());
        Ok(CharacteristicWitness { modulus: m.clone(), basis, nrows, solver, columns })
    }

    fn target(&self, a: &ParameterA, b: &ParameterB) -> Vec<Rat> {
        let mut t = vec![Rat::zero(); self.nrows];
        let entries = a
            .entries()
            .iter()
            .map(|(&(x, y, z), v)| (ParamKey::A(x, y, z), v))
            .chain(b.entries().iter().map(|(&(i, j), v)| (ParamKey::B(i, j), v)));
        for (key, v) in entries {
            for (row, c) in &self.columns[&key] {
                t[*row] += c * v;
            }
        }
        t
    }

    /// A witness `f` as a polynomial in the `L`-coordinates `(t_1..t_r,
    /// c_{j,k})`, or `None` when `(λ_{a,b}, μ_a)` is not a coboundary.
    pub fn solve(&self, a: &ParameterA, b: &ParameterB) -> Result<Option<Poly>> {
        check_ranks(a, b, &self.modulus)?;
        let Some(x) = self.solver.solve(&self.target(a, b)) else {
            return Ok(None);
        };
        let r = self.modulus.rank();
        let coeffs: BTreeMap<Mono, Rat> =
            self.basis.iter().cloned().zip(x).filter(|(_, c)| !c.is_zero()).collect();
        Ok(Some(Poly::from_binomial(l_width(r), &coeffs)))
    }

    pub fn is_coboundary(&self, a: &ParameterA, b: &ParameterB) -> Result<bool> {
        check_ranks(a, b, &self.modulus)?;
        Ok(self.solver.solve(&self.target(a, b)).is_some())
    }
}

fn r_(v: &Int) -> Rat {
    rat_int(v)
}

/// Binomial monomials in the `L`-coordinates: abelian degree at most 3,
/// central degree at most 1, total degree at most 3, no constant.
fn l_basis(r: usize) -> Vec<Mono> {
    let wl = l_width(r);
    let mut out = Vec::new();
    let mut cur = vec![0u8; wl];
    fn rec(v: usize, r: usize, wl: usize, cur: &mut Vec<u8>, out: &mut Vec<Mono>) {
        if v == wl {
            let t: u8 = cur[..r].iter().sum();
            let c: u8 = cur[r..].iter().sum();
            if t + c > 0 && c <= 1 && t + c <= 3 {
                out.push(cur.clone());
            }
            return;
        }
        let max = if v < r { 3 } else { 1 };
        for e in 0..=max {
            cur[v] = e;
            rec(v + 1, r, wl, cur, out);
        }
        cur[v] = 0;
    }
    rec(0, r, wl, &mut cur, &mut out);
    out
}

/// `L`-coordinates `(t, c)` of an element of `L`.
pub fn l_coords(g: &HmElement, m: &ModulusData) -> Result<Vec<Int>> {
    if !g.is_in_l(m) {
        return Err(AtlasError::Input("element is not in L".into()));
    }
    let r = m.rank();
    let mut v: Vec<Int> = (1..=r).map(|i| g.g.e(i) / m.pi(i)).collect();
    for (j, k) in pairs(r) {
        v.push(g.ejk(j, k));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::HeisenbergElement;
    use crate::num::{int, rat};
    use crate::sample::Sampler;
    use proptest::prelude::*;

    fn md(p: &[i64], q: &[i64]) -> ModulusData {
        ModulusData::from_i64(p, q).unwrap()
    }

    fn pa(r: usize, e: &[((usize, usize, usize), Rat)]) -> ParameterA {
        ParameterA::from_entries(r, e.iter().cloned()).unwrap()
    }

    fn pb(r: usize, e: &[((usize, usize), Rat)]) -> ParameterB {
        ParameterB::from_entries(r, e.iter().cloned()).unwrap()
    }

    fn cyc(v: i64, d: i64) -> Coord {
        Coord::Cyclic { modulus: int(d), value: int(v) }
    }

    fn circ(v: Rat) -> Coord {
        Coord::Circle { value: v }
    }

    #[test]
    fn membership_examples() {
        let m = md(&[2, 2, 2], &[0, 0, 0]);
        let (a0, b0) = (ParameterA::new(3), ParameterB::new(3));
        assert!(membership_z(&a0, &b0, &m).unwrap() && membership_b(&a0, &b0, &m).unwrap());
        let a = pa(3, &[((1, 2, 3), rat(1, 2))]);
        assert!(membership_z(&a, &b0, &m).unwrap());
        assert!(!membership_b(&a, &b0, &m).unwrap());

        let m = md(&[2, 4], &[0, 2]);
        let b = pb(2, &[((1, 2), rat(1, 4)), ((1, 0), rat(1, 2))]);
        assert!(z_b_violations(&b, &m).iter().all(|v| v.indices != vec![1, 2]));
    }

    #[test]
    fn violations_are_named() {
        let m = md(&[2, 4], &[0, 2]);
        let b = pb(2, &[((1, 2), rat(1, 8))]);
        let v = z_violations(&ParameterA::new(2), &b, &m).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "Z-b at (i,j)=(1,2): b(i,j) p_j - b(i,0) q_j = 1/2 is not an integer");
        assert!(matches!(build_characteristic(&ParameterA::new(2), &b, &m), Err(AtlasError::Precondition(_))));
    }

    #[test]
    fn class_a_examples() {
        let m = md(&[2, 2, 2], &[0, 0, 0]);
        let a = pa(3, &[((1, 2, 3), rat(1, 2))]);
        assert_eq!(class_a_ijk(&a, (1, 2, 3), &m).unwrap(), [cyc(1, 2), circ(rat(0, 1)), circ(rat(0, 1))]);
        let a = pa(3, &[((1, 2, 3), int(3).into()), ((2, 1, 3), int(-1).into())]);
        assert!(class_a_ijk(&a, (1, 2, 3), &m).unwrap().iter().all(Coord::is_zero));
        let a = pa(3, &[((2, 1, 3), rat(1, 2))]);
        assert_eq!(class_a_ijk(&a, (1, 2, 3), &m).unwrap(), [cyc(1, 2), circ(rat(1, 2)), circ(rat(0, 1))]);

        let a = pa(2, &[((1, 1, 2), rat(2, 1))]);
        assert!(class_a_ik(&a, (1, 2)).unwrap()[0].is_zero());
        let a = pa(2, &[((1, 1, 2), rat(1, 1))]);
        assert!(class_a_ik(&a, (1, 2)).unwrap().iter().all(Coord::is_zero));
        let a = pa(2, &[((2, 1, 2), rat(3, 2))]);
        assert_eq!(class_a_ik(&a, (1, 2)).unwrap(), [circ(rat(0, 1)), circ(rat(1, 2))]);
    }

    #[test]
    fn class_b_ii_examples() {
        let (p, q) = (int(4), int(2));
        assert!(class_b_ii(&rat(1, 1), &rat(1, 1), &p, &q).unwrap().iter().all(Coord::is_zero));
        assert_eq!(class_b_ii(&rat(1, 2), &rat(0, 1), &p, &q).unwrap(), [cyc(0, 2), circ(rat(1, 2))]);
        assert_eq!(class_b_ii(&rat(1, 4), &rat(1, 2), &p, &q).unwrap(), [cyc(0, 2), circ(rat(1, 4))]);
        assert!(class_b_ii(&rat(1, 8), &rat(0, 1), &p, &q).is_err());
    }

    #[test]
    fn pair_constants_example() {
        let c = PairConstants::new(&int(2), &int(0), &int(4), &int(2)).unwrap();
        assert_eq!((c.d.clone(), c.d_ij.clone(), c.e_ij.clone()), (int(2), int(2), int(2)));
        assert_eq!((c.r_ij.clone(), c.r_ji.clone(), c.s_ij.clone(), c.s_ji.clone()), (int(1), int(2), int(0), int(1)));
        assert_eq!((c.w_ij.clone(), c.w_ji.clone()), (int(0), int(1)));
        assert_eq!(&c.x_ij * &c.d_ij + &c.y_ij * &c.e_ij, c.d);
    }

    #[test]
    fn pair_constants_are_unimodular() {
        for pi in 1..=6 {
            for qi in 0..pi {
                for pj in 1..=6 {
                    for qj in 0..pj {
                        let c = PairConstants::new(&int(pi), &int(qi), &int(pj), &int(qj)).unwrap();
                        assert!((&c.s_ij * &c.w_ij + &c.s_ji * &c.w_ji).is_one());
                        assert!((&c.m_ij * &c.x_ij + &c.n_ij * &c.y_ij).is_one());
                        assert_eq!(&c.r_ij * &c.d_ij, int(pi));
                    }
                }
            }
        }
    }

    #[test]
    fn class_b_ij_integer_coboundaries() {
        let (pi, qi, pj, qj) = (int(2), int(0), int(4), int(2));
        let z = [rat(2, 1), rat(1, 1), rat(1, 1), rat(-3, 1)];
        // p_j x + p_i y = 8 + 2 ∈ 2Z.
        let c = class_b_ij([&z[0], &z[1], &z[2], &z[3]], (&pi, &qi), (&pj, &qj)).unwrap();
        assert!(c.iter().all(Coord::is_zero));
    }

    #[test]
    fn degenerate_twist_keeps_circle_data() {
        let (p, q) = (int(2), int(0));
        let half = rat(1, 2);
        let zero = rat(0, 1);
        let c = class_b_ij([&zero, &half, &zero, &zero], (&p, &q), (&p, &q)).unwrap();
        assert_eq!(c, [cyc(0, 2), circ(half.clone()), circ(zero.clone())]);
        let c = class_b_ij([&zero, &zero, &zero, &half], (&p, &q), (&p, &q)).unwrap();
        assert_eq!(c, [cyc(0, 2), circ(zero), circ(half)]);
    }

    #[test]
    fn fiber_consistency_examples() {
        let m = md(&[2, 3], &[1, 0]);
        assert!(fiber_consistency(&ParameterB::new(2), &m).unwrap());
        let b = pb(2, &[((1, 0), rat(1, 3)), ((1, 1), rat(1, 6)), ((2, 0), rat(1, 2)), ((2, 1), rat(1, 4))]);
        assert!(fiber_consistency(&b, &m).unwrap());
        let mut pat = BPatterns::from_b(&b);
        pat.ij.insert((1, 2), (rat(0, 1), rat(2, 3), rat(0, 1), rat(1, 2)));
        assert!(!pat.is_consistent());
        pat.ij.insert((1, 2), (rat(0, 1), rat(4, 3), rat(0, 1), rat(-1, 2)));
        assert!(pat.is_consistent());
    }

    #[test]
    fn single_automorphism_examples() {
        let s = single_automorphism_invariants(&int(4), &int(2)).unwrap();
        assert_eq!(s.d1, int(2));
        assert_eq!(&s.p1 * &s.u1 - &s.q1 * &s.v1, s.d1);
        assert_eq!(s.b1_in_w_basis().unwrap(), [int(0), int(2)]);
        assert_eq!(s.lambda_presentation(), "T + Z_2");
        let s = single_automorphism_invariants(&int(5), &int(0)).unwrap();
        assert_eq!((s.d1.clone(), s.u1.clone(), s.v1.clone()), (int(5), int(1), int(0)));
        assert_eq!(s.b1_in_w_basis().unwrap(), [int(0), int(5)]);
        assert!(single_automorphism_invariants(&int(3), &int(3)).is_err());
    }

    #[test]
    fn outer_period_examples() {
        let (two, zero) = (int(2), int(0));
        assert_eq!(outer_period(&rat(1, 1), &rat(0, 1), &two, &zero).unwrap(), int(2));
        assert_eq!(outer_period(&rat(1, 3), &rat(0, 1), &two, &zero).unwrap(), int(6));
        assert_eq!(outer_period(&rat(2, 3), &rat(0, 1), &two, &zero).unwrap(), int(6));
    }

    #[test]
    fn trivial_pair_and_b_only_shape() {
        let m = md(&[2, 3], &[1, 2]);
        let c = build_characteristic(&ParameterA::new(2), &ParameterB::new(2), &m).unwrap();
        assert!(c.lambda_cochain().is_zero() && c.mu_cochain().is_zero());
        let b = pb(2, &[((1, 0), rat(1, 2)), ((1, 1), rat(1, 4))]);
        let c = build_characteristic(&ParameterA::new(2), &b, &m).unwrap();
        assert!(c.mu_cochain().is_zero());
        let lay = Layout::new(Flavor::Hm, 2);
        let w = lay.width();
        for mono in c.lambda_cochain().poly().terms().keys() {
            assert_eq!(mono[lay.ejk(1, 2)], 0);
            assert_eq!(mono[w + lay.ejk(1, 2)], 0);
        }
    }

    fn mul(x: &HmElement, y: &HmElement) -> HmElement {
        x.mul(y).unwrap()
    }

    fn moduli() -> Vec<ModulusData> {
        vec![md(&[2], &[1]), md(&[4, 2], &[3, 1]), md(&[2, 3, 4], &[1, 2, 3]), md(&[2, 3, 4], &[0, 1, 2])]
    }

    #[test]
    fn normalization_on_m() {
        let mut s = Sampler::new(3);
        for m in moduli() {
            let r = m.rank();
            for _ in 0..20 {
                let a = s.parameter_a_in_z(&m, 6);
                let b = s.parameter_b_in_z(&m, 6);
                let c = build_characteristic(&a, &b, &m).unwrap();
                let (x, n) = (s.m_elem(&m, 4), s.m_elem(&m, 4));
                let h = HmElement::lift(&HeisenbergElement::section(s.group(r, 4)), &m).unwrap();
                assert_eq!(c.lambda(&x, &mul(&n, &h)).unwrap(), c.lambda(&x, &h).unwrap());
                // μ is trivial on M × M.
                assert!(c.mu(&x, &n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn witness_oracle_basic() {
        let m = md(&[2], &[0]);
        let w = CharacteristicWitness::new(&m).unwrap();
        let a = ParameterA::new(1);
        assert!(w.is_coboundary(&a, &pb(1, &[((1, 0), rat(1, 1)), ((1, 1), rat(3, 1))])).unwrap());
        assert!(!w.is_coboundary(&a, &pb(1, &[((1, 0), rat(1, 2))])).unwrap());
        // p x = 1 with (p, q) = (2, 0): class ([1]_2, 0), not a coboundary.
        assert!(!w.is_coboundary(&a, &pb(1, &[((1, 1), rat(1, 2))])).unwrap());
    }

    fn check_witness(c: &CharacteristicCocycle, f: &Poly, s: &mut Sampler) {
        let m = &c.modulus;
        let fv = |g: &HmElement| f.eval(&l_coords(g, m).unwrap());
        for _ in 0..10 {
            let (g1, g2) = (s.l(m, 4), s.l(m, 4));
            let h = s.hm(m, 4);
            let mu = c.mu_cochain().eval_hm(&[g1.clone(), g2.clone()], m).unwrap();
            assert!(is_integer(&(mu - (fv(&g1) + fv(&g2) - fv(&mul(&g1, &g2))))));
            let conj = mul(&mul(&h.inverse(), &g1), &h);
            let la = c.lambda_cochain().eval_hm(&[g1.clone(), h.clone()], m).unwrap();
            assert!(is_integer(&(la - (fv(&conj) - fv(&g1)))));
        }
    }

    #[test]
    fn witness_oracle_matches_b_membership_on_samples() {
        let mut s = Sampler::new(11);
        for m in moduli() {
            let w = CharacteristicWitness::new(&m).unwrap();
            for round in 0..30 {
                let mut a = s.parameter_a_in_z(&m, 2);
                let mut b = s.parameter_b_in_z(&m, 2);
                if round % 3 == 0 {
                    // Push toward B: integral parameters.
                    for (k, v) in a.entries().clone() {
                        a.set(k, v.round()).unwrap();
                    }
                    for (k, v) in b.entries().clone() {
                        b.set(k, v.round()).unwrap();
                    }
                    if !membership_z(&a, &b, &m).unwrap() {
                        continue;
                    }
                }
                let in_b = membership_b(&a, &b, &m).unwrap();
                let f = w.solve(&a, &b).unwrap();
                assert_eq!(f.is_some(), in_b, "a = {a}, b = {b}, m = {m:?}");
                assert_eq!(classify(&a, &b, &m).unwrap().is_zero(), in_b);
                if let Some(f) = f {
                    check_witness(&build_characteristic(&a, &b, &m).unwrap(), &f, &mut s);
                }
            }
        }
    }

    #[test]
    fn pair_invariants_delegate() {
        let m = md(&[2, 4], &[0, 2]);
        assert!(pair_invariants(&m, &ParameterB::new(2)).unwrap().classes.is_zero());
        let b = pb(2, &[((1, 2), rat(1, 4)), ((1, 0), rat(1, 2))]);
        let inv = pair_invariants(&m, &b).unwrap();
        let z = [&b.get(1, 2), &b.get(1, 0), &b.get(2, 1), &b.get(2, 0)];
        assert_eq!(inv.classes.b_ij[&(1, 2)], class_b_ij(z, (&int(2), &int(0)), (&int(4), &int(2))).unwrap());
        assert_eq!(inv.classes.b_ii[&1], class_b_ii(&b.get(1, 1), &b.get(1, 0), &int(2), &int(0)).unwrap());
        assert_eq!(inv.obstruction.nu, vec![rat(1, 2), rat(0, 1)]);
        assert!(pair_invariants(&md(&[2], &[0]), &ParameterB::new(1)).is_err());
    }

    #[test]
    fn odd_diagonal_pattern_is_a_coboundary() {
        // a(1,1,2) = 1 on p = (1,1), where L is the Heisenberg group itself.
        let m = md(&[1, 1], &[0, 0]);
        let a = pa(2, &[((1, 1, 2), rat(1, 1))]);
        let c = build_characteristic(&a, &ParameterB::new(2), &m).unwrap();
        // f = c/2 - t_1 c - t_1 t_2 / 2 + t_1^2 t_2 / 2 in the coordinates (t_1, t_2, c).
        let mut f = Poly::zero(3);
        f.add_term(vec![0, 0, 1], rat(1, 2));
        f.add_term(vec![1, 0, 1], rat(-1, 1));
        f.add_term(vec![1, 1, 0], rat(-1, 2));
        f.add_term(vec![2, 1, 0], rat(1, 2));
        let mut s = Sampler::new(5);
        for _ in 0..10 {
            check_witness(&c, &f, &mut s);
        }
        assert!(CharacteristicWitness::new(&m).unwrap().is_coboundary(&a, &ParameterB::new(2)).unwrap());
        assert!(membership_b(&a, &ParameterB::new(2), &m).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn lemma_identities(which in 0usize..4, seed in 0u64..10_000) {
            let m = moduli()[which].clone();
            let mut s = Sampler::new(seed);
            let a = s.parameter_a_in_z(&m, 6);
            let b = s.parameter_b_in_z(&m, 6);
            let c = build_characteristic(&a, &b, &m).unwrap();
            for _ in 0..5 {
                let (g1, g2, g3) = (s.l(&m, 4), s.l(&m, 4), s.l(&m, 4));
                let (h1, h2) = (s.hm(&m, 4), s.hm(&m, 4));
                let d = c.identity_defects([&g1, &g2, &g3], [&h1, &h2]).unwrap();
                prop_assert!(d.all_zero(), "{d:?}");
            }
        }

        #[test]
        fn b_lattice_forms_agree(p1 in 1i64..5, p2 in 1i64..5, q in (0i64..4, 0i64..4), seed in 0u64..1000) {
            let m = md(&[p1, p2], &[q.0 % p1, q.1 % p2]);
            let b = Sampler::new(seed).parameter_b_in_z(&m, 4);
            prop_assert_eq!(b_lattice_pairwise(&b, &m).unwrap(), b_lattice_quotient(&b, &m).unwrap());
        }
    }

    #[test]
    fn b_lattice_forms_on_a_known_point() {
        let m = md(&[2, 4], &[0, 0]);
        let b = pb(2, &[((1, 2), rat(1, 4)), ((2, 1), rat(1, 2))]);
        // 4 (1/4) + 2 (1/2) = 2 ∈ 2Z, and 1/8 + 1/8 = 1/4 ∈ (1/4)Z.
        assert!(b_lattice_pairwise(&b, &m).unwrap());
        assert!(b_lattice_quotient(&b, &m).unwrap());
    }
}

//! Named cochain families on the Heisenberg flavors: the cochains `B_{j,k}`
//! and `B_{η,ζ}`, the cochains `f_{i,j,k}` and `det_{ijk}`, and the families
//! `X_a, Y_a, Z_a, U_a, V_a` attached to a coefficient parameter `a`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cochain::{Cochain, Flavor, Layout};
use crate::error::{AtlasError, Result};
use crate::num::{rat, Rat};
use crate::poly::Poly;

/// Sparse coefficients `a(x, y, z)` on the index patterns with `y < z`:
/// `(i,j,k)`, `(j,i,k)`, `(k,i,j)` for `i < j < k` and `(i,i,k)`, `(k,i,k)`
/// for `i < k`. All indices are in `1..=rank`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParameterA {
    pub rank: usize,
    entries: BTreeMap<(usize, usize, usize), Rat>,
}

impl ParameterA {
    pub fn new(rank: usize) -> Self {
        ParameterA { rank, entries: BTreeMap::new() }
    }

    pub fn from_entries(rank: usize, entries: impl IntoIterator<Item = ((usize, usize, usize), Rat)>) -> Result<Self> {
        let mut a = ParameterA::new(rank);
        for (idx, v) in entries {
            a.set(idx, v)?;
        }
        Ok(a)
    }

    /// Sets `a(x, y, z)`; a zero value removes the entry.
    pub fn set(&mut self, (x, y, z): (usize, usize, usize), v: Rat) -> Result<()> {
        if x == 0 || y == 0 || z == 0 {
            return Err(AtlasError::Input(format!("a({x},{y},{z}): index 0 is not a parameter index")));
        }
        if x > self.rank || y > self.rank || z > self.rank {
            return Err(AtlasError::Input(format!("a({x},{y},{z}): index exceeds rank {}", self.rank)));
        }
        if y >= z {
            return Err(AtlasError::Input(format!("a({x},{y},{z}): the pattern needs y < z")));
        }
        if v.is_zero() {
            self.entries.remove(&(x, y, z));
        } else {
            self.entries.insert((x, y, z), v);
        }
        Ok(())
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> Rat {
        self.entries.get(&(x, y, z)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), Rat> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(AS a)(i,j,k) = a(i,j,k) - a(j,i,k) + a(k,i,j)` for `i < j < k`.
    pub fn as_a(&self, i: usize, j: usize, k: usize) -> Rat {
        self.get(i, j, k) - self.get(j, i, k) + self.get(k, i, j)
    }

    /// The parameter `â` keeping only `AS a` on increasing triples.
    pub fn antisymmetrized(&self) -> ParameterA {
        let mut out = ParameterA::new(self.rank);
        for (i, j, k) in triples(self.rank) {
            out.set((i, j, k), self.as_a(i, j, k)).expect("valid pattern");
        }
        out
    }

    /// Is `a` supported on increasing triples only?
    pub fn is_increasing_only(&self) -> bool {
        self.entries.keys().all(|&(x, y, _)| x < y)
    }
}

impl fmt::Display for ParameterA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|((x, y, z), v)| format!("a({x},{y},{z})={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Sparse coefficients `b(i, j)` with `i` in `1..=rank` and `j` in `0..=rank`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParameterB {
    pub rank: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl ParameterB {
    pub fn new(rank: usize) -> Self {
        ParameterB { rank, entries: BTreeMap::new() }
    }

    pub fn from_entries(rank: usize, entries: impl IntoIterator<Item = ((usize, usize), Rat)>) -> Result<Self> {
        let mut b = ParameterB::new(rank);
        for (idx, v) in entries {
            b.set(idx, v)?;
        }
        Ok(b)
    }

    pub fn set(&mut self, (i, j): (usize, usize), v: Rat) -> Result<()> {
        if i == 0 {
            return Err(AtlasError::Input(format!("b({i},{j}): b(0, j) is fixed to 0")));
        }
        if i > self.rank || j > self.rank {
            return Err(AtlasError::Input(format!("b({i},{j}): index exceeds rank {}", self.rank)));
        }
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Rat> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ParameterB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|((i, j), v)| format!("b({i},{j})={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Increasing triples `i < j < k` in `1..=r`.
pub fn triples(r: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=r).flat_map(move |i| (i + 1..=r).flat_map(move |j| (j + 1..=r).map(move |k| (i, j, k))))
}

/// Increasing pairs `i < k` in `1..=r`.
pub fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=r).flat_map(move |i| (i + 1..=r).map(move |k| (i, k)))
}

/// Single-slot functionals of one layout, combined into arity-2 cochains.
struct Slot {
    layout: Layout,
}

impl Slot {
    fn new(flavor: Flavor, rank: usize) -> Self {
        Slot { layout: Layout::new(flavor, rank) }
    }

    fn w(&self) -> usize {
        self.layout.width()
    }

    fn e(&self, i: usize) -> Poly {
        Poly::var(self.w(), self.layout.e(i))
    }

    fn e0(&self) -> Poly {
        Poly::var(self.w(), self.layout.e0())
    }

    fn ejk(&self, j: usize, k: usize) -> Poly {
        Poly::var(self.w(), self.layout.ejk(j, k))
    }

    fn ee(&self, i: usize, j: usize) -> Poly {
        self.e(i).mul(&self.e(j))
    }

    /// `B_{j,k}` as a slot functional.
    fn b(&self, j: usize, k: usize) -> Poly {
        use std::cmp::Ordering::*;
        match j.cmp(&k) {
            Less => self.ejk(j, k).neg(),
            Equal => self.ee(j, j).scale(&rat(-1, 2)),
            Greater => self.ejk(k, j).sub(&self.ee(j, k)),
        }
    }

    fn cochain(&self, arity: usize, poly: Poly) -> Cochain {
        Cochain::from_poly(self.layout.flavor, self.layout.rank, arity, poly).expect("slot functionals fit the layout")
    }

    /// `x ⊗ y`.
    fn t(&self, x: &Poly, y: &Poly) -> Cochain {
        self.cochain(1, x.clone()).tensor(&self.cochain(1, y.clone())).expect("same layout")
    }

    fn zero2(&self) -> Cochain {
        Cochain::zero(self.layout.flavor, self.layout.rank, 2)
    }
}

fn acc(sum: &mut Cochain, k: &Rat, c: &Cochain) {
    if !k.is_zero() {
        *sum = sum.add(&c.scale(k)).expect("same shape");
    }
}

fn require_heisenberg(flavor: Flavor) -> Result<()> {
    if !flavor.has_central() {
        return Err(AtlasError::Input(format!("flavor {} has no central coordinates", flavor.name())));
    }
    Ok(())
}

fn check_index(rank: usize, idx: &[usize]) -> Result<()> {
    if idx.iter().any(|&i| i == 0 || i > rank) {
        return Err(AtlasError::Input(format!("indices {idx:?} outside 1..={rank}")));
    }
    Ok(())
}

/// `B_{j,k}` on a Heisenberg flavor: `-e_{j,k}` for `j < k`, `-e_j^2 / 2` for
/// `j = k` and `e_{k,j} - e_j e_k` for `j > k`. Its coboundary is `e_j ⊗ e_k`.
pub fn b_jk(flavor: Flavor, rank: usize, j: usize, k: usize) -> Result<Cochain> {
    require_heisenberg(flavor)?;
    check_index(rank, &[j, k])?;
    let s = Slot::new(flavor, rank);
    Ok(s.cochain(1, s.b(j, k)))
}

/// `B_{η,ζ} = Σ_{j<k} η_j ζ_k e_{j,k}` on `H`, with `η_j = η(a_j)`, `ζ_k = ζ(a_k)`.
pub fn b_eta_zeta(eta: &[Rat], zeta: &[Rat]) -> Result<Cochain> {
    if eta.len() != zeta.len() {
        return Err(AtlasError::Mismatch(format!("homomorphisms of ranks {} and {}", eta.len(), zeta.len())));
    }
    let r = eta.len();
    let s = Slot::new(Flavor::H, r);
    let mut p = Poly::zero(s.w());
    for (j, k) in pairs(r) {
        p.add_scaled(&s.ejk(j, k), &(&eta[j - 1] * &zeta[k - 1]));
    }
    Ok(s.cochain(1, p))
}

/// `f_{i,j,k} = 2(e_i e_j)⊗e_k - 3 e_i⊗(e_j e_k) + e_j⊗(e_i e_k) - 2(e_i e_k)⊗e_j - e_k⊗(e_i e_j)`
/// on `G`, for distinct indices.
pub fn f_general(rank: usize, i: usize, j: usize, k: usize) -> Result<Cochain> {
    check_index(rank, &[i, j, k])?;
    if i == j || j == k || i == k {
        return Err(AtlasError::Input(format!("f({i},{j},{k}) needs distinct indices")));
    }
    let s = Slot::new(Flavor::G, rank);
    let terms = [
        (2, s.t(&s.ee(i, j), &s.e(k))),
        (-3, s.t(&s.e(i), &s.ee(j, k))),
        (1, s.t(&s.e(j), &s.ee(i, k))),
        (-2, s.t(&s.ee(i, k), &s.e(j))),
        (-1, s.t(&s.e(k), &s.ee(i, j))),
    ];
    let mut out = s.zero2();
    for (c, t) in &terms {
        acc(&mut out, &rat(*c, 1), t);
    }
    Ok(out)
}

/// `f_{i,j,k}` for `i < j < k`.
pub fn f_ijk(rank: usize, i: usize, j: usize, k: usize) -> Result<Cochain> {
    if !(i < j && j < k) {
        return Err(AtlasError::Input(format!("f_ijk needs i < j < k, got ({i},{j},{k})")));
    }
    f_general(rank, i, j, k)
}

/// `det_{ijk} = AS(e_i ⊗ e_j ⊗ e_k)` on `G`, for `i < j < k`.
pub fn det_ijk(rank: usize, i: usize, j: usize, k: usize) -> Result<Cochain> {
    if !(i < j && j < k) {
        return Err(AtlasError::Input(format!("det_ijk needs i < j < k, got ({i},{j},{k})")));
    }
    check_index(rank, &[i, j, k])?;
    let l = Layout::new(Flavor::G, rank);
    Cochain::term(Flavor::G, rank, Rat::one(), &[&[(l.e(i), 1)], &[(l.e(j), 1)], &[(l.e(k), 1)]])
        .map(|c| c.asymmetrize())
}

/// The five families of a parameter `a`. `x`, `y`, `z`, `v` live on the
/// requested Heisenberg flavor, `u` on `G`.
#[derive(Clone, Debug)]
pub struct Families {
    pub x: Cochain,
    pub y: Cochain,
    pub z: Cochain,
    pub u: Cochain,
    pub v: Cochain,
}

/// `X_a, Y_a, Z_a, U_a` and `V_a = Z_a + π_G^* U_a`.
pub fn family_xyzuv(a: &ParameterA, flavor: Flavor) -> Result<Families> {
    require_heisenberg(flavor)?;
    let r = a.rank;
    let s = Slot::new(flavor, r);
    let (mut x, mut y, mut z) = (s.zero2(), s.zero2(), s.zero2());
    for (i, j, k) in triples(r) {
        let (aijk, ajik, akij) = (a.get(i, j, k), a.get(j, i, k), a.get(k, i, j));
        if aijk.is_zero() && ajik.is_zero() && akij.is_zero() {
            continue;
        }
        acc(&mut x, &aijk, &s.t(&s.ejk(j, k), &s.e(i)));
        acc(&mut x, &ajik, &s.t(&s.ejk(i, k), &s.e(j)));
        acc(&mut x, &akij, &s.t(&s.ejk(i, j), &s.e(k)));

        acc(&mut y, &aijk, &y_block(&s, (i, j), k, (i, k), j));
        acc(&mut y, &ajik, &y_block(&s, (j, i), k, (j, k), i));
        acc(&mut y, &akij, &y_block(&s, (k, i), j, (k, j), i));

        acc(&mut z, &aijk, &s.t(&s.e(j), &s.ejk(i, k)).sub(&s.t(&s.e(k), &s.ejk(i, j)))?);
        acc(&mut z, &ajik, &s.t(&s.e(k), &s.ejk(i, j)).add(&s.t(&s.e(i), &s.ejk(j, k)))?);
        acc(&mut z, &akij, &s.t(&s.e(j), &s.ejk(i, k)).sub(&s.t(&s.e(i), &s.ejk(j, k)))?);
    }
    for (i, k) in pairs(r) {
        let (aiik, akik) = (a.get(i, i, k), a.get(k, i, k));
        if aiik.is_zero() && akik.is_zero() {
            continue;
        }
        acc(&mut x, &aiik, &s.t(&s.ejk(i, k), &s.e(i)));
        acc(&mut x, &akik, &s.t(&s.ejk(i, k), &s.e(k)));
        acc(&mut y, &aiik, &y_block(&s, (i, i), k, (i, k), i));
        acc(&mut y, &akik, &y_block(&s, (k, i), k, (k, k), i));
        acc(&mut z, &aiik, &s.t(&s.e(i), &s.ejk(i, k)));
        acc(&mut z, &akik, &s.t(&s.e(k), &s.ejk(i, k)));
    }
    let u = family_u(a)?;
    let v = z.add(&u.pull_back(flavor)?)?;
    Ok(Families { x, y, z, u, v })
}

/// `B_{p} ⊗ e_c + e_c ⊗ B_{p'} - B_{q} ⊗ e_d - e_d ⊗ B_{q'}` where `p'` and
/// `q'` are the reversed pairs.
fn y_block(s: &Slot, p: (usize, usize), c: usize, q: (usize, usize), d: usize) -> Cochain {
    let mut out = s.t(&s.b(p.0, p.1), &s.e(c));
    out = out.add(&s.t(&s.e(c), &s.b(p.1, p.0))).expect("same shape");
    out = out.sub(&s.t(&s.b(q.0, q.1), &s.e(d))).expect("same shape");
    out.sub(&s.t(&s.e(d), &s.b(q.1, q.0))).expect("same shape")
}

/// `U_a` on `G`.
pub fn family_u(a: &ParameterA) -> Result<Cochain> {
    let r = a.rank;
    let s = Slot::new(Flavor::G, r);
    let mut u = s.zero2();
    let sixth = rat(1, 6);
    for (i, j, k) in triples(r) {
        let (aijk, ajik, akij) = (a.get(i, j, k), a.get(j, i, k), a.get(k, i, j));
        if aijk.is_zero() && ajik.is_zero() && akij.is_zero() {
            continue;
        }
        let fijk = f_general(r, i, j, k)?;
        acc(&mut u, &(&sixth * (aijk - a.as_a(i, j, k))), &fijk);
        acc(&mut u, &(&sixth * ajik), &f_general(r, j, i, k)?);
        acc(&mut u, &(&sixth * akij), &f_general(r, k, i, j)?);
    }
    for (i, k) in pairs(r) {
        let (aiik, akik) = (a.get(i, i, k), a.get(k, i, k));
        acc(&mut u, &-aiik, &s.t(&s.b(i, i), &s.e(k)));
        let t = s.t(&s.b(k, k), &s.e(i)).sub(&s.t(&s.e(k), &s.ee(i, k)))?;
        acc(&mut u, &akik, &t);
    }
    Ok(u)
}

/// `X_{AS a} = Σ_{i<j<k} (AS a)(i,j,k) (e_{j,k}⊗e_i - e_{i,k}⊗e_j + e_{i,j}⊗e_k)`.
pub fn x_as(a: &ParameterA, flavor: Flavor) -> Result<Cochain> {
    require_heisenberg(flavor)?;
    let s = Slot::new(flavor, a.rank);
    let mut out = s.zero2();
    for (i, j, k) in triples(a.rank) {
        let t = s
            .t(&s.ejk(j, k), &s.e(i))
            .sub(&s.t(&s.ejk(i, k), &s.e(j)))?
            .add(&s.t(&s.ejk(i, j), &s.e(k)))?;
        acc(&mut out, &a.as_a(i, j, k), &t);
    }
    Ok(out)
}

/// `Σ_{i>=1, j>=0} b(i,j) (1/p_i) e_i ⊗ ẽ_j` on `H_m`; on `L × H_m` this is
/// `Σ b(i,j) e_{i,N}(g) ẽ_j(h)`.
pub fn b_part(b: &ParameterB, p: &[crate::num::Int]) -> Result<Cochain> {
    if p.len() != b.rank {
        return Err(AtlasError::Mismatch(format!("b of rank {} with {} moduli", b.rank, p.len())));
    }
    let s = Slot::new(Flavor::Hm, b.rank);
    let mut out = s.zero2();
    for (&(i, j), v) in b.entries() {
        let right = if j == 0 { s.e0() } else { s.e(j) };
        let k = v / Rat::from_integer(p[i - 1].clone());
        acc(&mut out, &k, &s.t(&s.e(i), &right));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupElement, HeisenbergElement};
    use crate::num::{int, Int};
    use proptest::prelude::*;

    fn unit_slots(l: &Layout, idx: &[usize]) -> Vec<Vec<Int>> {
        idx.iter()
            .map(|&i| {
                let mut v = vec![Int::zero(); l.width()];
                v[i] = Int::one();
                v
            })
            .collect()
    }

    #[test]
    fn b_jk_values_and_boundary() {
        // B_{1,2} at h with e_{1,2}(m_0(h)) = 4 is -4.
        let b = b_jk(Flavor::H, 2, 1, 2).unwrap();
        let h = HeisenbergElement::central_only(2, [((1, 2), int(4))].into_iter().collect());
        assert_eq!(b.eval_h(&[h]).unwrap(), rat(-4, 1));
        // ∂B_{j,k} = e_j ⊗ e_k for all orders of j, k.
        for j in 1..=3 {
            for k in 1..=3 {
                let l = Layout::new(Flavor::H, 3);
                let ejek = Cochain::term(Flavor::H, 3, Rat::one(), &[&[(l.e(j), 1)], &[(l.e(k), 1)]]).unwrap();
                let bd = b_jk(Flavor::H, 3, j, k).unwrap().boundary();
                assert_eq!(bd, ejek, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn b_eta_zeta_single_term_and_bilinearity() {
        let z = vec![Rat::zero(); 3];
        assert!(b_eta_zeta(&z, &z).unwrap().is_zero());
        let e2 = vec![rat(0, 1), rat(1, 1), rat(0, 1)];
        let e3 = vec![rat(0, 1), rat(0, 1), rat(1, 1)];
        let g = HeisenbergElement::central_only(3, [((2, 3), int(1))].into_iter().collect());
        assert_eq!(b_eta_zeta(&e2, &e3).unwrap().eval_h(&[g]).unwrap(), rat(1, 1));
        let sum: Vec<Rat> = e2.iter().zip(&e3).map(|(a, b)| a + b).collect();
        let lhs = b_eta_zeta(&sum, &e3).unwrap();
        let rhs = b_eta_zeta(&e2, &e3).unwrap().add(&b_eta_zeta(&e3, &e3).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn det_relation_and_as_of_f() {
        let l = Layout::new(Flavor::G, 3);
        let det = det_ijk(3, 1, 2, 3).unwrap();
        assert_eq!(det.eval_coords(&unit_slots(&l, &[1, 2, 3])).unwrap(), rat(1, 1));
        // det_{123} = ∂f_{123} + 6 e_1⊗e_2⊗e_3.
        let e123 = Cochain::term(Flavor::G, 3, rat(6, 1), &[&[(1, 1)], &[(2, 1)], &[(3, 1)]]).unwrap();
        let rhs = f_ijk(3, 1, 2, 3).unwrap().boundary().add(&e123).unwrap();
        assert_eq!(det, rhs);
        // AS f_{ijk} = 3((e_j e_k)∧e_i - (e_i e_k)∧e_j + (e_i e_j)∧e_k) with x∧y = x⊗y - y⊗x.
        let s = Slot::new(Flavor::G, 3);
        let wedge = |x: &Poly, y: &Poly| s.t(x, y).sub(&s.t(y, x)).unwrap();
        for (i, j, k) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
            let expect = wedge(&s.ee(j, k), &s.e(i))
                .sub(&wedge(&s.ee(i, k), &s.e(j)))
                .unwrap()
                .add(&wedge(&s.ee(i, j), &s.e(k)))
                .unwrap()
                .scale(&rat(3, 1));
            assert_eq!(f_general(3, i, j, k).unwrap().asymmetrize(), expect);
        }
        assert!(f_ijk(3, 2, 1, 3).is_err());
    }

    #[test]
    fn zero_parameter_gives_zero_families() {
        let f = family_xyzuv(&ParameterA::new(3), Flavor::Hm).unwrap();
        assert!(f.x.is_zero() && f.y.is_zero() && f.z.is_zero() && f.u.is_zero() && f.v.is_zero());
    }

    #[test]
    fn single_entry_x() {
        let a = ParameterA::from_entries(3, [((1, 2, 3), rat(1, 1))]).unwrap();
        let f = family_xyzuv(&a, Flavor::H).unwrap();
        let l = Layout::new(Flavor::H, 3);
        let expect = Cochain::term(Flavor::H, 3, Rat::one(), &[&[(l.ejk(2, 3), 1)], &[(l.e(1), 1)]]).unwrap();
        assert_eq!(f.x, expect);
    }

    #[test]
    fn parameter_validation() {
        let mut a = ParameterA::new(3);
        assert!(a.set((1, 2, 2), rat(1, 1)).is_err());
        assert!(a.set((0, 1, 2), rat(1, 1)).is_err());
        assert!(a.set((4, 1, 2), rat(1, 1)).is_err());
        assert!(a.set((3, 1, 2), rat(1, 1)).is_ok());
        let mut b = ParameterB::new(2);
        assert!(b.set((0, 1), rat(1, 1)).is_err());
        assert!(b.set((1, 0), rat(1, 1)).is_ok());
    }

    /// `Z(g; h) = Y(m_0(h); g)`, checked by substituting a central first argument.
    #[test]
    fn z_is_y_on_central_first_argument() {
        let a = ParameterA::from_entries(
            3,
            [((1, 2, 3), rat(1, 3)), ((2, 1, 3), rat(2, 5)), ((3, 1, 2), rat(-1, 7)), ((1, 1, 2), rat(1, 2)), ((3, 1, 3), rat(3, 4))],
        )
        .unwrap();
        let f = family_xyzuv(&a, Flavor::H).unwrap();
        let l = Layout::new(Flavor::H, 3);
        let w = l.width();
        // Y(m; g) with m central: rename slot 0 of Y onto slot 1 of Z and vice versa.
        let mut images = Vec::new();
        for idx in 0..w {
            images.push(if l.is_central(idx) { Poly::var(2 * w, w + idx) } else { Poly::zero(2 * w) });
        }
        for idx in 0..w {
            images.push(Poly::var(2 * w, idx));
        }
        let y_swapped = f.y.poly().substitute(&images, 2 * w);
        assert_eq!(&y_swapped, f.z.poly());
    }

    fn arb_a(r: usize) -> impl Strategy<Value = ParameterA> {
        let mut keys = Vec::new();
        for (i, j, k) in triples(r) {
            keys.extend([(i, j, k), (j, i, k), (k, i, j)]);
        }
        for (i, k) in pairs(r) {
            keys.extend([(i, i, k), (k, i, k)]);
        }
        let n = keys.len();
        prop::collection::vec((-6i64..7, 1i64..7), n).prop_map(move |vals| {
            ParameterA::from_entries(r, keys.iter().cloned().zip(vals.iter().map(|&(a, b)| rat(a, b)))).unwrap()
        })
    }

    fn arb_h(r: usize) -> impl Strategy<Value = HeisenbergElement> {
        (prop::collection::vec(-4i64..5, r), prop::collection::vec(-4i64..5, r * (r - 1) / 2)).prop_map(move |(g, c)| {
            let central = pairs(r).zip(c).filter(|(_, v)| *v != 0).map(|(jk, v)| (jk, int(v))).collect();
            HeisenbergElement::new(central, GroupElement::from_i64(&g)).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// `(X_a - Y_a)(m; g) = X_{AS a}(m; g)` and `X_a(i,k) = Y_a(i,k)` on `M × H`.
        #[test]
        fn x_minus_y_on_central_first_slot(a in arb_a(3), g in arb_h(3), m in arb_h(3)) {
            let m = HeisenbergElement::central_only(3, m.central.clone());
            let f = family_xyzuv(&a, Flavor::H).unwrap();
            let lhs = f.x.eval_h(&[m.clone(), g.clone()]).unwrap() - f.y.eval_h(&[m.clone(), g.clone()]).unwrap();
            prop_assert_eq!(lhs, x_as(&a, Flavor::H).unwrap().eval_h(&[m.clone(), g.clone()]).unwrap());
            let mut ik = ParameterA::new(3);
            for (&key, v) in a.entries() {
                if key.0 == key.1 || key.0 == key.2 {
                    ik.set(key, v.clone()).unwrap();
                }
            }
            let fik = family_xyzuv(&ik, Flavor::H).unwrap();
            prop_assert_eq!(fik.x.eval_h(&[m.clone(), g.clone()]).unwrap(), fik.y.eval_h(&[m, g]).unwrap());
        }

        /// `∂B_{j,k}(g, h) = e_j(g) e_k(h)` on sampled pairs, using the group law.
        #[test]
        fn b_boundary_on_samples(g in arb_h(3), h in arb_h(3), j in 1usize..4, k in 1usize..4) {
            let b = b_jk(Flavor::H, 3, j, k).unwrap();
            let gh = crate::groups::heisenberg_mul(&g, &h).unwrap();
            let d = b.eval_h(&[h.clone()]).unwrap() - b.eval_h(&[gh]).unwrap() + b.eval_h(&[g.clone()]).unwrap();
            prop_assert_eq!(d, Rat::from_integer(g.g.e(j) * h.g.e(k)));
        }
    }
}

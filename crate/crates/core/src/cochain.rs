//! Polynomial cochains in exponent form: the torus value of `c` at a tuple is
//! `exp(2πi c(g_1, ..., g_n))`, so torus identities become congruences mod 1.
//!
//! Each slot carries the coordinate functionals of its flavor:
//! `ẽ_0` (modulus flavors), `e_1..e_r`, and `e_{j,k}` (Heisenberg flavors).

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{AtlasError, Result};
use crate::groups::{GmElement, GroupElement, HeisenbergElement, HmElement, ModulusData};
use crate::num::{frac, Int, Rat};
use crate::poly::{Mono, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `G = Z^r`.
    G,
    /// `G_m = Z z_0 + s_m(G)`.
    Gm,
    /// The Heisenberg group `H`.
    H,
    /// `H_m`.
    Hm,
}

impl Flavor {
    pub fn has_e0(self) -> bool {
        matches!(self, Flavor::Gm | Flavor::Hm)
    }

    pub fn has_central(self) -> bool {
        matches!(self, Flavor::H | Flavor::Hm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::G => "G",
            Flavor::Gm => "Gm",
            Flavor::H => "H",
            Flavor::Hm => "Hm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "G" => Ok(Flavor::G),
            "Gm" => Ok(Flavor::Gm),
            "H" => Ok(Flavor::H),
            "Hm" => Ok(Flavor::Hm),
            _ => Err(AtlasError::Input(format!("unknown flavor {s:?} (expected G, Gm, H or Hm)"))),
        }
    }
}

/// Coordinate layout of one slot: index 0 is `ẽ_0`, `1..=r` are `e_i`, then
/// the `e_{j,k}` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub flavor: Flavor,
    pub rank: usize,
}

impl Layout {
    pub fn new(flavor: Flavor, rank: usize) -> Self {
        Layout { flavor, rank }
    }

    pub fn width(&self) -> usize {
        let r = self.rank;
        r + 1 + if self.flavor.has_central() { r * (r.saturating_sub(1)) / 2 } else { 0 }
    }

    pub fn e0(&self) -> usize {
        0
    }

    pub fn e(&self, i: usize) -> usize {
        debug_assert!(1 <= i && i <= self.rank);
        i
    }

    pub fn ejk(&self, j: usize, k: usize) -> usize {
        debug_assert!(1 <= j && j < k && k <= self.rank);
        let r = self.rank;
        // Pairs (j', k') with j' < j come first.
        let before: usize = (1..j).map(|t| r - t).sum();
        r + 1 + before + (k - j - 1)
    }

    /// `(j, k)` for a central index.
    pub fn central_pair(&self, idx: usize) -> Option<(usize, usize)> {
        if idx <= self.rank || !self.flavor.has_central() {
            return None;
        }
        let mut t = idx - self.rank - 1;
        for j in 1..self.rank {
            let n = self.rank - j;
            if t < n {
                return Some((j, j + 1 + t));
            }
            t -= n;
        }
        None
    }

    pub fn is_central(&self, idx: usize) -> bool {
        idx > self.rank
    }

    /// Whether the coordinate exists on this flavor.
    pub fn allowed(&self, idx: usize) -> bool {
        if idx == 0 {
            self.flavor.has_e0()
        } else {
            idx < self.width()
        }
    }

    pub fn var_name(&self, idx: usize) -> String {
        match idx {
            0 => "e0".into(),
            i if i <= self.rank => format!("e{i}"),
            _ => {
                let (j, k) = self.central_pair(idx).expect("central index");
                format!("e{j}_{k}")
            }
        }
    }

    pub fn parse_var(&self, s: &str) -> Result<usize> {
        let bad = || AtlasError::Input(format!("unknown coordinate {s:?} for flavor {} rank {}", self.flavor.name(), self.rank));
        let body = s.strip_prefix('e').ok_or_else(bad)?;
        let idx = if let Some((j, k)) = body.split_once('_') {
            let j: usize = j.parse().map_err(|_| bad())?;
            let k: usize = k.parse().map_err(|_| bad())?;
            if !(self.flavor.has_central() && 1 <= j && j < k && k <= self.rank) {
                return Err(bad());
            }
            self.ejk(j, k)
        } else {
            let i: usize = body.parse().map_err(|_| bad())?;
            if i > self.rank {
                return Err(bad());
            }
            i
        };
        if !self.allowed(idx) {
            return Err(bad());
        }
        Ok(idx)
    }

    /// Coordinates of `ẽ_0 ⊕ e ⊕ e_{j,k}` for an element of this flavor.
    pub fn coords_g(&self, g: &GroupElement) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.width()];
        for i in 1..=self.rank {
            v[i] = g.e(i).clone();
        }
        v
    }

    pub fn coords_gm(&self, x: &GmElement, m: &ModulusData) -> Vec<Int> {
        let mut v = self.coords_g(&x.g);
        v[0] = x.e0(m);
        v
    }

    pub fn coords_h(&self, x: &HeisenbergElement) -> Vec<Int> {
        let mut v = self.coords_g(&x.g);
        for (&(j, k), val) in &x.central {
            v[self.ejk(j, k)] = val.clone();
        }
        v
    }

    pub fn coords_hm(&self, x: &HmElement, m: &ModulusData) -> Vec<Int> {
        let mut v = self.coords_g(&x.g);
        v[0] = x.e0(m);
        for (&(j, k), val) in &x.central {
            v[self.ejk(j, k)] = val.clone();
        }
        v
    }

    /// Images of the slot coordinates of a product `x y` in terms of the
    /// coordinates of `x` (offset `a`) and `y` (offset `b`) in a ring of
    /// `nvars` variables.
    fn merged(&self, a: usize, b: usize, nvars: usize) -> Vec<Poly> {
        (0..self.width())
            .map(|idx| {
                let base = Poly::var(nvars, a + idx).add(&Poly::var(nvars, b + idx));
                match self.central_pair(idx) {
                    Some((j, k)) => base.add(&Poly::var(nvars, a + j).mul(&Poly::var(nvars, b + k))),
                    None => base,
                }
            })
            .collect()
    }
}

/// A cochain `Z^{n} -> Q` in exponent form on a flavored group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    layout: Layout,
    arity: usize,
    poly: Poly,
}

impl Cochain {
    pub fn zero(flavor: Flavor, rank: usize, arity: usize) -> Self {
        let layout = Layout::new(flavor, rank);
        Cochain { layout, arity, poly: Poly::zero(arity * layout.width()) }
    }

    pub fn from_poly(flavor: Flavor, rank: usize, arity: usize, poly: Poly) -> Result<Self> {
        let layout = Layout::new(flavor, rank);
        if poly.nvars() != arity * layout.width() {
            return Err(AtlasError::Mismatch(format!(
                "polynomial in {} variables for arity {arity} and slot width {}",
                poly.nvars(),
                layout.width()
            )));
        }
        for m in poly.terms().keys() {
            for (v, e) in m.iter().enumerate() {
                if *e > 0 && !layout.allowed(v % layout.width()) {
                    return Err(AtlasError::Input(format!(
                        "coordinate {} is not defined on flavor {}",
                        layout.var_name(v % layout.width()),
                        flavor.name()
                    )));
                }
            }
        }
        Ok(Cochain { layout, arity, poly })
    }

    /// Product of one monomial per slot, each given as `(coordinate, power)` lists.
    pub fn term(flavor: Flavor, rank: usize, coeff: Rat, slots: &[&[(usize, u8)]]) -> Result<Self> {
        let layout = Layout::new(flavor, rank);
        let w = layout.width();
        let mut m = vec![0u8; slots.len() * w];
        for (s, factors) in slots.iter().enumerate() {
            for &(idx, e) in factors.iter() {
                if idx >= w {
                    return Err(AtlasError::Input(format!("coordinate index {idx} out of range")));
                }
                m[s * w + idx] += e;
            }
        }
        Self::from_poly(flavor, rank, slots.len(), Poly::monomial(m, coeff))
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn flavor(&self) -> Flavor {
        self.layout.flavor
    }

    pub fn rank(&self) -> usize {
        self.layout.rank
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_shape(&self, o: &Cochain) -> Result<()> {
        if self.layout != o.layout || self.arity != o.arity {
            return Err(AtlasError::Mismatch(format!(
                "cochains of shape ({}, r={}, n={}) and ({}, r={}, n={})",
                self.flavor().name(),
                self.rank(),
                self.arity,
                o.flavor().name(),
                o.rank(),
                o.arity
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Cochain) -> Result<Cochain> {
        self.same_shape(o)?;
        Ok(Cochain { poly: self.poly.add(&o.poly), ..self.clone() })
    }

    pub fn sub(&self, o: &Cochain) -> Result<Cochain> {
        self.same_shape(o)?;
        Ok(Cochain { poly: self.poly.sub(&o.poly), ..self.clone() })
    }

    pub fn scale(&self, k: &Rat) -> Cochain {
        Cochain { poly: self.poly.scale(k), ..self.clone() }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rat::one())
    }

    /// Tensor product `(c ⊗ d)(g_1..g_{n+m}) = c(g_1..g_n) d(g_{n+1}..)`.
    pub fn tensor(&self, o: &Cochain) -> Result<Cochain> {
        if self.layout != o.layout {
            return Err(AtlasError::Mismatch("tensor of cochains on different groups".into()));
        }
        let w = self.layout.width();
        let n = (self.arity + o.arity) * w;
        let left: Vec<usize> = (0..self.arity * w).collect();
        let right: Vec<usize> = (0..o.arity * w).map(|v| v + self.arity * w).collect();
        let poly = self.poly.rename(&left, n).mul(&o.poly.rename(&right, n));
        Ok(Cochain { layout: self.layout, arity: self.arity + o.arity, poly })
    }

    /// Multiplies slot-wise: both cochains must share arity and layout.
    pub fn mul(&self, o: &Cochain) -> Result<Cochain> {
        self.same_shape(o)?;
        Ok(Cochain { poly: self.poly.mul(&o.poly), ..self.clone() })
    }

    /// Re-reads the cochain on a larger flavor (e.g. `G` to `H_m` through the
    /// projection), keeping coordinates by name.
    pub fn pull_back(&self, flavor: Flavor) -> Result<Cochain> {
        let target = Layout::new(flavor, self.rank());
        let (w, tw) = (self.layout.width(), target.width());
        let mut map = Vec::with_capacity(self.arity * w);
        for s in 0..self.arity {
            for idx in 0..w {
                let t = match self.layout.central_pair(idx) {
                    Some((j, k)) if flavor.has_central() => target.ejk(j, k),
                    Some(_) => usize::MAX,
                    None => idx,
                };
                map.push(if t == usize::MAX { usize::MAX } else { s * tw + t });
            }
        }
        for m in self.poly.terms().keys() {
            for (v, e) in m.iter().enumerate() {
                if *e > 0 && (map[v] == usize::MAX || !target.allowed(map[v] % tw)) {
                    return Err(AtlasError::Mismatch(format!(
                        "coordinate {} does not exist on flavor {}",
                        self.layout.var_name(v % w),
                        flavor.name()
                    )));
                }
            }
        }
        let map: Vec<usize> = map.into_iter().map(|v| if v == usize::MAX { 0 } else { v }).collect();
        Ok(Cochain { layout: target, arity: self.arity, poly: self.poly.rename(&map, self.arity * tw) })
    }

    /// Symbolic coboundary
    /// `(∂c)(g_1..g_{n+1}) = c(g_2..) + Σ_k (-1)^k c(.., g_k g_{k+1}, ..) + (-1)^{n+1} c(g_1..g_n)`.
    pub fn boundary(&self) -> Cochain {
        let n = self.arity;
        let w = self.layout.width();
        let nv = (n + 1) * w;
        let mut out = Poly::zero(nv);
        for face in 0..=n + 1 {
            let mut images: Vec<Poly> = Vec::with_capacity(n * w);
            for s in 0..n {
                let inner = (1..=n).contains(&face);
                if inner && s + 1 == face {
                    images.extend(self.layout.merged(s * w, (s + 1) * w, nv));
                } else {
                    let t = if face == 0 || (inner && s + 1 > face) { s + 1 } else { s };
                    images.extend((0..w).map(|idx| Poly::var(nv, t * w + idx)));
                }
            }
            let sign = if face % 2 == 0 { Rat::one() } else { -Rat::one() };
            out.add_scaled(&self.poly.substitute(&images, nv), &sign);
        }
        Cochain { layout: self.layout, arity: n + 1, poly: out }
    }

    /// Cochain with its slots permuted: `result(g_1..g_n) = c(g_{σ(1)}, .., g_{σ(n)})`.
    pub fn permute(&self, sigma: &[usize]) -> Cochain {
        let w = self.layout.width();
        let mut map = vec![0usize; self.arity * w];
        for (s, &t) in sigma.iter().enumerate() {
            for idx in 0..w {
                map[s * w + idx] = t * w + idx;
            }
        }
        Cochain { poly: self.poly.rename(&map, self.arity * w), ..self.clone() }
    }

    /// `(AS c)(g_1..g_n) = Σ_σ sign(σ) c(g_{σ(1)}, .., g_{σ(n)})`.
    pub fn asymmetrize(&self) -> Cochain {
        let mut out = Poly::zero(self.poly.nvars());
        for sigma in (0..self.arity).permutations(self.arity) {
            let sign = if permutation_sign(&sigma) { Rat::one() } else { -Rat::one() };
            out.add_scaled(self.permute(&sigma).poly(), &sign);
        }
        Cochain { poly: out, ..self.clone() }
    }

    /// Exponent at a tuple given in slot coordinates.
    pub fn eval_coords(&self, slots: &[Vec<Int>]) -> Result<Rat> {
        if slots.len() != self.arity {
            return Err(AtlasError::Mismatch(format!("{} arguments for arity {}", slots.len(), self.arity)));
        }
        let w = self.layout.width();
        let mut x = Vec::with_capacity(self.arity * w);
        for s in slots {
            if s.len() != w {
                return Err(AtlasError::Mismatch(format!("slot of width {} for layout width {w}", s.len())));
            }
            x.extend(s.iter().cloned());
        }
        Ok(self.poly.eval(&x))
    }

    pub fn eval_g(&self, gs: &[GroupElement]) -> Result<Rat> {
        self.check_rank(gs.iter().map(|g| g.rank()))?;
        self.eval_coords(&gs.iter().map(|g| self.layout.coords_g(g)).collect::<Vec<_>>())
    }

    pub fn eval_gm(&self, gs: &[GmElement], m: &ModulusData) -> Result<Rat> {
        self.check_rank(gs.iter().map(|g| g.g.rank()))?;
        self.eval_coords(&gs.iter().map(|g| self.layout.coords_gm(g, m)).collect::<Vec<_>>())
    }

    pub fn eval_h(&self, gs: &[HeisenbergElement]) -> Result<Rat> {
        self.check_rank(gs.iter().map(|g| g.rank()))?;
        self.eval_coords(&gs.iter().map(|g| self.layout.coords_h(g)).collect::<Vec<_>>())
    }

    pub fn eval_hm(&self, gs: &[HmElement], m: &ModulusData) -> Result<Rat> {
        self.check_rank(gs.iter().map(|g| g.rank()))?;
        self.eval_coords(&gs.iter().map(|g| self.layout.coords_hm(g, m)).collect::<Vec<_>>())
    }

    fn check_rank(&self, ranks: impl Iterator<Item = usize>) -> Result<()> {
        for r in ranks {
            if r != self.rank() {
                return Err(AtlasError::Mismatch(format!("element of rank {r} for cochain of rank {}", self.rank())));
            }
        }
        Ok(())
    }

    /// Torus value in `[0, 1)`.
    pub fn torus_value(&self, slots: &[Vec<Int>]) -> Result<Rat> {
        Ok(frac(&self.eval_coords(slots)?))
    }

    /// Integer-valued on every tuple, i.e. the trivial torus cochain.
    pub fn is_trivial_mod_one(&self) -> bool {
        self.poly.is_integer_valued()
    }

    /// The canonical representative mod integer-valued cochains.
    pub fn reduce_mod_one(&self) -> Cochain {
        Cochain { poly: self.poly.reduce_mod_integer_valued(), ..self.clone() }
    }

    /// Per-slot degree cap: abelian degree at most 2 and central degree at most 1.
    pub fn within_cap(&self) -> bool {
        let w = self.layout.width();
        self.poly.terms().keys().all(|m| slot_within_cap(&self.layout, m, w))
    }

    /// Monomials of slot `s` as `(coordinate, power)` lists.
    pub fn slot_factors(&self, m: &Mono, s: usize) -> Vec<(usize, u8)> {
        let w = self.layout.width();
        (0..w).filter(|idx| m[s * w + idx] > 0).map(|idx| (idx, m[s * w + idx])).collect()
    }
}

fn slot_within_cap(layout: &Layout, m: &Mono, w: usize) -> bool {
    m.chunks(w).all(|slot| {
        let ab: u32 = slot[..=layout.rank].iter().map(|&e| e as u32).sum();
        let ce: u32 = slot[layout.rank + 1..].iter().map(|&e| e as u32).sum();
        ab <= 2 && ce <= 1
    })
}

/// True for even permutations.
pub fn permutation_sign(sigma: &[usize]) -> bool {
    let mut even = true;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                even = !even;
            }
        }
    }
    even
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let w = self.layout.width();
        for (n, (m, c)) in self.poly.terms().iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            let slots: Vec<String> = (0..self.arity)
                .map(|s| {
                    let fs: Vec<String> = (0..w)
                        .filter(|idx| m[s * w + idx] > 0)
                        .map(|idx| {
                            let e = m[s * w + idx];
                            let name = self.layout.var_name(idx);
                            if e == 1 { name } else { format!("{name}^{e}") }
                        })
                        .collect();
                    if fs.is_empty() { "1".into() } else { fs.join("*") }
                })
                .collect();
            write!(f, " {}", slots.join(" ⊗ "))?;
        }
        Ok(())
    }
}

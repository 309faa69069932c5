//! Sparse multivariate polynomials with rational coefficients, plus the
//! binomial basis `prod_v C(x_v, k_v)` used to decide integer-valuedness.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::num::{is_integer, Int, Rat};

/// Exponent vector, one entry per variable.
pub type Mono = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut m = vec![0; nvars];
        m[v] = 1;
        Self::monomial(m, Rat::one())
    }

    pub fn monomial(m: Mono, c: Rat) -> Self {
        let mut p = Self::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial length");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Rat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, Rat> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u8]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Poly, k: &Rat) {
        assert_eq!(self.nvars, o.nvars, "variable count");
        if k.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(o, &Rat::one());
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(o, &-Rat::one());
        out
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rat::one())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "variable count");
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u8) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest exponent of each variable.
    pub fn degrees(&self) -> Vec<u8> {
        let mut d = vec![0u8; self.nvars];
        for m in self.terms.keys() {
            for (a, b) in d.iter_mut().zip(m) {
                *a = (*a).max(*b);
            }
        }
        d
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        self.degrees().iter().enumerate().filter(|(_, d)| **d > 0).map(|(v, _)| v).collect()
    }

    pub fn eval(&self, x: &[Int]) -> Rat {
        assert_eq!(x.len(), self.nvars, "point dimension");
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = Int::one();
            for (xi, e) in x.iter().zip(m) {
                if *e > 0 {
                    t *= num_traits::pow(xi.clone(), *e as usize);
                }
            }
            total += c * Rat::from_integer(t);
        }
        total
    }

    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.nvars, "point dimension");
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, e) in x.iter().zip(m) {
                if *e > 0 {
                    t *= num_traits::pow(xi.clone(), *e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Composition: variable `v` is replaced by `images[v]`, all of which live
    /// in a common ring of `images[0].nvars()` variables.
    pub fn substitute(&self, images: &[Poly], new_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut cache: BTreeMap<(usize, u8), Poly> = BTreeMap::new();
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(new_nvars, c.clone());
            for (v, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let p = cache.entry((v, *e)).or_insert_with(|| images[v].pow(*e));
                t = t.mul(p);
            }
            out.add_scaled(&t, &Rat::one());
        }
        out
    }

    /// Coefficients in the basis `prod_v C(x_v, k_v)`.
    pub fn to_binomial(&self) -> BTreeMap<Mono, Rat> {
        let mut out: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            // Per variable: x^d = sum_k S(d, k) k! C(x, k).
            let mut partial: Vec<(Mono, Int)> = vec![(Vec::with_capacity(self.nvars), Int::one())];
            for &d in m {
                let row = power_to_binomial(d);
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (pm, pc) in &partial {
                    for (k, f) in &row {
                        let mut nm = pm.clone();
                        nm.push(*k);
                        next.push((nm, pc * f));
                    }
                }
                partial = next;
            }
            for (bm, f) in partial {
                let e = out.entry(bm).or_insert_with(Rat::zero);
                *e += c * Rat::from_integer(f);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Inverse of [`Poly::to_binomial`].
    pub fn from_binomial(nvars: usize, coeffs: &BTreeMap<Mono, Rat>) -> Poly {
        let mut out = Poly::zero(nvars);
        for (bm, c) in coeffs {
            let mut partial: Vec<(Mono, Rat)> = vec![(Vec::with_capacity(nvars), c.clone())];
            for &k in bm {
                let row = binomial_to_power(k);
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (pm, pc) in &partial {
                    for (d, f) in &row {
                        let mut nm = pm.clone();
                        nm.push(*d);
                        next.push((nm, pc * f));
                    }
                }
                partial = next;
            }
            for (m, f) in partial {
                out.add_term(m, f);
            }
        }
        out
    }

    /// Whether the polynomial takes integer values at every integer point.
    pub fn is_integer_valued(&self) -> bool {
        self.to_binomial().values().all(is_integer)
    }

    /// Drops terms whose binomial coefficients are integers, returning the
    /// fractional remainder (same values mod 1 at integer points).
    pub fn fractional_part_binomial(&self) -> BTreeMap<Mono, Rat> {
        let mut b = self.to_binomial();
        for v in b.values_mut() {
            *v = &*v - v.floor();
        }
        b.retain(|_, v| !v.is_zero());
        b
    }

    /// Removes the binomial-basis integer part, keeping a representative
    /// with the same values mod 1 on integer points.
    pub fn reduce_mod_integer_valued(&self) -> Poly {
        Poly::from_binomial(self.nvars, &self.fractional_part_binomial())
    }

    /// Permutes and re-embeds variables: old variable `v` becomes new variable `map[v]`.
    pub fn rename(&self, map: &[usize], new_nvars: usize) -> Poly {
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0u8; new_nvars];
            for (v, e) in m.iter().enumerate() {
                if *e > 0 {
                    nm[map[v]] += e;
                }
            }
            out.add_term(nm, c.clone());
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

fn factorial(k: u8) -> Int {
    (1..=k as u32).fold(Int::one(), |a, b| a * Int::from(b))
}

/// Stirling numbers of the second kind `S(d, k)`.
fn stirling2(d: u8, k: u8) -> Int {
    let (d, k) = (d as usize, k as usize);
    let mut t = vec![vec![Int::zero(); k + 1]; d + 1];
    t[0][0] = Int::one();
    for n in 1..=d {
        for j in 1..=k.min(n) {
            t[n][j] = Int::from(j) * &t[n - 1][j] + &t[n - 1][j - 1];
        }
    }
    t[d][k].clone()
}

/// Signed Stirling numbers of the first kind `s(k, j)`.
fn stirling1(k: u8, j: u8) -> Int {
    let (k, j) = (k as usize, j as usize);
    let mut t = vec![vec![Int::zero(); j + 1]; k + 1];
    t[0][0] = Int::one();
    for n in 1..=k {
        for i in 1..=j.min(n) {
            t[n][i] = &t[n - 1][i - 1] - Int::from(n - 1) * &t[n - 1][i];
        }
    }
    t[k][j].clone()
}

fn power_to_binomial(d: u8) -> Vec<(u8, Int)> {
    (0..=d)
        .map(|k| (k, stirling2(d, k) * factorial(k)))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}

fn binomial_to_power(k: u8) -> Vec<(u8, Rat)> {
    let kf = factorial(k);
    (0..=k)
        .map(|j| (j, Rat::new(stirling1(k, j), kf.clone())))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}

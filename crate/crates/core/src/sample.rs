//! Seeded samplers for group elements, cochains and parameters.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::{Cochain, Flavor, Layout};
use crate::families::{pairs, triples, ParameterA, ParameterB};
use crate::groups::{Central, GroupElement, HeisenbergElement, HmElement, ModulusData, QmElement};
use crate::num::{gcd_all, int, rat, Int, Rat};
use crate::poly::Poly;

/// A deterministic source of random test data.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn int(&mut self, bound: i64) -> Int {
        int(self.rng.gen_range(-bound..=bound))
    }

    /// A rational `n/d` with `1 <= d <= max_den` and `|n/d| <= bound`.
    pub fn rat(&mut self, max_den: i64, bound: i64) -> Rat {
        let d = self.rng.gen_range(1..=max_den);
        let n = self.rng.gen_range(-bound * d..=bound * d);
        rat(n, d)
    }

    pub fn group(&mut self, r: usize, bound: i64) -> GroupElement {
        GroupElement((0..r).map(|_| self.int(bound)).collect())
    }

    pub fn central(&mut self, r: usize, bound: i64) -> Central {
        let mut c = Central::new();
        for (j, k) in pairs(r) {
            let v = self.int(bound);
            if !v.is_zero() {
                c.insert((j, k), v);
            }
        }
        c
    }

    pub fn heisenberg(&mut self, r: usize, bound: i64) -> HeisenbergElement {
        let central = self.central(r, bound);
        HeisenbergElement { central, g: self.group(r, bound) }
    }

    pub fn hm(&mut self, m: &ModulusData, bound: i64) -> HmElement {
        let r = m.rank();
        let central = self.central(r, bound);
        let g = self.group(r, bound);
        HmElement::from_coords(central, self.int(bound), g, m)
    }

    /// An element `(c, P t, 0)` of `L`.
    pub fn l(&mut self, m: &ModulusData, bound: i64) -> HmElement {
        let r = m.rank();
        let central = self.central(r, bound);
        let t = self.group(r, bound);
        HmElement::in_l(central, &t, m).expect("rank matches")
    }

    /// An element of `M` inside `L`.
    pub fn m_elem(&mut self, m: &ModulusData, bound: i64) -> HmElement {
        let r = m.rank();
        let central = self.central(r, bound);
        HmElement::in_l(central, &GroupElement::zero(r), m).expect("rank matches")
    }

    pub fn qm(&mut self, m: &ModulusData, bound: i64) -> QmElement {
        let q = m.p.iter().map(|p| int(self.rng.gen_range(0..p_small(p)))).collect();
        QmElement::from_coords(q, self.int(bound), m)
    }

    /// A cochain with random rational coefficients on monomials whose
    /// per-slot degrees respect the cap (abelian at most 2, central at most 1).
    pub fn cochain(&mut self, flavor: Flavor, rank: usize, arity: usize, terms: usize, max_den: i64) -> Cochain {
        let layout = Layout::new(flavor, rank);
        let w = layout.width();
        let vars: Vec<usize> = (0..w).filter(|&v| layout.allowed(v)).collect();
        let mut poly = Poly::zero(arity * w);
        for _ in 0..terms {
            let mut mono = vec![0u8; arity * w];
            for s in 0..arity {
                let central: Vec<usize> = vars.iter().copied().filter(|&v| layout.is_central(v)).collect();
                let abelian: Vec<usize> = vars.iter().copied().filter(|&v| !layout.is_central(v)).collect();
                let deg = self.rng.gen_range(1..=2);
                for _ in 0..deg {
                    let v = abelian[self.below(abelian.len())];
                    mono[s * w + v] += 1;
                }
                if !central.is_empty() && self.rng.gen_bool(0.3) {
                    let v = central[self.below(central.len())];
                    mono[s * w + v] = 1;
                }
            }
            let c = self.rat(max_den, 2);
            poly.add_term(mono, c);
        }
        Cochain::from_poly(flavor, rank, arity, poly).expect("monomials fit the layout")
    }

    /// Random `a` on all index patterns.
    pub fn parameter_a(&mut self, r: usize, max_den: i64) -> ParameterA {
        let mut a = ParameterA::new(r);
        for (i, j, k) in triples(r) {
            for idx in [(i, j, k), (j, i, k), (k, i, j)] {
                a.set(idx, self.rat(max_den, 1)).expect("valid pattern");
            }
        }
        for (i, k) in pairs(r) {
            a.set((i, i, k), self.rat(max_den, 1)).expect("valid pattern");
            a.set((k, i, k), self.rat(max_den, 1)).expect("valid pattern");
        }
        a
    }

    /// Random `a` supported on increasing triples.
    pub fn parameter_a_increasing(&mut self, r: usize, max_den: i64) -> ParameterA {
        let mut a = ParameterA::new(r);
        for (i, j, k) in triples(r) {
            a.set((i, j, k), self.rat(max_den, 1)).expect("valid pattern");
        }
        a
    }

    /// Random `a` with `AS a(i,j,k) ∈ (1/gcd(p_i,p_j,p_k)) Z`.
    pub fn parameter_a_in_z(&mut self, m: &ModulusData, max_den: i64) -> ParameterA {
        let mut a = self.parameter_a(m.rank(), max_den);
        for (i, j, k) in triples(m.rank()) {
            let d = gcd_all([m.pi(i), m.pi(j), m.pi(k)]);
            let target = Rat::new(self.int(3 * small(&d)), d);
            let v = target + a.get(j, i, k) - a.get(k, i, j);
            a.set((i, j, k), v).expect("valid pattern");
        }
        a
    }

    /// Random `b` with `b(i,j) p_j - b(i,0) q_j ∈ Z` for all `i, j >= 1`.
    pub fn parameter_b_in_z(&mut self, m: &ModulusData, max_den: i64) -> ParameterB {
        let r = m.rank();
        let mut b = ParameterB::new(r);
        for i in 1..=r {
            let u = self.rat(max_den, 1);
            for j in 1..=r {
                let v = (Rat::from_integer(m.qi(j).clone()) * &u + Rat::from_integer(self.int(3))) / Rat::from_integer(m.pi(j).clone());
                b.set((i, j), v).expect("valid index");
            }
            b.set((i, 0), u).expect("valid index");
        }
        b
    }
}

fn small(v: &Int) -> i64 {
    i64::try_from(v).unwrap_or(i64::MAX / 4)
}

fn p_small(p: &Int) -> i64 {
    small(p).max(1)
}

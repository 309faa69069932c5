//! Third cocycles `c_a` on `G` and their explicit resolution on the
//! Heisenberg group: a 2-cochain `b_a` on `H` with `∂_H b_a = π_0^* c_a`.

use num_traits::{One, Zero};

use crate::cochain::{Cochain, Flavor};
use crate::error::{AtlasError, Result};
use crate::families::{triples, ParameterA};
use crate::groups::{heisenberg_mul, HeisenbergElement};
use crate::num::{frac, Rat};
use crate::sample::Sampler;

fn require_increasing(a: &ParameterA) -> Result<()> {
    if let Some(&(x, y, z)) = a.entries().keys().find(|&&(x, y, _)| x >= y) {
        return Err(AtlasError::Input(format!("a({x},{y},{z}) is not on a strictly increasing triple")));
    }
    Ok(())
}

/// `c_a = Σ_{i<j<k} a(i,j,k) e_i ⊗ e_j ⊗ e_k` on `G`.
pub fn third_cocycle_c_a(a: &ParameterA) -> Result<Cochain> {
    require_increasing(a)?;
    let r = a.rank;
    let mut c = Cochain::zero(Flavor::G, r, 3);
    for (i, j, k) in triples(r) {
        let v = a.get(i, j, k);
        if !v.is_zero() {
            c = c.add(&Cochain::term(Flavor::G, r, v, &[&[(i, 1)], &[(j, 1)], &[(k, 1)]])?)?;
        }
    }
    Ok(c)
}

/// `b_a(g_1; g_2) = Σ_{i<j<k} a(i,j,k) e_i(π_0(g_1)) e_{j,k}(g_2)` on `H`.
pub fn resolve_third_cocycle(a: &ParameterA) -> Result<Cochain> {
    require_increasing(a)?;
    let r = a.rank;
    let mut b = Cochain::zero(Flavor::H, r, 2);
    for (i, j, k) in triples(r) {
        let v = a.get(i, j, k);
        if !v.is_zero() {
            let ejk = crate::cochain::Layout::new(Flavor::H, r).ejk(j, k);
            b = b.add(&Cochain::term(Flavor::H, r, v, &[&[(i, 1)], &[(ejk, 1)]])?)?;
        }
    }
    Ok(b)
}

/// Outcome of comparing `π_0^* c_a` with `∂_H b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub samples: usize,
    /// Sampled triples where the two sides differ mod 1.
    pub failures: usize,
    /// Largest distance to the nearest integer of the sampled differences.
    pub max_deviation: Rat,
    /// `∂_H b - π_0^* c_a` is the zero polynomial.
    pub symbolic_zero: bool,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.symbolic_zero
    }
}

fn distance_to_z(x: &Rat) -> Rat {
    let f = frac(x);
    let g = Rat::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

/// Samples `H`-triples and measures `π_0^* c_a - ∂_H b` mod 1, with `∂_H b`
/// evaluated through the group law; also performs the symbolic comparison.
pub fn verify_resolution(a: &ParameterA, b: &Cochain, samples: usize, seed: u64) -> Result<ResolutionReport> {
    if b.arity() != 2 || b.flavor() != Flavor::H || b.rank() != a.rank {
        return Err(AtlasError::Mismatch(format!(
            "b must be an arity-2 cochain on H of rank {}, got arity {} on {} of rank {}",
            a.rank,
            b.arity(),
            b.flavor().name(),
            b.rank()
        )));
    }
    let c = third_cocycle_c_a(a)?;
    let lifted = c.pull_back(Flavor::H)?;
    let symbolic_zero = b.boundary().sub(&lifted)?.is_zero();
    let mut rng = Sampler::new(seed);
    let r = a.rank;
    let (mut failures, mut max_deviation) = (0, Rat::zero());
    for _ in 0..samples {
        let g: Vec<HeisenbergElement> = (0..3).map(|_| rng.heisenberg(r, 6)).collect();
        let g12 = heisenberg_mul(&g[0], &g[1])?;
        let g23 = heisenberg_mul(&g[1], &g[2])?;
        let db = b.eval_h(&[g[1].clone(), g[2].clone()])? - b.eval_h(&[g12, g[2].clone()])?
            + b.eval_h(&[g[0].clone(), g23])?
            - b.eval_h(&[g[0].clone(), g[1].clone()])?;
        let cv = c.eval_g(&[g[0].g.clone(), g[1].g.clone(), g[2].g.clone()])?;
        let dev = distance_to_z(&(cv - db));
        if !dev.is_zero() {
            failures += 1;
        }
        if dev > max_deviation {
            max_deviation = dev;
        }
    }
    Ok(ResolutionReport { samples, failures, max_deviation, symbolic_zero })
}

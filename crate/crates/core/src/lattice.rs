//! Solving `A x ≡ t (mod Z^m)` for rational `x`, where `A` is an integer
//! matrix, by unimodular row reduction.
//!
//! With `U A = E` in row echelon form and `U` unimodular, the system becomes
//! `E x ≡ U t`. Zero rows of `E` demand `(U t)_i ∈ Z`; the pivot rows are then
//! solved exactly over `Q` with free variables set to zero.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::num::{is_integer, Int, Rat};

#[derive(Clone, Debug)]
enum Op {
    Swap(usize, usize),
    /// `row[dst] -= k * row[src]`.
    SubMul { dst: usize, src: usize, k: Int },
}

/// A factored integer matrix, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct ModZSolver {
    nrows: usize,
    ncols: usize,
    echelon: Vec<Vec<Int>>,
    pivots: Vec<usize>,
    ops: Vec<Op>,
}

impl ModZSolver {
    /// Factors the `nrows x ncols` matrix given as dense rows.
    pub fn new(mut a: Vec<Vec<Int>>, ncols: usize) -> Self {
        let nrows = a.len();
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == nrows {
                break;
            }
            loop {
                // Row with the smallest nonzero magnitude in this column.
                let best = (r..nrows)
                    .filter(|&i| !a[i][col].is_zero())
                    .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()).then(i.cmp(&j)));
                let Some(best) = best else { break };
                if best != r {
                    a.swap(best, r);
                    ops.push(Op::Swap(best, r));
                }
                let mut clean = true;
                for i in r + 1..nrows {
                    if a[i][col].is_zero() {
                        continue;
                    }
                    let k = a[i][col].div_floor(&a[r][col]);
                    if !k.is_zero() {
                        let (top, bottom) = a.split_at_mut(i);
                        let src = &top[r];
                        for (d, s) in bottom[0][col..].iter_mut().zip(&src[col..]) {
                            if !s.is_zero() {
                                *d -= &k * s;
                            }
                        }
                        ops.push(Op::SubMul { dst: i, src: r, k });
                    }
                    if !a[i][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if (r..nrows).any(|i| !a[i][col].is_zero()) {
                pivots.push(col);
                r += 1;
            }
        }
        a.truncate(pivots.len());
        ModZSolver { nrows, ncols, echelon: a, pivots, ops }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Some rational `x` with `A x - t` integral, or `None`.
    pub fn solve(&self, t: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(t.len(), self.nrows, "right-hand side length");
        let mut u = t.to_vec();
        for op in &self.ops {
            match op {
                Op::Swap(i, j) => u.swap(*i, *j),
                Op::SubMul { dst, src, k } => {
                    let v = &u[*src] * Rat::from_integer(k.clone());
                    u[*dst] -= v;
                }
            }
        }
        if !u[self.rank()..].iter().all(is_integer) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (row, &pc) in self.pivots.iter().enumerate().rev() {
            let e = &self.echelon[row];
            let mut acc = u[row].clone();
            for c in pc + 1..self.ncols {
                if !e[c].is_zero() && !x[c].is_zero() {
                    acc -= Rat::from_integer(e[c].clone()) * &x[c];
                }
            }
            x[pc] = acc / Rat::from_integer(e[pc].clone());
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn residual_ok(a: &[Vec<Int>], x: &[Rat], t: &[Rat]) -> bool {
        a.iter().zip(t).all(|(row, ti)| {
            let v: Rat = row.iter().zip(x).map(|(c, xi)| Rat::from_integer(c.clone()) * xi).sum();
            is_integer(&(v - ti))
        })
    }

    #[test]
    fn two_x_congruences() {
        // 2x ≡ 1/2 is solvable (x = 1/4); [2; 2] x ≡ (1/2, 0) is not.
        let s = ModZSolver::new(m(&[&[2]]), 1);
        let x = s.solve(&[rat(1, 2)]).unwrap();
        assert!(residual_ok(&m(&[&[2]]), &x, &[rat(1, 2)]));
        let a = m(&[&[2], &[2]]);
        let s = ModZSolver::new(a.clone(), 1);
        assert!(s.solve(&[rat(1, 2), rat(0, 1)]).is_none());
        assert!(s.solve(&[rat(1, 2), rat(3, 2)]).is_some());
    }

    #[test]
    fn zero_matrix() {
        let s = ModZSolver::new(m(&[&[0, 0], &[0, 0]]), 2);
        assert_eq!(s.rank(), 0);
        assert!(s.solve(&[rat(1, 1), rat(-4, 1)]).is_some());
        assert!(s.solve(&[rat(1, 3), rat(0, 1)]).is_none());
    }

    proptest! {
        #[test]
        fn solutions_satisfy_the_system(
            rows in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 1..6),
            x0 in prop::collection::vec((-6i64..7, 1i64..7), 3),
        ) {
            let a: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            let x0: Vec<Rat> = x0.iter().map(|&(n, d)| rat(n, d)).collect();
            let t: Vec<Rat> = a.iter().map(|row| row.iter().zip(&x0).map(|(c, xi)| Rat::from_integer(c.clone()) * xi).sum()).collect();
            let s = ModZSolver::new(a.clone(), 3);
            let x = s.solve(&t).expect("consistent system");
            prop_assert!(residual_ok(&a, &x, &t));
        }

        #[test]
        fn unsolvable_detected_by_brute_force(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 1), 1..4),
            t in prop::collection::vec(0i64..4, 1..4),
        ) {
            // One unknown; search x = k/D over a full period.
            let n = rows.len().min(t.len());
            let a: Vec<Vec<Int>> = rows[..n].iter().map(|r| vec![int(r[0])]).collect();
            let t: Vec<Rat> = t[..n].iter().map(|&v| rat(v, 4)).collect();
            let s = ModZSolver::new(a.clone(), 1);
            let brute = (0..4 * 36).any(|k| residual_ok(&a, &[rat(k, 4 * 36)], &t))
                || a.iter().all(|r| r[0].is_zero()) && t.iter().all(is_integer);
            prop_assert_eq!(s.solve(&t).is_some(), brute);
        }
    }
}

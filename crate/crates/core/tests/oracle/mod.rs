//! Numerical optimum of `1 → N` cloning, independent of the crate.
//!
//! The average single-clone fidelity of a channel with Kraus operators `K_a`
//! is `(d·Fe + 1)/(d + 1)`, with `Fe` the clone-averaged entanglement
//! fidelity, a quadratic form in the stacked isometry `V = [K_1; …; K_r]`.
//! We maximize it over isometries by polar-decomposition ascent (monotone for
//! a convex form; a constant shift makes it convex) from random starts,
//! without touching the crate's cloner.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maps basis index `idx` with digit `from` at factor `k` to the same index with digit `to`.
fn flip(idx: usize, d: usize, n: usize, k: usize, from: usize, to: usize) -> Option<usize> {
    let stride = d.pow((n - 1 - k) as u32);
    if (idx / stride) % d != from {
        return None;
    }
    Some(idx - from * stride + to * stride)
}

struct Problem {
    d: usize,
    n: usize,
    rank: usize,
    shift: f64,
}

impl Problem {
    fn out_dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// Returns `(Fe, gradient)` for the stacked Kraus operators.
    fn eval(&self, kraus: &[DMatrix<Complex64>]) -> (f64, Vec<DMatrix<Complex64>>) {
        let (d, n) = (self.d, self.n);
        let scale = 1.0 / (n * d * d) as f64;
        let mut value = 0.0;
        let grads = kraus
            .iter()
            .map(|k_a| {
                let mut g = DMatrix::<Complex64>::zeros(self.out_dim(), d);
                for k in 0..n {
                    for i in 0..d {
                        for j in 0..d {
                            for row in 0..self.out_dim() {
                                if let Some(to) = flip(row, d, n, k, i, j) {
                                    g[(to, j)] += k_a[(row, i)] * scale;
                                }
                            }
                        }
                    }
                }
                value += k_a.zip_map(&g, |a, b| a.conj() * b).sum().re;
                g + k_a * Complex64::new(self.shift, 0.0)
            })
            .collect();
        (value, grads)
    }

    fn random_isometry(&self, rng: &mut ChaCha8Rng) -> Vec<DMatrix<Complex64>> {
        let rows = self.rank * self.out_dim();
        let g = DMatrix::from_fn(rows, self.d, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        self.unstack(&polar(&g))
    }

    fn stack(&self, parts: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
        let m = self.out_dim();
        let mut out = DMatrix::zeros(self.rank * m, self.d);
        for (a, p) in parts.iter().enumerate() {
            out.view_mut((a * m, 0), (m, self.d)).copy_from(p);
        }
        out
    }

    fn unstack(&self, v: &DMatrix<Complex64>) -> Vec<DMatrix<Complex64>> {
        let m = self.out_dim();
        (0..self.rank)
            .map(|a| v.view((a * m, 0), (m, self.d)).into_owned())
            .collect()
    }

    fn maximize(&self, starts: usize, iters: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..starts {
            let mut kraus = self.random_isometry(&mut rng);
            let mut last = f64::NEG_INFINITY;
            for _ in 0..iters {
                let (value, grads) = self.eval(&kraus);
                assert!(value >= last - 1e-10, "ascent must be monotone");
                if value - last < 1e-14 {
                    break;
                }
                last = value;
                kraus = self.unstack(&polar(&self.stack(&grads)));
            }
            let fe = self.eval(&kraus).0;
            let v = self.stack(&kraus);
            let gram = v.adjoint() * &v - DMatrix::identity(self.d, self.d);
            assert!(
                gram.iter().all(|z| z.norm() < 1e-9),
                "iterate left the isometries"
            );
            best = best.max((self.d as f64 * fe + 1.0) / (self.d as f64 + 1.0));
        }
        best
    }
}

/// Closest isometry to `g` in Frobenius norm: `U W†` from `g = U Σ W†`.
fn polar(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let svd = g.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Best average single-clone fidelity found for `1 → n` cloning of a qudit of dimension `d`.
pub fn optimal_clone_fidelity(d: usize, n: usize) -> f64 {
    let problem = Problem {
        d,
        n,
        rank: d * d.pow(n as u32),
        shift: 2.0,
    };
    problem.maximize(6, 4000, 17 + (d * 10 + n) as u64)
}

//! Shared helpers for the integration suites: independent oracles and
//! structured tensors.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use triamp::tensor3::{random_orthogonal, Matrix, Tensor3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// One-sided Jacobi SVD oracle: rotate columns until pairwise orthogonal;
/// the singular values are the resulting column norms, descending.
pub fn jacobi_singular_values(m: &Matrix) -> Vec<f64> {
    let mut a = if m.cols() > m.rows() {
        m.transpose()
    } else {
        m.clone()
    };
    let n = a.cols();
    for _ in 0..200 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (app, aqq, apq) = {
                    let cp = a.col(p);
                    let cq = a.col(q);
                    (dot(cp, cp), dot(cq, cq), dot(cp, cq))
                };
                if apq.abs() <= 1e-15 * (app * aqq).sqrt().max(1e-300) {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..a.rows() {
                    let vip = a.get(i, p);
                    let viq = a.get(i, q);
                    a.set(i, p, c * vip - s * viq);
                    a.set(i, q, s * vip + c * viq);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut svs: Vec<f64> = (0..n).map(|j| norm(a.col(j))).collect();
    svs.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    svs
}

/// Apply an independent random orthogonal matrix to each mode.
pub fn random_rotation(t: &Tensor3, rng: &mut ChaCha8Rng) -> (Tensor3, [Matrix; 3]) {
    let (p, q, r) = t.dims();
    let a = random_orthogonal(p, rng);
    let b = random_orthogonal(q, rng);
    let c = random_orthogonal(r, rng);
    let rotated = t
        .mode_multiply(&a, 1)
        .unwrap()
        .mode_multiply(&b, 2)
        .unwrap()
        .mode_multiply(&c, 3)
        .unwrap();
    (rotated, [a, b, c])
}

pub fn apply_rotation(t: &Tensor3, rot: &[Matrix; 3]) -> Tensor3 {
    t.mode_multiply(&rot[0], 1)
        .unwrap()
        .mode_multiply(&rot[1], 2)
        .unwrap()
        .mode_multiply(&rot[2], 3)
        .unwrap()
}

/// Diagonal family: (1/n) Σ eᵢ⊗eᵢ⊗eᵢ over n² basis vectors. Unit norm, all
/// flattening singular values 1/n.
pub fn t1(n: usize) -> Tensor3 {
    let nn = n * n;
    let mut t = Tensor3::zeros((nn, nn, nn)).unwrap();
    for i in 0..nn {
        t.set(i, i, i, 1.0 / n as f64);
    }
    t
}

/// Cyclic pair family: (1/n√n) Σ e_{ni+j}⊗e_{nj+k}⊗e_{nk+i}. Unit norm, all
/// flattening singular values 1/n.
pub fn t2(n: usize) -> Tensor3 {
    let nn = n * n;
    let mut t = Tensor3::zeros((nn, nn, nn)).unwrap();
    let w = 1.0 / (n as f64 * (n as f64).sqrt());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t.set(n * i + j, n * j + k, n * k + i, w);
            }
        }
    }
    t
}

/// Compensated (Kahan) accumulator so parallel reductions can be summed in a
/// fixed order without losing digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

//! Rank-1 and rank-r machinery: dominant singular pairs by power iteration,
//! the Quick Rank 1 initializer, CP alternating least squares, and the
//! amplified-deflation initializer that feeds it.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::amplify::{amplify, AmplifierKind};
use crate::error::{Error, Result};
use crate::tensor3::{dot, norm, random_unit_vector, sign_fix, Matrix, RankOneTriple, Tensor3};

/// Weighted sum of rank-1 terms Σ λ_c · u1_c ⊗ u2_c ⊗ u3_c with unit-norm
/// factor columns.
#[derive(Debug, Clone, Serialize)]
pub struct CPModel {
    weights: Vec<f64>,
    factors: Vec<Matrix>,
}

impl CPModel {
    /// Factors must be three matrices whose column counts equal the weight
    /// count, with unit-norm columns (within 1e-10).
    pub fn new(weights: Vec<f64>, factors: Vec<Matrix>) -> Result<Self> {
        if factors.len() != 3 {
            return Err(Error::Shape(format!(
                "CP model needs 3 factor matrices, got {}",
                factors.len()
            )));
        }
        let rank = weights.len();
        if rank == 0 {
            return Err(Error::Invalid("CP model needs rank >= 1".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.cols() != rank {
                return Err(Error::Shape(format!(
                    "factor {} has {} columns, expected rank {rank}",
                    i + 1,
                    f.cols()
                )));
            }
            for c in 0..rank {
                let n = norm(f.col(c));
                if (n - 1.0).abs() > 1e-10 {
                    return Err(Error::Invalid(format!(
                        "factor {} column {} has norm {n}, expected 1",
                        i + 1,
                        c
                    )));
                }
            }
        }
        Ok(Self { weights, factors })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.factors[0].rows(),
            self.factors[1].rows(),
            self.factors[2].rows(),
        )
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    /// The c-th rank-1 term as a triple.
    pub fn term(&self, c: usize) -> Result<RankOneTriple> {
        if c >= self.rank() {
            return Err(Error::Invalid(format!(
                "term {c} out of range for rank {}",
                self.rank()
            )));
        }
        RankOneTriple::new(
            self.weights[c],
            self.factors[0].col(c).to_vec(),
            self.factors[1].col(c).to_vec(),
            self.factors[2].col(c).to_vec(),
        )
    }

    /// Materialize Σ λ_c u1_c ⊗ u2_c ⊗ u3_c.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        let (p, q, r) = self.dims();
        let mut out = Tensor3::zeros((p, q, r))?;
        for c in 0..self.rank() {
            let lam = self.weights[c];
            if lam == 0.0 {
                continue;
            }
            let (u1, u2, u3) = (
                self.factors[0].col(c),
                self.factors[1].col(c),
                self.factors[2].col(c),
            );
            for k in 0..r {
                for j in 0..q {
                    let w = lam * u2[j] * u3[k];
                    if w != 0.0 {
                        let dst = &mut out.data_mut()[p * (j + q * k)..p * (j + q * k) + p];
                        for (d, &a) in dst.iter_mut().zip(u1) {
                            *d += w * a;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Model from rank-1 terms: unit directions as columns, weights as given.
    pub fn from_terms(terms: &[RankOneTriple]) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Invalid("CP model needs rank >= 1".into()));
        };
        let (p, q, r) = first.dims();
        let rank = terms.len();
        let mut factors = vec![
            Matrix::zeros(p, rank),
            Matrix::zeros(q, rank),
            Matrix::zeros(r, rank),
        ];
        let mut weights = Vec::with_capacity(rank);
        for (c, term) in terms.iter().enumerate() {
            if term.dims() != (p, q, r) {
                return Err(Error::Shape("rank-1 terms have mixed dimensions".into()));
            }
            factors[0].col_mut(c).copy_from_slice(term.a());
            factors[1].col_mut(c).copy_from_slice(term.b());
            factors[2].col_mut(c).copy_from_slice(term.c());
            weights.push(term.weight());
        }
        CPModel::new(weights, factors)
    }

    /// Random model: unit weights, factor columns uniform on their spheres.
    pub fn random<R: Rng + ?Sized>(
        dims: (usize, usize, usize),
        rank: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("CP model needs rank >= 1".into()));
        }
        let (p, q, r) = dims;
        let mut factors = vec![
            Matrix::zeros(p, rank),
            Matrix::zeros(q, rank),
            Matrix::zeros(r, rank),
        ];
        for f in factors.iter_mut() {
            for c in 0..rank {
                let v = random_unit_vector(f.rows(), rng);
                f.col_mut(c).copy_from_slice(&v);
            }
        }
        CPModel::new(vec![1.0; rank], factors)
    }
}

/// Convergence report for one alternating-least-squares run.
#[derive(Debug, Clone, Serialize)]
pub struct AlsReport {
    /// Number of sweeps performed (the final, sub-tolerance sweep included).
    pub iterations: usize,
    /// Fit 1 − ‖T − S‖/‖T‖ after the last sweep.
    pub final_fit: f64,
    /// Fit after each sweep; length equals `iterations`.
    pub fit_history: Vec<f64>,
    /// Seconds spent in the sweep loop.
    pub wall_time_sec: f64,
}

/// Dominant singular triple of a matrix.
#[derive(Debug, Clone)]
pub struct TopSingular {
    pub sigma: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// False when the residual test was still failing at the iteration cap;
    /// the best iterate is returned regardless.
    pub converged: bool,
}

fn power_iterate(
    gram: &Matrix,
    start: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, bool) {
    let mut x = start;
    let nx = norm(&x);
    for v in x.iter_mut() {
        *v /= nx;
    }
    let mut rho = 0.0;
    for _ in 0..max_iter {
        let y = gram.mul_vec(&x).expect("gram is square");
        rho = dot(&x, &y);
        let res: f64 = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - rho * xi) * (yi - rho * xi))
            .sum::<f64>()
            .sqrt();
        let ny = norm(&y);
        if ny < 1e-300 {
            // landed in the kernel; nudge deterministically
            for (i, v) in x.iter_mut().enumerate() {
                *v += 1e-3 * ((i + 1) as f64).sin();
            }
            let nx = norm(&x);
            for v in x.iter_mut() {
                *v /= nx;
            }
            continue;
        }
        x = y.iter().map(|v| v / ny).collect();
        if res <= tol * rho.max(1e-300) {
            return (x, rho, true);
        }
    }
    (x, rho, false)
}

/// Dominant singular value and vectors via power iteration on the smaller
/// Gram matrix. Deterministic all-ones start; a perturbed restart guards
/// against starts orthogonal to the dominant eigenspace. The left vector is
/// sign-fixed so its first significant entry is positive.
pub fn top_singular_triple(m: &Matrix, tol: f64, max_iter: usize) -> Result<TopSingular> {
    if m.data().iter().all(|v| *v == 0.0) {
        return Err(Error::Invalid("top_singular_triple: zero matrix".into()));
    }
    if max_iter == 0 {
        return Err(Error::Invalid("top_singular_triple: max_iter >= 1".into()));
    }
    let use_rows = m.rows() <= m.cols();
    let gram = if use_rows {
        m.gram_rows()
    } else {
        m.gram_cols()
    };
    let n = gram.rows();
    let (mut x, mut rho, mut converged) = power_iterate(&gram, vec![1.0; n], tol, max_iter);
    // restart from a perturbed iterate; adopt it if it climbs higher
    let nudged: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, v)| v + 1e-3 * ((i + 1) as f64).sin())
        .collect();
    let (x2, rho2, conv2) = power_iterate(&gram, nudged, tol, max_iter);
    if rho2 > rho * (1.0 + 1e-9) {
        x = x2;
        rho = rho2;
        converged = conv2;
    }
    let _ = rho;
    let (sigma, mut u, mut v) = if use_rows {
        let mtu = m.tr_mul_vec(&x)?;
        let s = norm(&mtu);
        let v: Vec<f64> = mtu.iter().map(|w| w / s).collect();
        (s, x, v)
    } else {
        let mv = m.mul_vec(&x)?;
        let s = norm(&mv);
        let u: Vec<f64> = mv.iter().map(|w| w / s).collect();
        (s, u, x)
    };
    if sign_fix(&mut u) < 0.0 {
        for w in v.iter_mut() {
            *w = -*w;
        }
    }
    Ok(TopSingular {
        sigma,
        left: u,
        right: v,
        converged,
    })
}

/// Rank-1 initializer: dominant singular pair of the mode-1 flattening, then
/// a dominant pair of the right singular vector reshaped to q×r. The reshape
/// uses the same column order as the flattening, so the product of the two
/// singular values weights the recovered direction.
pub fn quick_rank1(t: &Tensor3) -> Result<RankOneTriple> {
    if t.frobenius() == 0.0 {
        return Err(Error::Invalid("quick_rank1: zero tensor".into()));
    }
    let (_, q, r) = t.dims();
    let m1 = t.flatten(1)?;
    let first = top_singular_triple(&m1, 1e-10, 1000)?;
    let d = Matrix::new(q, r, first.right)?;
    let second = top_singular_triple(&d, 1e-10, 1000)?;
    RankOneTriple::new(
        first.sigma * second.sigma,
        first.left,
        second.left,
        second.right,
    )
}

/// Matricized-tensor-times-Khatri-Rao product: for the given mode, the
/// dim×rank matrix W with W[·,c] = T ×_{other modes} (u_c of each).
fn mttkrp(t: &Tensor3, factors: &[Matrix], mode: usize) -> Matrix {
    let (p, q, r) = t.dims();
    let rank = factors[0].cols();
    let td = t.data();
    match mode {
        0 => {
            let mut w = Matrix::zeros(p, rank);
            for c in 0..rank {
                let u2 = factors[1].col(c);
                let u3 = factors[2].col(c);
                let out = w.col_mut(c);
                for k in 0..r {
                    if u3[k] == 0.0 {
                        continue;
                    }
                    for j in 0..q {
                        let coef = u2[j] * u3[k];
                        if coef != 0.0 {
                            let fib = &td[p * (j + q * k)..p * (j + q * k) + p];
                            for (o, &v) in out.iter_mut().zip(fib) {
                                *o += coef * v;
                            }
                        }
                    }
                }
            }
            w
        }
        1 => {
            let mut w = Matrix::zeros(q, rank);
            for c in 0..rank {
                let u1 = factors[0].col(c);
                let u3 = factors[2].col(c);
                let out = w.col_mut(c);
                for k in 0..r {
                    if u3[k] == 0.0 {
                        continue;
                    }
                    for (j, o) in out.iter_mut().enumerate() {
                        let fib = &td[p * (j + q * k)..p * (j + q * k) + p];
                        *o += u3[k] * dot(fib, u1);
                    }
                }
            }
            w
        }
        _ => {
            let mut w = Matrix::zeros(r, rank);
            for c in 0..rank {
                let u1 = factors[0].col(c);
                let u2 = factors[1].col(c);
                let out = w.col_mut(c);
                for (k, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for j in 0..q {
                        if u2[j] != 0.0 {
                            let fib = &td[p * (j + q * k)..p * (j + q * k) + p];
                            acc += u2[j] * dot(fib, u1);
                        }
                    }
                    *o = acc;
                }
            }
            w
        }
    }
}

/// ‖T − S‖² by entrywise accumulation over the model's fibers.
fn direct_residual2(t: &Tensor3, weights: &[f64], factors: &[Matrix]) -> f64 {
    let (p, q, r) = t.dims();
    let rank = weights.len();
    let td = t.data();
    let mut acc = 0.0;
    let mut fiber = vec![0.0f64; p];
    for k in 0..r {
        for j in 0..q {
            fiber.copy_from_slice(&td[p * (j + q * k)..p * (j + q * k) + p]);
            for c in 0..rank {
                let w = weights[c] * factors[1].get(j, c) * factors[2].get(k, c);
                if w != 0.0 {
                    for (f, &u) in fiber.iter_mut().zip(factors[0].col(c)) {
                        *f -= w * u;
                    }
                }
            }
            acc += fiber.iter().map(|x| x * x).sum::<f64>();
        }
    }
    acc
}

/// Solve X·Y = W for X given symmetric positive semidefinite Y, retrying with
/// a Tikhonov shift (1e-12·trace) when elimination hits a vanishing pivot.
fn solve_against_gram(y: &Matrix, w: &Matrix) -> Matrix {
    let r = y.rows();
    let trace: f64 = (0..r).map(|i| y.get(i, i)).sum();
    for mu in [0.0, 1e-12 * trace.max(1.0), 1e-8 * trace.max(1.0)] {
        if let Some(x) = try_solve(y, w, mu) {
            return x;
        }
    }
    // hopeless system (Y effectively zero): zero update
    Matrix::zeros(w.rows(), w.cols())
}

fn try_solve(y: &Matrix, w: &Matrix, mu: f64) -> Option<Matrix> {
    let r = y.rows();
    let d = w.rows();
    // augmented [Y + mu I | Wᵀ], Gaussian elimination with partial pivoting
    let mut a = vec![0.0f64; r * r];
    for j in 0..r {
        for i in 0..r {
            a[i * r + j] = y.get(i, j) + if i == j { mu } else { 0.0 };
        }
    }
    let mut b = vec![0.0f64; r * d];
    for row in 0..d {
        for c in 0..r {
            b[c * d + row] = w.get(row, c);
        }
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..r {
        let (pivot_row, pivot) = (col..r)
            .map(|i| (i, a[i * r + col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))?;
        if pivot <= 1e-13 * scale.max(1e-300) {
            return None;
        }
        if pivot_row != col {
            for j in 0..r {
                a.swap(pivot_row * r + j, col * r + j);
            }
            for j in 0..d {
                b.swap(pivot_row * d + j, col * d + j);
            }
        }
        let diag = a[col * r + col];
        for i in col + 1..r {
            let f = a[i * r + col] / diag;
            if f != 0.0 {
                for j in col..r {
                    a[i * r + j] -= f * a[col * r + j];
                }
                for j in 0..d {
                    b[i * d + j] -= f * b[col * d + j];
                }
            }
        }
    }
    // back substitution
    for col in (0..r).rev() {
        let diag = a[col * r + col];
        for j in 0..d {
            b[col * d + j] /= diag;
        }
        for i in 0..col {
            let f = a[i * r + col];
            if f != 0.0 {
                for j in 0..d {
                    b[i * d + j] -= f * b[col * d + j];
                }
            }
        }
    }
    let mut x = Matrix::zeros(d, r);
    for row in 0..d {
        for c in 0..r {
            x.set(row, c, b[c * d + row]);
        }
    }
    Some(x)
}

/// Minimum-norm solution of the symmetric PSD system G·λ = h via a Jacobi
/// eigendecomposition, dropping eigenvalues below 1e-12 of the largest.
fn solve_psd_min_norm(g: &Matrix, h: &[f64]) -> Vec<f64> {
    let (eigvals, eigvecs) = jacobi_eigh(g);
    let lam_max = eigvals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = h.len();
    let mut out = vec![0.0; n];
    for (idx, &lam) in eigvals.iter().enumerate() {
        if lam.abs() <= 1e-12 * lam_max.max(1e-300) {
            continue;
        }
        let col = eigvecs.col(idx);
        let coef = dot(col, h) / lam;
        for (o, &e) in out.iter_mut().zip(col) {
            *o += coef * e;
        }
    }
    out
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix.
fn jacobi_eigh(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::zeros(n, n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let scale = m.data().iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m.get(p, q).abs());
            }
        }
        if off <= 1e-15 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, c * mip - s * miq);
                    m.set(i, q, s * mip + c * miq);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, c * mpj - s * mqj);
                    m.set(q, j, s * mpj + c * mqj);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * viq);
                    v.set(i, q, s * vip + c * viq);
                }
            }
        }
    }
    ((0..n).map(|i| m.get(i, i)).collect(), v)
}

/// Alternating least squares for a rank-r CP approximation of `t`.
///
/// Each sweep updates the three factors in mode order via the Khatri-Rao
/// normal equations, renormalizes columns into the weights, and evaluates
/// fit = 1 − ‖T − S‖/‖T‖. Stops after sweep two or later once the absolute
/// fit change drops below `tol`, or at `max_iter` sweeps.
pub fn cp_als(
    t: &Tensor3,
    rank: usize,
    init: &CPModel,
    tol: f64,
    max_iter: usize,
) -> Result<(CPModel, AlsReport)> {
    if rank == 0 {
        return Err(Error::Invalid("cp_als: rank >= 1".into()));
    }
    if max_iter == 0 {
        return Err(Error::Invalid("cp_als: max_iter >= 1".into()));
    }
    if init.rank() != rank {
        return Err(Error::Shape(format!(
            "cp_als: init rank {} != requested rank {rank}",
            init.rank()
        )));
    }
    if init.dims() != t.dims() {
        return Err(Error::Shape(format!(
            "cp_als: init dims {:?} != tensor dims {:?}",
            init.dims(),
            t.dims()
        )));
    }
    let norm_t = t.frobenius();
    if norm_t == 0.0 {
        return Err(Error::Invalid("cp_als: zero tensor".into()));
    }
    let start = Instant::now();
    let mut factors = init.factors().to_vec();
    let mut weights = init.weights().to_vec();
    let mut grams: Vec<Matrix> = factors.iter().map(|f| f.gram_cols()).collect();
    let mut history: Vec<f64> = Vec::new();
    let mut fit_prev = 0.0f64;
    for sweep in 1..=max_iter {
        let mut last_w: Option<Matrix> = None;
        for mode in 0..3 {
            let w = mttkrp(t, &factors, mode);
            let mut y = Matrix::zeros(rank, rank);
            for i in 0..rank {
                for j in 0..rank {
                    let mut v = 1.0;
                    for (m, gram) in grams.iter().enumerate() {
                        if m != mode {
                            v *= gram.get(i, j);
                        }
                    }
                    y.set(i, j, v);
                }
            }
            let mut fresh = solve_against_gram(&y, &w);
            for c in 0..rank {
                let col = fresh.col_mut(c);
                let nc = norm(col);
                if nc > 0.0 {
                    for x in col.iter_mut() {
                        *x /= nc;
                    }
                    weights[c] = nc;
                } else {
                    // dead column: park it on a basis direction with zero weight
                    col[0] = 1.0;
                    weights[c] = 0.0;
                }
            }
            grams[mode] = fresh.gram_cols();
            if mode == 2 {
                last_w = Some(w);
            }
            factors[mode] = fresh;
        }
        let w3 = last_w.expect("three modes swept");
        let mut iprod = 0.0;
        for c in 0..rank {
            iprod += weights[c] * dot(factors[2].col(c), w3.col(c));
        }
        let mut norm_s2 = 0.0;
        for i in 0..rank {
            for j in 0..rank {
                norm_s2 += weights[i]
                    * weights[j]
                    * grams[0].get(i, j)
                    * grams[1].get(i, j)
                    * grams[2].get(i, j);
            }
        }
        let mut residual2 = (norm_t * norm_t + norm_s2 - 2.0 * iprod).abs();
        if residual2 < 1e-10 * norm_t * norm_t {
            // the fast formula cancels catastrophically near exact fits
            residual2 = direct_residual2(t, &weights, &factors);
        }
        let fit = 1.0 - residual2.sqrt() / norm_t;
        history.push(fit);
        if sweep > 1 && (fit - fit_prev).abs() < tol {
            break;
        }
        fit_prev = fit;
    }
    // canonical signs: leading entries positive, flips folded into weights
    for c in 0..rank {
        let mut sign = 1.0;
        for f in factors.iter_mut() {
            sign *= sign_fix(f.col_mut(c));
        }
        weights[c] *= sign;
    }
    let final_fit = *history.last().expect("at least one sweep");
    let report = AlsReport {
        iterations: history.len(),
        final_fit,
        fit_history: history,
        wall_time_sec: start.elapsed().as_secs_f64(),
    };
    Ok((CPModel::new(weights, factors)?, report))
}

/// Deflation initializer: for s = 1..r, amplify the current residual, take
/// the Quick-Rank-1 direction of the result, then jointly refit all s weights
/// by least squares against `t` (Gram system G_ij = (a_i·a_j)(b_i·b_j)(c_i·c_j),
/// right side h_i = T·v_i; singular Grams get the minimum-norm solution).
pub fn amplified_init(t: &Tensor3, rank: usize, kind: AmplifierKind) -> Result<CPModel> {
    if rank == 0 {
        return Err(Error::Invalid("amplified_init: rank >= 1".into()));
    }
    if t.frobenius() == 0.0 {
        return Err(Error::Invalid("amplified_init: zero tensor".into()));
    }
    let (p, q, r) = t.dims();
    let mut directions: Vec<RankOneTriple> = Vec::with_capacity(rank);
    let mut lambdas: Vec<f64> = Vec::new();
    let mut residual = t.clone();
    for _s in 0..rank {
        let amped = amplify(&residual, kind)?;
        let direction = if amped.frobenius() == 0.0 {
            // residual is exactly represented; park a zero-weight direction
            let basis = |n: usize| {
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v
            };
            RankOneTriple::new(1.0, basis(p), basis(q), basis(r))?
        } else {
            let found = quick_rank1(&amped)?;
            RankOneTriple::new(1.0, found.a().to_vec(), found.b().to_vec(), found.c().to_vec())?
        };
        directions.push(direction);
        let s = directions.len();
        let mut gram = Matrix::zeros(s, s);
        for i in 0..s {
            for j in 0..s {
                let g = dot(directions[i].a(), directions[j].a())
                    * dot(directions[i].b(), directions[j].b())
                    * dot(directions[i].c(), directions[j].c());
                gram.set(i, j, g);
            }
        }
        let rhs: Vec<f64> = directions
            .iter()
            .map(|v| t.rank1_inner(v.a(), v.b(), v.c()))
            .collect::<Result<_>>()?;
        lambdas = solve_psd_min_norm(&gram, &rhs);
        residual = t.clone();
        for (lam, dir) in lambdas.iter().zip(&directions) {
            if *lam != 0.0 {
                let term = dir.to_tensor().scale(*lam);
                residual = crate::tensor3::linear_combine(&[(1.0, &residual), (-1.0, &term)])?;
            }
        }
    }
    let terms: Vec<RankOneTriple> = directions
        .iter()
        .zip(&lambdas)
        .map(|(dir, &lam)| {
            RankOneTriple::new(lam, dir.a().to_vec(), dir.b().to_vec(), dir.c().to_vec())
        })
        .collect::<Result<_>>()?;
    CPModel::from_terms(&terms)
}

/// Fit between two rank-1 triples: |(a·a')(b·b')(c·c')| ∈ [0, 1].
pub fn rank1_fit(truth: &RankOneTriple, estimate: &RankOneTriple) -> Result<f64> {
    if truth.dims() != estimate.dims() {
        return Err(Error::Shape(format!(
            "rank1_fit: dims {:?} vs {:?}",
            truth.dims(),
            estimate.dims()
        )));
    }
    Ok((dot(truth.a(), estimate.a())
        * dot(truth.b(), estimate.b())
        * dot(truth.c(), estimate.c()))
    .abs())
}

/// Fit of a CP model against a signal tensor: (T·S)/‖S‖.
pub fn rankr_fit(signal: &Tensor3, model: &CPModel) -> Result<f64> {
    let recon = model.reconstruct()?;
    let n = recon.frobenius();
    if n == 0.0 {
        return Err(Error::Invalid("rankr_fit: zero model".into()));
    }
    Ok(signal.inner(&recon)? / n)
}
